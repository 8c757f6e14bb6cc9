#pragma once
// Reduction from a priori TSP to k-hop ATSP: duplicate each vertex into a
// cluster of co-located copies with one uniform activation probability, solve
// the hop problem on a well-scaled integer metric, then stitch split clusters
// back together and project the tour to the original vertices.

#include "baseline.hpp"

namespace apriori {

struct ClusterMap {
    double eps = 0;
    std::vector<int> owner;               // copy -> original vertex
    std::vector<std::vector<int>> members; // original vertex -> its copies
};

struct UniformizedInstance {
    AprioriInstance inst; // all probabilities eps/2
    ClusterMap map;
};

// Per-vertex copy count: smallest k with (1 - eps/2)^k <= 1 - p/2, so the
// cluster activates with probability between p/2 and p. min_copies can pad
// individual clusters (used for the depot), still subject to that bound.
inline UniformizedInstance uniformize(const AprioriInstance& inst, double eps,
                                      const std::vector<int>& min_copies = {},
                                      long long copy_cap = 50000) {
    validate_instance(inst);
    if (!(eps > 0) || eps > 1) throw ValidationError("eps must lie in (0, 1]");
    if (!min_copies.empty() && static_cast<int>(min_copies.size()) != inst.n)
        throw ValidationError("min_copies length mismatch");
    long double base = 1.0L - static_cast<long double>(eps) / 2.0L;
    std::vector<int> count(inst.n);
    long long total = 0;
    for (int v = 0; v < inst.n; ++v) {
        double p = inst.prob[v];
        if (p < eps) throw ValidationError("probability below eps");
        long double target = 1.0L - static_cast<long double>(p) / 2.0L;
        int kv = static_cast<int>(
            std::ceil(std::log(target) / std::log(base) - 1e-12L));
        if (kv < 1) kv = 1;
        while (kv > 1 && std::pow(base, static_cast<long double>(kv - 1)) <= target) --kv;
        while (std::pow(base, static_cast<long double>(kv)) > target) ++kv;
        if (!min_copies.empty()) kv = std::max(kv, min_copies[v]);
        long double act = 1.0L - std::pow(base, static_cast<long double>(kv));
        if (act < p / 2 - 1e-9 || act > p + 1e-9)
            throw ValidationError("cluster activation outside [p/2, p]");
        count[v] = kv;
        total += kv;
        if (total > copy_cap) throw BudgetError("uniformization copy cap exceeded");
    }

    UniformizedInstance out;
    out.map.eps = eps;
    out.map.members.resize(inst.n);
    out.inst.n = static_cast<int>(total);
    out.inst.prob.assign(out.inst.n, eps / 2);
    for (int v = 0; v < inst.n; ++v)
        for (int c = 0; c < count[v]; ++c) {
            out.map.members[v].push_back(static_cast<int>(out.map.owner.size()));
            out.map.owner.push_back(v);
        }
    out.inst.cost = MatD(out.inst.n);
    for (int a = 0; a < out.inst.n; ++a)
        for (int b = 0; b < out.inst.n; ++b)
            out.inst.cost(a, b) = inst.cost(out.map.owner[a], out.map.owner[b]);
    validate_instance(out.inst, false); // metric is inherited; n^3 check skipped
    return out;
}

struct ConsolidateResult {
    Tour tour;
    int merges = 0;
    double expected = 0; // of the returned tour, on the uniformized instance
};

namespace detail {

// maximal runs of the given cluster in a sequence whose first element is
// outside the cluster (so no run wraps)
inline std::vector<std::pair<int, int>> cluster_runs(const std::vector<int>& owner,
                                                     const std::vector<int>& seq, int target) {
    std::vector<std::pair<int, int>> runs;
    int m = static_cast<int>(seq.size());
    int i = 0;
    while (i < m) {
        if (owner[seq[i]] != target) {
            ++i;
            continue;
        }
        int j = i;
        while (j < m && owner[seq[j]] == target) ++j;
        runs.push_back({i, j});
        i = j;
    }
    return runs;
}

} // namespace detail

// Merge split clusters until every cluster's copies are visited contiguously.
// One merge moves one run next to another, in whichever of the two orders has
// the smaller exact expected cost; that minimum never exceeds the cost before
// the merge.
inline ConsolidateResult consolidate_clusters(const UniformizedInstance& u, const Tour& t) {
    validate_tour(t, u.inst.n, true);
    if (!t.closed) throw ValidationError("consolidation expects a closed tour");
    ConsolidateResult res;
    std::vector<int> seq = t.visits;
    double cur = expected_cost_exact(u.inst, Tour{seq, true});
    int norig = static_cast<int>(u.map.members.size());
    for (;;) {
        int target = -1;
        std::vector<std::pair<int, int>> runs;
        for (int v = 0; v < norig && target < 0; ++v) {
            if (u.map.members[v].size() < 2) continue;
            // rotate so position 0 lies outside cluster v, making runs linear
            int shift = -1;
            for (int i = 0; i < static_cast<int>(seq.size()); ++i)
                if (u.map.owner[seq[i]] != v) {
                    shift = i;
                    break;
                }
            if (shift < 0) continue; // the tour is one big run of v
            std::rotate(seq.begin(), seq.begin() + shift, seq.end());
            runs = detail::cluster_runs(u.map.owner, seq, v);
            if (runs.size() >= 2) target = v;
        }
        if (target < 0) break;

        auto [a1, b1] = runs[0];
        auto [a2, b2] = runs[1];
        std::vector<int> optA, optB;
        optA.reserve(seq.size());
        optB.reserve(seq.size());
        // run 2 moved directly after run 1
        optA.insert(optA.end(), seq.begin(), seq.begin() + b1);
        optA.insert(optA.end(), seq.begin() + a2, seq.begin() + b2);
        optA.insert(optA.end(), seq.begin() + b1, seq.begin() + a2);
        optA.insert(optA.end(), seq.begin() + b2, seq.end());
        // run 1 moved directly before run 2
        optB.insert(optB.end(), seq.begin(), seq.begin() + a1);
        optB.insert(optB.end(), seq.begin() + b1, seq.begin() + a2);
        optB.insert(optB.end(), seq.begin() + a1, seq.begin() + b1);
        optB.insert(optB.end(), seq.begin() + a2, seq.end());

        double ea = expected_cost_exact(u.inst, Tour{optA, true});
        double eb = expected_cost_exact(u.inst, Tour{optB, true});
        double chosen = std::min(ea, eb);
        if (chosen > cur + 1e-7 * std::max(1.0, std::abs(cur)))
            throw StateError("cluster merge increased the expected cost");
        seq = ea <= eb ? std::move(optA) : std::move(optB);
        cur = chosen;
        ++res.merges;
    }
    res.tour = Tour{seq, true};
    res.expected = cur;
    return res;
}

// A uniformized instance is a hop instance: hop count k = floor(1/delta) with
// delta the shared activation probability.
inline HopInstance to_hop(const UniformizedInstance& u) {
    double delta = u.inst.prob.empty() ? 0 : u.inst.prob[0];
    for (double p : u.inst.prob)
        if (std::abs(p - delta) > 1e-12)
            throw ValidationError("activation probabilities are not uniform");
    if (!(delta > 0)) throw ValidationError("need a positive activation probability");
    int k = static_cast<int>(std::floor(1.0 / delta + 1e-9));
    if (k < 1 || k >= u.inst.n)
        throw ValidationError("hop count must satisfy 1 <= k < n");
    HopInstance hop;
    hop.n = u.inst.n;
    hop.cost = u.inst.cost;
    hop.k = k;
    hop.well_scaled = false;
    return hop;
}

struct ScaleRecord {
    double K = 0;    // one scaled unit in original cost
    double diam = 0; // max pairwise cost before scaling
    int n = 0;
};

// Rescale to integers in [0, 2n^3]: divide by K = diam / (2 n^3), floor, then
// restore the triangle inequality with a metric closure.
inline std::pair<HopInstance, ScaleRecord> well_scale(const HopInstance& hop) {
    validate_instance(hop);
    long long n = hop.n;
    long double factor = 2.0L * n * n * n;
    long double diam = 0;
    for (int i = 0; i < hop.n; ++i)
        for (int j = 0; j < hop.n; ++j)
            diam = std::max(diam, static_cast<long double>(hop.cost(i, j)));
    if (!(diam > 0)) throw ValidationError("zero diameter cannot be scaled");
    MatI scaled(hop.n);
    for (int i = 0; i < hop.n; ++i)
        for (int j = 0; j < hop.n; ++j) {
            long double v = static_cast<long double>(hop.cost(i, j)) * factor / diam;
            scaled(i, j) = std::max<long long>(0, static_cast<long long>(std::floor(v)));
        }
    metric_closure(scaled);
    HopInstance out;
    out.n = hop.n;
    out.k = hop.k;
    out.well_scaled = true;
    out.cost = MatD(hop.n);
    for (int i = 0; i < hop.n; ++i)
        for (int j = 0; j < hop.n; ++j)
            out.cost(i, j) = static_cast<double>(scaled(i, j));
    validate_instance(out);
    ScaleRecord rec;
    rec.K = static_cast<double>(diam / factor);
    rec.diam = static_cast<double>(diam);
    rec.n = hop.n;
    return {out, rec};
}

// Cheap hop-solver heuristic: nearest-neighbour chains from every start,
// scored by the k-hop objective, ties to the smaller start.
inline Tour nn_hop_solver(const HopInstance& hop) {
    validate_instance(hop);
    Tour best;
    long double best_cost = 0;
    for (int s = 0; s < hop.n; ++s) {
        std::vector<char> used(hop.n, 0);
        Tour t;
        t.closed = true;
        t.visits.push_back(s);
        used[s] = 1;
        int cur = s;
        for (int step = 1; step < hop.n; ++step) {
            int pick = -1;
            double pc = std::numeric_limits<double>::infinity();
            for (int j = 0; j < hop.n; ++j)
                if (!used[j] && hop.cost(cur, j) < pc) {
                    pc = hop.cost(cur, j);
                    pick = j;
                }
            used[pick] = 1;
            t.visits.push_back(pick);
            cur = pick;
        }
        long double c = khop_cost(hop.cost, t, hop.k);
        if (s == 0 || c < best_cost) {
            best_cost = c;
            best = t;
        }
    }
    return best;
}

struct ReduceOptions {
    int enumerate_max = OracleBudget::apriori_max; // brute-force cutoff for the heavy set
    long long copy_cap = 50000;
    long long mc_samples = 20000;
    int exact_eval_max = 18;
};

struct StageRow {
    int depot = -1;
    int heavy = 0;        // heavy-set size
    long long copies = 0; // uniformized size (0 when enumerated)
    int hop_k = 0;
    double scale_k = 0;
    double eval = 0;
    bool enumerated = false;
    bool exact_eval = false;
};

struct ReduceResult {
    Tour tour;
    double expected = 0;
    int depot = -1;
    bool low_mass = false;
    std::vector<StageRow> stages;
};

// End-to-end reduction. Per depot: pin its probability to one, split at the
// threshold 1/n, solve the heavy side exactly (small) or through
// uniformize -> hop -> well-scale -> hop_solver -> consolidate (large), append
// the light side in index order, and evaluate against the true instance. The
// depot with the best evaluation wins; ties keep the smaller index.
inline ReduceResult reduce_and_solve(const AprioriInstance& inst,
                                     const std::function<Tour(const HopInstance&)>& hop_solver,
                                     uint64_t seed, const ReduceOptions& opts = {}) {
    validate_instance(inst);
    ReduceResult res;
    if (inst.n == 1) {
        res.tour = identity_tour(1);
        res.expected = 0;
        return res;
    }
    double mass = std::accumulate(inst.prob.begin(), inst.prob.end(), 0.0);
    if (mass <= 0.5) {
        res.tour = identity_tour(inst.n);
        res.low_mass = true;
        bool exact = false;
        auto [e, se] = detail::evaluate_expected(inst, res.tour, mix_seed(seed, 0), exact);
        (void)se;
        res.expected = e;
        return res;
    }

    double thr = 1.0 / static_cast<double>(inst.n);
    bool have = false;
    for (int depot = 0; depot < inst.n; ++depot) {
        std::vector<double> prob = inst.prob;
        prob[depot] = 1.0;
        std::vector<int> heavy, light;
        for (int u = 0; u < inst.n; ++u) (prob[u] >= thr ? heavy : light).push_back(u);

        AprioriInstance sub;
        sub.n = static_cast<int>(heavy.size());
        sub.cost = MatD(sub.n);
        sub.prob.resize(sub.n);
        for (int a = 0; a < sub.n; ++a) {
            sub.prob[a] = prob[heavy[a]];
            for (int b = 0; b < sub.n; ++b) sub.cost(a, b) = inst.cost(heavy[a], heavy[b]);
        }

        StageRow row;
        row.depot = depot;
        row.heavy = sub.n;
        std::vector<int> heavy_order; // tour over heavy, local indices
        if (sub.n <= opts.enumerate_max) {
            row.enumerated = true;
            heavy_order = brute_apriori_opt(sub).tour.visits;
        } else {
            int depot_local = static_cast<int>(
                std::find(heavy.begin(), heavy.end(), depot) - heavy.begin());
            std::vector<int> pad(sub.n, 0);
            pad[depot_local] = 4 * inst.n;
            UniformizedInstance uni =
                uniformize(sub, 1.0 / inst.n, pad, opts.copy_cap);
            row.copies = uni.inst.n;
            HopInstance hop = to_hop(uni);
            row.hop_k = hop.k;
            auto [ws, rec] = well_scale(hop);
            row.scale_k = rec.K;
            Tour raw = hop_solver(ws);
            Tour ham = shortcut_to_hamiltonian(ws.cost, raw);
            ConsolidateResult cons = consolidate_clusters(uni, ham);
            heavy_order.reserve(sub.n);
            std::vector<char> seen(sub.n, 0);
            for (int copy : cons.tour.visits) {
                int orig = uni.map.owner[copy];
                if (!seen[orig]) {
                    seen[orig] = 1;
                    heavy_order.push_back(orig);
                }
            }
        }

        // rotate the heavy tour to the depot, then append the light vertices
        int depot_local = static_cast<int>(
            std::find(heavy.begin(), heavy.end(), depot) - heavy.begin());
        auto pos = std::find(heavy_order.begin(), heavy_order.end(), depot_local);
        std::rotate(heavy_order.begin(), pos, heavy_order.end());
        Tour t;
        t.closed = true;
        for (int a : heavy_order) t.visits.push_back(heavy[a]);
        t.visits.insert(t.visits.end(), light.begin(), light.end());
        validate_tour(t, inst.n, true);

        bool exact = false;
        auto [e, se] = detail::evaluate_expected(
            inst, t, mix_seed(seed, 1000 + static_cast<uint64_t>(depot)), exact);
        (void)se;
        row.eval = e;
        row.exact_eval = exact;
        res.stages.push_back(row);
        if (!have || e < res.expected) {
            have = true;
            res.tour = t;
            res.expected = e;
            res.depot = depot;
        }
    }
    return res;
}

} // namespace apriori
