#pragma once
// Small exact oracles used to pin down expected values in tests and as the
// reference side of cross-checks. Every oracle enforces an explicit size
// budget and refuses anything larger.

#include <limits>

#include "greedy_dp.hpp"

namespace apriori {

struct OracleBudget {
    static constexpr int tsp_max = 13;      // Held-Karp subset size
    static constexpr int apriori_max = 9;   // permutation search over tours
    static constexpr int hop_max = 9;       // permutation search over cycles
    static constexpr int ratio_max = 8;     // subsets of one cell
    static constexpr int expect_max = 16;   // 2^n subset enumeration
};

template <class M>
struct TspResult {
    typename M::value_type cost{};
    Tour tour;
};

// Exact shortest closed tour through the given distinct vertices (Held-Karp).
template <class M>
TspResult<M> brute_tsp(const M& cost, const std::vector<int>& subset) {
    using V = typename M::value_type;
    int m = static_cast<int>(subset.size());
    if (m < 2 || m > OracleBudget::tsp_max)
        throw BudgetError("brute_tsp handles 2..13 vertices");
    int full = 1 << m;
    const V inf = std::numeric_limits<V>::max() / 4;
    std::vector<V> dp(static_cast<size_t>(full) * m, inf);
    std::vector<int8_t> par(static_cast<size_t>(full) * m, -1);
    dp[1 * m + 0] = V{};
    for (int mask = 1; mask < full; ++mask) {
        if (!(mask & 1)) continue;
        for (int last = 0; last < m; ++last) {
            V d = dp[static_cast<size_t>(mask) * m + last];
            if (!((mask >> last) & 1) || d >= inf) continue;
            for (int nxt = 1; nxt < m; ++nxt) {
                if ((mask >> nxt) & 1) continue;
                int nm = mask | (1 << nxt);
                V nd = d + cost(subset[last], subset[nxt]);
                if (nd < dp[static_cast<size_t>(nm) * m + nxt]) {
                    dp[static_cast<size_t>(nm) * m + nxt] = nd;
                    par[static_cast<size_t>(nm) * m + nxt] = static_cast<int8_t>(last);
                }
            }
        }
    }
    V best = inf;
    int bestlast = -1;
    for (int last = 1; last < m; ++last) {
        V d = dp[static_cast<size_t>(full - 1) * m + last];
        if (d >= inf) continue;
        V total = d + cost(subset[last], subset[0]);
        if (total < best) { best = total; bestlast = last; }
    }
    TspResult<M> res;
    res.cost = best;
    res.tour.closed = true;
    if (m == 1) { // unreachable given the budget gate, kept for clarity
        res.tour.visits = {subset[0]};
        return res;
    }
    std::vector<int> rev;
    int mask = full - 1, cur = bestlast;
    while (cur != -1) {
        rev.push_back(subset[cur]);
        int p = par[static_cast<size_t>(mask) * m + cur];
        mask &= ~(1 << cur);
        cur = p;
    }
    res.tour.visits.assign(rev.rbegin(), rev.rend());
    return res;
}

struct AprioriOptResult {
    double cost = 0;
    Tour tour;
};

// Optimal a priori tour by rotating vertex 0 to the front and walking all
// permutations of the rest; first-found minimum wins, so the result is the
// lexicographically smallest optimum.
inline AprioriOptResult brute_apriori_opt(const AprioriInstance& inst) {
    if (inst.n > OracleBudget::apriori_max)
        throw BudgetError("brute_apriori_opt handles up to 9 vertices");
    AprioriOptResult res;
    res.tour = identity_tour(inst.n);
    if (inst.n <= 2) {
        res.cost = expected_cost_exact(inst, res.tour);
        return res;
    }
    std::vector<int> perm(inst.n - 1);
    for (int i = 0; i < inst.n - 1; ++i) perm[i] = i + 1;
    Tour t;
    t.closed = true;
    res.cost = std::numeric_limits<double>::infinity();
    do {
        t.visits.assign(1, 0);
        t.visits.insert(t.visits.end(), perm.begin(), perm.end());
        double c = expected_cost_exact(inst, t);
        if (c < res.cost) {
            res.cost = c;
            res.tour = t;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return res;
}

template <class M>
struct HopOptResult {
    typename M::value_type cost{};
    Tour tour;
};

// Optimal k-hop Hamiltonian cycle by permutation search (rotation-invariant,
// vertex 0 pinned to the front).
template <class M>
HopOptResult<M> brute_hop_opt(const M& cost, int n, int k) {
    if (n > OracleBudget::hop_max)
        throw BudgetError("brute_hop_opt handles up to 9 vertices");
    HopOptResult<M> res;
    res.tour = identity_tour(n);
    if (n <= 2) {
        res.cost = khop_cost(cost, res.tour, k);
        return res;
    }
    std::vector<int> perm(n - 1);
    for (int i = 0; i < n - 1; ++i) perm[i] = i + 1;
    Tour t;
    t.closed = true;
    bool first = true;
    do {
        t.visits.assign(1, 0);
        t.visits.insert(t.visits.end(), perm.begin(), perm.end());
        auto c = khop_cost(cost, t, k);
        if (first || c < res.cost) {
            res.cost = c;
            res.tour = t;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return res;
}

inline HopOptResult<MatD> brute_hop_opt(const HopInstance& inst) {
    return brute_hop_opt(inst.cost, inst.n, inst.k);
}

inline HopOptResult<CtildeView> brute_hop_opt(const HierInstance& h) {
    return brute_hop_opt(CtildeView(h), h.n, h.k);
}

// Expected shortcut cost of a fixed tour by full subset enumeration.
inline double oracle_expected_cost(const AprioriInstance& inst, const Tour& t) {
    if (inst.n > OracleBudget::expect_max)
        throw BudgetError("oracle_expected_cost handles up to 16 vertices");
    int full = 1 << inst.n;
    double total = 0.0;
    std::vector<char> active(inst.n, 0);
    for (int mask = 0; mask < full; ++mask) {
        double pr = 1.0;
        for (int v = 0; v < inst.n; ++v) {
            bool on = (mask >> v) & 1;
            active[v] = on ? 1 : 0;
            pr *= on ? inst.prob[v] : 1.0 - inst.prob[v];
        }
        if (pr == 0.0) continue;
        total += pr * detail::shortcut_cost_of_sample(inst, t, active);
    }
    return total;
}

// E over active sets of the optimal tour cost on the set (posterior optimum).
inline double expected_tsp_exact(const AprioriInstance& inst) {
    if (inst.n > OracleBudget::apriori_max)
        throw BudgetError("expected_tsp_exact handles up to 9 vertices");
    int full = 1 << inst.n;
    double total = 0.0;
    for (int mask = 0; mask < full; ++mask) {
        double pr = 1.0;
        std::vector<int> members;
        for (int v = 0; v < inst.n; ++v) {
            if ((mask >> v) & 1) {
                pr *= inst.prob[v];
                members.push_back(v);
            } else {
                pr *= 1.0 - inst.prob[v];
            }
        }
        if (pr == 0.0 || members.size() < 2) continue;
        total += pr * brute_tsp(inst.cost, members).cost;
    }
    return total;
}

// Monte Carlo version; every sampled set must fit the Held-Karp budget.
inline McResult expected_tsp_mc(const AprioriInstance& inst, long long samples,
                                uint64_t seed) {
    if (samples < 1) throw ValidationError("sample count must be positive");
    Rng rng(seed);
    double sum = 0, sq = 0;
    for (long long it = 0; it < samples; ++it) {
        ActiveSet a = sample_active(inst, rng);
        auto mem = a.members();
        double c = 0;
        if (mem.size() >= 2) {
            if (static_cast<int>(mem.size()) > OracleBudget::tsp_max)
                throw BudgetError("sampled active set exceeds the Held-Karp budget");
            c = brute_tsp(inst.cost, mem).cost;
        }
        sum += c;
        sq += c * c;
    }
    McResult res;
    res.samples = samples;
    res.mean = sum / static_cast<double>(samples);
    if (samples > 1) {
        double var = (sq - sum * sum / static_cast<double>(samples)) /
                     static_cast<double>(samples - 1);
        res.stderr_ = std::sqrt(std::max(0.0, var) / static_cast<double>(samples));
    }
    return res;
}

struct RatioOracleResult {
    bool found = false;
    PathLevelPair pair;
    long long weight = 0;
    long long covered = 0;
    double ratio = 0;
};

// Best weight-per-newly-covered ratio over every monotone path inside one
// cell, by subset enumeration.
inline RatioOracleResult brute_best_ratio(const HierInstance& h, const UncoveredSet& unc,
                                          int level, int cell) {
    auto [lo, hi] = h.cell_range(level, cell);
    int m = hi - lo;
    if (m > OracleBudget::ratio_max)
        throw BudgetError("brute_best_ratio handles cells of up to 8 vertices");
    RatioOracleResult res;
    for (int mask = 1; mask < (1 << m); ++mask) {
        PathLevelPair p;
        p.level = level;
        for (int i = 0; i < m; ++i)
            if ((mask >> i) & 1) p.verts.push_back(h.order[lo + i]);
        long long covered = 0;
        for (int v = 0; v < h.n; ++v)
            for (int l = 1; l <= h.L; ++l)
                if (unc.contains(v, l) && covers(h, p, v, l)) ++covered;
        if (covered == 0) continue;
        long long w = pair_weight(h, p);
        double ratio = static_cast<double>(w) / static_cast<double>(covered);
        if (!res.found || ratio < res.ratio ||
            (ratio == res.ratio && w < res.weight)) {
            res.found = true;
            res.pair = p;
            res.weight = w;
            res.covered = covered;
            res.ratio = ratio;
        }
    }
    return res;
}

// Same, over all levels and cells (cells beyond the budget are an error).
inline RatioOracleResult brute_best_ratio_all(const HierInstance& h,
                                              const UncoveredSet& unc) {
    RatioOracleResult best;
    for (int level = 1; level <= h.L; ++level)
        for (int cell = 0; cell < h.cells_at(level); ++cell) {
            RatioOracleResult r = brute_best_ratio(h, unc, level, cell);
            if (!r.found) continue;
            if (!best.found || r.ratio < best.ratio ||
                (r.ratio == best.ratio && r.weight < best.weight))
                best = r;
        }
    return best;
}

// Cost of the unique perfect in-order binary tree on the given sorted slots
// (size 2^gamma - 1), computed straight from the per-vertex ancestor form.
inline long long perfect_tree_cost(const DpContext& c, int x, int y,
                                   const std::vector<int>& slots) {
    if (slots.size() != static_cast<size_t>(c.kprime))
        throw ValidationError("perfect tree needs exactly k' slots");
    long long total = 0;
    // anc: (slot, height) of the ancestors above the current subtree
    std::function<void(int, int, std::vector<std::pair<int, int>>&)> rec =
        [&](int lo, int hi, std::vector<std::pair<int, int>>& anc) {
            if (lo >= hi) return;
            int mid = (lo + hi) / 2;
            int r = slots[mid];
            long long part = (1LL << c.gamma) * (c.cc(x, r) + c.cc(r, y));
            for (auto [a, lvl] : anc)
                part += (1LL << (lvl - 1)) * std::min(c.cc(r, a), c.cc(a, r));
            total += part;
            int h = 1;
            while ((1 << h) - 1 < hi - lo) ++h; // height of this subtree
            anc.push_back({r, h});
            rec(lo, mid, anc);
            rec(mid + 1, hi, anc);
            anc.pop_back();
        };
    std::vector<std::pair<int, int>> anc;
    rec(0, static_cast<int>(slots.size()), anc);
    return total;
}

// Reference block table: enumerate every k'-subset strictly between the
// anchors; the in-order perfect tree on a fixed set is unique, so each subset
// contributes one (profile, cost) candidate.
inline ProfileMap brute_block_table(const DpContext& c, int x, int y) {
    ProfileMap out;
    std::vector<int> pick;
    std::function<void(int)> rec = [&](int next) {
        if (static_cast<int>(pick.size()) == c.kprime) {
            long long cost = perfect_tree_cost(c, x, y, pick);
            uint64_t mask = 0;
            for (int s : pick) mask |= 1ULL << s;
            CoveringProfile prof = profile_of(c, pick);
            auto it = out.find(prof);
            if (it == out.end())
                out.emplace(std::move(prof), TreeSolution{cost, mask});
            else if (cost < it->second.cost ||
                     (cost == it->second.cost && mask < it->second.mask))
                it->second = {cost, mask};
            return;
        }
        for (int s = next; s < y; ++s) {
            pick.push_back(s);
            rec(s + 1);
            pick.pop_back();
        }
    };
    rec(x + 1);
    return out;
}

// Elements of the uncovered set that the pair would cover, counted directly
// from the coverage relation.
inline long long direct_new_coverage(const HierInstance& h, const UncoveredSet& unc,
                                     const PathLevelPair& p) {
    long long cnt = 0;
    for (int v = 0; v < h.n; ++v)
        for (int l = 1; l <= h.L; ++l)
            if (unc.contains(v, l) && covers(h, p, v, l)) ++cnt;
    return cnt;
}

} // namespace apriori
