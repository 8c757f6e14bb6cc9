#pragma once
// Square-root threshold baseline: fix a depot, solve (approximately) the
// deterministic ATSP on the high-probability vertices, append the rest in a
// fixed order, and keep the best depot by evaluated expected cost.

#include "oracles.hpp"

#include <numeric>

namespace apriori {

struct AtspResult {
    Tour tour; // closed, over the given subset
    double cost = 0;
    bool exact = false;
};

// Exact Held-Karp up to the oracle budget, nearest-neighbour from every start
// beyond it.
inline AtspResult atsp_tour(const MatD& cost, const std::vector<int>& subset,
                            const OracleBudget& budget = {}) {
    int m = static_cast<int>(subset.size());
    if (m == 0) throw ValidationError("empty vertex subset");
    AtspResult res;
    if (m == 1) {
        res.tour.visits = {subset[0]};
        res.tour.closed = true;
        res.cost = 0;
        res.exact = true;
        return res;
    }
    if (m <= budget.tsp_max) {
        auto hk = brute_tsp(cost, subset);
        res.tour = hk.tour;
        res.tour.closed = true;
        res.cost = hk.cost;
        res.exact = true;
        return res;
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_order;
    for (int s = 0; s < m; ++s) {
        std::vector<char> used(m, 0);
        std::vector<int> order = {subset[s]};
        used[s] = 1;
        int cur = s;
        double total = 0;
        for (int step = 1; step < m; ++step) {
            int pick = -1;
            double pick_c = std::numeric_limits<double>::infinity();
            for (int j = 0; j < m; ++j) {
                if (used[j]) continue;
                double cv = cost(subset[cur], subset[j]);
                if (cv < pick_c) {
                    pick_c = cv;
                    pick = j;
                }
            }
            used[pick] = 1;
            order.push_back(subset[pick]);
            total += pick_c;
            cur = pick;
        }
        total += cost(subset[cur], subset[s]);
        if (total < best) {
            best = total;
            best_order = order;
        }
    }
    res.tour.visits = std::move(best_order);
    res.tour.closed = true;
    res.cost = best;
    res.exact = false;
    return res;
}

struct SqrtApproxResult {
    Tour tour;
    double expected = 0; // under the input probabilities
    double expected_stderr = 0;
    int depot = -1; // -1 when the low-mass shortcut fired
    bool exact_eval = false;
    bool low_mass = false;
};

namespace detail {

inline Tour rotate_to(const Tour& t, int v) {
    Tour out;
    out.closed = t.closed;
    auto it = std::find(t.visits.begin(), t.visits.end(), v);
    if (it == t.visits.end()) throw StateError("rotation vertex missing from tour");
    out.visits.insert(out.visits.end(), it, t.visits.end());
    out.visits.insert(out.visits.end(), t.visits.begin(), it);
    return out;
}

inline std::pair<double, double> evaluate_expected(const AprioriInstance& inst, const Tour& t,
                                                   uint64_t seed, bool& exact) {
    if (inst.n <= 18) {
        exact = true;
        return {expected_cost_exact(inst, t), 0.0};
    }
    exact = false;
    McResult mc = expected_cost_mc(inst, t, 20000, seed);
    return {mc.mean, mc.stderr_};
}

} // namespace detail

// Threshold 1/sqrt(n): per depot, vertices at or above it are toured by
// atsp_tour, the rest follow in index order. Instances with total probability
// mass at most 1/2 skip straight to the identity tour.
inline SqrtApproxResult sqrt_approx(const AprioriInstance& inst, uint64_t seed,
                                    const OracleBudget& budget = {}) {
    validate_instance(inst);
    SqrtApproxResult res;
    if (inst.n == 1) {
        res.tour = identity_tour(1);
        res.exact_eval = true;
        return res;
    }
    double mass = std::accumulate(inst.prob.begin(), inst.prob.end(), 0.0);
    if (mass <= 0.5) {
        res.tour = identity_tour(inst.n);
        res.low_mass = true;
        auto [e, se] = detail::evaluate_expected(inst, res.tour, mix_seed(seed, 0), res.exact_eval);
        res.expected = e;
        res.expected_stderr = se;
        return res;
    }
    double thr = 1.0 / std::sqrt(static_cast<double>(inst.n));
    bool have = false;
    for (int depot = 0; depot < inst.n; ++depot) {
        std::vector<int> heavy, light;
        for (int u = 0; u < inst.n; ++u) {
            double p = u == depot ? 1.0 : inst.prob[u];
            (p >= thr ? heavy : light).push_back(u);
        }
        Tour heavy_tour = detail::rotate_to(atsp_tour(inst.cost, heavy, budget).tour, depot);
        Tour t;
        t.closed = true;
        t.visits = heavy_tour.visits;
        t.visits.insert(t.visits.end(), light.begin(), light.end());
        validate_tour(t, inst.n, true);
        bool exact = false;
        auto [e, se] =
            detail::evaluate_expected(inst, t, mix_seed(seed, 1 + static_cast<uint64_t>(depot)), exact);
        if (!have || e < res.expected) {
            have = true;
            res.tour = t;
            res.expected = e;
            res.expected_stderr = se;
            res.depot = depot;
            res.exact_eval = exact;
        }
    }
    return res;
}

} // namespace apriori
