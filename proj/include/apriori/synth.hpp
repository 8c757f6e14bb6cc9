#pragma once
// Synthetic instance generators used by the verification suites and tests.
// Everything is driven by the in-house Rng so results are reproducible from
// a single seed.

#include "greedy_dp.hpp"
#include "hop_reduction.hpp"

namespace apriori {

template <class T>
void fisher_yates(std::vector<T>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

// Random directed metric: uniform draws repaired by a metric closure.
inline MatD random_metric(int n, Rng& rng, double lo = 1.0, double hi = 100.0) {
    MatD m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = i == j ? 0.0 : lo + (hi - lo) * rng.real();
    metric_closure(m);
    return m;
}

inline AprioriInstance random_apriori(int n, Rng& rng, double pmin = 0.1, double pmax = 1.0) {
    AprioriInstance inst;
    inst.n = n;
    inst.cost = random_metric(n, rng);
    inst.prob.resize(n);
    for (int i = 0; i < n; ++i) inst.prob[i] = pmin + (pmax - pmin) * rng.real();
    validate_instance(inst);
    return inst;
}

inline AprioriInstance uniform_apriori(int n, double delta, Rng& rng) {
    AprioriInstance inst;
    inst.n = n;
    inst.cost = random_metric(n, rng);
    inst.prob.assign(n, delta);
    validate_instance(inst);
    return inst;
}

inline HopInstance random_hop(int n, int k, Rng& rng) {
    HopInstance hop;
    hop.n = n;
    hop.k = k;
    hop.cost = random_metric(n, rng);
    hop.well_scaled = false;
    validate_instance(hop);
    return hop;
}

inline HopInstance random_scaled_hop(int n, int k, Rng& rng) {
    return well_scale(random_hop(n, k, rng)).first;
}

inline HierInstance random_hier(int n, int k, Rng& rng) {
    HopInstance ws = random_scaled_hop(n, k, rng);
    return build_hierarchy(ws, rng.next());
}

// Shallow hierarchy with explicit level count: nested random breakpoints,
// doubling budgets, forward costs capped by the separation level and then
// repaired into a metric. The closure can only shrink entries, and shrinking
// keeps every forward cost under its level budget, so the caps survive.
inline HierInstance synthetic_hier(int n, int k, int L, Rng& rng) {
    if (n < 2 || L < 2) throw ValidationError("synthetic hierarchy needs n >= 2, L >= 2");
    if (k < 1 || k >= n) throw ValidationError("need 1 <= k < n");
    HierInstance h;
    h.n = n;
    h.k = k;
    h.L = L;
    h.seed = rng.next();
    h.order.resize(n);
    for (int i = 0; i < n; ++i) h.order[i] = i;
    fisher_yates(h.order, rng);
    h.pos.assign(n, 0);
    for (int p = 0; p < n; ++p) h.pos[h.order[p]] = p;

    h.boundaries.assign(L + 1, {});
    h.boundaries[1] = {0, n};
    for (int l = 2; l < L; ++l) {
        std::vector<int> b = h.boundaries[l - 1];
        for (int p = 1; p < n; ++p)
            if (rng.bernoulli(0.5)) b.push_back(p);
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        h.boundaries[l] = b;
    }
    h.boundaries[L].resize(n + 1);
    for (int p = 0; p <= n; ++p) h.boundaries[L][p] = p;

    h.D.assign(L + 1, 0);
    for (int l = L - 1; l >= 1; --l)
        h.D[l] = std::max<long long>(1, 2 * h.D[l + 1] + static_cast<long long>(rng.below(3)));
    h.build_cells();

    h.cost = MatI(n);
    for (int pu = 0; pu < n; ++pu)
        for (int pv = 0; pv < n; ++pv) {
            if (pu == pv) continue;
            int u = h.order[pu], v = h.order[pv];
            if (pu < pv) {
                int l = L;
                while (h.cell_id[l][pu] != h.cell_id[l][pv]) --l;
                h.cost(u, v) = static_cast<long long>(rng.below(h.D[l] + 1));
            } else {
                h.cost(u, v) = static_cast<long long>(rng.below(h.D[1] + 1));
            }
        }
    metric_closure(h.cost);

    h.base.n = n;
    h.base.k = k;
    h.base.well_scaled = true;
    h.base.cost = MatD(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) h.base.cost(a, b) = static_cast<double>(h.cost(a, b));
    validate_hierarchy(h);
    return h;
}

inline Tour random_hamiltonian(int n, Rng& rng, bool closed = true) {
    Tour t = identity_tour(n, closed);
    fisher_yates(t.visits, rng);
    return t;
}

// sorted random nonempty subset of the positions [lo, hi)
inline std::vector<int> random_position_subset(int lo, int hi, Rng& rng) {
    std::vector<int> out;
    for (int p = lo; p < hi; ++p)
        if (rng.bernoulli(0.5)) out.push_back(p);
    if (out.empty()) out.push_back(lo + static_cast<int>(rng.below(hi - lo)));
    return out;
}

// Feasible by construction: one pair spanning everything at level 1, plus a
// few random cell-respecting paths at deeper levels.
inline Cover random_feasible_cover(const HierInstance& h, Rng& rng, int extra = 3) {
    Cover c;
    PathLevelPair all;
    all.level = 1;
    all.verts = h.order;
    c.pairs.push_back(all);
    for (int e = 0; e < extra; ++e) {
        int level = 1 + static_cast<int>(rng.below(h.L));
        int cell = static_cast<int>(rng.below(h.cells_at(level)));
        auto [lo, hi] = h.cell_range(level, cell);
        PathLevelPair p;
        p.level = level;
        for (int ps : random_position_subset(lo, hi, rng)) p.verts.push_back(h.order[ps]);
        c.pairs.push_back(std::move(p));
    }
    fisher_yates(c.pairs, rng);
    return c;
}

} // namespace apriori
