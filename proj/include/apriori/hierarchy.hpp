#pragma once
// Hierarchically ordered instances: a laminar family of position intervals
// (one partition per level), a distance budget per level that at least halves
// level to level, and the derived cost that keeps forward edges and rounds
// every backward edge up to the budget of the deepest cell containing both
// endpoints. Built from a well-scaled hop instance by recursive low-diameter
// decomposition of each cell.

#include <functional>
#include <utility>

#include "core.hpp"

namespace apriori {

struct LddCut {
    long long bound = 0;
    std::vector<std::pair<int, int>> cut; // directed edges removed
};

// Randomized ball carving. Recursively splits the index set until every piece
// has max internal cost <= bound; each split cuts the boundary edges of a
// random ball (out-ball and in-ball alternate by depth) in the one direction
// that breaks strong connectivity across the boundary. Radii are truncated
// geometric with mean bound/(4 ln m), capped at bound/4; the cap makes a
// whole-piece ball on both sides impossible while the piece diameter exceeds
// the bound, which guarantees progress.
inline LddCut ldd(const MatI& cost, long long bound, uint64_t seed) {
    int m = cost.n;
    if (bound < 0) throw ValidationError("ldd bound must be nonnegative");
    LddCut res;
    res.bound = bound;
    if (m <= 1) return res;

    Rng rng(seed);
    double mean = static_cast<double>(bound) / (4.0 * std::log(std::max(m, 2)));
    long long rcap = bound / 4;

    std::function<void(std::vector<int>&, int)> carve = [&](std::vector<int>& s, int depth) {
        if (s.size() <= 1) return;
        long long maxc = 0;
        for (int u : s)
            for (int v : s) maxc = std::max(maxc, cost(u, v));
        if (maxc <= bound) return;

        int z = s[rng.below(s.size())];
        long long r = rcap;
        if (mean > 0) r = std::min(rcap, static_cast<long long>(std::floor(rng.exponential(mean))));

        auto ball = [&](bool out) {
            std::vector<char> in(s.size(), 0);
            for (size_t i = 0; i < s.size(); ++i) {
                long long d = out ? cost(z, s[i]) : cost(s[i], z);
                in[i] = d <= r ? 1 : 0;
            }
            return in;
        };

        bool out = depth % 2 == 0;
        std::vector<char> in = ball(out);
        size_t cnt = 0;
        for (char c : in) cnt += c;
        if (cnt == s.size()) { // ball swallowed the piece; the opposite side cannot
            out = !out;
            in = ball(out);
            cnt = 0;
            for (char c : in) cnt += c;
            if (cnt == s.size())
                throw StateError("ball carving made no progress"); // unreachable, see cap argument
        }

        std::vector<int> inner, outer;
        inner.reserve(cnt);
        outer.reserve(s.size() - cnt);
        for (size_t i = 0; i < s.size(); ++i)
            (in[i] ? inner : outer).push_back(s[i]);
        // out-ball: cut edges leaving the ball; in-ball: cut edges entering it.
        for (int u : inner)
            for (int v : outer)
                res.cut.emplace_back(out ? u : v, out ? v : u);
        carve(inner, depth + 1);
        carve(outer, depth + 1);
    };

    std::vector<int> all(m);
    for (int i = 0; i < m; ++i) all[i] = i;
    carve(all, 0);
    return res;
}

namespace detail {

// Tarjan over the complete digraph on m vertices minus the removed edges.
// Components are emitted in reverse topological order of the condensation.
struct SccResult {
    std::vector<int> comp;           // vertex -> component id (emission order)
    int count = 0;
};

inline SccResult scc_minus_cut(int m, const std::vector<char>& removed) {
    SccResult r;
    r.comp.assign(m, -1);
    std::vector<int> low(m, 0), num(m, -1), stk;
    std::vector<char> onstk(m, 0);
    int timer = 0;
    stk.reserve(m);

    struct Frame { int v; int next; };
    std::vector<Frame> frames;
    for (int root = 0; root < m; ++root) {
        if (num[root] != -1) continue;
        frames.push_back({root, 0});
        num[root] = low[root] = timer++;
        stk.push_back(root);
        onstk[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            int v = f.v;
            if (f.next < m) {
                int w = f.next++;
                if (w == v || removed[static_cast<size_t>(v) * m + w]) continue;
                if (num[w] == -1) {
                    num[w] = low[w] = timer++;
                    stk.push_back(w);
                    onstk[w] = 1;
                    frames.push_back({w, 0});
                } else if (onstk[w]) {
                    low[v] = std::min(low[v], num[w]);
                }
            } else {
                if (low[v] == num[v]) {
                    for (;;) {
                        int w = stk.back();
                        stk.pop_back();
                        onstk[w] = 0;
                        r.comp[w] = r.count;
                        if (w == v) break;
                    }
                    ++r.count;
                }
                frames.pop_back();
                if (!frames.empty()) {
                    int p = frames.back().v;
                    low[p] = std::min(low[p], low[v]);
                }
            }
        }
    }
    return r;
}

} // namespace detail

struct HierInstance {
    HopInstance base;   // original hop instance (costs duplicated below as integers)
    MatI cost;          // integer costs, indexed by vertex id
    int n = 0;
    int k = 1;
    int L = 1;
    std::vector<int> order;                   // position -> vertex
    std::vector<int> pos;                     // vertex -> position
    std::vector<std::vector<int>> boundaries; // [1..L]; boundaries[l] = breakpoints 0=..=n
    std::vector<long long> D;                 // [1..L], D[L] == 0
    uint64_t seed = 0;

    std::vector<std::vector<int>> cell_id;    // [1..L][pos] -> cell index at that level

    void build_cells() {
        cell_id.assign(L + 1, {});
        for (int l = 1; l <= L; ++l) {
            cell_id[l].assign(n, 0);
            const auto& b = boundaries[l];
            int c = 0;
            for (int p = 0; p < n; ++p) {
                while (b[c + 1] <= p) ++c;
                cell_id[l][p] = c;
            }
        }
    }

    int cell_at(int level, int p) const { return cell_id[level][p]; }
    // slot range [lo, hi) of a cell, in positions
    std::pair<int, int> cell_range(int level, int cell) const {
        return {boundaries[level][cell], boundaries[level][cell + 1]};
    }
    int cells_at(int level) const { return static_cast<int>(boundaries[level].size()) - 1; }

    // deepest level whose partition puts u and v in one cell (L for u == v)
    int level_of(int u, int v) const {
        if (u == v) return L;
        int pu = pos[u], pv = pos[v];
        int l = L;
        while (cell_id[l][pu] != cell_id[l][pv]) --l;
        return l;
    }

    long long ctilde(int u, int v) const {
        if (u == v) return 0;
        if (pos[u] < pos[v]) return cost(u, v);
        return D[level_of(u, v)];
    }
};

// Adapter so the generic tour/k-hop cost helpers run on the derived cost.
struct CtildeView {
    using value_type = long long;
    const HierInstance* h;
    int n;
    explicit CtildeView(const HierInstance& hi) : h(&hi), n(hi.n) {}
    long long operator()(int i, int j) const { return h->ctilde(i, j); }
};

inline void validate_hierarchy(const HierInstance& h) {
    if (h.n < 1 || h.L < 1) throw ValidationError("hierarchy sizes out of range");
    if (static_cast<int>(h.order.size()) != h.n || static_cast<int>(h.pos.size()) != h.n)
        throw ValidationError("hierarchy order size mismatch");
    std::vector<char> hit(h.n, 0);
    for (int p = 0; p < h.n; ++p) {
        int v = h.order[p];
        if (v < 0 || v >= h.n || hit[v]) throw ValidationError("order is not a permutation");
        hit[v] = 1;
        if (h.pos[v] != p) throw ValidationError("pos does not invert order");
    }
    if (static_cast<int>(h.boundaries.size()) != h.L + 1 ||
        static_cast<int>(h.D.size()) != h.L + 1)
        throw ValidationError("hierarchy level arrays mismatch");
    for (int l = 1; l <= h.L; ++l) {
        const auto& b = h.boundaries[l];
        if (b.empty() || b.front() != 0 || b.back() != h.n)
            throw ValidationError("level breakpoints must span 0..n");
        for (size_t i = 0; i + 1 < b.size(); ++i)
            if (b[i] >= b[i + 1]) throw ValidationError("level breakpoints must increase");
        if (l > 1) { // nesting: coarser breakpoints survive
            const auto& prev = h.boundaries[l - 1];
            size_t j = 0;
            for (int x : prev) {
                while (j < b.size() && b[j] < x) ++j;
                if (j >= b.size() || b[j] != x)
                    throw ValidationError("levels are not nested");
            }
        }
    }
    if (static_cast<int>(h.boundaries[1].size()) != 2)
        throw ValidationError("top level must be one cell");
    if (static_cast<int>(h.boundaries[h.L].size()) != h.n + 1)
        throw ValidationError("bottom level must be singletons");
    if (h.D[h.L] != 0) throw ValidationError("bottom budget must be zero");
    for (int l = 1; l < h.L; ++l) {
        if (h.D[l] < 1) throw ValidationError("budgets above the bottom must be positive");
        if (h.D[l] < 2 * h.D[l + 1]) throw ValidationError("budgets must at least halve");
    }
    if (h.cost.n != h.n) throw ValidationError("cost size mismatch");
    // forward rule: cost within the deepest common cell never exceeds its budget
    for (int pu = 0; pu < h.n; ++pu)
        for (int pv = pu + 1; pv < h.n; ++pv) {
            int u = h.order[pu], v = h.order[pv];
            if (h.cost(u, v) > h.D[h.level_of(u, v)])
                throw ValidationError("forward edge exceeds its level budget");
        }
    if (h.k < 1 || (h.n > 1 && h.k >= h.n))
        throw ValidationError("hop horizon out of range");
}

// Exhaustive triangle check of the derived cost (cubic; intended for n <= 40).
inline bool ctilde_is_metric(const HierInstance& h) {
    for (int a = 0; a < h.n; ++a)
        for (int b = 0; b < h.n; ++b) {
            if (a == b) continue;
            long long direct = h.ctilde(a, b);
            for (int c = 0; c < h.n; ++c) {
                if (c == a || c == b) continue;
                if (direct > h.ctilde(a, c) + h.ctilde(c, b)) return false;
            }
        }
    return true;
}

// Budget sequence: diameter, then floor-halving down to zero.
inline std::vector<long long> budget_sequence(long long diam) {
    std::vector<long long> d;
    d.push_back(0); // 1-based
    d.push_back(diam);
    while (d.back() > 0) d.push_back(d.back() / 2);
    return d;
}

inline HierInstance build_hierarchy(const HopInstance& base, uint64_t seed) {
    validate_instance(base);
    if (!base.well_scaled) throw ValidationError("hierarchy needs a well-scaled instance");
    int n = base.n;

    HierInstance h;
    h.base = base;
    h.n = n;
    h.k = base.k;
    h.seed = seed;
    h.cost = MatI(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            h.cost(i, j) = static_cast<long long>(std::llround(base.cost(i, j)));

    long long diam = max_cost(h.cost);
    if (n == 1) {
        h.L = 1;
        h.order = {0};
        h.pos = {0};
        h.boundaries = {{}, {0, 1}};
        h.D = {0, 0};
        h.build_cells();
        return h;
    }
    if (diam == 0) throw ValidationError("zero-diameter instance has no hierarchy");

    h.D = budget_sequence(diam);
    h.L = static_cast<int>(h.D.size()) - 1;

    h.order.resize(n);
    for (int i = 0; i < n; ++i) h.order[i] = i;
    h.boundaries.assign(h.L + 1, {});
    h.boundaries[1] = {0, n};

    std::vector<int> breaks = {0, n};
    for (int l = 2; l <= h.L - 1; ++l) {
        std::vector<int> next = {0};
        for (size_t ci = 0; ci + 1 < breaks.size(); ++ci) {
            int a = breaks[ci], b = breaks[ci + 1];
            int m = b - a;
            if (m <= 1) {
                next.push_back(b);
                continue;
            }
            MatI sub(m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    sub(i, j) = h.cost(h.order[a + i], h.order[a + j]);
            LddCut cut = ldd(sub, h.D[l], mix_seed(seed, static_cast<uint64_t>(l),
                                                   static_cast<uint64_t>(ci)));
            std::vector<char> removed(static_cast<size_t>(m) * m, 0);
            for (auto [u, v] : cut.cut) removed[static_cast<size_t>(u) * m + v] = 1;
            detail::SccResult scc = detail::scc_minus_cut(m, removed);
            // reverse emission order == topological order of the condensation
            std::vector<std::vector<int>> pieces(scc.count);
            for (int i = 0; i < m; ++i)
                pieces[scc.count - 1 - scc.comp[i]].push_back(i); // stable within a piece
            std::vector<int> rewritten;
            rewritten.reserve(m);
            for (auto& p : pieces) {
                for (int i : p) rewritten.push_back(h.order[a + i]);
                next.push_back(a + static_cast<int>(rewritten.size()));
            }
            for (int i = 0; i < m; ++i) h.order[a + i] = rewritten[i];
        }
        if (next.back() != n) next.push_back(n);
        breaks = next;
        h.boundaries[l] = breaks;
    }
    h.boundaries[h.L].resize(n + 1);
    for (int i = 0; i <= n; ++i) h.boundaries[h.L][i] = i;

    h.pos.assign(n, 0);
    for (int p = 0; p < n; ++p) h.pos[h.order[p]] = p;
    h.build_cells();
    validate_hierarchy(h);
    return h;
}

} // namespace apriori
