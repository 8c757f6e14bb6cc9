#pragma once
// Path covers over a hierarchically ordered instance: weighted (path, level)
// pairs, the coverage relation on (vertex, level) elements, feasibility in
// both its per-element and per-cell forms, the insertion procedure that turns
// a feasible cover into a closed tour of at most twice its weight, and the
// reduction that strips degenerate top levels before solving.

#include <functional>
#include <map>

#include "hierarchy.hpp"

namespace apriori {

// Monotone path confined to one cell of the given level.
struct PathLevelPair {
    std::vector<int> verts; // vertex ids, strictly increasing positions
    int level = 1;
};

struct Cover {
    std::vector<PathLevelPair> pairs;
};

// Set of still-uncovered (vertex, level) elements, level in 1..L.
struct UncoveredSet {
    int n = 0, L = 0;
    std::vector<char> in; // [v * (L + 1) + l]

    UncoveredSet() = default;
    UncoveredSet(int n_, int L_) : n(n_), L(L_), in(static_cast<size_t>(n_) * (L_ + 1), 0) {}

    static UncoveredSet full(int n_, int L_) {
        UncoveredSet u(n_, L_);
        for (int v = 0; v < n_; ++v)
            for (int l = 1; l <= L_; ++l) u.set(v, l, true);
        return u;
    }

    bool contains(int v, int l) const { return in[static_cast<size_t>(v) * (L + 1) + l]; }
    void set(int v, int l, bool b) { in[static_cast<size_t>(v) * (L + 1) + l] = b ? 1 : 0; }
    long long size() const {
        long long s = 0;
        for (char c : in) s += c;
        return s;
    }
};

inline void validate_pair(const HierInstance& h, const PathLevelPair& p) {
    if (p.verts.empty()) throw ValidationError("path pair needs at least one vertex");
    if (p.level < 1 || p.level > h.L) throw ValidationError("pair level out of range");
    int cell = h.cell_at(p.level, h.pos[p.verts[0]]);
    for (size_t i = 0; i < p.verts.size(); ++i) {
        int v = p.verts[i];
        if (v < 0 || v >= h.n) throw ValidationError("pair vertex out of range");
        if (i > 0 && h.pos[p.verts[i - 1]] >= h.pos[v])
            throw ValidationError("pair path must be monotone");
        if (h.cell_at(p.level, h.pos[v]) != cell)
            throw ValidationError("pair path leaves its cell");
    }
}

inline long long pair_weight(const HierInstance& h, const PathLevelPair& p) {
    validate_pair(h, p);
    Tour t{p.verts, false};
    return khop_cost(CtildeView(h), t, h.k) +
           static_cast<long long>(h.k) * h.k * h.D[p.level];
}

// (P, j) covers (v, l) if j <= l and either v lies on P, or l < L and P meets
// the level-(l+1) cell of v in at least k vertices.
inline bool covers(const HierInstance& h, const PathLevelPair& p, int v, int l) {
    if (p.level > l) return false;
    for (int u : p.verts)
        if (u == v) return true;
    if (l >= h.L) return false;
    int cell = h.cell_at(l + 1, h.pos[v]);
    int cnt = 0;
    for (int u : p.verts)
        if (h.cell_at(l + 1, h.pos[u]) == cell) ++cnt;
    return cnt >= h.k;
}

// Element form: every (v, l) is covered by some pair.
inline bool is_feasible(const HierInstance& h, const Cover& c) {
    for (int v = 0; v < h.n; ++v)
        for (int l = 1; l <= h.L; ++l) {
            bool hit = false;
            for (const auto& p : c.pairs)
                if (covers(h, p, v, l)) { hit = true; break; }
            if (!hit) return false;
        }
    return true;
}

// Cell form: (a) every vertex lies on some path; (b) for every level l >= 2
// and cell H of that level, either every vertex of H lies on a path of level
// < l, or some path of level < l meets H in at least k vertices.
inline bool is_feasible_cells(const HierInstance& h, const Cover& c) {
    for (int v = 0; v < h.n; ++v) {
        bool hit = false;
        for (const auto& p : c.pairs)
            for (int u : p.verts)
                if (u == v) { hit = true; break; }
        if (!hit) return false;
    }
    for (int l = 2; l <= h.L; ++l)
        for (int cell = 0; cell < h.cells_at(l); ++cell) {
            auto [lo, hi] = h.cell_range(l, cell);
            bool responsible = false;
            for (const auto& p : c.pairs) {
                if (p.level >= l) continue;
                int cnt = 0;
                for (int u : p.verts)
                    if (h.cell_at(l, h.pos[u]) == cell) ++cnt;
                if (cnt >= h.k) { responsible = true; break; }
            }
            if (responsible) continue;
            bool all = true;
            for (int pp = lo; pp < hi && all; ++pp) {
                int v = h.order[pp];
                bool hit = false;
                for (const auto& p : c.pairs) {
                    if (p.level >= l) continue;
                    for (int u : p.verts)
                        if (u == v) { hit = true; break; }
                    if (hit) break;
                }
                all = hit;
            }
            if (!all) return false;
        }
    return true;
}

inline long long cover_weight(const HierInstance& h, const Cover& c) {
    long long w = 0;
    for (const auto& p : c.pairs) w += pair_weight(h, p);
    return w;
}

// Splice an open walk (confined to one cell H of `level`) into an open walk
// right before k consecutive visits that all lie in H. The k-hop cost grows
// by at most the inserted walk's k-hop cost plus 2 k^2 D_level.
inline Tour walk_insert(const HierInstance& h, const Tour& walk, int at,
                        const std::vector<int>& sub, int level) {
    if (walk.closed) throw ValidationError("walk_insert expects an open walk");
    int k = h.k;
    if (at < 0 || at + k > static_cast<int>(walk.visits.size()))
        throw ValidationError("insertion point lacks k following visits");
    int cell = h.cell_at(level, h.pos[walk.visits[at]]);
    for (int t = 0; t < k; ++t)
        if (h.cell_at(level, h.pos[walk.visits[at + t]]) != cell)
            throw ValidationError("insertion run leaves the cell");
    for (int v : sub)
        if (h.cell_at(level, h.pos[v]) != cell)
            throw ValidationError("inserted walk leaves the cell");

    CtildeView cc(h);
    long long before = khop_cost(cc, walk, k);
    Tour subw{sub, false};
    long long subcost = khop_cost(cc, subw, k);

    Tour out;
    out.closed = false;
    out.visits.reserve(walk.visits.size() + sub.size());
    out.visits.insert(out.visits.end(), walk.visits.begin(), walk.visits.begin() + at);
    out.visits.insert(out.visits.end(), sub.begin(), sub.end());
    out.visits.insert(out.visits.end(), walk.visits.begin() + at, walk.visits.end());

    long long after = khop_cost(cc, out, k);
    long long slack = 2LL * k * k * h.D[level];
    if (after > before + subcost + slack)
        throw StateError("walk insertion exceeded its cost budget");
    return out;
}

struct CoverToTourResult {
    Tour tour;                 // closed walk over all vertices (may repeat)
    Cover pruned;              // inclusionwise minimal sub-cover actually used
    long long cover_w = 0;     // weight of the pruned cover
    long long tour_khop = 0;   // k-hop cost of the tour under the derived cost
};

// Turn a feasible cover into a closed tour of k-hop cost at most twice the
// cover weight: prune to an inclusion-minimal cover, attach every deeper pair
// to a responsibility-taking parent, then repeatedly splice the deepest pair
// into its parent right before a k-run of its cell.
inline CoverToTourResult cover_to_tour(const HierInstance& h, const Cover& cover) {
    for (const auto& p : cover.pairs) validate_pair(h, p);
    if (!is_feasible(h, cover)) throw ValidationError("cover is not feasible");

    // canonical order: level, first position, shorter first, then lexicographic
    std::vector<PathLevelPair> ps = cover.pairs;
    std::sort(ps.begin(), ps.end(), [&](const PathLevelPair& a, const PathLevelPair& b) {
        if (a.level != b.level) return a.level < b.level;
        int pa = h.pos[a.verts[0]], pb = h.pos[b.verts[0]];
        if (pa != pb) return pa < pb;
        if (a.verts.size() != b.verts.size()) return a.verts.size() < b.verts.size();
        for (size_t i = 0; i < a.verts.size(); ++i)
            if (a.verts[i] != b.verts[i]) return h.pos[a.verts[i]] < h.pos[b.verts[i]];
        return false;
    });

    // one pass suffices: removability is monotone under shrinking
    std::vector<char> keep(ps.size(), 1);
    for (size_t i = 0; i < ps.size(); ++i) {
        keep[i] = 0;
        Cover trial;
        for (size_t j = 0; j < ps.size(); ++j)
            if (keep[j]) trial.pairs.push_back(ps[j]);
        if (!is_feasible(h, trial)) keep[i] = 1;
    }
    Cover pruned;
    for (size_t i = 0; i < ps.size(); ++i)
        if (keep[i]) pruned.pairs.push_back(ps[i]);

    int m = static_cast<int>(pruned.pairs.size());
    std::vector<int> parent(m, -1);
    for (int i = 0; i < m; ++i) {
        const auto& p = pruned.pairs[i];
        if (p.level <= 1) continue;
        int cell = h.cell_at(p.level, h.pos[p.verts[0]]);
        for (int j = 0; j < m; ++j) { // ps order is canonical, so first hit is smallest
            if (pruned.pairs[j].level >= p.level) continue;
            int cnt = 0;
            for (int u : pruned.pairs[j].verts)
                if (h.cell_at(p.level, h.pos[u]) == cell) ++cnt;
            if (cnt >= h.k) { parent[i] = j; break; }
        }
        if (parent[i] < 0)
            throw StateError("minimal cover lacks a responsible parent");
    }

    CtildeView cc(h);
    std::vector<Tour> walk(m);
    for (int i = 0; i < m; ++i) walk[i] = Tour{pruned.pairs[i].verts, false};
    std::vector<char> merged(m, 0);

    auto potential = [&]() {
        long long pot = 0;
        for (int i = 0; i < m; ++i) {
            if (merged[i]) continue;
            pot += khop_cost(cc, walk[i], h.k) +
                   2LL * h.k * h.k * h.D[pruned.pairs[i].level];
        }
        return pot;
    };

    long long pot = potential();
    for (;;) {
        int pick = -1;
        for (int i = 0; i < m; ++i) {
            if (merged[i] || pruned.pairs[i].level <= 1) continue;
            if (pick < 0 || pruned.pairs[i].level > pruned.pairs[pick].level) pick = i;
        }
        if (pick < 0) break;
        int par = parent[pick];
        int lvl = pruned.pairs[pick].level;
        int cell = h.cell_at(lvl, h.pos[pruned.pairs[pick].verts[0]]);
        const auto& pv = walk[par].visits;
        int at = -1;
        for (int s = 0; s + h.k <= static_cast<int>(pv.size()); ++s) {
            bool run = true;
            for (int t = 0; t < h.k && run; ++t)
                run = h.cell_at(lvl, h.pos[pv[s + t]]) == cell;
            if (run) { at = s; break; }
        }
        if (at < 0) throw StateError("parent walk lost its k-run");
        walk[par] = walk_insert(h, walk[par], at, walk[pick].visits, lvl);
        merged[pick] = 1;
        long long npot = potential();
        if (npot > pot) throw StateError("insertion potential increased");
        pot = npot;
    }

    CoverToTourResult res;
    res.pruned = pruned;
    res.cover_w = cover_weight(h, pruned);
    res.tour.closed = true;
    for (int i = 0; i < m; ++i) {
        if (merged[i]) continue;
        res.tour.visits.insert(res.tour.visits.end(), walk[i].visits.begin(),
                               walk[i].visits.end());
    }
    res.tour_khop = khop_cost(cc, res.tour, h.k);
    if (res.tour_khop > 2 * res.cover_w)
        throw StateError("tour exceeded twice the cover weight");
    return res;
}

// Sort a slice of a monotone-breaking path back into position order. For
// paths of at most k+1 vertices the k-hop cost cannot increase (every ordered
// pair is a hop either way); longer paths are sorted without the guarantee.
inline std::vector<int> sort_segment(const HierInstance& h, std::vector<int> path,
                                     int from, int to) {
    if (from < 0 || to > static_cast<int>(path.size()) || from > to)
        throw ValidationError("segment out of range");
    CtildeView cc(h);
    long long before = khop_cost(cc, Tour{path, false}, h.k);
    std::sort(path.begin() + from, path.begin() + to,
              [&](int a, int b) { return h.pos[a] < h.pos[b]; });
    if (static_cast<int>(path.size()) <= h.k + 1) {
        long long after = khop_cost(cc, Tour{path, false}, h.k);
        if (after > before) throw StateError("sorting a short path increased its cost");
    }
    return path;
}

// True if some level-2 cell contains all but at most k/2 vertices.
inline int degenerate_cell(const HierInstance& h) {
    if (h.L < 2) return -1;
    for (int cell = 0; cell < h.cells_at(2); ++cell) {
        auto [lo, hi] = h.cell_range(2, cell);
        if (2 * (h.n - (hi - lo)) <= h.k) return cell;
    }
    return -1;
}

// Restrict to the level-2 cell [lo, hi): levels shift down by one, budgets
// drop their head, vertices are renumbered by position.
inline HierInstance restrict_to_cell(const HierInstance& h, int cell,
                                     std::vector<int>& orig_ids) {
    auto [lo, hi] = h.cell_range(2, cell);
    int m = hi - lo;
    orig_ids.resize(m);
    for (int i = 0; i < m; ++i) orig_ids[i] = h.order[lo + i];

    HierInstance s;
    s.n = m;
    s.k = h.k;
    s.L = h.L - 1;
    s.seed = h.seed;
    s.cost = MatI(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) s.cost(i, j) = h.cost(orig_ids[i], orig_ids[j]);
    s.base.n = m;
    s.base.k = h.k;
    s.base.well_scaled = false;
    s.base.cost = MatD(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) s.base.cost(i, j) = static_cast<double>(s.cost(i, j));
    s.order.resize(m);
    s.pos.resize(m);
    for (int i = 0; i < m; ++i) { s.order[i] = i; s.pos[i] = i; }
    s.D.assign(s.L + 1, 0);
    for (int l = 1; l <= s.L; ++l) s.D[l] = h.D[l + 1];
    s.boundaries.assign(s.L + 1, {});
    for (int l = 1; l <= s.L; ++l) {
        for (int x : h.boundaries[l + 1])
            if (x >= lo && x <= hi) s.boundaries[l].push_back(x - lo);
    }
    s.build_cells();
    validate_hierarchy(s);
    return s;
}

// Solve after stripping degenerate top levels. While some level-2 cell holds
// all but at most k/2 vertices: if that cell still has more than k vertices,
// recurse into it and splice the outsiders in front; otherwise keep k+1
// vertices (the cell plus the closest outsiders by position; any cycle on
// k+1 vertices has one k-hop cost) and splice the rest in front.
inline Tour reduce_degenerate(
    const HierInstance& h,
    const std::function<Tour(const HierInstance&, const std::vector<int>&)>& solver,
    const std::vector<int>& ids) {
    if (h.n == 1) return Tour{{0}, true};
    int cell = degenerate_cell(h);
    if (cell < 0) return solver(h, ids);

    auto [lo, hi] = h.cell_range(2, cell);
    int inside = hi - lo;
    if (inside > h.k) {
        std::vector<int> sub_ids;
        HierInstance s = restrict_to_cell(h, cell, sub_ids);
        std::vector<int> mapped(sub_ids.size());
        for (size_t i = 0; i < sub_ids.size(); ++i) mapped[i] = ids[sub_ids[i]];
        Tour inner = reduce_degenerate(s, solver, mapped);
        Tour out;
        out.closed = true;
        for (int p = 0; p < h.n; ++p) { // outsiders in position order, up front
            if (p >= lo && p < hi) continue;
            out.visits.push_back(h.order[p]);
        }
        for (int v : inner.visits) out.visits.push_back(sub_ids[v]);
        return out;
    }

    // small cell: keep it plus outsiders until k+1 kept, rest spliced in front
    int need = h.k + 1 - inside;
    std::vector<int> kept, rest;
    for (int p = 0; p < h.n; ++p) {
        bool is_in = p >= lo && p < hi;
        if (is_in || need > 0) {
            kept.push_back(h.order[p]);
            if (!is_in) --need;
        } else {
            rest.push_back(h.order[p]);
        }
    }
    Tour out;
    out.closed = true;
    out.visits = rest;
    out.visits.insert(out.visits.end(), kept.begin(), kept.end());
    return out;
}

} // namespace apriori
