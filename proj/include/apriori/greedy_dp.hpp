#pragma once
// Greedy set cover over (vertex, level) elements driven by a min-ratio path
// search. Candidate paths live inside one guessed cell; their contribution to
// coverage is tracked by a constant-size covering profile, combined with an
// interval-respecting merge, and scored by a dynamic program over blocks of
// k' = 2^Gamma - 1 vertices arranged as perfect binary trees. Dummy slots on
// both sides of the cell absorb the weight-bound offset.

#include <map>

#include "path_cover.hpp"

namespace apriori {

inline int gamma_exponent(int k) {
    int g = 1;
    while ((1 << g) - 1 < k) ++g;
    return g;
}

// largest h <= gamma with 2^h dividing j; gamma for j == 0
inline int dp_height(long long j, int gamma) {
    if (j == 0) return gamma;
    int h = 0;
    while (h < gamma && j % (1LL << (h + 1)) == 0) ++h;
    return h;
}

inline long long dp_width(long long j, int gamma) {
    return (1LL << dp_height(j, gamma)) - 1;
}

// Offset-q weight bound of a pair: k^2 D_level plus, per path index i, the
// height-weighted costs to the width(i+q) neighbours on both sides
// (out-of-range neighbours contribute zero).
inline long long weight_bound(const HierInstance& h, const PathLevelPair& p, long long q) {
    validate_pair(h, p);
    if (q < 0) throw ValidationError("offset must be nonnegative");
    int gamma = gamma_exponent(h.k);
    int r = static_cast<int>(p.verts.size());
    long long total = static_cast<long long>(h.k) * h.k * h.D[p.level];
    for (int i = 0; i < r; ++i) {
        int hgt = dp_height(i + q, gamma);
        long long wdt = (1LL << hgt) - 1;
        long long term = 0;
        for (long long d = 1; d <= wdt; ++d) {
            if (i - d >= 0) term += h.ctilde(p.verts[i - d], p.verts[i]);
            if (i + d < r) term += h.ctilde(p.verts[i], p.verts[i + d]);
        }
        total += (1LL << hgt) * term;
    }
    return total;
}

struct CoveringProfile {
    int amin = -1, amax = -1;
    std::vector<int> fmin, fmax, gmin, gmax; // per level lstar..L-1
    long long gamma = 0;

    bool operator==(const CoveringProfile& o) const {
        return amin == o.amin && amax == o.amax && gamma == o.gamma &&
               fmin == o.fmin && fmax == o.fmax && gmin == o.gmin && gmax == o.gmax;
    }
};

struct ProfileLess {
    bool operator()(const CoveringProfile& a, const CoveringProfile& b) const {
        if (a.amin != b.amin) return a.amin < b.amin;
        if (a.amax != b.amax) return a.amax < b.amax;
        if (a.gamma != b.gamma) return a.gamma < b.gamma;
        if (a.fmin != b.fmin) return a.fmin < b.fmin;
        if (a.fmax != b.fmax) return a.fmax < b.fmax;
        if (a.gmin != b.gmin) return a.gmin < b.gmin;
        return a.gmax < b.gmax;
    }
};

struct DummyPadding {
    int left = 0;
    int right = 0;
};

// Working view of one guess (level, cell): real positions flanked by dummy
// slots, cells and uncovered counts per relevant level in slot coordinates.
struct DpContext {
    const HierInstance* h = nullptr;
    int lstar = 1, cell = 0;
    int k = 1, kprime = 1, gamma = 1;
    int lo = 0, hi = 0;   // position range of the cell
    int reals = 0, M = 0; // slot count = reals + dummies
    int depth = 0;        // levels lstar..L-1 carry f/g entries
    DummyPadding pad;
    std::vector<int> slot_vertex;          // -1 for dummies
    std::vector<std::vector<int>> scell;   // [t][slot], t -> level lstar+1+t
    std::vector<std::vector<int>> upref;   // [t][slot+1], t -> level lstar+t

    bool is_dummy(int s) const { return slot_vertex[s] < 0; }

    // forward costs touching a dummy are zero; min() over directions makes the
    // backward choice irrelevant, so dummies are zero both ways
    long long cc(int s, int t) const {
        if (s == t || is_dummy(s) || is_dummy(t)) return 0;
        return h->ctilde(slot_vertex[s], slot_vertex[t]);
    }

    // slot interval [lo, hi) of the cell holding slot s at depth index t
    std::pair<int, int> cell_slots(int t, int s) const {
        if (is_dummy(s)) return {s, s + 1};
        int cid = scell[t][s];
        auto [a, b] = h->cell_range(lstar + 1 + t, cid);
        return {a - lo + pad.left, b - lo + pad.left};
    }

    // uncovered-at-level-(lstar+t) real slots in slot range [a, b)
    long long unc_in(int t, int a, int b) const {
        a = std::max(a, 0);
        b = std::min(b, M);
        if (a >= b) return 0;
        return upref[t][b] - upref[t][a];
    }

    bool unc_at(int t, int s) const { return upref[t][s + 1] - upref[t][s] > 0; }
};

inline DpContext make_dp_context(const HierInstance& h, const UncoveredSet& unc,
                                 int lstar, int cell) {
    DpContext c;
    c.h = &h;
    c.lstar = lstar;
    c.cell = cell;
    c.k = h.k;
    c.gamma = gamma_exponent(h.k);
    c.kprime = (1 << c.gamma) - 1;
    auto [lo, hi] = h.cell_range(lstar, cell);
    c.lo = lo;
    c.hi = hi;
    c.reals = hi - lo;
    c.pad = {c.kprime, c.kprime};
    c.M = c.reals + 2 * c.kprime;
    if (c.M > 64) throw BudgetError("cell too large for the slot mask");
    c.depth = h.L - lstar;
    c.slot_vertex.assign(c.M, -1);
    for (int i = 0; i < c.reals; ++i) c.slot_vertex[c.pad.left + i] = h.order[lo + i];
    c.scell.assign(c.depth, std::vector<int>(c.M, 0));
    for (int t = 0; t < c.depth; ++t)
        for (int s = 0; s < c.M; ++s)
            c.scell[t][s] = c.slot_vertex[s] < 0 ? -1 - s
                                                 : h.cell_at(lstar + 1 + t, lo + s - c.pad.left);
    c.upref.assign(c.depth + 1, std::vector<int>(c.M + 1, 0));
    for (int t = 0; t <= c.depth; ++t)
        for (int s = 0; s < c.M; ++s) {
            int v = c.slot_vertex[s];
            int add = v >= 0 && unc.contains(v, lstar + t) ? 1 : 0;
            c.upref[t][s + 1] = c.upref[t][s] + add;
        }
    return c;
}

// Profile of a monotone slot path, straight from the definition.
inline CoveringProfile profile_of(const DpContext& c, const std::vector<int>& slots) {
    if (slots.empty()) throw ValidationError("profile needs a nonempty path");
    for (size_t i = 0; i + 1 < slots.size(); ++i)
        if (slots[i] >= slots[i + 1]) throw ValidationError("profile path must increase");
    CoveringProfile p;
    p.amin = slots.front();
    p.amax = slots.back();
    p.fmin.assign(c.depth, 0);
    p.fmax.assign(c.depth, 0);
    p.gmin.assign(c.depth, 0);
    p.gmax.assign(c.depth, 0);
    for (int t = 0; t < c.depth; ++t) {
        int cmin = c.scell[t][p.amin], cmax = c.scell[t][p.amax];
        int on_min_unc = 0, on_max_unc = 0;
        for (int s : slots) {
            if (c.scell[t][s] == cmin) {
                ++p.fmin[t];
                if (c.unc_at(t, s)) ++on_min_unc;
            }
            if (c.scell[t][s] == cmax) {
                ++p.fmax[t];
                if (c.unc_at(t, s)) ++on_max_unc;
            }
        }
        auto [mlo, mhi] = c.cell_slots(t, p.amin);
        p.gmin[t] = static_cast<int>(c.unc_in(t, std::max(mlo, p.amin),
                                               std::min(mhi, p.amax + 1)) - on_min_unc);
        auto [xlo, xhi] = c.cell_slots(t, p.amax);
        p.gmax[t] = static_cast<int>(c.unc_in(t, std::max(xlo, p.amin),
                                               std::min(xhi, p.amax + 1)) - on_max_unc);
    }
    for (int t = 0; t <= c.depth; ++t)
        for (int s : slots)
            if (c.unc_at(t, s)) ++p.gamma;
    for (int t = 0; t < c.depth; ++t) {
        size_t i = 0;
        while (i < slots.size()) {
            size_t j = i;
            int cid = c.scell[t][slots[i]];
            int unc_on_path = 0;
            while (j < slots.size() && c.scell[t][slots[j]] == cid) {
                if (c.unc_at(t, slots[j])) ++unc_on_path;
                ++j;
            }
            if (static_cast<int>(j - i) >= c.k) {
                auto [a, b] = c.cell_slots(t, slots[i]);
                if (a > p.amin && b <= p.amax) // cell strictly inside the span
                    p.gamma += c.unc_in(t, a, b) - unc_on_path;
            }
            i = j;
        }
    }
    return p;
}

inline CoveringProfile singleton_profile(const DpContext& c, int s) {
    return profile_of(c, std::vector<int>{s});
}

// Number of still-uncovered elements a realization of the profile would cover.
inline long long xi_of(const DpContext& c, const CoveringProfile& p) {
    long long xi = p.gamma;
    auto outside = [&](int t, int s, int alo, int ahi) {
        auto [a, b] = c.cell_slots(t, s);
        return c.unc_in(t, a, b) - c.unc_in(t, std::max(a, alo), std::min(b, ahi + 1));
    };
    for (int t = 0; t < c.depth; ++t) {
        int cmin = c.scell[t][p.amin], cmax = c.scell[t][p.amax];
        if (cmin != cmax) {
            if (p.fmin[t] >= c.k) xi += p.gmin[t] + outside(t, p.amin, p.amin, p.amax);
            if (p.fmax[t] >= c.k) xi += p.gmax[t] + outside(t, p.amax, p.amin, p.amax);
        } else if (p.fmin[t] >= c.k) {
            xi += p.gmin[t] + outside(t, p.amin, p.amin, p.amax);
        }
    }
    return xi;
}

// Profile of the concatenation of two realizations, left entirely before right.
inline CoveringProfile combine(const DpContext& c, const CoveringProfile& a,
                               const CoveringProfile& b) {
    if (a.amax >= b.amin) throw ValidationError("combine needs disjoint ordered spans");
    CoveringProfile o;
    o.amin = a.amin;
    o.amax = b.amax;
    o.fmin.assign(c.depth, 0);
    o.fmax.assign(c.depth, 0);
    o.gmin.assign(c.depth, 0);
    o.gmax.assign(c.depth, 0);
    o.gamma = a.gamma + b.gamma;
    int gap_lo = a.amax + 1, gap_hi = b.amin; // open interval between the spans
    for (int t = 0; t < c.depth; ++t) {
        int ca_min = c.scell[t][a.amin], ca_max = c.scell[t][a.amax];
        int cb_min = c.scell[t][b.amin], cb_max = c.scell[t][b.amax];

        o.fmin[t] = a.fmin[t] + (ca_min == cb_min ? b.fmin[t] : 0);
        o.fmax[t] = b.fmax[t] + (cb_max == ca_max ? a.fmax[t] : 0);

        auto [mlo, mhi] = c.cell_slots(t, a.amin);
        o.gmin[t] = a.gmin[t] +
                    static_cast<int>(c.unc_in(t, std::max(mlo, gap_lo), std::min(mhi, gap_hi))) +
                    (ca_min == cb_min ? b.gmin[t] : 0);
        auto [xlo, xhi] = c.cell_slots(t, b.amax);
        o.gmax[t] = b.gmax[t] +
                    static_cast<int>(c.unc_in(t, std::max(xlo, gap_lo), std::min(xhi, gap_hi))) +
                    (cb_max == ca_max ? a.gmax[t] : 0);

        // responsibility corrections for the cells holding a.amax and b.amin,
        // now that they may lie strictly inside the combined span
        auto inside = [&](int s) {
            auto [x, y] = c.cell_slots(t, s);
            return x > o.amin && y <= o.amax;
        };
        auto uncover_outside = [&](int s, int alo, int ahi) {
            auto [x, y] = c.cell_slots(t, s);
            return c.unc_in(t, x, y) - c.unc_in(t, std::max(x, alo), std::min(y, ahi + 1));
        };
        if (ca_max != cb_min) {
            if (inside(a.amax) && a.fmax[t] >= c.k)
                o.gamma += a.gmax[t] + uncover_outside(a.amax, a.amin, a.amax);
            if (inside(b.amin) && b.fmin[t] >= c.k)
                o.gamma += b.gmin[t] + uncover_outside(b.amin, b.amin, b.amax);
        } else if (inside(a.amax) && a.fmax[t] + b.fmin[t] >= c.k) {
            auto [x, y] = c.cell_slots(t, a.amax);
            long long both = c.unc_in(t, x, y) -
                             c.unc_in(t, std::max(x, a.amin), std::min(y, a.amax + 1)) -
                             c.unc_in(t, std::max(x, b.amin), std::min(y, b.amax + 1));
            o.gamma += a.gmax[t] + b.gmin[t] + both;
        }
    }
    return o;
}

struct TreeSolution {
    long long cost = 0;
    uint64_t mask = 0; // slots of the realization
};

using ProfileMap = std::map<CoveringProfile, TreeSolution, ProfileLess>;

namespace detail {

struct BlockKey {
    std::vector<int> pi; // pi[i] is the reference slot for level h+1+i
    CoveringProfile prof;
    bool operator<(const BlockKey& o) const {
        if (pi != o.pi) return pi < o.pi;
        return ProfileLess{}(prof, o.prof);
    }
};

inline void keep_better(std::map<BlockKey, TreeSolution>& tbl, BlockKey key,
                        const TreeSolution& ts) {
    auto it = tbl.find(key);
    if (it == tbl.end()) {
        tbl.emplace(std::move(key), ts);
    } else if (ts.cost < it->second.cost ||
               (ts.cost == it->second.cost && ts.mask < it->second.mask)) {
        it->second = ts;
    }
}

} // namespace detail

// All profiles realizable by k' vertices strictly between slots x and y,
// arranged as a perfect in-order binary tree, with the minimum tree cost per
// profile. The pi component of intermediate keys pins the reference vertices
// of the not-yet-built upper levels.
inline ProfileMap block_dp(const DpContext& c, int x, int y, long long memo_cap,
                           long long& memo_used) {
    ProfileMap out;
    int avail = y - x - 1;
    if (avail < c.kprime) return out;

    std::map<detail::BlockKey, TreeSolution> cur;
    std::vector<int> pi(c.gamma - 1, 0);
    // height 1: every single slot with every valid reference assignment
    std::function<void(int, int)> enum_pi = [&](int v, int idx) {
        if (idx == c.gamma - 1) {
            long long cost = (1LL << c.gamma) * (c.cc(x, v) + c.cc(v, y));
            for (int i = 0; i < c.gamma - 1; ++i) { // level 2+i, weight 2^(1+i)
                long long e = std::min(c.cc(v, pi[i]), c.cc(pi[i], v));
                cost += (1LL << (1 + i)) * e;
            }
            detail::BlockKey key{pi, singleton_profile(c, v)};
            detail::keep_better(cur, std::move(key), {cost, 1ULL << v});
            return;
        }
        for (int s = x + 1; s < y; ++s) {
            if (s == v) continue;
            pi[idx] = s;
            enum_pi(v, idx + 1);
        }
    };
    for (int v = x + 1; v < y; ++v) enum_pi(v, 0);
    memo_used += static_cast<long long>(cur.size());
    if (memo_used > memo_cap) throw BudgetError("profile memo cap exceeded");

    for (int h = 1; h < c.gamma; ++h) {
        std::map<detail::BlockKey, TreeSolution> nxt;
        auto it = cur.begin();
        while (it != cur.end()) {
            auto grp_end = it;
            while (grp_end != cur.end() && grp_end->first.pi == it->first.pi) ++grp_end;
            int r = it->first.pi[0];
            std::vector<int> rest(it->first.pi.begin() + 1, it->first.pi.end());
            for (auto l = it; l != grp_end; ++l) {
                if (l->second.mask >> r) continue; // left child: all slots below r
                for (auto rgt = it; rgt != grp_end; ++rgt) {
                    if (rgt->second.mask & ((2ULL << r) - 1)) continue; // right: above r
                    uint64_t mask = l->second.mask | rgt->second.mask | (1ULL << r);
                    int lowest = __builtin_ctzll(mask);
                    int highest = 63 - __builtin_clzll(mask);
                    bool ok = true;
                    for (int s : rest)
                        if (s >= lowest && s <= highest) { ok = false; break; }
                    if (!ok) continue;
                    long long cost =
                        l->second.cost + rgt->second.cost +
                        (1LL << c.gamma) * (c.cc(x, r) + c.cc(r, y));
                    for (size_t i = 0; i < rest.size(); ++i) { // level h+2+i, weight 2^(h+1+i)
                        long long e = std::min(c.cc(r, rest[i]), c.cc(rest[i], r));
                        cost += (1LL << (h + 1 + i)) * e;
                    }
                    CoveringProfile prof =
                        combine(c, combine(c, l->first.prof, singleton_profile(c, r)),
                                rgt->first.prof);
                    detail::keep_better(nxt, {rest, std::move(prof)}, {cost, mask});
                }
            }
            it = grp_end;
        }
        cur = std::move(nxt);
        memo_used += static_cast<long long>(cur.size());
        if (memo_used > memo_cap) throw BudgetError("profile memo cap exceeded");
    }

    for (auto& [key, ts] : cur) out.emplace(key.prof, ts);
    return out;
}

struct BestRatioResult {
    bool found = false;
    PathLevelPair pair;
    long long weight = 0;   // true pair weight
    long long covered = 0;  // newly covered elements
    double ratio = 0;       // weight / covered
    long long dp_num = 0;   // DP bound numerator (w^0 of the padded path)
    double dp_ratio = 0;
};

// Minimum (weight bound) / (newly covered) pair over all guessed levels and
// cells. Per guess, a DAG over (slot, profile) nodes is relaxed left to
// right; every edge appends one block of k' vertices and one endpoint, so
// realizations have length 1 mod k'+1 and dummy padding supplies every
// offset. End profiles are scored by xi; gamma* never needs enumerating
// because every end node is scanned.
inline BestRatioResult best_ratio_path(const HierInstance& h, const UncoveredSet& unc,
                                       long long memo_cap = 5000000) {
    BestRatioResult best;
    long long totalU = unc.size();
    if (totalU == 0) return best;

    struct Node {
        long long dist = 0;
        bool has_parent = false;
        int par_slot = -1;
        CoveringProfile par_prof;
        uint64_t mask = 0; // block between parent and this slot
    };

    long long best_num = 0, best_den = 0; // exact fraction of the incumbent
    long long memo_used = 0;

    for (int lstar = 1; lstar <= h.L; ++lstar) {
        long long kkd = static_cast<long long>(h.k) * h.k * h.D[lstar];
        if (best.found && static_cast<double>(kkd) > best.dp_ratio * static_cast<double>(totalU))
            continue; // every pair here has weight >= kkd and coverage <= |U|
        for (int cell = 0; cell < h.cells_at(lstar); ++cell) {
            DpContext ctx = make_dp_context(h, unc, lstar, cell);
            std::vector<std::map<CoveringProfile, Node, ProfileLess>> reached(ctx.M);
            for (int s = 0; s < ctx.M; ++s)
                reached[s].emplace(singleton_profile(ctx, s), Node{});
            for (int s = 0; s < ctx.M; ++s) {
                if (reached[s].empty()) continue;
                for (int y = s + ctx.kprime + 1; y < ctx.M; ++y) {
                    ProfileMap blocks = block_dp(ctx, s, y, memo_cap, memo_used);
                    if (blocks.empty()) continue;
                    CoveringProfile ysing = singleton_profile(ctx, y);
                    for (const auto& [fx, node] : reached[s]) {
                        for (const auto& [bp, ts] : blocks) {
                            CoveringProfile fy = combine(ctx, combine(ctx, fx, bp), ysing);
                            long long nd = node.dist + ts.cost;
                            auto [it, fresh] = reached[y].try_emplace(std::move(fy));
                            bool better = fresh || nd < it->second.dist ||
                                          (nd == it->second.dist &&
                                           (s < it->second.par_slot ||
                                            (s == it->second.par_slot && ts.mask < it->second.mask)));
                            if (better) {
                                it->second.dist = nd;
                                it->second.has_parent = true;
                                it->second.par_slot = s;
                                it->second.par_prof = fx;
                                it->second.mask = ts.mask;
                            }
                            if (fresh) {
                                ++memo_used;
                                if (memo_used > memo_cap)
                                    throw BudgetError("profile memo cap exceeded");
                            }
                        }
                    }
                }
            }
            for (int s = 0; s < ctx.M; ++s) {
                for (const auto& [prof, node] : reached[s]) {
                    long long xv = xi_of(ctx, prof);
                    if (xv < 1) continue;
                    long long num = node.dist + kkd;
                    // exact fraction compare: num/xv < best_num/best_den
                    bool better = !best.found || num * best_den < best_num * xv;
                    if (!better) continue;
                    // walk parents to the slot path, then drop dummies
                    std::vector<int> slots;
                    int cs = s;
                    const CoveringProfile* cp = &prof;
                    for (;;) {
                        const Node& nd = reached[cs].at(*cp);
                        slots.push_back(cs);
                        if (!nd.has_parent) break;
                        for (int b = 62; b >= 0; --b)
                            if ((nd.mask >> b) & 1) slots.push_back(b);
                        int ps = nd.par_slot;
                        cp = &reached[ps].find(nd.par_prof)->first;
                        cs = ps;
                    }
                    std::reverse(slots.begin(), slots.end());
                    PathLevelPair pair;
                    pair.level = lstar;
                    for (int sl : slots)
                        if (!ctx.is_dummy(sl)) pair.verts.push_back(ctx.slot_vertex[sl]);
                    if (pair.verts.empty()) continue; // pure-dummy path cannot cover
                    best.found = true;
                    best.pair = pair;
                    best.covered = xv;
                    best.dp_num = num;
                    best.dp_ratio = static_cast<double>(num) / static_cast<double>(xv);
                    best_num = num;
                    best_den = xv;
                }
            }
        }
    }
    if (best.found) {
        best.weight = pair_weight(h, best.pair);
        long long covered = 0;
        for (int v = 0; v < h.n; ++v)
            for (int l = 1; l <= h.L; ++l)
                if (unc.contains(v, l) && covers(h, best.pair, v, l)) ++covered;
        if (covered != best.covered)
            throw StateError("profile coverage disagrees with the coverage relation");
        best.ratio = static_cast<double>(best.weight) / static_cast<double>(best.covered);
    }
    return best;
}

struct GreedyTraceRow {
    int level = 0;
    int path_len = 0;
    long long weight = 0;
    long long covered = 0;
    long long remaining = 0;
    double dp_ratio = 0;
};

struct GreedyCoverResult {
    Cover cover;
    std::vector<GreedyTraceRow> trace;
};

inline GreedyCoverResult greedy_cover(const HierInstance& h, long long memo_cap = 5000000) {
    GreedyCoverResult res;
    UncoveredSet unc = UncoveredSet::full(h.n, h.L);
    while (unc.size() > 0) {
        BestRatioResult r = best_ratio_path(h, unc, memo_cap);
        if (!r.found) throw StateError("no covering pair found");
        res.cover.pairs.push_back(r.pair);
        long long cleared = 0;
        for (int v = 0; v < h.n; ++v)
            for (int l = 1; l <= h.L; ++l)
                if (unc.contains(v, l) && covers(h, r.pair, v, l)) {
                    unc.set(v, l, false);
                    ++cleared;
                }
        if (cleared != r.covered) throw StateError("coverage accounting drifted");
        res.trace.push_back({r.pair.level, static_cast<int>(r.pair.verts.size()), r.weight,
                             r.covered, unc.size(), r.dp_ratio});
    }
    if (!is_feasible(h, res.cover)) throw StateError("greedy produced an infeasible cover");
    return res;
}

struct SolveResult {
    Tour tour;
    Cover cover;           // cover of the instance the greedy actually ran on,
                           // vertex ids mapped back to the input instance
    long long cover_w = 0; // weight of that cover (in its own instance)
    long long tour_khop = 0;
    bool reduced = false;  // degenerate top levels were stripped
    bool covered = false;  // greedy ran (false when the k+1 base case hit)
    std::vector<GreedyTraceRow> trace;
};

// Full solve: strip degenerate levels, greedily cover, then turn the cover
// into a tour. The 2x weight bound is asserted inside cover_to_tour.
inline SolveResult solve_hierarchical(const HierInstance& h, long long memo_cap = 5000000) {
    SolveResult out;
    std::vector<int> ids(h.n);
    for (int i = 0; i < h.n; ++i) ids[i] = i;
    bool top = true;
    auto solver = [&](const HierInstance& s, const std::vector<int>& sid) -> Tour {
        out.reduced = out.reduced || s.n != h.n;
        GreedyCoverResult g = greedy_cover(s, memo_cap);
        CoverToTourResult ct = cover_to_tour(s, g.cover);
        out.covered = true;
        out.cover_w = ct.cover_w;
        out.trace = g.trace;
        out.cover.pairs.clear();
        for (const auto& p : ct.pruned.pairs) {
            PathLevelPair mapped;
            mapped.level = p.level;
            for (int v : p.verts) mapped.verts.push_back(sid[v]);
            out.cover.pairs.push_back(std::move(mapped));
        }
        return ct.tour;
    };
    (void)top;
    Tour t = reduce_degenerate(h, solver, ids);
    out.reduced = out.reduced || degenerate_cell(h) >= 0;
    out.tour = t;
    out.tour_khop = khop_cost(CtildeView(h), t, h.k);
    return out;
}

} // namespace apriori
