#include <catch2/catch_amalgamated.hpp>

#include <apriori/greedy_dp.hpp>
#include <apriori/oracles.hpp>
#include <apriori/synth.hpp>

using namespace apriori;

TEST_CASE("gamma exponent is the smallest binary cover of k", "[greedydp]") {
    REQUIRE(gamma_exponent(1) == 1);
    REQUIRE(gamma_exponent(2) == 2);
    REQUIRE(gamma_exponent(3) == 2);
    REQUIRE(gamma_exponent(4) == 3);
    REQUIRE(gamma_exponent(7) == 3);
    REQUIRE(gamma_exponent(8) == 4);
}

TEST_CASE("dp heights follow the ruler sequence", "[greedydp]") {
    REQUIRE(dp_height(0, 3) == 3);
    REQUIRE(dp_height(1, 3) == 0);
    REQUIRE(dp_height(2, 3) == 1);
    REQUIRE(dp_height(4, 3) == 2);
    REQUIRE(dp_height(8, 3) == 3);
    REQUIRE(dp_height(12, 3) == 2);
    REQUIRE(dp_width(0, 3) == 7);
    REQUIRE(dp_width(1, 3) == 0);
    REQUIRE(dp_width(6, 3) == 1);
}

TEST_CASE("weight_bound dominates pair_weight at every offset", "[greedydp]") {
    Rng rng(3);
    for (int rep = 0; rep < 30; ++rep) {
        int n = 4 + static_cast<int>(rng.below(6));
        int k = 1 + static_cast<int>(rng.below(3));
        if (k >= n) k = 1;
        HierInstance h = random_hier(n, k, rng);
        Cover c = random_feasible_cover(h, rng, 2);
        int kprime = (1 << gamma_exponent(k)) - 1;
        for (const auto& p : c.pairs) {
            long long w = pair_weight(h, p);
            for (long long q = 0; q <= kprime; ++q)
                REQUIRE(weight_bound(h, p, q) >= w);
        }
    }
}

TEST_CASE("weight_bound closed form on a two-vertex path", "[greedydp]") {
    Rng rng(5);
    HierInstance h = synthetic_hier(4, 1, 2, rng);
    PathLevelPair p;
    p.verts = {h.order[0], h.order[1]};
    p.level = 1;
    // gamma = 1: heights (1, 0), so w^0 = k^2 D_1 + 2 c~(v0, v1)
    long long expect = h.D[1] + 2 * h.ctilde(p.verts[0], p.verts[1]);
    REQUIRE(weight_bound(h, p, 0) == expect);
    // offset 1 shifts the tall slot onto the second vertex; same total here
    REQUIRE(weight_bound(h, p, 1) == expect);
}

TEST_CASE("block_dp reproduces the brute-force block table", "[greedydp]") {
    Rng rng(7);
    for (int rep = 0; rep < 6; ++rep) {
        int n = 3 + static_cast<int>(rng.below(3));
        int k = rep % 2 == 0 ? 1 : std::min(3, n - 1);
        HierInstance h = synthetic_hier(n, k, 2 + static_cast<int>(rng.below(2)), rng);
        UncoveredSet unc = UncoveredSet::full(h.n, h.L);
        for (int v = 0; v < h.n; ++v)
            for (int l = 1; l <= h.L; ++l)
                if (rng.bernoulli(0.3)) unc.set(v, l, false);
        for (int lstar = 1; lstar <= h.L; ++lstar)
            for (int cell = 0; cell < h.cells_at(lstar); ++cell) {
                DpContext ctx = make_dp_context(h, unc, lstar, cell);
                long long used = 0;
                for (int x = 0; x < ctx.M; ++x)
                    for (int y = x + ctx.kprime + 1; y < ctx.M; ++y) {
                        ProfileMap dp = block_dp(ctx, x, y, 10000000, used);
                        ProfileMap ref = brute_block_table(ctx, x, y);
                        REQUIRE(dp.size() == ref.size());
                        auto it = dp.begin();
                        auto jt = ref.begin();
                        for (; it != dp.end(); ++it, ++jt) {
                            REQUIRE(it->first == jt->first);
                            REQUIRE(it->second.cost == jt->second.cost);
                        }
                    }
            }
    }
}

TEST_CASE("block_dp respects the memo cap", "[greedydp]") {
    Rng rng(11);
    HierInstance h = synthetic_hier(6, 3, 3, rng);
    UncoveredSet unc = UncoveredSet::full(h.n, h.L);
    DpContext ctx = make_dp_context(h, unc, 1, 0);
    long long used = 0;
    REQUIRE_THROWS_AS(block_dp(ctx, 0, ctx.kprime + 1, 1, used), BudgetError);
}

TEST_CASE("xi matches direct coverage and combine matches concatenation", "[greedydp]") {
    Rng rng(13);
    HierInstance h = synthetic_hier(6, 1, 3, rng);
    UncoveredSet unc = UncoveredSet::full(h.n, h.L);
    for (int v = 0; v < h.n; ++v)
        for (int l = 1; l <= h.L; ++l)
            if (rng.bernoulli(0.3)) unc.set(v, l, false);
    int checked = 0;
    for (int rep = 0; rep < 400; ++rep) {
        int lstar = 1 + static_cast<int>(rng.below(h.L));
        int cell = static_cast<int>(rng.below(h.cells_at(lstar)));
        DpContext ctx = make_dp_context(h, unc, lstar, cell);
        std::vector<int> slots;
        for (int s = 0; s < ctx.M; ++s)
            if (rng.bernoulli(0.4)) slots.push_back(s);
        if (slots.empty()) continue;
        CoveringProfile prof = profile_of(ctx, slots);
        PathLevelPair pair;
        pair.level = lstar;
        for (int s : slots)
            if (!ctx.is_dummy(s)) pair.verts.push_back(ctx.slot_vertex[s]);
        long long direct = pair.verts.empty() ? 0 : direct_new_coverage(h, unc, pair);
        REQUIRE(xi_of(ctx, prof) == direct);
        if (slots.size() >= 2) {
            size_t cut = 1 + rng.below(slots.size() - 1);
            std::vector<int> left(slots.begin(), slots.begin() + cut);
            std::vector<int> right(slots.begin() + cut, slots.end());
            CoveringProfile both = combine(ctx, profile_of(ctx, left), profile_of(ctx, right));
            REQUIRE(both == prof);
        }
        ++checked;
    }
    REQUIRE(checked > 300);
}

TEST_CASE("best_ratio_path never beats the oracle and stays in its guarantee", "[greedydp]") {
    Rng rng(17);
    for (int rep = 0; rep < 8; ++rep) {
        int n = 4 + static_cast<int>(rng.below(2));
        int k = 1 + static_cast<int>(rng.below(2));
        HierInstance h = synthetic_hier(n, k, 2 + static_cast<int>(rng.below(2)), rng);
        UncoveredSet unc = UncoveredSet::full(h.n, h.L);
        for (int v = 0; v < h.n; ++v)
            for (int l = 1; l <= h.L; ++l)
                if (rng.bernoulli(0.3)) unc.set(v, l, false);
        if (unc.size() == 0) continue;
        BestRatioResult br = best_ratio_path(h, unc);
        RatioOracleResult ro = brute_best_ratio_all(h, unc);
        REQUIRE(br.found);
        REQUIRE(ro.found);
        REQUIRE(br.ratio >= ro.ratio - 1e-9);
        int gamma = gamma_exponent(h.k);
        REQUIRE(br.dp_ratio <= 4.0 * (gamma + 2) * ro.ratio + 1e-6);
        // reported pair really covers `covered` new elements at `weight`
        REQUIRE(br.weight == pair_weight(h, br.pair));
        long long direct = 0;
        for (int v = 0; v < h.n; ++v)
            for (int l = 1; l <= h.L; ++l)
                if (unc.contains(v, l) && covers(h, br.pair, v, l)) ++direct;
        REQUIRE(direct == br.covered);
    }
}

TEST_CASE("greedy_cover clears everything and solve_hierarchical seals it", "[greedydp]") {
    Rng rng(19);
    for (int rep = 0; rep < 6; ++rep) {
        int n = 4 + static_cast<int>(rng.below(4));
        int k = 1 + static_cast<int>(rng.below(2));
        HierInstance h = random_hier(n, k, rng);
        SolveResult s = solve_hierarchical(h);
        std::vector<char> seen(h.n, 0);
        for (int v : s.tour.visits) seen[v] = 1;
        for (int v = 0; v < h.n; ++v) REQUIRE(seen[v] == 1);
        REQUIRE(s.tour.closed);
        REQUIRE(s.tour_khop == khop_cost(CtildeView(h), s.tour, h.k));
        if (s.covered && !s.reduced) {
            REQUIRE(is_feasible(h, s.cover));
            REQUIRE(s.tour_khop <= 2 * s.cover_w);
            REQUIRE_FALSE(s.trace.empty());
            // trace remaining counts are strictly decreasing to zero
            long long prev = static_cast<long long>(h.n) * h.L + 1;
            for (const auto& row : s.trace) {
                REQUIRE(row.remaining < prev);
                prev = row.remaining;
            }
            REQUIRE(s.trace.back().remaining == 0);
        }
    }
}

TEST_CASE("solve_hierarchical is deterministic", "[greedydp]") {
    Rng rng(23);
    HierInstance h = random_hier(8, 2, rng);
    SolveResult a = solve_hierarchical(h);
    SolveResult b = solve_hierarchical(h);
    REQUIRE(a.tour.visits == b.tour.visits);
    REQUIRE(a.tour_khop == b.tour_khop);
    REQUIRE(a.cover_w == b.cover_w);
}
