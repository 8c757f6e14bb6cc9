#include <catch2/catch_amalgamated.hpp>

#include <apriori/hierarchy.hpp>
#include <apriori/oracles.hpp>
#include <apriori/synth.hpp>

#include <cmath>

using namespace apriori;

TEST_CASE("budget sequence halves down from the diameter", "[hierarchy]") {
    auto d = budget_sequence(10);
    REQUIRE(d == std::vector<long long>{0, 10, 5, 2, 1, 0});
    REQUIRE(budget_sequence(1) == std::vector<long long>{0, 1, 0});
}

TEST_CASE("ldd pieces respect the diameter bound", "[hierarchy]") {
    Rng rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        int n = 6 + static_cast<int>(rng.below(8));
        HopInstance hop = random_scaled_hop(n, 2, rng);
        long long diam = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                diam = std::max(diam, static_cast<long long>(hop.cost(i, j)));
        if (diam < 2) continue;
        long long bound = diam / 2;
        MatI ci(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ci(i, j) = static_cast<long long>(hop.cost(i, j));
        LddCut cut = ldd(ci, bound, rng.next());
        // removing the cut leaves only pieces of bounded diameter
        std::vector<char> removed(static_cast<size_t>(n) * n, 0);
        for (auto [u, v] : cut.cut) removed[static_cast<size_t>(u) * n + v] = 1;
        detail::SccResult scc = detail::scc_minus_cut(n, removed);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (scc.comp[i] == scc.comp[j] && !removed[static_cast<size_t>(i) * n + j])
                    REQUIRE(ci(i, j) <= bound);
    }
}

TEST_CASE("build_hierarchy produces a valid nested structure", "[hierarchy]") {
    Rng rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        int n = 4 + static_cast<int>(rng.below(12));
        int k = 1 + static_cast<int>(rng.below(std::min(n - 1, 4)));
        HierInstance h = random_hier(n, k, rng);
        REQUIRE_NOTHROW(validate_hierarchy(h));
        REQUIRE(ctilde_is_metric(h));
        double cap = std::log2(2.0 * std::pow(static_cast<double>(n), 3)) + 2.0;
        REQUIRE(h.L <= static_cast<int>(cap) + 1);
        REQUIRE(h.D[h.L] == 0);
        for (int l = 1; l < h.L; ++l) REQUIRE(h.D[l] >= std::max<long long>(1, 2 * h.D[l + 1]));
    }
}

TEST_CASE("forward edges within a cell fit the level budget", "[hierarchy]") {
    Rng rng(13);
    HierInstance h = random_hier(10, 2, rng);
    for (int u = 0; u < h.n; ++u)
        for (int v = 0; v < h.n; ++v) {
            if (u == v) continue;
            if (h.pos[u] < h.pos[v]) REQUIRE(h.cost(u, v) <= h.D[h.level_of(u, v)]);
        }
}

TEST_CASE("ctilde charges the level budget backwards and cost forwards", "[hierarchy]") {
    HierInstance h;
    h.n = 4;
    h.k = 1;
    h.L = 3;
    h.order = {0, 1, 2, 3};
    h.pos = {0, 1, 2, 3};
    h.boundaries = {{}, {0, 4}, {0, 2, 4}, {0, 1, 2, 3, 4}};
    h.D = {0, 4, 2, 0};
    h.cost = MatI(4);
    auto setc = [&](int a, int b, long long c) {
        h.cost(a, b) = c;
        h.cost(b, a) = c;
    };
    setc(0, 1, 1);
    setc(1, 2, 3);
    setc(2, 3, 2);
    setc(0, 2, 4);
    setc(0, 3, 4);
    setc(1, 3, 3);
    h.base.n = 4;
    h.base.k = 1;
    h.base.well_scaled = true;
    h.base.cost = MatD(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) h.base.cost(i, j) = static_cast<double>(h.cost(i, j));
    h.build_cells();
    REQUIRE_NOTHROW(validate_hierarchy(h));

    REQUIRE(h.level_of(0, 1) == 2);
    REQUIRE(h.level_of(1, 2) == 1);
    REQUIRE(h.level_of(2, 3) == 2);
    REQUIRE(h.level_of(0, 0) == 3);

    REQUIRE(h.ctilde(0, 1) == 1);  // forward: true cost
    REQUIRE(h.ctilde(1, 0) == 2);  // backward: D at level 2
    REQUIRE(h.ctilde(2, 1) == 4);  // backward across level-1 split
    REQUIRE(h.ctilde(3, 2) == 2);
    REQUIRE(h.ctilde(0, 0) == 0);

    CtildeView view(h);
    REQUIRE(view(1, 0) == 2);
    Tour t = identity_tour(4);
    // 1-hop closed walk: 1 + 3 + 2 + D[level_of(3,0)] = 1+3+2+4
    REQUIRE(khop_cost(view, t, 1) == 10);
}

TEST_CASE("synthetic hierarchies honour requested depth", "[hierarchy]") {
    Rng rng(19);
    for (int rep = 0; rep < 10; ++rep) {
        int n = 4 + static_cast<int>(rng.below(5));
        int L = 2 + static_cast<int>(rng.below(2));
        HierInstance h = synthetic_hier(n, 1, L, rng);
        REQUIRE(h.L == L);
        REQUIRE_NOTHROW(validate_hierarchy(h));
        REQUIRE(ctilde_is_metric(h));
    }
}

TEST_CASE("hierarchy construction is deterministic in the seed", "[hierarchy]") {
    Rng rng(23);
    HopInstance hop = random_scaled_hop(12, 3, rng);
    HierInstance a = build_hierarchy(hop, 99);
    HierInstance b = build_hierarchy(hop, 99);
    REQUIRE(a.order == b.order);
    REQUIRE(a.boundaries == b.boundaries);
    REQUIRE(a.D == b.D);
}

TEST_CASE("level_of is the deepest common cell and nests monotonically", "[hierarchy]") {
    Rng rng(29);
    HierInstance h = random_hier(9, 2, rng);
    for (int u = 0; u < h.n; ++u)
        for (int v = 0; v < h.n; ++v) {
            int l = h.level_of(u, v);
            REQUIRE(l >= 1);
            REQUIRE(l <= h.L);
            if (u != v) {
                REQUIRE(h.cell_at(l, h.pos[u]) == h.cell_at(l, h.pos[v]));
                if (l < h.L)
                    REQUIRE(h.cell_at(l + 1, h.pos[u]) != h.cell_at(l + 1, h.pos[v]));
            }
        }
}
