#include <catch2/catch_amalgamated.hpp>

#include <apriori/path_cover.hpp>
#include <apriori/synth.hpp>

using namespace apriori;

namespace {

HierInstance handmade() {
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
    validate_hierarchy(h);
    return h;
}

} // namespace

TEST_CASE("pair weight adds the k^2 D_level overhead to the path cost", "[pathcover]") {
    HierInstance h = handmade();
    PathLevelPair p;
    p.verts = {0, 1};
    p.level = 2;
    // path cost c~(0,1) = 1, overhead 1*1*D[2] = 2
    REQUIRE(pair_weight(h, p) == 3);

    PathLevelPair q;
    q.verts = {0, 3};
    q.level = 1;
    REQUIRE(pair_weight(h, q) == 4 + 4);
}

TEST_CASE("validate_pair rejects broken paths", "[pathcover]") {
    HierInstance h = handmade();
    PathLevelPair bad;
    bad.verts = {1, 0}; // not position-monotone
    bad.level = 1;
    REQUIRE_THROWS_AS(validate_pair(h, bad), ValidationError);

    PathLevelPair leave;
    leave.verts = {0, 2}; // leaves the level-2 cell {0,1}
    leave.level = 2;
    REQUIRE_THROWS_AS(validate_pair(h, leave), ValidationError);

    PathLevelPair empty;
    empty.level = 1;
    REQUIRE_THROWS_AS(validate_pair(h, empty), ValidationError);
}

TEST_CASE("covers: on-path always, off-path needs k cellmates one level down", "[pathcover]") {
    HierInstance h = handmade();
    PathLevelPair p;
    p.verts = {0, 1};
    p.level = 2;
    REQUIRE(covers(h, p, 0, 2));
    REQUIRE(covers(h, p, 0, 3));
    REQUIRE_FALSE(covers(h, p, 0, 1)); // level above the pair's
    // k = 1: one vertex in the level-(l+1) cell of v suffices
    REQUIRE(covers(h, p, 1, 2));
    REQUIRE_FALSE(covers(h, p, 2, 2)); // cell {2,3} holds no path vertex
    REQUIRE_FALSE(covers(h, p, 2, 3)); // l = L needs v itself on the path
}

TEST_CASE("is_feasible agrees with the cell form on random covers", "[pathcover]") {
    Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 4 + static_cast<int>(rng.below(6));
        int k = 1 + static_cast<int>(rng.below(2));
        if (k >= n) k = 1;
        HierInstance h = random_hier(n, k, rng);
        Cover c = random_feasible_cover(h, rng);
        REQUIRE(is_feasible(h, c));
        REQUIRE(is_feasible_cells(h, c));
        // dropping all level-1 full paths usually breaks feasibility; both
        // forms must again agree
        Cover broken;
        for (const auto& p : c.pairs)
            if (p.level > 1) broken.pairs.push_back(p);
        REQUIRE(is_feasible(h, broken) == is_feasible_cells(h, broken));
    }
}

TEST_CASE("walk_insert splices within budget and validates its inputs", "[pathcover]") {
    HierInstance h = handmade();
    Tour walk{{0, 1, 2, 3}, false};
    Tour out = walk_insert(h, walk, 0, {1}, 2); // k = 1 run at position 0
    REQUIRE(out.visits == std::vector<int>{1, 0, 1, 2, 3});

    REQUIRE_THROWS_AS(walk_insert(h, walk, 0, {2}, 2), ValidationError); // wrong cell
    Tour closed{{0, 1}, true};
    REQUIRE_THROWS_AS(walk_insert(h, closed, 0, {0}, 1), ValidationError);
    REQUIRE_THROWS_AS(walk_insert(h, walk, 4, {0}, 1), ValidationError); // no k-run left
}

TEST_CASE("sort_segment restores monotone order, never pricier on short paths", "[pathcover]") {
    HierInstance h = handmade();
    auto sorted = sort_segment(h, {2, 0}, 0, 2);
    REQUIRE(sorted == std::vector<int>{0, 2});
}

TEST_CASE("cover_to_tour yields a full closed walk within twice the weight", "[pathcover]") {
    HierInstance h = handmade();
    Cover c;
    c.pairs.push_back({{0, 1, 2, 3}, 1});
    c.pairs.push_back({{0, 1}, 2});
    c.pairs.push_back({{2, 3}, 2});
    auto r = cover_to_tour(h, c);
    REQUIRE(r.tour.closed);
    std::vector<char> seen(4, 0);
    for (int v : r.tour.visits) seen[v] = 1;
    for (int v = 0; v < 4; ++v) REQUIRE(seen[v] == 1);
    REQUIRE(r.tour_khop <= 2 * r.cover_w);
    REQUIRE(r.cover_w <= cover_weight(h, c));
}

TEST_CASE("cover_to_tour handles random feasible covers", "[pathcover]") {
    Rng rng(17);
    for (int rep = 0; rep < 25; ++rep) {
        int n = 4 + static_cast<int>(rng.below(9));
        int k = 1 + static_cast<int>(rng.below(3));
        if (k >= n) k = 1;
        HierInstance h = random_hier(n, k, rng);
        Cover c = random_feasible_cover(h, rng);
        auto r = cover_to_tour(h, c);
        std::vector<char> seen(h.n, 0);
        for (int v : r.tour.visits) seen[v] = 1;
        for (int v = 0; v < h.n; ++v) REQUIRE(seen[v] == 1);
        REQUIRE(khop_cost(CtildeView(h), r.tour, h.k) == r.tour_khop);
        REQUIRE(r.tour_khop <= 2 * r.cover_w);
        REQUIRE(is_feasible(h, r.pruned));
    }
}

TEST_CASE("cover_to_tour rejects infeasible covers", "[pathcover]") {
    HierInstance h = handmade();
    Cover c;
    c.pairs.push_back({{0, 1}, 2});
    REQUIRE_THROWS_AS(cover_to_tour(h, c), ValidationError);
}

TEST_CASE("degenerate_cell spots cells holding almost everything", "[pathcover]") {
    HierInstance h = handmade();
    REQUIRE(degenerate_cell(h) == -1); // k = 1: outsiders 2 > k/2

    Rng rng(23);
    HierInstance s = synthetic_hier(6, 4, 2, rng);
    // level-2 cells of s depend on the draw; force one big cell
    s.boundaries[2] = {0, 5, 6};
    s.build_cells();
    // cell 0 has 5 of 6 vertices, 2 * 1 <= k = 4
    REQUIRE(degenerate_cell(s) == 0);
}

TEST_CASE("restrict_to_cell shifts levels and renumbers by position", "[pathcover]") {
    HierInstance h = handmade();
    std::vector<int> ids;
    HierInstance s = restrict_to_cell(h, 0, ids);
    REQUIRE(ids == std::vector<int>{0, 1});
    REQUIRE(s.n == 2);
    REQUIRE(s.L == 2);
    REQUIRE(s.D[1] == h.D[2]);
    REQUIRE(s.cost(0, 1) == h.cost(0, 1));
    REQUIRE_NOTHROW(validate_hierarchy(s));
}
