#include <catch2/catch_amalgamated.hpp>

#include <apriori/core.hpp>
#include <apriori/oracles.hpp>
#include <apriori/synth.hpp>

using namespace apriori;

TEST_CASE("rng is deterministic and mix_seed separates streams", "[core]") {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());
    bool differs = false;
    for (int i = 0; i < 100; ++i) differs = differs || (a.next() != c.next());
    REQUIRE(differs);
    REQUIRE(mix_seed(1, 2) != mix_seed(1, 3));
    REQUIRE(mix_seed(1, 2) != mix_seed(2, 2));
    REQUIRE(mix_seed(5, 1, 2) != mix_seed(5, 2, 1));

    Rng r(7);
    for (int i = 0; i < 1000; ++i) {
        uint64_t v = r.below(13);
        REQUIRE(v < 13);
        double x = r.real();
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
    }
}

TEST_CASE("matrix and active set basics", "[core]") {
    MatD m(3);
    m(0, 1) = 2.5;
    REQUIRE(m(0, 1) == 2.5);
    REQUIRE(m(1, 0) == 0.0);

    ActiveSet s(5);
    s.set(1, true);
    s.set(3, true);
    REQUIRE(s.count() == 2);
    REQUIRE(s.test(3));
    REQUIRE_FALSE(s.test(0));
    REQUIRE(s.members() == std::vector<int>{1, 3});
}

TEST_CASE("metric closure repairs shortcuts through intermediates", "[core]") {
    MatD m(3);
    m(0, 1) = 5;
    m(0, 2) = 1;
    m(2, 1) = 1;
    m(1, 0) = 5;
    m(2, 0) = 1;
    m(1, 2) = 1;
    metric_closure(m);
    REQUIRE(m(0, 1) == 2.0); // via 2
    REQUIRE(is_metric(m));
}

TEST_CASE("instance validation rejects malformed inputs", "[core]") {
    AprioriInstance inst;
    inst.n = 2;
    inst.cost = MatD(2);
    inst.cost(0, 1) = 1;
    inst.cost(1, 0) = 1;
    inst.prob = {0.5, 0.5};
    REQUIRE_NOTHROW(validate_instance(inst));

    AprioriInstance bad = inst;
    bad.prob[0] = 1.5;
    REQUIRE_THROWS_AS(validate_instance(bad), ValidationError);

    bad = inst;
    bad.cost(0, 1) = -1;
    REQUIRE_THROWS_AS(validate_instance(bad), ValidationError);

    AprioriInstance nonmetric;
    nonmetric.n = 3;
    nonmetric.cost = MatD(3);
    nonmetric.cost(0, 1) = 10;
    nonmetric.cost(1, 0) = 10;
    nonmetric.cost(0, 2) = 1;
    nonmetric.cost(2, 0) = 1;
    nonmetric.cost(2, 1) = 1;
    nonmetric.cost(1, 2) = 1;
    nonmetric.prob = {1, 1, 1};
    REQUIRE_THROWS_AS(validate_instance(nonmetric), ValidationError);

    HopInstance hop;
    hop.n = 3;
    hop.cost = MatD(3);
    hop.k = 3; // must stay below n
    REQUIRE_THROWS_AS(validate_instance(hop), ValidationError);

    HopInstance ws;
    ws.n = 2;
    ws.cost = MatD(2);
    ws.cost(0, 1) = 1.5; // not integral
    ws.cost(1, 0) = 1.5;
    ws.k = 1;
    ws.well_scaled = true;
    REQUIRE_THROWS_AS(validate_instance(ws), ValidationError);
}

TEST_CASE("shortcut keeps order and drops inactive visits", "[core]") {
    Tour t;
    t.visits = {0, 1, 0, 2};
    ActiveSet a(3);
    a.set(0, true);
    a.set(2, true);
    Tour s = shortcut(t, a);
    REQUIRE(s.visits == std::vector<int>{0, 0, 2});
}

TEST_CASE("k-hop cost on closed and open tours", "[core]") {
    MatD unit(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) unit(i, j) = 1;
    Tour t = identity_tour(4);
    REQUIRE(khop_cost(unit, t, 1) == 4.0);
    REQUIRE(khop_cost(unit, t, 2) == 8.0);

    MatD u3(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) u3(i, j) = 1;
    Tour open = identity_tour(3, false);
    REQUIRE(khop_cost(u3, open, 2) == 3.0); // two adjacent hops plus one skip
}

TEST_CASE("expected cost of a forced pair is the round trip", "[core]") {
    AprioriInstance inst;
    inst.n = 3;
    inst.cost = MatD(3);
    inst.cost(0, 1) = 2;
    inst.cost(1, 0) = 3;
    inst.cost(0, 2) = 1;
    inst.cost(2, 0) = 1;
    inst.cost(1, 2) = 1;
    inst.cost(2, 1) = 2;
    inst.prob = {1, 1, 0};
    Tour t = identity_tour(3);
    REQUIRE_THAT(expected_cost_exact(inst, t),
                 Catch::Matchers::WithinAbs(inst.cost(0, 1) + inst.cost(1, 0), 1e-12));
}

TEST_CASE("expected cost matches the subset oracle, repeats included", "[core]") {
    Rng rng(101);
    for (int rep = 0; rep < 40; ++rep) {
        int n = 2 + static_cast<int>(rng.below(6));
        AprioriInstance inst = random_apriori(n, rng, 0.0, 1.0);
        Tour t = random_hamiltonian(n, rng);
        if (rep % 2 == 1) { // walk with a revisit
            t.visits.push_back(t.visits[rng.below(t.visits.size())]);
            t.visits.push_back(t.visits[rng.below(t.visits.size())]);
        }
        double a = expected_cost_exact(inst, t);
        double b = oracle_expected_cost(inst, t);
        REQUIRE_THAT(a, Catch::Matchers::WithinRel(b, 1e-9) ||
                            Catch::Matchers::WithinAbs(b, 1e-9));
    }
}

TEST_CASE("monte carlo estimate is deterministic and near exact", "[core]") {
    Rng rng(55);
    AprioriInstance inst = random_apriori(8, rng);
    Tour t = random_hamiltonian(8, rng);
    McResult m1 = expected_cost_mc(inst, t, 20000, 9, 2);
    McResult m2 = expected_cost_mc(inst, t, 20000, 9, 2);
    REQUIRE(m1.mean == m2.mean);
    REQUIRE(m1.stderr_ == m2.stderr_);
    double exact = expected_cost_exact(inst, t);
    REQUIRE(std::abs(m1.mean - exact) <= 5 * m1.stderr_ + 1e-9);
}

TEST_CASE("shortcut_to_hamiltonian removes repeats and demands full coverage", "[core]") {
    MatD unit(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) unit(i, j) = 1;
    Tour walk;
    walk.visits = {0, 1, 0, 2};
    Tour ham = shortcut_to_hamiltonian(unit, walk);
    REQUIRE(ham.visits == std::vector<int>{0, 1, 2});

    Tour missing;
    missing.visits = {0, 1, 0};
    REQUIRE_THROWS_AS(shortcut_to_hamiltonian(unit, missing), ValidationError);
}

TEST_CASE("dropping a repeat visit never raises the k-hop cost on metrics", "[core]") {
    Rng rng(77);
    for (int rep = 0; rep < 30; ++rep) {
        int n = 3 + static_cast<int>(rng.below(4));
        MatD m = random_metric(n, rng);
        Tour walk = random_hamiltonian(n, rng);
        walk.visits.push_back(walk.visits[rng.below(n)]); // introduce one repeat
        fisher_yates(walk.visits, rng);
        Tour trimmed = shortcut_to_hamiltonian(m, walk);
        for (int k = 1; k < n; ++k)
            REQUIRE(khop_cost(m, trimmed, k) <= khop_cost(m, walk, k) + 1e-9);
    }
}

TEST_CASE("validate_tour flags out-of-range and repeated visits", "[core]") {
    Tour t;
    t.visits = {0, 1, 3};
    REQUIRE_THROWS_AS(validate_tour(t, 3), ValidationError);
    Tour rep;
    rep.visits = {0, 1, 1};
    REQUIRE_NOTHROW(validate_tour(rep, 3));
    REQUIRE_THROWS_AS(validate_tour(rep, 3, true), ValidationError);
}
