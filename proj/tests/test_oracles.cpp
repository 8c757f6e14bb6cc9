#include <catch2/catch_amalgamated.hpp>

#include <apriori/oracles.hpp>
#include <apriori/synth.hpp>

using namespace apriori;

TEST_CASE("brute_tsp solves a handmade asymmetric triangle", "[oracles]") {
    MatD m(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) m(i, j) = 10;
    m(0, 1) = 1;
    m(1, 2) = 2;
    m(2, 0) = 3;
    auto r = brute_tsp(m, {0, 1, 2});
    REQUIRE(r.cost == 6.0);
    REQUIRE(r.tour.visits == std::vector<int>{0, 1, 2});
    REQUIRE(r.tour.closed);
}

TEST_CASE("brute_tsp respects its size budget", "[oracles]") {
    MatD m(15);
    std::vector<int> big(14);
    for (int i = 0; i < 14; ++i) big[i] = i;
    REQUIRE_THROWS_AS(brute_tsp(m, big), BudgetError);
}

TEST_CASE("brute_apriori_opt beats every explicit tour", "[oracles]") {
    Rng rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        int n = 3 + static_cast<int>(rng.below(4));
        AprioriInstance inst = random_apriori(n, rng);
        auto opt = brute_apriori_opt(inst);
        REQUIRE_THAT(expected_cost_exact(inst, opt.tour),
                     Catch::Matchers::WithinRel(opt.cost, 1e-12));
        for (int s = 0; s < 20; ++s) {
            Tour t = random_hamiltonian(n, rng);
            REQUIRE(opt.cost <= expected_cost_exact(inst, t) + 1e-12);
        }
    }
}

TEST_CASE("brute_hop_opt at k = n-1 sums all ordered pairs for any cycle", "[oracles]") {
    Rng rng(21);
    int n = 6;
    MatD m = random_metric(n, rng);
    double all = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) all += m(i, j);
    auto r = brute_hop_opt(m, n, n - 1);
    REQUIRE_THAT(r.cost, Catch::Matchers::WithinRel(all, 1e-12));
}

TEST_CASE("brute_hop_opt is a true minimum over sampled cycles", "[oracles]") {
    Rng rng(22);
    for (int rep = 0; rep < 8; ++rep) {
        int n = 4 + static_cast<int>(rng.below(4));
        int k = 1 + static_cast<int>(rng.below(n - 1));
        MatD m = random_metric(n, rng);
        auto r = brute_hop_opt(m, n, k);
        for (int s = 0; s < 20; ++s) {
            Tour t = random_hamiltonian(n, rng);
            REQUIRE(r.cost <= khop_cost(m, t, k) + 1e-12);
        }
    }
}

TEST_CASE("expected_tsp_exact averages posterior optima", "[oracles]") {
    // Two forced vertices and one never-active vertex: the expectation is
    // exactly the forced round trip.
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
    REQUIRE_THAT(expected_tsp_exact(inst), Catch::Matchers::WithinAbs(5.0, 1e-12));

    // Independent halves over two vertices: active pair {0,1} w.p. 1/4.
    AprioriInstance two;
    two.n = 2;
    two.cost = MatD(2);
    two.cost(0, 1) = 2;
    two.cost(1, 0) = 5;
    two.prob = {0.5, 0.5};
    REQUIRE_THAT(expected_tsp_exact(two), Catch::Matchers::WithinAbs(0.25 * 7.0, 1e-12));
}

TEST_CASE("expected_tsp_mc agrees with the exact enumeration", "[oracles]") {
    Rng rng(33);
    AprioriInstance inst = random_apriori(7, rng);
    double exact = expected_tsp_exact(inst);
    McResult mc = expected_tsp_mc(inst, 20000, 5);
    McResult mc2 = expected_tsp_mc(inst, 20000, 5);
    REQUIRE(mc.mean == mc2.mean);
    REQUIRE(std::abs(mc.mean - exact) <= 5 * mc.stderr_ + 1e-9);
}

TEST_CASE("a priori expectation dominates the posterior-opt expectation", "[oracles]") {
    Rng rng(44);
    for (int rep = 0; rep < 10; ++rep) {
        int n = 3 + static_cast<int>(rng.below(5));
        AprioriInstance inst = random_apriori(n, rng);
        auto opt = brute_apriori_opt(inst);
        REQUIRE(opt.cost >= expected_tsp_exact(inst) - 1e-9);
    }
}
