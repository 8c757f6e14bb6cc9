// Command-line driver: experiments, reductions, solvers, exact oracles and
// randomized verification batteries.
//
// Exit codes: 0 ok, 2 usage, 3 io, 4 validation, 5 budget, 6 verification.

#include <cstdlib>
#include <cstring>
#include <iostream>

#include <CLI11.hpp>

#include <apriori/grid.hpp>
#include <apriori/io.hpp>
#include <apriori/synth.hpp>

using namespace apriori;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

uint64_t resolve_seed(const CLI::Option* opt, uint64_t flag_value) {
    if (opt != nullptr && opt->count() > 0) return flag_value;
    if (const char* env = std::getenv("APRIORI_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
        throw UsageError("APRIORI_SEED must be an unsigned integer");
    }
    throw UsageError("no seed given: pass --seed or set APRIORI_SEED");
}

// ---- verification batteries ------------------------------------------------

struct Checker {
    std::string suite;
    bool ok = true;
    long long checks = 0;

    void expect(bool cond, const std::string& what) {
        ++checks;
        if (!cond) {
            ok = false;
            std::cout << "FAIL " << suite << ": " << what << "\n";
        }
    }
    bool finish() const {
        std::cout << (ok ? "pass " : "FAIL ") << suite << " (" << checks << " checks)\n";
        return ok;
    }
};

bool suite_probability(uint64_t seed) {
    Checker ck{"probability"};
    Rng rng(mix_seed(seed, 0xA1));
    for (int t = 0; t < 50; ++t) {
        int n = 3 + static_cast<int>(rng.below(5));
        AprioriInstance inst = random_apriori(n, rng, 0.05, 0.95);
        AprioriInstance lower = inst;
        for (int i = 0; i < n; ++i) lower.prob[i] = inst.prob[i] * rng.real();
        double opt_low = brute_apriori_opt(lower).cost;
        double opt = brute_apriori_opt(inst).cost;
        ck.expect(opt_low <= opt + 1e-9 * std::max(1.0, opt),
                  "lowering probabilities raised the optimum");

        Tour tour = random_hamiltonian(n, rng);
        double beta = 0.1 + 0.9 * rng.real();
        AprioriInstance scaled = inst;
        for (double& p : scaled.prob) p *= beta;
        double e_scaled = expected_cost_exact(scaled, tour);
        double e = expected_cost_exact(inst, tour);
        ck.expect(e_scaled + 1e-9 * std::max(1.0, e) >= beta * beta * e,
                  "beta^2 lower bound failed");
    }
    return ck.finish();
}

bool suite_sandwich(uint64_t seed) {
    Checker ck{"sandwich"};
    Rng rng(mix_seed(seed, 0xA2));
    // expectation vs k-hop cost at uniform probability
    for (int i = 0; i < 5; ++i) {
        int n = 64;
        double delta = 1.0 / 32;
        int k = 32;
        AprioriInstance inst = uniform_apriori(n, delta, rng);
        for (int t = 0; t < 4; ++t) {
            Tour tour = random_hamiltonian(n, rng);
            double e = expected_cost_exact(inst, tour);
            double hop = khop_cost(inst.cost, tour, k);
            double d2c = delta * delta * hop;
            ck.expect(d2c <= 4 * e + 1e-9 * std::max(1.0, e), "delta^2 c_k > 4 E");
            ck.expect(e <= 8192 * d2c + 1e-9 * std::max(1.0, e), "E > 2^13 delta^2 c_k");
        }
    }
    // well-scaling sandwich on full tours
    for (int i = 0; i < 5; ++i) {
        int n = 12, k = 3;
        HopInstance hop = random_hop(n, k, rng);
        auto [ws, rec] = well_scale(hop);
        for (int t = 0; t < 4; ++t) {
            Tour tour = random_hamiltonian(n, rng);
            double scaled = khop_cost(ws.cost, tour, k);
            double raw = khop_cost(hop.cost, tour, k) / rec.K;
            ck.expect(scaled <= raw * (1 + 1e-9), "scaled k-hop above raw/K");
            ck.expect(raw <= 2 * scaled * (1 + 1e-9), "raw/K above twice scaled");
        }
    }
    return ck.finish();
}

bool suite_weights(uint64_t seed) {
    Checker ck{"weights"};
    Rng rng(mix_seed(seed, 0xA3));
    for (int t = 0; t < 20; ++t) {
        int n = 4 + static_cast<int>(rng.below(7));
        int k = 1 + static_cast<int>(rng.below(3));
        HierInstance h = random_hier(n, std::min(k, n - 1), rng);
        int gamma = gamma_exponent(h.k);
        int kprime = (1 << gamma) - 1;
        for (int rep = 0; rep < 10; ++rep) {
            int level = 1 + static_cast<int>(rng.below(h.L));
            int cell = static_cast<int>(rng.below(h.cells_at(level)));
            auto [lo, hi] = h.cell_range(level, cell);
            PathLevelPair p;
            p.level = level;
            for (int ps : random_position_subset(lo, hi, rng)) p.verts.push_back(h.order[ps]);
            long long w = pair_weight(h, p);
            long long best = -1;
            bool all_upper = true;
            for (long long q = 0; q <= kprime; ++q) {
                long long wq = weight_bound(h, p, q);
                all_upper = all_upper && wq >= w;
                if (best < 0 || wq < best) best = wq;
            }
            ck.expect(all_upper, "w^q fell below the pair weight");
            ck.expect(best <= 4LL * (gamma + 2) * w, "no q achieved 4(Gamma+2) w");
        }
        if (kprime <= h.n - 1) {
            Tour tour = random_hamiltonian(h.n, rng);
            long long ck_cost = khop_cost(h.cost, tour, h.k);
            long long ckp_cost = khop_cost(h.cost, tour, kprime);
            ck.expect(ckp_cost <= 4 * ck_cost, "c^(k') exceeded 4 c^(k)");
        }
    }
    return ck.finish();
}

bool suite_hier(uint64_t seed) {
    Checker ck{"hier"};
    Rng rng(mix_seed(seed, 0xA4));
    for (int t = 0; t < 20; ++t) {
        int n = 4 + static_cast<int>(rng.below(17));
        int k = 1 + static_cast<int>(rng.below(std::min(4, n - 1)));
        HierInstance h = random_hier(n, k, rng); // build validates internally
        bool threw = false;
        try {
            validate_hierarchy(h);
        } catch (const std::exception&) {
            threw = true;
        }
        ck.expect(!threw, "hierarchy invariants failed");
        ck.expect(ctilde_is_metric(h), "derived cost is not a metric");
        double lmax = std::log2(2.0 * h.n * h.n * h.n) + 2;
        ck.expect(h.L <= lmax, "too many levels");
    }
    return ck.finish();
}

bool suite_ldd(uint64_t seed) {
    Checker ck{"ldd"};
    Rng rng(mix_seed(seed, 0xA5));
    int rounds = 100;
    for (int t = 0; t < 5; ++t) {
        int n = 8 + static_cast<int>(rng.below(9));
        HopInstance ws = random_scaled_hop(n, 1, rng);
        MatI m(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = std::llround(ws.cost(i, j));
        long long diam = 0;
        for (long long v : m.a) diam = std::max(diam, v);
        long long bound = std::max<long long>(1, diam / 2);
        std::vector<long long> freq(static_cast<size_t>(n) * n, 0);
        for (int r = 0; r < rounds; ++r) {
            LddCut cut = ldd(m, bound, mix_seed(seed, t, r));
            std::vector<char> removed(static_cast<size_t>(n) * n, 0);
            for (auto [u, v] : cut.cut) {
                removed[static_cast<size_t>(u) * n + v] = 1;
                ++freq[static_cast<size_t>(u) * n + v];
            }
            detail::SccResult scc = detail::scc_minus_cut(n, removed);
            long long worst = 0;
            for (int u = 0; u < n; ++u)
                for (int v = 0; v < n; ++v)
                    if (scc.comp[u] == scc.comp[v]) worst = std::max(worst, m(u, v));
            ck.expect(worst <= bound, "an SCC kept an edge above the bound");
        }
        double alpha = 0;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                if (u == v || m(u, v) < 1) continue;
                double est = static_cast<double>(freq[static_cast<size_t>(u) * n + v]) /
                             rounds * static_cast<double>(bound) /
                             static_cast<double>(m(u, v));
                alpha = std::max(alpha, est);
            }
        double cap = 50.0 * std::log(n) * std::log(std::log(n));
        std::cout << "  ldd n=" << n << " alpha_meas=" << fmt_g(alpha) << " cap="
                  << fmt_g(cap) << "\n";
        ck.expect(alpha <= cap, "cut frequency above the log bound");
    }
    return ck.finish();
}

bool suite_cover(uint64_t seed) {
    Checker ck{"cover"};
    Rng rng(mix_seed(seed, 0xA6));
    for (int t = 0; t < 20; ++t) {
        int n = 4 + static_cast<int>(rng.below(9));
        int k = 1 + static_cast<int>(rng.below(std::min(3, n - 1)));
        HierInstance h = random_hier(n, k, rng);
        Cover c = random_feasible_cover(h, rng);
        ck.expect(is_feasible(h, c), "generator produced an infeasible cover");
        CoverToTourResult r = cover_to_tour(h, c);
        std::vector<char> seen(h.n, 0);
        for (int v : r.tour.visits) seen[v] = 1;
        bool all = std::all_of(seen.begin(), seen.end(), [](char x) { return x == 1; });
        ck.expect(all, "tour missed a vertex");
        ck.expect(r.tour_khop <= 2 * r.cover_w, "tour k-hop cost above twice the weight");
    }
    return ck.finish();
}

bool suite_dp(uint64_t seed) {
    Checker ck{"dp"};
    Rng rng(mix_seed(seed, 0xA7));
    for (int t = 0; t < 10; ++t) {
        int n = 3 + static_cast<int>(rng.below(3));
        int k = rng.bernoulli(0.5) && n > 3 ? 3 : 1;
        HierInstance h = random_hier(n, k, rng);
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
                        ProfileMap dp = block_dp(ctx, x, y, 100000000, used);
                        ProfileMap ref = brute_block_table(ctx, x, y);
                        bool same = dp.size() == ref.size();
                        if (same)
                            for (auto it1 = dp.begin(), it2 = ref.begin(); it1 != dp.end();
                                 ++it1, ++it2)
                                if (!(it1->first == it2->first) ||
                                    it1->second.cost != it2->second.cost) {
                                    same = false;
                                    break;
                                }
                        ck.expect(same, "block table mismatch");
                    }
                // profile/coverage agreement on sampled monotone slot paths
                for (int rep = 0; rep < 200; ++rep) {
                    std::vector<int> slots;
                    for (int s = 0; s < ctx.M; ++s)
                        if (rng.bernoulli(0.35)) slots.push_back(s);
                    if (slots.empty()) continue;
                    CoveringProfile prof = profile_of(ctx, slots);
                    PathLevelPair pair;
                    pair.level = lstar;
                    for (int s : slots)
                        if (!ctx.is_dummy(s)) pair.verts.push_back(ctx.slot_vertex[s]);
                    long long direct =
                        pair.verts.empty() ? 0 : direct_new_coverage(h, unc, pair);
                    ck.expect(xi_of(ctx, prof) == direct, "xi disagrees with coverage");
                    if (slots.size() >= 2) {
                        size_t cut = 1 + rng.below(slots.size() - 1);
                        std::vector<int> l(slots.begin(), slots.begin() + cut);
                        std::vector<int> r(slots.begin() + cut, slots.end());
                        CoveringProfile joined =
                            combine(ctx, profile_of(ctx, l), profile_of(ctx, r));
                        ck.expect(joined == prof, "combine disagrees with profile_of");
                    }
                }
            }
    }
    return ck.finish();
}

bool suite_grid(uint64_t seed) {
    Checker ck{"grid"};
    Rng rng(mix_seed(seed, 0xA8));
    GridInstance g = build_grid(5);
    for (int t = 0; t < 50; ++t) {
        std::vector<int> active;
        for (int v = 0; v < g.inst.n; ++v)
            if (rng.bernoulli(g.inst.prob[v])) active.push_back(v);
        double closed_form = grid_posteriori_opt(g, active);
        if (active.size() >= 2 && active.size() <= 12) {
            double hk = brute_tsp(g.inst.cost, active).cost;
            ck.expect(std::abs(closed_form - hk) < 1e-9, "closed form != Held-Karp");
        } else if (active.size() <= 1) {
            ck.expect(closed_form == 0, "tiny active set must cost zero");
        }
    }
    Tour block = build_block_tour(g);
    ck.expect(static_cast<int>(block.visits.size()) == g.inst.n, "block tour length");
    return ck.finish();
}

int run_verify(const std::string& suite, uint64_t seed) {
    std::vector<std::pair<std::string, bool (*)(uint64_t)>> all = {
        {"probability", suite_probability}, {"sandwich", suite_sandwich},
        {"weights", suite_weights},         {"hier", suite_hier},
        {"ldd", suite_ldd},                 {"cover", suite_cover},
        {"dp", suite_dp},                   {"grid", suite_grid},
    };
    bool ok = true, found = false;
    for (auto& [name, fn] : all)
        if (suite == "all" || suite == name) {
            found = true;
            ok = fn(seed) && ok;
        }
    if (!found) throw UsageError("unknown suite: " + suite);
    return ok ? 0 : 6;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"a priori TSP toolkit"};
    app.require_subcommand(1);
    std::function<int()> run;

    // grid
    auto* grid_cmd = app.add_subcommand("grid", "block tour vs a posteriori optimum sweep");
    std::vector<int> grid_ks;
    long long grid_samples = 100000;
    uint64_t grid_seed = 0;
    int grid_threads = 1;
    std::string grid_out;
    bool grid_force = false;
    grid_cmd->add_option("--k", grid_ks, "grid sizes (repeatable)")->required();
    grid_cmd->add_option("--samples", grid_samples, "Monte Carlo samples per k");
    auto* grid_seed_opt = grid_cmd->add_option("--seed", grid_seed, "rng seed");
    grid_cmd->add_option("--threads", grid_threads, "worker threads");
    grid_cmd->add_option("--out", grid_out, "write CSV here instead of stdout");
    grid_cmd->add_flag("--force", grid_force, "overwrite existing files");
    grid_cmd->callback([&] {
        run = [&]() {
            uint64_t seed = resolve_seed(grid_seed_opt, grid_seed);
            CsvWriter csv;
            csv.header({"k", "n", "samples", "block_mean", "block_stderr", "post_mean",
                        "post_stderr", "ratio"});
            for (int k : grid_ks) {
                GapRow r = gap_experiment(k, grid_samples,
                                          mix_seed(seed, static_cast<uint64_t>(k)),
                                          grid_threads);
                csv.row({std::to_string(r.k), std::to_string(r.n), std::to_string(r.samples),
                         fmt_g(r.block_mean), fmt_g(r.block_stderr), fmt_g(r.post_mean),
                         fmt_g(r.post_stderr), fmt_g(r.ratio)});
            }
            if (grid_out.empty())
                std::cout << csv.text();
            else
                csv.save(grid_out, grid_force);
            return 0;
        };
    });

    // sqrt-approx
    auto* sqrt_cmd = app.add_subcommand("sqrt-approx", "threshold baseline heuristic");
    std::string sqrt_in, sqrt_out;
    uint64_t sqrt_seed = 0;
    bool sqrt_force = false;
    sqrt_cmd->add_option("--instance", sqrt_in, "a priori instance JSON")->required();
    auto* sqrt_seed_opt = sqrt_cmd->add_option("--seed", sqrt_seed, "rng seed");
    sqrt_cmd->add_option("--out", sqrt_out, "write the tour JSON here");
    sqrt_cmd->add_flag("--force", sqrt_force, "overwrite existing files");
    sqrt_cmd->callback([&] {
        run = [&]() {
            uint64_t seed = resolve_seed(sqrt_seed_opt, sqrt_seed);
            AprioriInstance inst = apriori_from_json(load_json(sqrt_in));
            SqrtApproxResult r = sqrt_approx(inst, seed);
            std::cout << "expected " << fmt_g(r.expected) << " depot " << r.depot
                      << " exact_eval " << (r.exact_eval ? 1 : 0) << " low_mass "
                      << (r.low_mass ? 1 : 0) << "\n";
            if (inst.n <= OracleBudget::apriori_max) {
                double opt = brute_apriori_opt(inst).cost;
                std::cout << "opt " << fmt_g(opt) << " ratio "
                          << fmt_g(opt > 0 ? r.expected / opt : 1.0) << "\n";
            }
            if (!sqrt_out.empty()) save_json(sqrt_out, to_json(r.tour), sqrt_force);
            return 0;
        };
    });

    // reduce
    auto* red_cmd = app.add_subcommand("reduce", "hop reduction pipeline");
    std::string red_in, red_out, red_trace, red_solver = "brute";
    uint64_t red_seed = 0;
    long long red_memo = 5000000;
    bool red_force = false;
    red_cmd->add_option("--instance", red_in, "a priori instance JSON")->required();
    red_cmd->add_option("--solver", red_solver, "hop solver: brute, hier or sqrt")
        ->check(CLI::IsMember({"brute", "hier", "sqrt"}));
    auto* red_seed_opt = red_cmd->add_option("--seed", red_seed, "rng seed");
    red_cmd->add_option("--memo-cap", red_memo, "profile memo cap for the hier solver");
    red_cmd->add_option("--out", red_out, "write the tour JSON here");
    red_cmd->add_option("--trace", red_trace, "write the per-depot CSV here");
    red_cmd->add_flag("--force", red_force, "overwrite existing files");
    red_cmd->callback([&] {
        run = [&]() {
            uint64_t seed = resolve_seed(red_seed_opt, red_seed);
            AprioriInstance inst = apriori_from_json(load_json(red_in));
            std::function<Tour(const HopInstance&)> solver;
            if (red_solver == "brute")
                solver = [](const HopInstance& hop) { return brute_hop_opt(hop).tour; };
            else if (red_solver == "sqrt")
                solver = [](const HopInstance& hop) { return nn_hop_solver(hop); };
            else
                solver = [&](const HopInstance& hop) {
                    HierInstance h = build_hierarchy(hop, mix_seed(seed, 77));
                    return solve_hierarchical(h, red_memo).tour;
                };
            ReduceResult r = reduce_and_solve(inst, solver, seed);
            std::cout << "expected " << fmt_g(r.expected) << " depot " << r.depot
                      << " low_mass " << (r.low_mass ? 1 : 0) << "\n";
            if (!red_trace.empty()) {
                CsvWriter csv;
                csv.header({"depot", "heavy", "copies", "hop_k", "scale_k", "eval",
                            "enumerated", "exact_eval"});
                for (const StageRow& s : r.stages)
                    csv.row({std::to_string(s.depot), std::to_string(s.heavy),
                             std::to_string(s.copies), std::to_string(s.hop_k),
                             fmt_g(s.scale_k), fmt_g(s.eval),
                             std::to_string(s.enumerated ? 1 : 0),
                             std::to_string(s.exact_eval ? 1 : 0)});
                csv.save(red_trace, red_force);
            }
            if (!red_out.empty()) save_json(red_out, to_json(r.tour), red_force);
            return 0;
        };
    });

    // build-hier
    auto* bh_cmd = app.add_subcommand("build-hier", "hierarchical order from a hop instance");
    std::string bh_in, bh_out;
    uint64_t bh_seed = 0;
    bool bh_force = false;
    bh_cmd->add_option("--instance", bh_in, "hop instance JSON")->required();
    auto* bh_seed_opt = bh_cmd->add_option("--seed", bh_seed, "rng seed");
    bh_cmd->add_option("--out", bh_out, "write the hierarchy JSON here");
    bh_cmd->add_flag("--force", bh_force, "overwrite existing files");
    bh_cmd->callback([&] {
        run = [&]() {
            uint64_t seed = resolve_seed(bh_seed_opt, bh_seed);
            HopInstance hop = hop_from_json(load_json(bh_in));
            if (!hop.well_scaled) {
                auto [ws, rec] = well_scale(hop);
                hop = ws;
                std::cout << "scaled unit " << fmt_g(rec.K) << "\n";
            }
            HierInstance h = build_hierarchy(hop, seed);
            std::cout << "n " << h.n << " k " << h.k << " levels " << h.L << "\n";
            if (bh_out.empty())
                std::cout << to_json(h).dump(2) << "\n";
            else
                save_json(bh_out, to_json(h), bh_force);
            return 0;
        };
    });

    // solve-hier
    auto* sh_cmd = app.add_subcommand("solve-hier", "greedy cover and tour on a hierarchy");
    std::string sh_in, sh_out, sh_trace;
    long long sh_memo = 5000000;
    bool sh_force = false;
    sh_cmd->add_option("--instance", sh_in, "hierarchy JSON")->required();
    sh_cmd->add_option("--memo-cap", sh_memo, "profile memo cap");
    sh_cmd->add_option("--out", sh_out, "write tour and cover JSON here");
    sh_cmd->add_option("--trace", sh_trace, "write the greedy trace CSV here");
    sh_cmd->add_flag("--force", sh_force, "overwrite existing files");
    sh_cmd->callback([&] {
        run = [&]() {
            HierInstance h = hier_from_json(load_json(sh_in));
            SolveResult r = solve_hierarchical(h, sh_memo);
            std::cout << "tour_khop " << r.tour_khop << " cover_w " << r.cover_w
                      << " pairs " << r.cover.pairs.size() << " reduced "
                      << (r.reduced ? 1 : 0) << " covered " << (r.covered ? 1 : 0) << "\n";
            if (!sh_trace.empty()) {
                CsvWriter csv;
                csv.header({"level", "path_len", "weight", "covered", "remaining",
                            "dp_ratio"});
                for (const GreedyTraceRow& t : r.trace)
                    csv.row({std::to_string(t.level), std::to_string(t.path_len),
                             std::to_string(t.weight), std::to_string(t.covered),
                             std::to_string(t.remaining), fmt_g(t.dp_ratio)});
                csv.save(sh_trace, sh_force);
            }
            if (!sh_out.empty()) {
                json j{{"tour", to_json(r.tour)},
                       {"cover", to_json(r.cover)},
                       {"tour_khop", r.tour_khop},
                       {"cover_w", r.cover_w}};
                save_json(sh_out, j, sh_force);
            }
            return 0;
        };
    });

    // check-cover
    auto* cc_cmd = app.add_subcommand("check-cover", "validate a cover against a hierarchy");
    std::string cc_in, cc_cover;
    cc_cmd->add_option("--instance", cc_in, "hierarchy JSON")->required();
    cc_cmd->add_option("--cover", cc_cover, "cover JSON")->required();
    cc_cmd->callback([&] {
        run = [&]() {
            HierInstance h = hier_from_json(load_json(cc_in));
            Cover c = cover_from_json(load_json(cc_cover));
            bool valid = true;
            std::string why;
            try {
                for (const auto& p : c.pairs) validate_pair(h, p);
            } catch (const std::exception& e) {
                valid = false;
                why = e.what();
            }
            bool feasible = valid && is_feasible(h, c);
            long long w = valid ? cover_weight(h, c) : 0;
            std::cout << "valid " << (valid ? 1 : 0) << " feasible " << (feasible ? 1 : 0)
                      << " weight " << w << " pairs " << c.pairs.size() << "\n";
            if (!valid && !why.empty()) std::cout << "reason " << why << "\n";
            return feasible ? 0 : 6;
        };
    });

    // oracle
    auto* or_cmd = app.add_subcommand("oracle", "small exact reference solvers");
    std::string or_kind, or_in, or_tour, or_out;
    bool or_force = false;
    or_cmd->add_option("kind", or_kind, "tsp, apriori, hop or expect")
        ->required()
        ->check(CLI::IsMember({"tsp", "apriori", "hop", "expect"}));
    or_cmd->add_option("--instance", or_in, "instance JSON")->required();
    or_cmd->add_option("--tour", or_tour, "tour JSON (expect only)");
    or_cmd->add_option("--out", or_out, "write the optimal tour JSON here");
    or_cmd->add_flag("--force", or_force, "overwrite existing files");
    or_cmd->callback([&] {
        run = [&]() {
            json j = load_json(or_in);
            std::string type = j.value("type", "apriori");
            Tour best;
            double cost = 0;
            if (or_kind == "tsp") {
                MatD cost_m = type == "hop" ? hop_from_json(j).cost : apriori_from_json(j).cost;
                std::vector<int> all(cost_m.n);
                for (int i = 0; i < cost_m.n; ++i) all[i] = i;
                auto r = brute_tsp(cost_m, all);
                best = r.tour;
                cost = r.cost;
            } else if (or_kind == "apriori") {
                AprioriInstance inst = apriori_from_json(j);
                auto r = brute_apriori_opt(inst);
                best = r.tour;
                cost = r.cost;
            } else if (or_kind == "hop") {
                HopInstance hop = hop_from_json(j);
                auto r = brute_hop_opt(hop);
                best = r.tour;
                cost = static_cast<double>(r.cost);
            } else {
                if (or_tour.empty()) throw UsageError("expect needs --tour");
                AprioriInstance inst = apriori_from_json(j);
                Tour t = tour_from_json(load_json(or_tour));
                cost = oracle_expected_cost(inst, t);
                best = t;
            }
            std::cout << "cost " << fmt_g(cost) << "\n";
            if (!or_out.empty()) save_json(or_out, to_json(best), or_force);
            return 0;
        };
    });

    // verify
    auto* ver_cmd = app.add_subcommand("verify", "randomized verification batteries");
    std::string ver_suite = "all";
    uint64_t ver_seed = 0;
    ver_cmd->add_option("--suite", ver_suite,
                        "probability, sandwich, weights, hier, ldd, cover, dp, grid or all");
    auto* ver_seed_opt = ver_cmd->add_option("--seed", ver_seed, "rng seed");
    ver_cmd->callback([&] {
        run = [&]() { return run_verify(ver_suite, resolve_seed(ver_seed_opt, ver_seed)); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return run ? run() : 2;
    } catch (const UsageError& e) {
        std::cerr << "error: class=usage reason=" << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: class=io reason=" << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: class=validation reason=" << e.what() << "\n";
        return 4;
    } catch (const BudgetError& e) {
        std::cerr << "error: class=budget reason=" << e.what() << "\n";
        return 5;
    } catch (const StateError& e) {
        std::cerr << "error: class=state reason=" << e.what() << "\n";
        return 6;
    } catch (const std::exception& e) {
        std::cerr << "error: class=internal reason=" << e.what() << "\n";
        return 1;
    }
}
