#pragma once
// k x k directed grid family: columns are cheap cycles, hopping to the next
// column costs the column distance, going backwards wraps around. Activation
// probability 1/k everywhere. The a posteriori optimum has a closed form,
// which makes the family a good stress test for a priori heuristics.

#include "core.hpp"

namespace apriori {

struct GridInstance {
    int k = 0;
    AprioriInstance inst;

    int vertex(int row, int col) const { return row * k + col; }
    int row_of(int v) const { return v / k; }
    int col_of(int v) const { return v % k; }
};

inline GridInstance build_grid(int k) {
    if (k < 2) throw ValidationError("grid needs k >= 2");
    GridInstance g;
    g.k = k;
    int n = k * k;
    g.inst.n = n;
    g.inst.cost = MatD(n);
    g.inst.prob.assign(n, 1.0 / k);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            int cu = u % k, cv = v % k;
            g.inst.cost(u, v) = cu == cv ? k : (cv - cu + k) % k;
        }
    validate_instance(g.inst);
    return g;
}

// Optimal tour cost once the active set is known: k times the fullest column,
// zero for at most one active vertex.
inline double grid_posteriori_opt(const GridInstance& g, const std::vector<int>& active) {
    if (active.size() <= 1) return 0;
    std::vector<int> cnt(g.k, 0);
    for (int v : active) {
        if (v < 0 || v >= g.inst.n) throw ValidationError("active vertex out of range");
        ++cnt[g.col_of(v)];
    }
    int mx = 0;
    for (int c : cnt) mx = std::max(mx, c);
    return static_cast<double>(g.k) * mx;
}

// Master tour visiting the grid in row blocks of floor(sqrt(k)) rows; within
// a block, columns are swept left to right, each column's block rows top to
// bottom. The last block picks up the leftover rows.
inline Tour build_block_tour(const GridInstance& g) {
    int k = g.k;
    int s = static_cast<int>(std::sqrt(static_cast<double>(k)));
    while ((s + 1) * (s + 1) <= k) ++s;
    while (s * s > k) --s;
    Tour t;
    t.closed = true;
    t.visits.reserve(g.inst.n);
    for (int base = 0; base < k; base += s) {
        int top = std::min(base + s, k);
        for (int col = 0; col < k; ++col)
            for (int row = base; row < top; ++row)
                t.visits.push_back(g.vertex(row, col));
    }
    validate_tour(t, g.inst.n, true);
    return t;
}

struct GapRow {
    int k = 0;
    int n = 0;
    long long samples = 0;
    double block_mean = 0, block_stderr = 0;
    double post_mean = 0, post_stderr = 0;
    double ratio = 0; // block_mean / post_mean
};

// Paired Monte Carlo estimate of E[shortcut block tour] and E[a posteriori
// optimum] under the common activation draw. Chunked per worker so the result
// only depends on (k, samples, seed, threads).
inline GapRow gap_experiment(int k, long long samples, uint64_t seed, int threads = 0) {
    if (samples <= 0) throw ValidationError("need a positive sample count");
    GridInstance g = build_grid(k);
    Tour block = build_block_tour(g);
    if (threads <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        threads = hw == 0 ? 1 : static_cast<int>(hw);
    }
    threads = static_cast<int>(std::min<long long>(threads, samples));

    struct Acc {
        double bs = 0, bs2 = 0, ps = 0, ps2 = 0;
    };
    std::vector<Acc> acc(threads);
    long long chunk = samples / threads, extra = samples % threads;
    std::vector<std::thread> pool;
    long long start = 0;
    for (int w = 0; w < threads; ++w) {
        long long cnt = chunk + (w < extra ? 1 : 0);
        pool.emplace_back([&, w, cnt]() {
            Rng rng(mix_seed(seed, static_cast<uint64_t>(w)));
            std::vector<char> act(g.inst.n);
            std::vector<int> cols(g.k);
            Acc a;
            for (long long it = 0; it < cnt; ++it) {
                std::fill(cols.begin(), cols.end(), 0);
                int total = 0;
                for (int v = 0; v < g.inst.n; ++v) {
                    act[v] = rng.bernoulli(g.inst.prob[v]) ? 1 : 0;
                    if (act[v]) {
                        ++cols[g.col_of(v)];
                        ++total;
                    }
                }
                double bc = detail::shortcut_cost_of_sample(g.inst, block, act);
                double pc = 0;
                if (total > 1) {
                    int mx = 0;
                    for (int c : cols) mx = std::max(mx, c);
                    pc = static_cast<double>(g.k) * mx;
                }
                a.bs += bc;
                a.bs2 += bc * bc;
                a.ps += pc;
                a.ps2 += pc * pc;
            }
            acc[w] = a;
        });
        start += cnt;
    }
    (void)start;
    for (auto& th : pool) th.join();

    Acc tot;
    for (const Acc& a : acc) {
        tot.bs += a.bs;
        tot.bs2 += a.bs2;
        tot.ps += a.ps;
        tot.ps2 += a.ps2;
    }
    auto finish = [&](double s1, double s2, double& mean, double& se) {
        mean = s1 / static_cast<double>(samples);
        if (samples > 1) {
            double var = (s2 - s1 * mean) / static_cast<double>(samples - 1);
            se = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
        } else {
            se = 0;
        }
    };
    GapRow row;
    row.k = k;
    row.n = g.inst.n;
    row.samples = samples;
    finish(tot.bs, tot.bs2, row.block_mean, row.block_stderr);
    finish(tot.ps, tot.ps2, row.post_mean, row.post_stderr);
    row.ratio = row.post_mean > 0 ? row.block_mean / row.post_mean
                                  : std::numeric_limits<double>::infinity();
    return row;
}

} // namespace apriori
