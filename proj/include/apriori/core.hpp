#pragma once
// Core model: instances with independent activation probabilities, tours as
// closed/open visit sequences, shortcut evaluation, k-hop cost, exact and
// Monte Carlo expected tour cost.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rng.hpp"

namespace apriori {

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& m) : std::runtime_error(m) {}
};
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& m) : std::runtime_error(m) {}
};
struct IoError : std::runtime_error {
    explicit IoError(const std::string& m) : std::runtime_error(m) {}
};
struct StateError : std::runtime_error {
    explicit StateError(const std::string& m) : std::runtime_error(m) {}
};

template <class T>
struct Matrix {
    using value_type = T;
    int n = 0;
    std::vector<T> a;

    Matrix() = default;
    explicit Matrix(int n_, T fill = T{}) : n(n_), a(static_cast<size_t>(n_) * n_, fill) {}

    T& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

using MatD = Matrix<double>;
using MatI = Matrix<long long>;

// Visit sequence; vertices may repeat (walks). closed means the successor of
// the last visit is the first visit.
struct Tour {
    std::vector<int> visits;
    bool closed = true;
};

inline Tour identity_tour(int n, bool closed = true) {
    Tour t;
    t.visits.resize(n);
    for (int i = 0; i < n; ++i) t.visits[i] = i;
    t.closed = closed;
    return t;
}

struct ActiveSet {
    int n = 0;
    std::vector<uint64_t> bits;

    ActiveSet() = default;
    explicit ActiveSet(int n_) : n(n_), bits((n_ + 63) / 64, 0) {}

    bool test(int v) const { return (bits[v >> 6] >> (v & 63)) & 1; }
    void set(int v, bool b = true) {
        uint64_t m = 1ULL << (v & 63);
        if (b) bits[v >> 6] |= m; else bits[v >> 6] &= ~m;
    }
    int count() const {
        int c = 0;
        for (uint64_t w : bits) c += __builtin_popcountll(w);
        return c;
    }
    std::vector<int> members() const {
        std::vector<int> out;
        for (int v = 0; v < n; ++v)
            if (test(v)) out.push_back(v);
        return out;
    }
};

struct AprioriInstance {
    int n = 0;
    MatD cost;
    std::vector<double> prob;
};

// Complete digraph with a hop horizon k. well_scaled marks instances whose
// costs are integers in {0,...,2n^3}.
struct HopInstance {
    int n = 0;
    MatD cost;
    int k = 1;
    bool well_scaled = false;
};

template <class M>
bool is_metric(const M& cost, double tol = 0.0) {
    int n = cost.n;
    for (int i = 0; i < n; ++i) {
        if (!(cost(i, i) == 0)) return false;
        for (int j = 0; j < n; ++j)
            if (cost(i, j) < 0) return false;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (static_cast<double>(cost(i, j)) >
                    static_cast<double>(cost(i, k)) + static_cast<double>(cost(k, j)) + tol)
                    return false;
    return true;
}

template <class M>
void metric_closure(M& cost) {
    int n = cost.n;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            auto cik = cost(i, k);
            for (int j = 0; j < n; ++j) {
                auto via = cik + cost(k, j);
                if (via < cost(i, j)) cost(i, j) = via;
            }
        }
}

inline double max_cost(const MatD& cost) {
    double m = 0;
    for (double v : cost.a) m = std::max(m, v);
    return m;
}

inline long long max_cost(const MatI& cost) {
    long long m = 0;
    for (long long v : cost.a) m = std::max(m, v);
    return m;
}

inline void validate_instance(const AprioriInstance& inst, bool require_metric = true) {
    if (inst.n < 1) throw ValidationError("instance needs at least one vertex");
    if (inst.cost.n != inst.n || static_cast<int>(inst.prob.size()) != inst.n)
        throw ValidationError("instance field sizes disagree");
    for (double c : inst.cost.a) {
        if (!std::isfinite(c)) throw ValidationError("cost entries must be finite");
        if (c < 0) throw ValidationError("cost entries must be nonnegative");
    }
    for (int i = 0; i < inst.n; ++i)
        if (inst.cost(i, i) != 0) throw ValidationError("diagonal costs must be zero");
    for (double p : inst.prob) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0)
            throw ValidationError("probabilities must lie in [0,1]");
    }
    if (require_metric) {
        double tol = 1e-9 * std::max(1.0, max_cost(inst.cost));
        if (!is_metric(inst.cost, tol))
            throw ValidationError("cost matrix violates the triangle inequality");
    }
}

inline void validate_instance(const HopInstance& inst, bool require_metric = true) {
    if (inst.n < 1) throw ValidationError("instance needs at least one vertex");
    if (inst.cost.n != inst.n) throw ValidationError("instance field sizes disagree");
    if (inst.k < 1 || inst.k >= inst.n)
        throw ValidationError("hop horizon must satisfy 1 <= k < n");
    for (double c : inst.cost.a) {
        if (!std::isfinite(c) || c < 0) throw ValidationError("bad cost entry");
    }
    for (int i = 0; i < inst.n; ++i)
        if (inst.cost(i, i) != 0) throw ValidationError("diagonal costs must be zero");
    if (inst.well_scaled) {
        double bound = 2.0 * std::pow(static_cast<double>(inst.n), 3);
        for (double c : inst.cost.a) {
            if (c != std::floor(c)) throw ValidationError("well-scaled costs must be integers");
            if (c > bound) throw ValidationError("well-scaled costs must be at most 2n^3");
        }
    }
    if (require_metric) {
        double tol = inst.well_scaled ? 0.0 : 1e-9 * std::max(1.0, max_cost(inst.cost));
        if (!is_metric(inst.cost, tol))
            throw ValidationError("cost matrix violates the triangle inequality");
    }
}

inline void validate_tour(const Tour& t, int n, bool hamiltonian = false) {
    std::vector<char> seen(n, 0);
    for (int v : t.visits) {
        if (v < 0 || v >= n) throw ValidationError("tour visit out of range");
        if (hamiltonian && seen[v]) throw ValidationError("tour repeats a vertex");
        seen[v] = 1;
    }
    if (hamiltonian && static_cast<int>(t.visits.size()) != n)
        throw ValidationError("tour must visit every vertex exactly once");
}

// Drop visits of inactive vertices, keeping order and the closed flag.
inline Tour shortcut(const Tour& t, const ActiveSet& active) {
    Tour out;
    out.closed = t.closed;
    out.visits.reserve(t.visits.size());
    for (int v : t.visits)
        if (active.test(v)) out.visits.push_back(v);
    return out;
}

template <class M>
auto tour_cost(const M& cost, const Tour& t) -> typename M::value_type {
    using V = typename M::value_type;
    V total{};
    size_t r = t.visits.size();
    if (r < 2) return total;
    for (size_t i = 0; i + 1 < r; ++i) total += cost(t.visits[i], t.visits[i + 1]);
    if (t.closed) total += cost(t.visits[r - 1], t.visits[0]);
    return total;
}

// Sum over hop lengths 1..k of the vertex-to-(Delta-ahead) costs. Closed
// walks wrap around; open walks contribute nothing past the last visit.
template <class M>
auto khop_cost(const M& cost, const Tour& t, int k) -> typename M::value_type {
    using V = typename M::value_type;
    V total{};
    int r = static_cast<int>(t.visits.size());
    if (r < 2) return total;
    for (int i = 0; i < r; ++i) {
        int lim = t.closed ? k : std::min(k, r - 1 - i);
        for (int d = 1; d <= lim; ++d) {
            int j = t.closed ? (i + d) % r : i + d;
            total += cost(t.visits[i], t.visits[j]);
        }
    }
    return total;
}

// Exact expectation of the shortcut tour cost under independent activation.
// Visits i and j are consecutive in the shortcut tour iff both vertices are
// active and no visit strictly between them is active; a revisit of either
// endpoint strictly between kills the event entirely.
inline double expected_cost_exact(const AprioriInstance& inst, const Tour& t) {
    const auto& vs = t.visits;
    int r = static_cast<int>(vs.size());
    if (r < 2) return 0.0;
    double total = 0.0;
    std::vector<char> seen(inst.n, 0);
    std::vector<int> touched;
    touched.reserve(r);
    for (int i = 0; i < r; ++i) {
        double prod = inst.prob[vs[i]];
        if (prod == 0.0) continue;
        touched.clear();
        int steps = t.closed ? r - 1 : r - 1 - i;
        for (int step = 1; step <= steps; ++step) {
            int j = t.closed ? (i + step) % r : i + step;
            int v = vs[j];
            if (v == vs[i]) break;   // every later pair from i has this revisit in between
            if (seen[v]) continue;   // v itself already appeared strictly between
            total += inst.cost(vs[i], v) * prod * inst.prob[v];
            seen[v] = 1;
            touched.push_back(v);
            prod *= 1.0 - inst.prob[v];
            if (prod == 0.0) break;
        }
        for (int v : touched) seen[v] = 0;
    }
    return total;
}

inline ActiveSet sample_active(const AprioriInstance& inst, Rng& rng) {
    ActiveSet a(inst.n);
    for (int v = 0; v < inst.n; ++v)
        if (rng.bernoulli(inst.prob[v])) a.set(v);
    return a;
}

struct McResult {
    double mean = 0.0;
    double stderr_ = 0.0;
    long long samples = 0;
};

namespace detail {

inline double shortcut_cost_of_sample(const AprioriInstance& inst, const Tour& t,
                                      const std::vector<char>& active) {
    double total = 0.0;
    int first = -1, prev = -1;
    for (int v : t.visits) {
        if (!active[v]) continue;
        if (prev >= 0) total += inst.cost(prev, v);
        else first = v;
        prev = v;
    }
    if (t.closed && prev >= 0 && first >= 0 && prev != first) total += inst.cost(prev, first);
    return total;
}

} // namespace detail

// Monte Carlo estimate. Work is split into per-worker chunks with seeds
// derived from (seed, worker); partial sums are reduced in worker order, so
// the result depends only on (seed, samples, threads).
inline McResult expected_cost_mc(const AprioriInstance& inst, const Tour& t,
                                 long long samples, uint64_t seed, int threads = 0) {
    if (samples < 1) throw ValidationError("sample count must be positive");
    int tnum = threads > 0 ? threads
                           : std::max(1u, std::thread::hardware_concurrency());
    tnum = static_cast<int>(std::min<long long>(tnum, samples));
    std::vector<double> sums(tnum, 0.0), sqs(tnum, 0.0);
    long long base = samples / tnum, extra = samples % tnum;

    auto work = [&](int w) {
        long long mine = base + (w < extra ? 1 : 0);
        Rng rng(mix_seed(seed, static_cast<uint64_t>(w)));
        std::vector<char> active(inst.n, 0);
        double s = 0.0, s2 = 0.0;
        for (long long it = 0; it < mine; ++it) {
            for (int v = 0; v < inst.n; ++v) active[v] = rng.bernoulli(inst.prob[v]) ? 1 : 0;
            double c = detail::shortcut_cost_of_sample(inst, t, active);
            s += c;
            s2 += c * c;
        }
        sums[w] = s;
        sqs[w] = s2;
    };

    if (tnum == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(tnum);
        for (int w = 0; w < tnum; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    double sum = 0.0, sq = 0.0;
    for (int w = 0; w < tnum; ++w) { sum += sums[w]; sq += sqs[w]; }
    McResult res;
    res.samples = samples;
    res.mean = sum / static_cast<double>(samples);
    if (samples > 1) {
        double var = (sq - sum * sum / static_cast<double>(samples)) /
                     static_cast<double>(samples - 1);
        res.stderr_ = std::sqrt(std::max(0.0, var) / static_cast<double>(samples));
    }
    return res;
}

// Remove repeat visits (keeping the first) until every vertex appears exactly
// once. On metric costs each removal cannot increase any k-hop cost. The tour
// must already visit every vertex.
template <class M>
Tour shortcut_to_hamiltonian(const M& cost, const Tour& t) {
    int n = cost.n;
    std::vector<char> present(n, 0);
    for (int v : t.visits) {
        if (v < 0 || v >= n) throw ValidationError("tour visit out of range");
        present[v] = 1;
    }
    for (int v = 0; v < n; ++v)
        if (!present[v]) throw ValidationError("tour misses a vertex");
    Tour out;
    out.closed = t.closed;
    out.visits.reserve(n);
    std::vector<char> used(n, 0);
    for (int v : t.visits) {
        if (used[v]) continue;
        used[v] = 1;
        out.visits.push_back(v);
    }
    return out;
}

} // namespace apriori
