#pragma once
// JSON readers and writers for instances, tours, hierarchies and covers, plus
// a small deterministic CSV writer. File-level failures raise IoError,
// content problems raise ValidationError.

#include <fstream>

#include <json.hpp>

#include "greedy_dp.hpp"
#include "hop_reduction.hpp"

namespace apriori {

using nlohmann::json;

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return j;
}

inline void save_text(const std::string& path, const std::string& text, bool force) {
    if (!force) {
        std::ifstream probe(path);
        if (probe.good()) throw IoError(path + " exists, pass --force to overwrite");
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

inline void save_json(const std::string& path, const json& j, bool force) {
    save_text(path, j.dump(2) + "\n", force);
}

namespace detail {

inline const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(std::string("missing field: ") + key);
    return *it;
}

template <class T>
std::vector<T> num_array(const json& j, const char* key, size_t want) {
    const json& a = field(j, key);
    if (!a.is_array()) throw ValidationError(std::string(key) + " must be an array");
    if (want != 0 && a.size() != want)
        throw ValidationError(std::string(key) + " has the wrong length");
    std::vector<T> out;
    out.reserve(a.size());
    for (const auto& e : a) {
        if (!e.is_number()) throw ValidationError(std::string(key) + " must hold numbers");
        out.push_back(e.get<T>());
    }
    return out;
}

inline int read_n(const json& j) {
    const json& nj = field(j, "n");
    if (!nj.is_number_integer() || nj.get<long long>() < 1 || nj.get<long long>() > 100000)
        throw ValidationError("n must be a positive integer");
    return nj.get<int>();
}

} // namespace detail

inline json to_json(const Tour& t) {
    return json{{"visits", t.visits}, {"closed", t.closed}};
}

inline Tour tour_from_json(const json& j) {
    Tour t;
    t.visits = detail::num_array<int>(j, "visits", 0);
    t.closed = j.value("closed", true);
    return t;
}

inline json to_json(const AprioriInstance& inst) {
    return json{{"type", "apriori"},
                {"n", inst.n},
                {"cost", inst.cost.a},
                {"prob", inst.prob}};
}

inline AprioriInstance apriori_from_json(const json& j) {
    AprioriInstance inst;
    inst.n = detail::read_n(j);
    size_t nn = static_cast<size_t>(inst.n) * inst.n;
    inst.cost.n = inst.n;
    inst.cost.a = detail::num_array<double>(j, "cost", nn);
    inst.prob = detail::num_array<double>(j, "prob", inst.n);
    validate_instance(inst);
    return inst;
}

inline json to_json(const HopInstance& inst) {
    return json{{"type", "hop"},
                {"n", inst.n},
                {"cost", inst.cost.a},
                {"k", inst.k},
                {"well_scaled", inst.well_scaled}};
}

inline HopInstance hop_from_json(const json& j) {
    HopInstance inst;
    inst.n = detail::read_n(j);
    size_t nn = static_cast<size_t>(inst.n) * inst.n;
    inst.cost.n = inst.n;
    inst.cost.a = detail::num_array<double>(j, "cost", nn);
    const json& kj = detail::field(j, "k");
    if (!kj.is_number_integer()) throw ValidationError("k must be an integer");
    inst.k = kj.get<int>();
    inst.well_scaled = j.value("well_scaled", false);
    validate_instance(inst);
    return inst;
}

inline json to_json(const HierInstance& h) {
    json b = json::array();
    for (int l = 1; l <= h.L; ++l) b.push_back(h.boundaries[l]);
    json cost = json::array();
    for (long long v : h.cost.a) cost.push_back(v);
    return json{{"type", "hier"}, {"n", h.n},     {"k", h.k},
                {"L", h.L},       {"cost", cost}, {"order", h.order},
                {"boundaries", b}, {"D", std::vector<long long>(h.D.begin() + 1, h.D.end())},
                {"seed", h.seed}};
}

inline HierInstance hier_from_json(const json& j) {
    HierInstance h;
    h.n = detail::read_n(j);
    size_t nn = static_cast<size_t>(h.n) * h.n;
    const json& kj = detail::field(j, "k");
    if (!kj.is_number_integer()) throw ValidationError("k must be an integer");
    h.k = kj.get<int>();
    const json& lj = detail::field(j, "L");
    if (!lj.is_number_integer() || lj.get<int>() < 1)
        throw ValidationError("L must be a positive integer");
    h.L = lj.get<int>();
    h.cost.n = h.n;
    h.cost.a = detail::num_array<long long>(j, "cost", nn);
    h.order = detail::num_array<int>(j, "order", h.n);
    const json& bj = detail::field(j, "boundaries");
    if (!bj.is_array() || static_cast<int>(bj.size()) != h.L)
        throw ValidationError("boundaries must list one breakpoint set per level");
    h.boundaries.assign(h.L + 1, {});
    for (int l = 1; l <= h.L; ++l) {
        if (!bj[l - 1].is_array()) throw ValidationError("boundaries entries must be arrays");
        for (const auto& e : bj[l - 1]) h.boundaries[l].push_back(e.get<int>());
    }
    std::vector<long long> d = detail::num_array<long long>(j, "D", h.L);
    h.D.assign(h.L + 1, 0);
    for (int l = 1; l <= h.L; ++l) h.D[l] = d[l - 1];
    h.seed = j.value("seed", uint64_t{0});
    h.pos.assign(h.n, -1);
    for (int p = 0; p < h.n; ++p) {
        int v = h.order[p];
        if (v < 0 || v >= h.n || h.pos[v] != -1)
            throw ValidationError("order must be a permutation");
        h.pos[v] = p;
    }
    h.base.n = h.n;
    h.base.k = h.k;
    h.base.well_scaled = true;
    h.base.cost = MatD(h.n);
    for (int a = 0; a < h.n; ++a)
        for (int b2 = 0; b2 < h.n; ++b2) h.base.cost(a, b2) = static_cast<double>(h.cost(a, b2));
    h.build_cells();
    validate_hierarchy(h);
    return h;
}

inline json to_json(const Cover& c) {
    json pairs = json::array();
    for (const auto& p : c.pairs) pairs.push_back(json{{"level", p.level}, {"verts", p.verts}});
    return json{{"type", "cover"}, {"pairs", pairs}};
}

inline Cover cover_from_json(const json& j) {
    const json& pj = detail::field(j, "pairs");
    if (!pj.is_array()) throw ValidationError("pairs must be an array");
    Cover c;
    for (const auto& e : pj) {
        PathLevelPair p;
        const json& lj = detail::field(e, "level");
        if (!lj.is_number_integer()) throw ValidationError("pair level must be an integer");
        p.level = lj.get<int>();
        p.verts = detail::num_array<int>(e, "verts", 0);
        c.pairs.push_back(std::move(p));
    }
    return c;
}

inline std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// CSV with a schema marker line; floats are printed with %.9g so identical
// runs produce identical bytes.
class CsvWriter {
  public:
    CsvWriter() = default;

    void header(const std::vector<std::string>& cols) {
        buf_ += "# schema=1\n";
        append_row(cols);
    }

    void row(const std::vector<std::string>& cols) { append_row(cols); }

    const std::string& text() const { return buf_; }

    void save(const std::string& path, bool force) const { save_text(path, buf_, force); }

  private:
    void append_row(const std::vector<std::string>& cols) {
        for (size_t i = 0; i < cols.size(); ++i) {
            if (i) buf_ += ',';
            buf_ += cols[i];
        }
        buf_ += '\n';
    }
    std::string buf_;
};

} // namespace apriori
