#pragma once

// JSON run configuration with a closed schema. Every key is checked: unknown
// keys and wrong types raise ConfigError naming the dotted key path.
//
//   equation     {p, mu, N}
//   grid         {n, L}
//   solver       {slab_T_init, slab_T_min, picard_tol, picard_max_iters,
//                 quad_nodes_M, blowup_threshold, horizon, max_contraction_ratio}
//   initial_data {kind: constant|mode|gaussian_bump|grf, parameters, seed}
//   overrides    {ignore_admissibility}
//   sweep        {p: [..], mu: [..], amplitude: [..]}
//   verify       {grid {dim, n, L}, count, spectral_decay, seed, nonnegative,
//                 amplitude, times, s, p, mu, j, m, a, q, r, T_window, time_nodes}
//
// Exponents q and r accept the string "inf".

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "accretive_wave/errors.hpp"
#include "accretive_wave/estimate_lab.hpp"
#include "accretive_wave/picard_solver.hpp"

namespace awave::cli {

using Json = nlohmann::json;

enum class DataKind { Constant, Mode, GaussianBump, Grf };

struct InitialData {
    DataKind kind = DataKind::Constant;
    double u = 0.0;
    double v = 0.0;
    /// Mode lattice index (mode kind).
    std::array<long, 3> k{1, 0, 0};
    double u_amplitude = 0.0;
    double v_amplitude = 0.0;
    double width = 0.5;
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double spectral_decay = 3.0;
    std::uint64_t seed = 0;
};

struct SweepAxes {
    std::vector<double> p;
    std::vector<double> mu;
    std::vector<double> amplitude;
};

struct VerifyOptions {
    int dim = 1;
    std::size_t n = 0;
    double L = std::numbers::pi;
    int count = 0;
    double spectral_decay = 3.0;
    std::uint64_t seed = 1;
    std::optional<bool> nonnegative;
    double amplitude = 1.0;
    std::vector<double> times;
    std::optional<double> s;
    std::optional<double> p;
    std::optional<double> mu;
    std::optional<int> j;
    std::optional<int> m;
    std::optional<double> a;
    std::optional<double> q;
    std::optional<double> r;
    std::optional<double> T_window;
    int time_nodes = 129;
};

struct RunConfig {
    double p = 2.0;
    double mu = 1.0;
    int N = 1;
    std::size_t n = 64;
    double L = std::numbers::pi;
    SolverConfig solver{Grid(1, 64, std::numbers::pi)};
    InitialData initial;
    bool ignore_admissibility = false;
    std::optional<SweepAxes> sweep;
    VerifyOptions verify;

    /// Effective configuration with defaults filled, sorted keys; hashed for manifests.
    Json canonical;

    Grid grid() const { return Grid(N, n, L); }

    SolverConfig solver_config() const {
        SolverConfig cfg = solver;
        cfg.grid = grid();
        cfg.p = p;
        cfg.mu = mu;
        cfg.override_admissibility = ignore_admissibility;
        return cfg;
    }
};

namespace detail {

inline const char* kind_name(DataKind k) noexcept {
    switch (k) {
        case DataKind::Constant: return "constant";
        case DataKind::Mode: return "mode";
        case DataKind::GaussianBump: return "gaussian_bump";
        case DataKind::Grf: return "grf";
    }
    return "?";
}

inline std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

// Object reader that records consumed keys and rejects the rest.
class Section {
public:
    Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    std::string path(const std::string& key) const { return join(path_, key); }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return as_number(raw(key), path(key));
    }

    std::optional<double> optional_number(const std::string& key, bool allow_inf = false) {
        if (!has(key)) return std::nullopt;
        return as_number(raw(key), path(key), allow_inf);
    }

    long integer(const std::string& key, long fallback) {
        if (!has(key)) return fallback;
        return as_integer(raw(key), path(key));
    }

    std::optional<long> optional_integer(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return as_integer(raw(key), path(key));
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const Json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) {
        if (!has(key)) throw ConfigError(path(key), "required key is missing");
        const Json& v = raw(key);
        if (!v.is_string()) throw ConfigError(path(key), "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) {
        const Json& v = raw(key);
        if (!v.is_array()) throw ConfigError(path(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(as_number(v[i], path(key) + "[" + std::to_string(i) + "]"));
        }
        return out;
    }

    Section section(const std::string& key) { return Section(raw(key), path(key)); }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError(path(it.key()), "unknown key");
        }
    }

    static double as_number(const Json& v, const std::string& where, bool allow_inf = false) {
        if (allow_inf && v.is_string() && v.get<std::string>() == "inf") return kInfinity;
        if (!v.is_number()) {
            throw ConfigError(where, allow_inf ? "expected a number or \"inf\"" : "expected a number");
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(where, "expected a finite number");
        return x;
    }

    static long as_integer(const Json& v, const std::string& where) {
        if (!v.is_number_integer()) throw ConfigError(where, "expected an integer");
        return v.get<long>();
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline Json number_or_inf(double x) {
    if (std::isinf(x)) return "inf";
    return x;
}

inline void parse_initial(Section s, InitialData& d) {
    const std::string kind = s.string("kind");
    if (kind == "constant") {
        d.kind = DataKind::Constant;
    } else if (kind == "mode") {
        d.kind = DataKind::Mode;
    } else if (kind == "gaussian_bump") {
        d.kind = DataKind::GaussianBump;
    } else if (kind == "grf") {
        d.kind = DataKind::Grf;
    } else {
        throw ConfigError(s.path("kind"), "expected constant, mode, gaussian_bump or grf, got '" + kind + "'");
    }
    const long seed = s.integer("seed", 0);
    if (seed < 0) throw ConfigError(s.path("seed"), "expected a nonnegative integer");
    d.seed = static_cast<std::uint64_t>(seed);

    if (!s.has("parameters")) throw ConfigError(s.path("parameters"), "required key is missing");
    Section p = s.section("parameters");
    switch (d.kind) {
        case DataKind::Constant:
            d.u = p.number("u", 0.0);
            d.v = p.number("v", 0.0);
            break;
        case DataKind::Mode: {
            d.u_amplitude = p.number("u_amplitude", 0.0);
            d.v_amplitude = p.number("v_amplitude", 0.0);
            if (p.has("k")) {
                const Json& k = p.raw("k");
                if (!k.is_array() || k.empty() || k.size() > 3) {
                    throw ConfigError(p.path("k"), "expected an array of 1 to 3 integers");
                }
                d.k = {0, 0, 0};
                for (std::size_t i = 0; i < k.size(); ++i) {
                    d.k[i] = Section::as_integer(k[i], p.path("k") + "[" + std::to_string(i) + "]");
                }
            }
            break;
        }
        case DataKind::GaussianBump: {
            d.u_amplitude = p.number("u_amplitude", 0.0);
            d.v_amplitude = p.number("v_amplitude", 0.0);
            d.width = p.number("width", 0.5);
            if (!(d.width > 0.0)) throw ConfigError(p.path("width"), "expected a positive width");
            if (p.has("center")) {
                const auto c = p.numbers("center");
                if (c.empty() || c.size() > 3) throw ConfigError(p.path("center"), "expected 1 to 3 numbers");
                d.center = {0.0, 0.0, 0.0};
                for (std::size_t i = 0; i < c.size(); ++i) d.center[i] = c[i];
            }
            break;
        }
        case DataKind::Grf:
            d.u_amplitude = p.number("u_amplitude", 0.0);
            d.v_amplitude = p.number("v_amplitude", 0.0);
            d.spectral_decay = p.number("spectral_decay", 3.0);
            break;
    }
    p.finish();
    s.finish();
}

inline Json initial_to_json(const InitialData& d) {
    Json params = Json::object();
    switch (d.kind) {
        case DataKind::Constant:
            params = {{"u", d.u}, {"v", d.v}};
            break;
        case DataKind::Mode:
            params = {{"u_amplitude", d.u_amplitude}, {"v_amplitude", d.v_amplitude}, {"k", d.k}};
            break;
        case DataKind::GaussianBump:
            params = {{"u_amplitude", d.u_amplitude},
                      {"v_amplitude", d.v_amplitude},
                      {"width", d.width},
                      {"center", d.center}};
            break;
        case DataKind::Grf:
            params = {{"u_amplitude", d.u_amplitude},
                      {"v_amplitude", d.v_amplitude},
                      {"spectral_decay", d.spectral_decay}};
            break;
    }
    return {{"kind", kind_name(d.kind)}, {"parameters", params}, {"seed", d.seed}};
}

inline void parse_verify(Section s, VerifyOptions& o) {
    if (s.has("grid")) {
        Section g = s.section("grid");
        o.dim = static_cast<int>(g.integer("dim", 1));
        const long n = g.integer("n", 0);
        if (n < 0) throw ConfigError(g.path("n"), "expected a nonnegative integer");
        o.n = static_cast<std::size_t>(n);
        o.L = g.number("L", std::numbers::pi);
        g.finish();
    }
    o.count = static_cast<int>(s.integer("count", 0));
    o.spectral_decay = s.number("spectral_decay", 3.0);
    const long seed = s.integer("seed", 1);
    if (seed < 0) throw ConfigError(s.path("seed"), "expected a nonnegative integer");
    o.seed = static_cast<std::uint64_t>(seed);
    if (s.has("nonnegative")) o.nonnegative = s.boolean("nonnegative", false);
    o.amplitude = s.number("amplitude", 1.0);
    if (s.has("times")) o.times = s.numbers("times");
    o.s = s.optional_number("s");
    o.p = s.optional_number("p");
    o.mu = s.optional_number("mu");
    if (auto v = s.optional_integer("j")) o.j = static_cast<int>(*v);
    if (auto v = s.optional_integer("m")) o.m = static_cast<int>(*v);
    o.a = s.optional_number("a");
    o.q = s.optional_number("q", true);
    o.r = s.optional_number("r", true);
    o.T_window = s.optional_number("T_window");
    o.time_nodes = static_cast<int>(s.integer("time_nodes", 129));
    s.finish();
}

template <typename T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = number_or_inf(static_cast<double>(*v));
}

inline Json verify_to_json(const VerifyOptions& o) {
    Json j = {{"grid", {{"dim", o.dim}, {"n", o.n}, {"L", o.L}}},
              {"count", o.count},
              {"spectral_decay", o.spectral_decay},
              {"seed", o.seed},
              {"amplitude", o.amplitude},
              {"time_nodes", o.time_nodes}};
    if (o.nonnegative) j["nonnegative"] = *o.nonnegative;
    if (!o.times.empty()) j["times"] = o.times;
    put_optional(j, "s", o.s);
    put_optional(j, "p", o.p);
    put_optional(j, "mu", o.mu);
    put_optional(j, "j", o.j);
    put_optional(j, "m", o.m);
    put_optional(j, "a", o.a);
    put_optional(j, "q", o.q);
    put_optional(j, "r", o.r);
    put_optional(j, "T_window", o.T_window);
    return j;
}

}  // namespace detail

/// Parses a configuration document. `seed_override` replaces initial_data.seed
/// and verify.seed.
inline RunConfig parse_config(const Json& doc, std::optional<std::uint64_t> seed_override = std::nullopt) {
    RunConfig c;
    detail::Section root(doc, "");

    if (root.has("equation")) {
        auto s = root.section("equation");
        c.p = s.number("p", 2.0);
        c.mu = s.number("mu", 1.0);
        c.N = static_cast<int>(s.integer("N", 1));
        s.finish();
    }
    if (root.has("grid")) {
        auto s = root.section("grid");
        const long n = s.integer("n", 64);
        if (n <= 0) throw ConfigError(s.path("n"), "expected a positive integer");
        c.n = static_cast<std::size_t>(n);
        c.L = s.number("L", std::numbers::pi);
        s.finish();
    }
    try {
        (void)c.grid();
    } catch (const UnsupportedDim& e) {
        throw ConfigError("equation.N", e.what());
    } catch (const DomainError& e) {
        throw ConfigError("grid", e.what());
    }

    SolverConfig& sc = c.solver;
    bool explicit_T_init = false;
    if (root.has("solver")) {
        auto s = root.section("solver");
        explicit_T_init = s.has("slab_T_init");
        sc.slab_T_init = s.number("slab_T_init", sc.slab_T_init);
        sc.slab_T_min = s.number("slab_T_min", sc.slab_T_min);
        sc.picard_tol = s.number("picard_tol", sc.picard_tol);
        sc.picard_max_iters = static_cast<int>(s.integer("picard_max_iters", sc.picard_max_iters));
        sc.quad_nodes_M = static_cast<int>(s.integer("quad_nodes_M", sc.quad_nodes_M));
        sc.blowup_threshold = s.number("blowup_threshold", sc.blowup_threshold);
        sc.horizon = s.number("horizon", sc.horizon);
        sc.max_contraction_ratio = s.number("max_contraction_ratio", sc.max_contraction_ratio);
        s.finish();
    }
    // The default initial slab shrinks to fit short horizons.
    if (!explicit_T_init) sc.slab_T_init = std::min(sc.slab_T_init, sc.horizon);

    if (root.has("initial_data")) detail::parse_initial(root.section("initial_data"), c.initial);
    if (root.has("overrides")) {
        auto s = root.section("overrides");
        c.ignore_admissibility = s.boolean("ignore_admissibility", false);
        s.finish();
    }
    if (root.has("sweep")) {
        auto s = root.section("sweep");
        SweepAxes axes;
        axes.p = s.has("p") ? s.numbers("p") : std::vector<double>{c.p};
        axes.mu = s.has("mu") ? s.numbers("mu") : std::vector<double>{c.mu};
        axes.amplitude = s.has("amplitude") ? s.numbers("amplitude") : std::vector<double>{1.0};
        s.finish();
        c.sweep = axes;
    }
    if (root.has("verify")) detail::parse_verify(root.section("verify"), c.verify);
    root.finish();

    if (seed_override) {
        c.initial.seed = *seed_override;
        c.verify.seed = *seed_override;
    }

    try {
        c.solver_config().validate();
    } catch (const DomainError& e) {
        throw ConfigError("solver", e.what());
    }

    Json canon = {{"equation", {{"p", c.p}, {"mu", c.mu}, {"N", c.N}}},
                  {"grid", {{"n", c.n}, {"L", c.L}}},
                  {"solver",
                   {{"slab_T_init", sc.slab_T_init},
                    {"slab_T_min", sc.slab_T_min},
                    {"picard_tol", sc.picard_tol},
                    {"picard_max_iters", sc.picard_max_iters},
                    {"quad_nodes_M", sc.quad_nodes_M},
                    {"blowup_threshold", sc.blowup_threshold},
                    {"horizon", sc.horizon},
                    {"max_contraction_ratio", sc.max_contraction_ratio}}},
                  {"initial_data", detail::initial_to_json(c.initial)},
                  {"overrides", {{"ignore_admissibility", c.ignore_admissibility}}},
                  {"verify", detail::verify_to_json(c.verify)}};
    if (c.sweep) {
        canon["sweep"] = {{"p", c.sweep->p}, {"mu", c.sweep->mu}, {"amplitude", c.sweep->amplitude}};
    }
    c.canonical = std::move(canon);
    return c;
}

inline RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open config file '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc, seed_override);
}

/// Samples the configured initial data on `g`, scaled by `amplitude`.
inline State build_initial_state(const InitialData& d, const Grid& g, double amplitude = 1.0) {
    State U = State::zero(g);
    switch (d.kind) {
        case DataKind::Constant:
            U = State(Field::constant(g, d.u), Field::constant(g, d.v));
            break;
        case DataKind::Mode: {
            const double base = g.base_frequency();
            auto phase = [&](const std::array<double, 3>& x) {
                double s = 0.0;
                for (int a = 0; a < g.dim(); ++a) s += base * static_cast<double>(d.k[a]) * x[a];
                return std::cos(s);
            };
            U = State(sample(g, [&](auto x) { return d.u_amplitude * phase(x); }),
                      sample(g, [&](auto x) { return d.v_amplitude * phase(x); }));
            break;
        }
        case DataKind::GaussianBump: {
            auto bump = [&](const std::array<double, 3>& x) {
                double r2 = 0.0;
                for (int a = 0; a < g.dim(); ++a) r2 += (x[a] - d.center[a]) * (x[a] - d.center[a]);
                return std::exp(-r2 / (d.width * d.width));
            };
            U = State(sample(g, [&](auto x) { return d.u_amplitude * bump(x); }),
                      sample(g, [&](auto x) { return d.v_amplitude * bump(x); }));
            break;
        }
        case DataKind::Grf: {
            EnsembleSpec spec{g};
            spec.spectral_decay = d.spectral_decay;
            spec.seed = d.seed;
            U = State(d.u_amplitude * ensemble_member(spec, 0), d.v_amplitude * ensemble_member(spec, 1));
            break;
        }
    }
    return amplitude * U;
}

/// Support-plus-propagation warnings: a bump is treated as supported within
/// three widths of its center, and waves travel at unit speed.
inline std::vector<std::string> propagation_warnings(const RunConfig& c) {
    std::vector<std::string> out;
    if (c.initial.kind != DataKind::GaussianBump) return out;
    for (int a = 0; a < c.N; ++a) {
        const double reach = std::abs(c.initial.center[a]) + 3.0 * c.initial.width + c.solver.horizon;
        if (reach > c.L) {
            out.push_back("axis " + std::to_string(a) + ": bump support plus horizon (" + format_double(reach) +
                          ") exceeds the half-length L; periodic images interact");
        }
    }
    return out;
}

}  // namespace awave::cli
