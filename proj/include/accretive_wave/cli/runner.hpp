#pragma once

// Batch commands behind the awave tool. Each returns a process exit code:
//   0 success / admissible / verifier pass / horizon reached
//   1 not admissible / verifier fail
//   2 configuration or domain error
//   10 blow-up detected, 11 slab underflow
//
// CSV numbers use 17 significant digits; CSV files carry no timestamps, so a
// rerun with the same configuration and seed reproduces them byte for byte.
// Timestamps live in the manifests only.

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "accretive_wave/cli/config.hpp"
#include "accretive_wave/cli/svg.hpp"
#include "accretive_wave/estimate_lab.hpp"
#include "accretive_wave/picard_solver.hpp"

namespace awave::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitRejected = 1,
    kExitConfig = 2,
    kExitBlowup = 10,
    kExitUnderflow = 11,
};

struct CommandOptions {
    std::string config_path;
    std::string out_dir = "out";
    bool svg = false;
    std::optional<std::uint64_t> seed;
};

inline std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return hex.str();
}

inline std::string config_hash(const Json& canonical) { return sha256_hex(canonical.dump()); }

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline Json json_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return nullptr;
    return x;
}

struct Manifest {
    std::string command;
    Json config;
    std::uint64_t seed = 0;
    std::string started;
    std::string finished;
    std::vector<std::string> outputs;
    Json outcome = Json::object();
    std::vector<std::string> warnings;

    Json to_json() const {
        return {{"command", command},
                {"config_hash", config_hash(config)},
                {"seed", seed},
                {"tool_version", kToolVersion},
                {"started", started},
                {"finished", finished},
                {"outputs", outputs},
                {"outcome", outcome},
                {"warnings", warnings},
                {"config", config}};
    }
};

namespace detail {

inline std::filesystem::path prepare_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
}

inline void write_manifest(const std::filesystem::path& dir, const std::string& name, Manifest m) {
    m.finished = utc_timestamp();
    write_text(dir / name, m.to_json().dump(2) + "\n");
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NotAdmissible& e) {
        err << "error: " << e.what() << " (set overrides.ignore_admissibility to run anyway)\n";
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

inline RunConfig config_or_default(const CommandOptions& opt) {
    if (opt.config_path.empty()) return parse_config(Json::object(), opt.seed);
    return load_config(opt.config_path, opt.seed);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// solve

inline std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream out;
    out << "t,phase_norm_total,u_Hmu,v_Hmu1,energy,linf_v,spectral_tail_fraction\n";
    for (const auto& s : traj.snapshots) {
        out << format_double(s.t) << ',' << format_double(s.norm.total) << ',' << format_double(s.norm.u_norm)
            << ',' << format_double(s.norm.v_norm) << ',' << format_double(s.energy) << ','
            << format_double(s.linf_v) << ',' << format_double(s.spectral_tail) << '\n';
    }
    return out.str();
}

inline int outcome_exit_code(Outcome o) noexcept {
    switch (o) {
        case Outcome::ReachedHorizon: return kExitOk;
        case Outcome::BlowupDetected: return kExitBlowup;
        case Outcome::SlabUnderflow: return kExitUnderflow;
    }
    return kExitConfig;
}

inline Json trajectory_summary(const Trajectory& traj) {
    Json j = {{"outcome", to_string(traj.outcome)},
              {"tmax_estimate", json_number(traj.tmax_estimate)},
              {"final_t", traj.snapshots.back().t},
              {"snapshots", traj.snapshots.size()},
              {"slabs", traj.slabs.size()},
              {"rejected_slabs", traj.rejected_slabs},
              {"admissible", traj.admissible},
              {"admissibility_reason", traj.admissibility_reason}};
    j["resolution_warning_time"] =
        traj.resolution_warning_time ? Json(*traj.resolution_warning_time) : Json(nullptr);
    return j;
}

inline int cmd_solve(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        Manifest m;
        m.command = "solve";
        m.started = utc_timestamp();
        if (opt.config_path.empty()) throw ConfigError("--config", "solve requires a configuration file");
        const RunConfig c = load_config(opt.config_path, opt.seed);
        const SolverConfig cfg = c.solver_config();
        const State U0 = build_initial_state(c.initial, cfg.grid);
        const Trajectory traj = continue_to_tmax(U0, cfg);

        const auto dir = detail::prepare_dir(opt.out_dir);
        detail::write_text(dir / "trajectory.csv", trajectory_csv(traj));
        m.outputs.push_back("trajectory.csv");
        if (opt.svg) {
            std::vector<double> t;
            std::vector<double> y;
            for (const auto& s : traj.snapshots) {
                t.push_back(s.t);
                y.push_back(s.norm.total);
            }
            detail::write_text(dir / "trajectory.svg", line_plot_svg(t, y, "t", "phase norm"));
            m.outputs.push_back("trajectory.svg");
        }
        m.config = c.canonical;
        m.seed = c.initial.seed;
        m.outcome = trajectory_summary(traj);
        m.warnings = propagation_warnings(c);
        if (traj.resolution_warning_time) {
            m.warnings.push_back("spectral tail exceeded 1% at t = " + format_double(*traj.resolution_warning_time));
        }
        if (!traj.admissible) m.warnings.push_back("ran outside the admissible set: " + traj.admissibility_reason);
        for (const auto& w : m.warnings) err << "warning: " << w << "\n";
        detail::write_manifest(dir, "manifest.json", m);
        out << m.outcome.dump() << "\n";
        return outcome_exit_code(traj.outcome);
    });
}

// ---------------------------------------------------------------------------
// sweep

struct SweepCell {
    std::size_t index = 0;
    double p = 0.0;
    double mu = 0.0;
    double amplitude = 0.0;
    bool admissible = false;
    std::string outcome;
    double tmax_estimate = kInfinity;
    double final_t = 0.0;
    double max_phase_norm = 0.0;
    std::size_t slabs = 0;
    int rejected_slabs = 0;
};

inline std::vector<SweepCell> sweep_cells(const SweepAxes& axes) {
    std::vector<SweepCell> cells;
    for (double p : axes.p) {
        for (double mu : axes.mu) {
            for (double amplitude : axes.amplitude) {
                SweepCell c;
                c.index = cells.size();
                c.p = p;
                c.mu = mu;
                c.amplitude = amplitude;
                cells.push_back(c);
            }
        }
    }
    return cells;
}

inline void run_cell(const RunConfig& c, SweepCell& cell) {
    SolverConfig cfg = c.solver_config();
    cfg.p = cell.p;
    cfg.mu = cell.mu;
    const State U0 = build_initial_state(c.initial, cfg.grid, cell.amplitude);
    try {
        const Trajectory traj = continue_to_tmax(U0, cfg);
        cell.admissible = traj.admissible;
        cell.outcome = to_string(traj.outcome);
        cell.tmax_estimate = traj.tmax_estimate;
        cell.final_t = traj.snapshots.back().t;
        for (const auto& s : traj.snapshots) cell.max_phase_norm = std::max(cell.max_phase_norm, s.norm.total);
        cell.slabs = traj.slabs.size();
        cell.rejected_slabs = traj.rejected_slabs;
    } catch (const NotAdmissible&) {
        cell.admissible = false;
        cell.outcome = "Rejected";
    }
}

/// Runs every cell on `workers` threads; results are in cell order.
inline std::vector<SweepCell> run_sweep(const RunConfig& c, unsigned workers) {
    if (!c.sweep) throw ConfigError("sweep", "sweep requires a 'sweep' section");
    auto cells = sweep_cells(*c.sweep);
    if (cells.empty()) throw ConfigError("sweep", "parameter grid is empty");
    for (const auto& cell : cells) {
        if (!(cell.p > 1.0)) throw ConfigError("sweep.p", "every p must exceed 1");
        if (!(cell.mu >= 1.0)) throw ConfigError("sweep.mu", "every mu must be >= 1");
    }
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cells.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(cells.size());
    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                run_cell(c, cells[i]);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
    return cells;
}

inline std::string sweep_csv(const std::vector<SweepCell>& cells) {
    std::ostringstream out;
    out << "cell,p,mu,amplitude,admissible,outcome,tmax_estimate,final_t,max_phase_norm,slabs,rejected_slabs\n";
    for (const auto& c : cells) {
        out << c.index << ',' << format_double(c.p) << ',' << format_double(c.mu) << ','
            << format_double(c.amplitude) << ',' << (c.admissible ? "true" : "false") << ',' << c.outcome
            << ',' << format_double(c.tmax_estimate) << ',' << format_double(c.final_t) << ','
            << format_double(c.max_phase_norm) << ',' << c.slabs << ',' << c.rejected_slabs << '\n';
    }
    return out.str();
}

/// Hardware concurrency, capped by ACCRETIVE_WAVE_THREADS when set.
inline unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ACCRETIVE_WAVE_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || cap < 1) {
            throw ConfigError("ACCRETIVE_WAVE_THREADS", "expected a positive integer, got '" + std::string(env) + "'");
        }
        n = std::min(n, static_cast<unsigned>(cap));
    }
    return n;
}

inline int cmd_sweep(const CommandOptions& opt, std::ostream& out, std::ostream& err,
                     std::optional<unsigned> workers = std::nullopt) {
    return detail::guarded(err, [&] {
        Manifest m;
        m.command = "sweep";
        m.started = utc_timestamp();
        if (opt.config_path.empty()) throw ConfigError("--config", "sweep requires a configuration file");
        const RunConfig c = load_config(opt.config_path, opt.seed);
        const unsigned w = workers ? *workers : worker_count();
        const auto cells = run_sweep(c, w);

        const auto dir = detail::prepare_dir(opt.out_dir);
        detail::write_text(dir / "sweep.csv", sweep_csv(cells));
        m.outputs.push_back("sweep.csv");
        m.config = c.canonical;
        m.seed = c.initial.seed;
        Json counts = Json::object();
        for (const auto& cell : cells) counts[cell.outcome] = counts.value(cell.outcome, 0) + 1;
        m.outcome = {{"cells", cells.size()}, {"outcomes", counts}, {"workers", w}};
        m.warnings = propagation_warnings(c);
        detail::write_manifest(dir, "sweep_manifest.json", m);
        out << m.outcome.dump() << "\n";
        return static_cast<int>(kExitOk);
    });
}

// ---------------------------------------------------------------------------
// verify

inline std::string report_parameters(const EstimateReport& r) {
    std::string s;
    for (const auto& [k, v] : r.parameters) {
        if (!s.empty()) s += ';';
        s += k + "=" + v;
    }
    return s;
}

inline constexpr const char* kReportHeader =
    "verifier,samples,degenerate,ratio_max,ratio_mean,ratio_p95,pass,parameters\n";

inline std::string report_row(const EstimateReport& r) {
    std::ostringstream out;
    out << r.verifier_name << ',' << r.samples << ',' << r.degenerate << ',' << format_double(r.ratio_max) << ','
        << format_double(r.ratio_mean) << ',' << format_double(r.ratio_p95) << ',' << (r.pass ? "true" : "false")
        << ',' << report_parameters(r) << '\n';
    return out.str();
}

inline Json report_json(const EstimateReport& r) {
    return {{"verifier", r.verifier_name},
            {"samples", r.samples},
            {"degenerate", r.degenerate},
            {"ratio_max", json_number(r.ratio_max)},
            {"ratio_mean", json_number(r.ratio_mean)},
            {"ratio_p95", json_number(r.ratio_p95)},
            {"pass", r.pass},
            {"parameters", r.parameters}};
}

namespace detail {

struct VerifierDefaults {
    std::size_t n;
    int count;
    bool nonnegative;
};

inline VerifierDefaults verifier_defaults(const std::string& name) {
    if (name == "kernel_linf") return {256, 100, false};
    if (name == "product" || name == "power") return {128, 50, true};
    if (name == "power_difference" || name == "gagliardo_nirenberg") return {128, 50, false};
    return {64, 50, false};
}

inline double need(const std::optional<double>& v, double fallback) { return v ? *v : fallback; }

}  // namespace detail

/// Runs verifier `name` with options from the verify section, defaults filled per verifier.
inline EstimateReport run_verifier(const std::string& name, const VerifyOptions& o) {
    const auto& names = verifier_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string list;
        for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
        throw ConfigError("verifier", "unknown verifier '" + name + "'; valid names: " + list);
    }
    const auto d = detail::verifier_defaults(name);
    EnsembleSpec spec{Grid(o.dim, o.n ? o.n : d.n, o.L)};
    spec.count = o.count > 0 ? o.count : d.count;
    spec.spectral_decay = o.spectral_decay;
    spec.seed = o.seed;
    spec.nonnegative = o.nonnegative.value_or(d.nonnegative);
    spec.amplitude = o.amplitude;
    spec.validate();

    if (name == "kernel_linf") {
        return verify_kernel_linf(spec, o.times.empty() ? std::vector<double>{0.25, 1.0, 4.0} : o.times);
    }
    if (name == "product") {
        const double p = detail::need(o.p, 2.0);
        if (std::floor(p) != p) throw ConfigError("verify.p", "product estimate needs an integer p");
        return verify_product_estimate(spec, detail::need(o.s, 1.0), static_cast<int>(p));
    }
    if (name == "power") return verify_power_estimate(spec, detail::need(o.mu, 1.5), detail::need(o.p, 2.0));
    if (name == "power_difference") {
        return verify_power_difference(spec, detail::need(o.mu, 1.5), detail::need(o.p, 2.0));
    }
    if (name == "gagliardo_nirenberg") {
        GagliardoNirenbergParams gn;
        gn.j = o.j.value_or(0);
        gn.m = o.m.value_or(1);
        gn.a = detail::need(o.a, 0.25);
        gn.q = detail::need(o.q, 2.0);
        gn.r = detail::need(o.r, 2.0);
        gn.p = o.p;
        return verify_gagliardo_nirenberg(spec, gn);
    }
    const double q = detail::need(o.q, kInfinity);
    const double mu = detail::need(o.mu, 1.0);
    if (name == "strichartz_homogeneous") {
        return verify_strichartz_homogeneous(spec, q, mu, detail::need(o.T_window, 4.0), o.time_nodes);
    }
    return verify_strichartz_inhomogeneous(spec, q, mu, detail::need(o.T_window, 1.0), o.time_nodes);
}

inline int cmd_verify(const std::string& name, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        Manifest m;
        m.command = "verify " + name;
        m.started = utc_timestamp();
        const RunConfig c = detail::config_or_default(opt);
        const EstimateReport r = run_verifier(name, c.verify);

        const auto dir = detail::prepare_dir(opt.out_dir);
        const auto csv = dir / "reports.csv";
        const bool fresh = !std::filesystem::exists(csv) || std::filesystem::file_size(csv) == 0;
        {
            std::ofstream f(csv, std::ios::binary | std::ios::app);
            if (!f) throw Error("cannot write '" + csv.string() + "'");
            if (fresh) f << kReportHeader;
            f << report_row(r);
        }
        const std::string summary = "report_" + name + ".json";
        detail::write_text(dir / summary, report_json(r).dump(2) + "\n");
        m.outputs = {"reports.csv", summary};
        m.config = c.canonical;
        m.seed = c.verify.seed;
        m.outcome = {{"verifier", name}, {"pass", r.pass}, {"ratio_max", json_number(r.ratio_max)}};
        detail::write_manifest(dir, "verify_manifest.json", m);
        out << report_json(r).dump() << "\n";
        return static_cast<int>(r.pass ? kExitOk : kExitRejected);
    });
}

// ---------------------------------------------------------------------------
// admissible

inline Json decision_json(const AdmissibleDecision& d, double mu, double p, int N) {
    return {{"theorem", to_string(d.theorem)},
            {"mu", mu},
            {"p", p},
            {"N", N},
            {"admissible", d.admissible},
            {"p_interval",
             {{"lo", d.p_interval.lo}, {"hi", json_number(d.p_interval.hi)}, {"lo_closed", d.p_interval.lo_closed}}},
            {"eps", d.eps ? Json(*d.eps) : Json(nullptr)},
            {"reason", d.reason}};
}

inline int cmd_admissible(double mu, double p, int N, std::optional<Theorem> theorem, std::ostream& out,
                          std::ostream& err) {
    return detail::guarded(err, [&] {
        if (!(mu >= 1.0)) throw DomainError("mu >= 1 required, got " + format_double(mu));
        if (N < 1) throw DomainError("N >= 1 required");
        const Theorem th = theorem.value_or(natural_theorem(p));
        const auto d = check_admissible(th, mu, p, N);
        out << decision_json(d, mu, p, N).dump(2) << "\n";
        return static_cast<int>(d.admissible ? kExitOk : kExitRejected);
    });
}

}  // namespace awave::cli
