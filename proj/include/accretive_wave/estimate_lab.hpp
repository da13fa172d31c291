#pragma once

// Empirical probes of the linear and nonlinear estimates behind the local
// theory: seeded Gaussian random field ensembles, per-sample ratios LHS/RHS,
// and ratio statistics. Only the kernel bounds come with an explicit constant;
// every other verifier checks finiteness and stability of ratio_max under grid
// refinement (and, for Strichartz, under doubling of the time window).
//
// A sample whose right-hand side vanishes is degenerate: it is excluded from
// the statistics and counted, and more than 10% degenerate samples fail the
// report.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "accretive_wave/admissibility.hpp"
#include "accretive_wave/errors.hpp"
#include "accretive_wave/sobolev_norms.hpp"
#include "accretive_wave/spectral_core.hpp"
#include "accretive_wave/wave_propagators.hpp"

namespace awave {

/// Round-trippable decimal text for a double.
inline std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct EnsembleSpec {
    Grid grid;
    int count = 100;
    /// Coefficients are N(0,1) (1 + |xi|^2)^{-alpha/2}.
    double spectral_decay = 3.0;
    std::uint64_t seed = 0;
    /// Square each generated field pointwise.
    bool nonnegative = false;
    /// Multiplies every field after squaring.
    double amplitude = 1.0;

    void validate() const {
        if (count < 1) throw DomainError("ensemble count must be >= 1");
        if (!std::isfinite(spectral_decay)) throw DomainError("spectral decay must be finite");
        if (!std::isfinite(amplitude)) throw DomainError("ensemble amplitude must be finite");
    }
};

struct EstimateReport {
    std::string verifier_name;
    /// Non-degenerate samples entering the statistics.
    int samples = 0;
    int degenerate = 0;
    double ratio_max = 0.0;
    double ratio_mean = 0.0;
    double ratio_p95 = 0.0;
    std::map<std::string, std::string> parameters;
    bool pass = false;
};

inline constexpr double kKernelTolerance = 1e-6;
inline constexpr double kRefinementTolerance = 0.2;
inline constexpr double kWindowTolerance = 0.3;
inline constexpr double kDegenerateLimit = 0.1;

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// One generator per (seed, sample, lattice site): a site keeps its draw when
// the grid is refined, so refined ensembles extend the coarse ones.
inline std::uint64_t site_seed(std::uint64_t seed, std::uint64_t sample, const MultiIndex& k) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ sample);
    for (long ka : k) h = mix64(h ^ static_cast<std::uint64_t>(ka + (1L << 31)));
    return h;
}

// Representative of {k, -k}: first nonzero component positive.
inline bool is_representative(const MultiIndex& k) noexcept {
    for (long ka : k) {
        if (ka != 0) return ka > 0;
    }
    return true;
}

inline Field remove_mean(Field f) {
    double mean = 0.0;
    for (double x : f.values) mean += x;
    mean /= static_cast<double>(f.values.size());
    for (auto& x : f.values) x -= mean;
    return f;
}

/// (h^dim sum |f|^q)^{1/q}; q = inf gives max |f|.
inline double lebesgue_norm(const Field& f, double q) {
    if (std::isinf(q)) return linf_norm(f);
    double sum = 0.0;
    for (double x : f.values) sum += std::pow(std::abs(x), q);
    return std::pow(f.grid.cell_volume() * sum, 1.0 / q);
}

/// f^p of the trigonometric interpolant of f, held on a grid fine enough to
/// represent it exactly (integer p >= 1).
inline Field exact_integer_power(const Field& f, int p) {
    std::size_t factor = 1;
    while (factor < static_cast<std::size_t>(p)) factor *= 2;
    SpectralField wide(f.grid.refined(factor));
    copy_common_modes(forward_transform(f), wide);
    Field fine = inverse_transform(wide);
    for (auto& x : fine.values) x = std::pow(x, p);
    return fine;
}

inline std::vector<MultiIndex> multi_indices(int dim, int order) {
    std::vector<MultiIndex> out;
    if (dim == 1) return {{order, 0, 0}};
    for (long a = 0; a <= order; ++a) {
        if (dim == 2) {
            out.push_back({a, order - a, 0});
            continue;
        }
        for (long b = 0; a + b <= order; ++b) out.push_back({a, b, order - a - b});
    }
    return out;
}

// ||F||_{L^q(0,T)} of node samples by Simpson (q finite) or the node max (q = inf).
inline double time_norm(const std::vector<double>& values, double T, double q) {
    if (std::isinf(q)) return *std::max_element(values.begin(), values.end());
    const auto w = simpson_weights(values.size(), T / static_cast<double>(values.size() - 1));
    double sum = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) sum += w[j] * std::pow(values[j], q);
    return std::pow(sum, 1.0 / q);
}

inline void check_window(double T, int time_nodes) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("time window must be positive");
    if (time_nodes < 3 || time_nodes % 2 == 0) {
        throw QuadratureError("time node count must be odd and >= 3");
    }
}

inline EstimateReport summarize(const std::string& name, const std::vector<std::optional<double>>& ratios) {
    EstimateReport r;
    r.verifier_name = name;
    std::vector<double> good;
    for (const auto& x : ratios) {
        if (x) {
            good.push_back(*x);
        } else {
            ++r.degenerate;
        }
    }
    r.samples = static_cast<int>(good.size());
    if (good.empty()) {
        r.ratio_max = r.ratio_mean = r.ratio_p95 = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    std::sort(good.begin(), good.end());
    r.ratio_max = good.back();
    double sum = 0.0;
    for (double x : good) sum += x;
    r.ratio_mean = std::min(sum / static_cast<double>(good.size()), r.ratio_max);
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(good.size())));
    r.ratio_p95 = good[rank == 0 ? 0 : rank - 1];
    return r;
}

// Baseline pass rule shared by every verifier.
inline bool healthy(const EstimateReport& r) {
    const int total = r.samples + r.degenerate;
    return r.samples > 0 && std::isfinite(r.ratio_max) &&
           static_cast<double>(r.degenerate) <= kDegenerateLimit * static_cast<double>(total);
}

inline bool within(double a, double b, double tol) {
    return std::isfinite(a) && std::isfinite(b) && b > 0.0 && std::abs(a / b - 1.0) <= tol;
}

inline void record_refinement(EstimateReport& r, double refined_max) {
    r.parameters["refined_ratio_max"] = format_double(refined_max);
    r.parameters["refinement_change"] = format_double(std::abs(refined_max / r.ratio_max - 1.0));
}

inline EnsembleSpec refined_spec(const EnsembleSpec& spec) {
    EnsembleSpec fine = spec;
    fine.grid = spec.grid.refined(2);
    return fine;
}

}  // namespace detail

/// Field number `index` of the ensemble; generate_ensemble(spec)[i] == ensemble_member(spec, i).
inline Field ensemble_member(const EnsembleSpec& spec, std::uint64_t index) {
    const Grid& g = spec.grid;
    const auto mags = frequency_magnitudes(g);
    SpectralField F(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto k = g.lattice_index(i);
        if (g.has_nyquist_component(i) || !detail::is_representative(k)) continue;
        std::mt19937_64 rng(detail::site_seed(spec.seed, index, k));
        std::normal_distribution<double> normal(0.0, 1.0);
        const double a = normal(rng);
        const double b = normal(rng);
        const double sigma = std::pow(1.0 + mags[i] * mags[i], -0.5 * spec.spectral_decay);
        if (i == 0) {
            F.coeffs[i] = sigma * a;
        } else {
            const Complex c = sigma * Complex(a, b) / std::sqrt(2.0);
            F.coeffs[i] = c;
            F.coeffs[g.mirror(i)] = std::conj(c);
        }
    }
    Field f = inverse_transform(F);
    if (spec.nonnegative) {
        for (auto& x : f.values) x *= x;
    }
    return spec.amplitude * f;
}

inline std::vector<Field> generate_ensemble(const EnsembleSpec& spec) {
    spec.validate();
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) out.push_back(ensemble_member(spec, static_cast<std::uint64_t>(i)));
    return out;
}

// ---------------------------------------------------------------------------
// Kernel bounds: ||Kdot(t) f||_inf <= max(1, t) ||f||_{W^{1,inf}}, ||K(t) g||_inf <= t ||g||_inf.

inline std::optional<double> kdot_linf_ratio(const Field& f, double t) {
    const double rhs = std::max(1.0, t) * w1inf_norm(f);
    if (rhs == 0.0) return std::nullopt;
    return linf_norm(apply_Kdot(t, f)) / rhs;
}

inline std::optional<double> k_linf_ratio(const Field& g, double t) {
    const double rhs = t * linf_norm(g);
    if (rhs == 0.0) return std::nullopt;
    return linf_norm(apply_K(t, g)) / rhs;
}

inline EstimateReport verify_kernel_linf(const EnsembleSpec& spec, const std::vector<double>& times) {
    if (spec.grid.dim() > 3) throw UnsupportedDim("kernel bounds are stated for 1 <= N <= 3");
    if (times.empty()) throw DomainError("kernel verifier needs at least one time");
    for (double t : times) {
        if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("kernel verifier times must be positive");
    }
    std::vector<std::optional<double>> ratios;
    double kdot_max = 0.0;
    double k_max = 0.0;
    for (const Field& f : generate_ensemble(spec)) {
        for (double t : times) {
            const auto a = kdot_linf_ratio(f, t);
            const auto b = k_linf_ratio(f, t);
            if (a) kdot_max = std::max(kdot_max, *a);
            if (b) k_max = std::max(k_max, *b);
            ratios.push_back(a);
            ratios.push_back(b);
        }
    }
    auto r = detail::summarize("kernel_linf", ratios);
    r.parameters["kdot_ratio_max"] = format_double(kdot_max);
    r.parameters["k_ratio_max"] = format_double(k_max);
    r.parameters["constant"] = "1";
    r.parameters["times"] = std::to_string(times.size());
    r.pass = detail::healthy(r) && r.ratio_max <= 1.0 + kKernelTolerance;
    return r;
}

// ---------------------------------------------------------------------------
// Product estimate: ||f^p||_{H^s} <= C ||f||_{H^{s + nu(s, p)}}^p, integer p >= 2.

inline std::optional<double> product_ratio(const Field& f, double s, int p) {
    const double rhs = std::pow(h_norm(f, s + nu(s, p, f.grid.dim())), p);
    if (rhs == 0.0) return std::nullopt;
    return h_norm(detail::exact_integer_power(f, p), s) / rhs;
}

namespace detail {

inline double product_ratio_max(const EnsembleSpec& spec, double s, int p,
                                std::vector<std::optional<double>>* all = nullptr) {
    double m = -kInfinity;
    for (const Field& f : generate_ensemble(spec)) {
        const auto r = product_ratio(f, s, p);
        if (r) m = std::max(m, *r);
        if (all) all->push_back(r);
    }
    return m;
}

}  // namespace detail

inline EstimateReport verify_product_estimate(const EnsembleSpec& spec, double s, int p) {
    if (!spec.nonnegative) throw DomainError("product estimate is stated for nonnegative f");
    const int N = spec.grid.dim();
    if (p < 2) throw DomainError("product estimate needs an integer p >= 2");
    if (!(s > -0.5 * N) || s == 0.5 * N) throw DomainError("product estimate needs s > -N/2, s != N/2");
    std::vector<std::optional<double>> ratios;
    detail::product_ratio_max(spec, s, p, &ratios);
    auto r = detail::summarize("product", ratios);
    r.parameters["s"] = format_double(s);
    r.parameters["p"] = std::to_string(p);
    r.parameters["nu"] = format_double(nu(s, p, N));
    const double fine = detail::product_ratio_max(detail::refined_spec(spec), s, p);
    detail::record_refinement(r, fine);
    r.pass = detail::healthy(r) && detail::within(fine, r.ratio_max, kRefinementTolerance);
    return r;
}

// ---------------------------------------------------------------------------
// Power estimate: ||f^p||_{H^{mu-1}} <= C ||f||_inf^{p-1} ||f||_{H^{mu-1}}, f >= 0.
// Powers are taken on grid samples. For mu in (1, 2) on 1D grids the H^{mu-1}
// norm is also evaluated as sqrt(||.||_2^2 + [.]_{mu-1}^2) with the Gagliardo
// seminorm.

enum class PowerNorm { Fourier, Gagliardo };

inline double power_norm(const Field& f, double order, PowerNorm kind) {
    if (kind == PowerNorm::Fourier) return h_norm(f, order);
    const double l2 = l2_norm(f);
    const double g = gagliardo_seminorm(f, order);
    return std::sqrt(l2 * l2 + g * g);
}

inline Field nonnegative_power(const Field& f, double p) {
    Field out = f;
    for (auto& x : out.values) x = std::pow(std::max(x, 0.0), p);
    return out;
}

inline std::optional<double> power_ratio(const Field& f, double mu, double p,
                                         PowerNorm kind = PowerNorm::Fourier) {
    const double rhs = std::pow(linf_norm(f), p - 1.0) * power_norm(f, mu - 1.0, kind);
    if (rhs == 0.0) return std::nullopt;
    return power_norm(nonnegative_power(f, p), mu - 1.0, kind) / rhs;
}

inline bool power_order_supported(double mu) noexcept {
    return (mu > 1.0 && mu < 2.0) || is_positive_integer(mu);
}

namespace detail {

struct PowerRun {
    std::vector<std::optional<double>> fourier;
    std::vector<std::optional<double>> gagliardo;
};

inline PowerRun power_run(const EnsembleSpec& spec, double mu, double p, bool with_gagliardo) {
    PowerRun run;
    for (const Field& f : generate_ensemble(spec)) {
        run.fourier.push_back(power_ratio(f, mu, p, PowerNorm::Fourier));
        if (with_gagliardo) run.gagliardo.push_back(power_ratio(f, mu, p, PowerNorm::Gagliardo));
    }
    return run;
}

}  // namespace detail

inline EstimateReport verify_power_estimate(const EnsembleSpec& spec, double mu, double p) {
    if (!spec.nonnegative) throw DomainError("power estimate is stated for nonnegative f");
    if (!power_order_supported(mu)) throw DomainError("power estimate needs mu in (1,2) U N*");
    if (!(p >= std::max(1.0, mu - 1.0))) throw DomainError("power estimate needs p >= max(1, mu - 1)");
    const bool fractional = mu > 1.0 && mu < 2.0 && spec.grid.dim() == 1;

    const auto run = detail::power_run(spec, mu, p, fractional);
    auto r = detail::summarize("power", run.fourier);
    r.parameters["mu"] = format_double(mu);
    r.parameters["p"] = format_double(p);
    r.parameters["branch"] = (mu > 1.0 && mu < 2.0) ? "fractional" : "integer";

    const auto fine = detail::power_run(detail::refined_spec(spec), mu, p, false);
    const auto fine_report = detail::summarize("power", fine.fourier);
    detail::record_refinement(r, fine_report.ratio_max);
    r.pass = detail::healthy(r) && detail::within(fine_report.ratio_max, r.ratio_max, kRefinementTolerance);

    if (fractional) {
        const auto g = detail::summarize("power", run.gagliardo);
        const bool g_pass = detail::healthy(g);
        r.parameters["gagliardo_ratio_max"] = format_double(g.ratio_max);
        r.parameters["gagliardo_to_fourier"] = format_double(g.ratio_max / r.ratio_max);
        r.parameters["gagliardo_pass"] = g_pass ? "true" : "false";
        r.pass = r.pass && g_pass;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Lipschitz form used in the contraction step:
//   ||U^p - V^p||_{H^{mu-1}} / (||U - V||_{H^{mu-1}} (||U||_inf^{p-1} + ||V||_inf^{p-1})).

inline std::optional<double> power_difference_ratio(const Field& U, const Field& V, double mu, double p) {
    const double rhs = h_norm(U - V, mu - 1.0) *
                       (std::pow(linf_norm(U), p - 1.0) + std::pow(linf_norm(V), p - 1.0));
    if (rhs == 0.0) return std::nullopt;
    Field Up = U;
    Field Vp = V;
    for (auto& x : Up.values) x = detail::signed_power(x, p);
    for (auto& x : Vp.values) x = detail::signed_power(x, p);
    return h_norm(Up - Vp, mu - 1.0) / rhs;
}

namespace detail {

inline std::vector<std::optional<double>> power_difference_run(const EnsembleSpec& spec, double mu, double p) {
    EnsembleSpec pairs = spec;
    pairs.count = 2 * spec.count;
    const auto fields = generate_ensemble(pairs);
    std::vector<std::optional<double>> out;
    for (int i = 0; i < spec.count; ++i) {
        out.push_back(power_difference_ratio(fields[2 * i], fields[2 * i + 1], mu, p));
    }
    return out;
}

}  // namespace detail

inline EstimateReport verify_power_difference(const EnsembleSpec& spec, double mu, double p) {
    if (!(mu >= 1.0)) throw DomainError("power difference needs mu >= 1");
    if (!(p > 1.0)) throw DomainError("power difference needs p > 1");
    auto r = detail::summarize("power_difference", detail::power_difference_run(spec, mu, p));
    r.parameters["mu"] = format_double(mu);
    r.parameters["p"] = format_double(p);
    const auto fine = detail::summarize("power_difference",
                                        detail::power_difference_run(detail::refined_spec(spec), mu, p));
    detail::record_refinement(r, fine.ratio_max);
    r.pass = detail::healthy(r) && detail::within(fine.ratio_max, r.ratio_max, kRefinementTolerance);
    return r;
}

// ---------------------------------------------------------------------------
// Gagliardo-Nirenberg: sum_{|a|=j} ||D^a f||_p <= C (sum_{|a|=m} ||D^a f||_r)^a ||f||_q^{1-a}
// with 1/p = j/N + a (1/r - m/N) + (1 - a)/q. Ensemble fields have their mean
// removed (on the torus the inequality fails for constants when j = 0).

struct GagliardoNirenbergParams {
    int j = 0;
    int m = 1;
    double a = 0.25;
    double q = 2.0;
    double r = 2.0;
    /// Filled by resolve(); if set beforehand it must satisfy the relation.
    std::optional<double> p;

    /// Checks the hypotheses for dimension N and fills p.
    void resolve(int N) {
        if (!(0 <= j && j < m)) throw DomainError("need integers 0 <= j < m");
        if (!(q >= 1.0) || !(r >= 1.0)) throw DomainError("need q, r >= 1");
        const double lo = static_cast<double>(j) / m;
        if (!(a >= lo - 1e-15 && a <= 1.0)) throw DomainError("need a in [j/m, 1]");
        const double gap = m - j - N / r;
        if (a == 1.0 && gap >= 0.0 && std::floor(gap) == gap) {
            throw DomainError("a = 1 is excluded when m - j - N/r is a nonnegative integer");
        }
        const double inv_p = static_cast<double>(j) / N + a * (1.0 / r - static_cast<double>(m) / N) +
                             (1.0 - a) / q;
        if (p) {
            if (std::abs(1.0 / *p - inv_p) > 1e-12) {
                throw ExponentMismatch("1/p = " + format_double(1.0 / *p) +
                                       " but the exponent relation gives " + format_double(inv_p));
            }
            return;
        }
        if (inv_p < -1e-12 || inv_p > 1.0 + 1e-12) {
            throw ExponentMismatch("exponent relation gives 1/p = " + format_double(inv_p) +
                                   ", outside [0, 1]");
        }
        p = inv_p <= 1e-12 ? kInfinity : 1.0 / inv_p;
    }
};

/// Ratio for one field; params must be resolved. LHS = 0 gives ratio 0.
inline std::optional<double> gagliardo_nirenberg_ratio(const Field& f, const GagliardoNirenbergParams& gn) {
    const int N = f.grid.dim();
    double lhs = 0.0;
    for (const auto& alpha : detail::multi_indices(N, gn.j)) {
        lhs += detail::lebesgue_norm(differentiate(f, alpha), *gn.p);
    }
    if (lhs == 0.0) return 0.0;
    double top = 0.0;
    for (const auto& alpha : detail::multi_indices(N, gn.m)) {
        top += detail::lebesgue_norm(differentiate(f, alpha), gn.r);
    }
    const double rhs = std::pow(top, gn.a) * std::pow(detail::lebesgue_norm(f, gn.q), 1.0 - gn.a);
    if (rhs == 0.0) return std::nullopt;
    return lhs / rhs;
}

namespace detail {

inline std::vector<std::optional<double>> gn_run(const EnsembleSpec& spec, const GagliardoNirenbergParams& gn) {
    std::vector<std::optional<double>> out;
    for (const Field& f : generate_ensemble(spec)) {
        out.push_back(gagliardo_nirenberg_ratio(remove_mean(f), gn));
    }
    return out;
}

}  // namespace detail

inline EstimateReport verify_gagliardo_nirenberg(const EnsembleSpec& spec, GagliardoNirenbergParams gn) {
    gn.resolve(spec.grid.dim());
    auto r = detail::summarize("gagliardo_nirenberg", detail::gn_run(spec, gn));
    r.parameters["j"] = std::to_string(gn.j);
    r.parameters["m"] = std::to_string(gn.m);
    r.parameters["a"] = format_double(gn.a);
    r.parameters["q"] = format_double(gn.q);
    r.parameters["r"] = format_double(gn.r);
    r.parameters["p"] = format_double(*gn.p);
    const auto fine = detail::summarize("gagliardo_nirenberg", detail::gn_run(detail::refined_spec(spec), gn));
    detail::record_refinement(r, fine.ratio_max);
    r.pass = detail::healthy(r) && detail::within(fine.ratio_max, r.ratio_max, kRefinementTolerance);
    return r;
}

// ---------------------------------------------------------------------------
// Strichartz estimates on a finite window [0, T]; rho = mu + 1/q. Time norms
// use `time_nodes` uniform samples. The torus has recurrence and no decay, so
// reports are window-dependent by construction.

/// ||H(.)U0||_{L^q(0,T; Y^rho)} / ||U0||_{Y^mu}.
inline std::optional<double> strichartz_homogeneous_ratio(const State& U0, double q, double mu, double T,
                                                          int time_nodes = 129) {
    detail::check_window(T, time_nodes);
    const double rhs = phase_norm(U0, mu).total;
    if (rhs == 0.0) return std::nullopt;
    const auto pair = strichartz_pair(q, mu);
    const SpectralState U = SpectralState::of(U0);
    std::vector<double> values;
    for (double t : uniform_nodes(T, static_cast<std::size_t>(time_nodes))) {
        const auto Ut = homogeneous_solution(PropagatorSet(U0.grid(), t), U);
        values.push_back(phase_norm(Ut.u, Ut.v, pair.rho).total);
    }
    return detail::time_norm(values, T, q) / rhs;
}

/// Time-constant forcing f on [0, T]:
/// ||(omega, omega_t)||_{L^q(0,T; Y^rho)} / ||f||_{L^1(0,T; H^{mu-1})}.
/// omega is evaluated in closed form: f_hat (1 - cos sigma t)/sigma^2, f_hat t^2/2 at sigma = 0.
inline std::optional<double> strichartz_inhomogeneous_ratio(const Field& f, double q, double mu, double T,
                                                            int time_nodes = 129) {
    detail::check_window(T, time_nodes);
    const double rhs = T * h_norm(f, mu - 1.0);
    if (rhs == 0.0) return std::nullopt;
    const auto pair = strichartz_pair(q, mu);
    const SpectralField F = forward_transform(f);
    const auto mags = frequency_magnitudes(f.grid);
    std::vector<double> values;
    for (double t : uniform_nodes(T, static_cast<std::size_t>(time_nodes))) {
        SpectralField w(f.grid);
        SpectralField wt(f.grid);
        for (std::size_t i = 0; i < mags.size(); ++i) {
            const double s = mags[i];
            const double a = s < detail::kZeroFrequencyCutoff ? 0.5 * t * t : (1.0 - std::cos(s * t)) / (s * s);
            w.coeffs[i] = a * F.coeffs[i];
            wt.coeffs[i] = detail::multiplier_K(s, t) * F.coeffs[i];
        }
        values.push_back(phase_norm(w, wt, pair.rho).total);
    }
    return detail::time_norm(values, T, q) / rhs;
}

namespace detail {

inline std::vector<std::optional<double>> strichartz_h_run(const EnsembleSpec& spec, double q, double mu,
                                                           double T, int nodes) {
    EnsembleSpec pairs = spec;
    pairs.count = 2 * spec.count;
    const auto fields = generate_ensemble(pairs);
    std::vector<std::optional<double>> out;
    for (int i = 0; i < spec.count; ++i) {
        const State U0(remove_mean(fields[2 * i]), remove_mean(fields[2 * i + 1]));
        out.push_back(strichartz_homogeneous_ratio(U0, q, mu, T, nodes));
    }
    return out;
}

inline std::vector<std::optional<double>> strichartz_i_run(const EnsembleSpec& spec, double q, double mu,
                                                           double T, int nodes) {
    std::vector<std::optional<double>> out;
    for (const Field& f : generate_ensemble(spec)) {
        out.push_back(strichartz_inhomogeneous_ratio(f, q, mu, T, nodes));
    }
    return out;
}

template <typename Run>
EstimateReport strichartz_report(const std::string& name, const EnsembleSpec& spec, double q, double mu,
                                 double T, int nodes, Run run, double window_lo, double window_hi) {
    auto r = summarize(name, run(spec, q, mu, T, nodes));
    const auto doubled = summarize(name, run(spec, q, mu, 2.0 * T, 2 * nodes - 1));
    const auto fine = summarize(name, run(refined_spec(spec), q, mu, T, nodes));
    const auto pair = strichartz_pair(q, mu);
    r.parameters["q"] = format_double(q);
    r.parameters["mu"] = format_double(mu);
    r.parameters["rho"] = format_double(pair.rho);
    r.parameters["T_window"] = format_double(T);
    r.parameters["time_nodes"] = std::to_string(nodes);
    r.parameters["window_dependent"] = "true";
    r.parameters["doubled_window_ratio_max"] = format_double(doubled.ratio_max);
    record_refinement(r, fine.ratio_max);
    const double window_factor = doubled.ratio_max / r.ratio_max;
    r.parameters["window_factor"] = format_double(window_factor);
    r.pass = healthy(r) && healthy(doubled) && std::isfinite(window_factor) &&
             window_factor >= window_lo && window_factor <= window_hi &&
             within(fine.ratio_max, r.ratio_max, kRefinementTolerance);
    return r;
}

}  // namespace detail

/// Ensemble pairs (U0_i) = (field 2i, field 2i+1) with means removed; passes when
/// ratio_max moves by at most 30% as the window doubles and 20% under refinement.
inline EstimateReport verify_strichartz_homogeneous(const EnsembleSpec& spec, double q, double mu, double T,
                                                    int time_nodes = 129) {
    detail::check_window(T, time_nodes);
    return detail::strichartz_report("strichartz_homogeneous", spec, q, mu, T, time_nodes,
                                     detail::strichartz_h_run, 1.0 - kWindowTolerance,
                                     1.0 + kWindowTolerance);
}

/// Passes when ratio_max at 2T is within a factor 2 of ratio_max at T and moves by
/// at most 20% under refinement.
inline EstimateReport verify_strichartz_inhomogeneous(const EnsembleSpec& spec, double q, double mu, double T,
                                                      int time_nodes = 129) {
    detail::check_window(T, time_nodes);
    auto r = detail::strichartz_report("strichartz_inhomogeneous", spec, q, mu, T, time_nodes,
                                       detail::strichartz_i_run, 0.5, 2.0);
    r.parameters["dual_q_conjugate"] = "1";
    return r;
}

inline const std::vector<std::string>& verifier_names() {
    static const std::vector<std::string> names = {
        "gagliardo_nirenberg", "kernel_linf",           "power",
        "power_difference",    "product",               "strichartz_homogeneous",
        "strichartz_inhomogeneous"};
    return names;
}

}  // namespace awave
