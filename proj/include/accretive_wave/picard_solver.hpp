#pragma once

// Fixed-point solver for U_t - A U = (0, v|v|^{p-1}) written in Duhamel form
//   U(t) = H(t) U0 + L(U)(t),  L(U)(t) = (int_0^t K(t-s) v^p ds, int_0^t Kdot(t-s) v^p ds).
//
// A slab [t0, t0 + T] is discretized by M uniform nodes. Picard iterates start
// from the free flow H(tau_j) U0 and are compared in the sup over nodes of the
// Y^mu norm. Slabs are marched until the horizon, until the Y^mu norm crosses
// the blow-up threshold, or until the slab length underflows.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "accretive_wave/admissibility.hpp"
#include "accretive_wave/errors.hpp"
#include "accretive_wave/sobolev_norms.hpp"
#include "accretive_wave/spectral_core.hpp"
#include "accretive_wave/wave_propagators.hpp"

namespace awave {

struct SolverConfig {
    Grid grid;
    double p = 2.0;
    double mu = 1.0;
    double slab_T_init = 0.25;
    double slab_T_min = 1e-12;
    double picard_tol = 1e-10;
    int picard_max_iters = 50;
    int quad_nodes_M = 17;
    double blowup_threshold = 1e8;
    double horizon = 1.0;
    /// continue_to_tmax rejects a converged slab whose measured contraction
    /// ratio exceeds this bound; the ratio tracks T times the local Lipschitz
    /// constant of the nonlinearity and so bounds the time resolution.
    double max_contraction_ratio = 0.25;
    /// Run even when (p, mu, N) fails the admissibility conditions.
    bool override_admissibility = false;

    void validate() const {
        auto fail = [](const std::string& msg) { throw DomainError("solver config: " + msg); };
        if (!(p > 1.0) || !std::isfinite(p)) fail("p must exceed 1");
        if (!(mu >= 1.0)) fail("mu must be >= 1");
        if (!(horizon > 0.0)) fail("horizon must be positive");
        if (!(slab_T_min > 0.0)) fail("slab_T_min must be positive");
        if (!(slab_T_min < slab_T_init)) fail("slab_T_min must be below slab_T_init");
        if (!(slab_T_init <= horizon)) fail("slab_T_init must not exceed the horizon");
        if (!(picard_tol > 0.0)) fail("picard_tol must be positive");
        if (picard_max_iters < 1) fail("picard_max_iters must be >= 1");
        if (quad_nodes_M < 5 || quad_nodes_M % 2 == 0) fail("quad_nodes_M must be odd and >= 5");
        if (!(blowup_threshold > 0.0)) fail("blowup_threshold must be positive");
        if (!(max_contraction_ratio > 0.0 && max_contraction_ratio < 1.0)) {
            fail("max_contraction_ratio must lie in (0, 1)");
        }
    }
};

/// States at the nodes t0 + j T/(M-1) of one Picard interval.
struct TimeSlab {
    double t0 = 0.0;
    double T = 0.0;
    std::vector<State> nodes;

    double node_time(std::size_t j) const {
        return t0 + T * static_cast<double>(j) / static_cast<double>(nodes.size() - 1);
    }
};

struct SlabSolution {
    TimeSlab slab;
    int iterations = 0;
    /// d_{k+1} / d_k for successive Picard corrections.
    std::vector<double> ratios;
    /// d_k = max_j ||U^{k+1}(tau_j) - U^k(tau_j)||_{Y^mu}.
    std::vector<double> corrections;
    /// Largest ratio measured while corrections stayed well above the
    /// convergence floor (0 when the first iterate already converged).
    double contraction_estimate = 0.0;
};

enum class Outcome { ReachedHorizon, BlowupDetected, SlabUnderflow };

inline const char* to_string(Outcome o) noexcept {
    switch (o) {
        case Outcome::ReachedHorizon: return "ReachedHorizon";
        case Outcome::BlowupDetected: return "BlowupDetected";
        case Outcome::SlabUnderflow: return "SlabUnderflow";
    }
    return "?";
}

struct Snapshot {
    double t = 0.0;
    State state;
    PhaseNorm norm;
    double energy = 0.0;
    double linf_v = 0.0;
    double w1inf_u = 0.0;
    double spectral_tail = 0.0;
};

struct SlabRecord {
    double t0 = 0.0;
    double T = 0.0;
    int iterations = 0;
    double first_ratio = std::numeric_limits<double>::quiet_NaN();
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    Outcome outcome = Outcome::ReachedHorizon;
    /// Last node time still below the blow-up threshold; +inf unless blow-up was
    /// detected. The snapshot of the first node over the threshold follows it.
    double tmax_estimate = kInfinity;
    /// Slabs that converged, in order.
    std::vector<SlabRecord> slabs;
    int rejected_slabs = 0;
    /// First time the spectral tail exceeded 1% of the energy, if ever.
    std::optional<double> resolution_warning_time;
    bool admissible = true;
    std::string admissibility_reason;
};

inline constexpr double kResolutionTailLimit = 0.01;

namespace detail {

// Precomputed multipliers and quadrature data for one slab length.
class SlabOperator {
public:
    SlabOperator(const SolverConfig& cfg, double T)
        : grid_(cfg.grid),
          p_(cfg.p),
          mu_(cfg.mu),
          M_(static_cast<std::size_t>(cfg.quad_nodes_M)),
          T_(T) {
        const auto mags = frequency_magnitudes(grid_);
        const std::size_t n = mags.size();
        const std::size_t lags = 2 * (M_ - 1) + 1;
        half_step_ = T / static_cast<double>(2 * (M_ - 1));
        lag_K_.assign(lags, std::vector<double>(n));
        lag_Kdot_.assign(lags, std::vector<double>(n));
        lag_DeltaK_.assign(lags, std::vector<double>(n));
        for (std::size_t m = 0; m < lags; ++m) {
            const double tau = static_cast<double>(m) * half_step_;
            for (std::size_t i = 0; i < n; ++i) {
                lag_K_[m][i] = multiplier_K(mags[i], tau);
                lag_Kdot_[m][i] = multiplier_Kdot(mags[i], tau);
                lag_DeltaK_[m][i] = multiplier_DeltaK(mags[i], tau);
            }
        }
        weight_u_.resize(n);
        weight_v_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double base = 1.0 + mags[i] * mags[i];
            weight_u_[i] = std::pow(base, mu_);
            weight_v_[i] = std::pow(base, mu_ - 1.0);
        }
    }

    std::size_t nodes() const noexcept { return M_; }

    double phase_total(const SpectralState& U) const {
        double su = 0.0;
        double sv = 0.0;
        for (std::size_t i = 0; i < weight_u_.size(); ++i) {
            su += weight_u_[i] * std::norm(U.u.coeffs[i]);
            sv += weight_v_[i] * std::norm(U.v.coeffs[i]);
        }
        return std::sqrt(grid_.volume() * su) + std::sqrt(grid_.volume() * sv);
    }

    double phase_total_difference(const SpectralState& A, const SpectralState& B) const {
        double su = 0.0;
        double sv = 0.0;
        for (std::size_t i = 0; i < weight_u_.size(); ++i) {
            su += weight_u_[i] * std::norm(A.u.coeffs[i] - B.u.coeffs[i]);
            sv += weight_v_[i] * std::norm(A.v.coeffs[i] - B.v.coeffs[i]);
        }
        return std::sqrt(grid_.volume() * su) + std::sqrt(grid_.volume() * sv);
    }

    /// H(tau_j) U0 at every node; node 0 is U0 itself.
    std::vector<SpectralState> free_flow(const SpectralState& U0) const {
        std::vector<SpectralState> out;
        out.reserve(M_);
        out.push_back(U0);
        for (std::size_t j = 1; j < M_; ++j) {
            const std::size_t m = 2 * j;
            SpectralState s(grid_);
            for (std::size_t i = 0; i < grid_.size(); ++i) {
                s.u.coeffs[i] = lag_Kdot_[m][i] * U0.u.coeffs[i] + lag_K_[m][i] * U0.v.coeffs[i];
                s.v.coeffs[i] = lag_DeltaK_[m][i] * U0.u.coeffs[i] + lag_Kdot_[m][i] * U0.v.coeffs[i];
            }
            out.push_back(std::move(s));
        }
        return out;
    }

    /// Phi(U) = H U0 + L(U), given the free flow and the v-samples of U at the nodes.
    std::vector<SpectralState> apply(const std::vector<SpectralState>& free,
                                     const std::vector<Field>& v_nodes) const {
        std::vector<SpectralField> forcing;
        forcing.reserve(M_);
        for (const Field& v : v_nodes) forcing.push_back(forward_transform(pointwise_power(v, p_)));
        const auto half = half_node_forcing(forcing);

        std::vector<SpectralState> out;
        out.reserve(M_);
        out.push_back(free.front());
        for (std::size_t j = 1; j < M_; ++j) {
            SpectralState s = free[j];
            const std::size_t count = 2 * j + 1;
            for (std::size_t q = 0; q < count; ++q) {
                const double w = (q == 0 || q + 1 == count ? 1.0 : (q % 2 == 1 ? 4.0 : 2.0)) *
                                 half_step_ / 3.0;
                const auto& kk = lag_K_[2 * j - q];
                const auto& kd = lag_Kdot_[2 * j - q];
                const auto& f = half[q].coeffs;
                for (std::size_t i = 0; i < grid_.size(); ++i) {
                    s.u.coeffs[i] += (w * kk[i]) * f[i];
                    s.v.coeffs[i] += (w * kd[i]) * f[i];
                }
            }
            out.push_back(std::move(s));
        }
        return out;
    }

private:
    // Forcing at nodes and midpoints; midpoints by four-point cubic interpolation,
    // which keeps the nested Simpson sums fourth order.
    std::vector<SpectralField> half_node_forcing(const std::vector<SpectralField>& f) const {
        std::vector<SpectralField> half;
        half.reserve(2 * M_ - 1);
        for (std::size_t a = 0; a < M_; ++a) {
            half.push_back(f[a]);
            if (a + 1 == M_) break;
            std::size_t first;
            std::array<double, 4> w;
            if (a == 0) {
                first = 0;
                w = {5.0 / 16, 15.0 / 16, -5.0 / 16, 1.0 / 16};
            } else if (a + 2 == M_) {
                first = M_ - 4;
                w = {1.0 / 16, -5.0 / 16, 15.0 / 16, 5.0 / 16};
            } else {
                first = a - 1;
                w = {-1.0 / 16, 9.0 / 16, 9.0 / 16, -1.0 / 16};
            }
            SpectralField mid(grid_);
            for (std::size_t r = 0; r < 4; ++r) {
                const auto& c = f[first + r].coeffs;
                for (std::size_t i = 0; i < grid_.size(); ++i) mid.coeffs[i] += w[r] * c[i];
            }
            half.push_back(std::move(mid));
        }
        return half;
    }

    Grid grid_;
    double p_;
    double mu_;
    std::size_t M_;
    double T_;
    double half_step_ = 0.0;
    std::vector<std::vector<double>> lag_K_;
    std::vector<std::vector<double>> lag_Kdot_;
    std::vector<std::vector<double>> lag_DeltaK_;
    std::vector<double> weight_u_;
    std::vector<double> weight_v_;
};

inline std::vector<Field> v_samples(const std::vector<SpectralState>& nodes) {
    std::vector<Field> out;
    out.reserve(nodes.size());
    for (const auto& s : nodes) out.push_back(inverse_transform(s.v));
    return out;
}

inline TimeSlab to_slab(double t0, double T, const std::vector<SpectralState>& nodes,
                        const State& U0) {
    TimeSlab slab;
    slab.t0 = t0;
    slab.T = T;
    slab.nodes.reserve(nodes.size());
    slab.nodes.push_back(U0);
    for (std::size_t j = 1; j < nodes.size(); ++j) slab.nodes.push_back(nodes[j].to_state());
    return slab;
}

inline void check_slab_length(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw DomainError("slab length must be positive and finite");
    }
}

}  // namespace detail

/// One application of Phi: node j of the result is H(tau_j)U0 + L(U)(tau_j).
inline TimeSlab phi_map(const TimeSlab& slab, const State& U0, const SolverConfig& cfg) {
    detail::check_slab_length(slab.T);
    if (slab.nodes.size() != static_cast<std::size_t>(cfg.quad_nodes_M)) {
        throw QuadratureError("slab node count differs from quad_nodes_M");
    }
    const detail::SlabOperator op(cfg, slab.T);
    const auto free = op.free_flow(SpectralState::of(U0));
    std::vector<Field> v;
    v.reserve(slab.nodes.size());
    for (const auto& s : slab.nodes) v.push_back(s.v);
    return detail::to_slab(slab.t0, slab.T, op.apply(free, v), U0);
}

/// Slab whose nodes are the free flow H(tau_j) U0.
inline TimeSlab free_flow_slab(const State& U0, double t0, double T, const SolverConfig& cfg) {
    detail::check_slab_length(T);
    const detail::SlabOperator op(cfg, T);
    return detail::to_slab(t0, T, op.free_flow(SpectralState::of(U0)), U0);
}

/// Picard iteration U^{k+1} = Phi(U^k) from U^0 = H(.)U0 on [t0, t0 + T].
///
/// Converged when d_k < picard_tol * max(1, max_j ||U^{k+1}(tau_j)||). Throws
/// NonContraction after three consecutive ratios >= 1, a non-finite iterate, or
/// picard_max_iters iterations without convergence.
inline SlabSolution picard_solve_slab(const State& U0, double t0, double T, const SolverConfig& cfg) {
    detail::check_slab_length(T);
    const detail::SlabOperator op(cfg, T);
    const auto free = op.free_flow(SpectralState::of(U0));

    SlabSolution sol;
    std::vector<SpectralState> current = free;
    int expanding = 0;
    for (int k = 0; k < cfg.picard_max_iters; ++k) {
        auto next = op.apply(free, detail::v_samples(current));
        double d = 0.0;
        double scale = 0.0;
        for (std::size_t j = 1; j < next.size(); ++j) {
            d = std::max(d, op.phase_total_difference(next[j], current[j]));
            scale = std::max(scale, op.phase_total(next[j]));
        }
        if (!std::isfinite(d) || !std::isfinite(scale)) {
            throw NonContraction("Picard iterate became non-finite at iteration " +
                                 std::to_string(k + 1));
        }
        const double floor = cfg.picard_tol * std::max(1.0, scale);
        if (!sol.corrections.empty()) {
            const double ratio = d / sol.corrections.back();
            sol.ratios.push_back(ratio);
            expanding = ratio >= 1.0 ? expanding + 1 : 0;
            if (sol.ratios.size() == 1 || d > 100.0 * floor) {
                sol.contraction_estimate = std::max(sol.contraction_estimate, ratio);
            }
        }
        sol.corrections.push_back(d);
        current = std::move(next);
        if (d < floor) {
            sol.iterations = k + 1;
            sol.slab = detail::to_slab(t0, T, current, U0);
            return sol;
        }
        if (expanding >= 3) {
            throw NonContraction("Picard corrections grew for 3 consecutive iterations on T = " +
                                 std::to_string(T));
        }
    }
    throw NonContraction("Picard iteration did not converge within " +
                         std::to_string(cfg.picard_max_iters) + " iterations on T = " +
                         std::to_string(T));
}

inline Snapshot make_snapshot(double t, const State& U, double mu) {
    const auto u_hat = forward_transform(U.u);
    const auto v_hat = forward_transform(U.v);
    const SpectralField* spectra[] = {&u_hat, &v_hat};
    return Snapshot{t,
                    U,
                    phase_norm(u_hat, v_hat, mu),
                    linear_energy(u_hat, v_hat),
                    linf_norm(U.v),
                    w1inf_norm(U.u),
                    spectral_tail_fraction(spectra)};
}

/// Marches Picard slabs from U0 until the horizon, blow-up, or slab underflow.
/// Throws NotAdmissible when (p, mu, N) fails the admissibility conditions and
/// cfg.override_admissibility is not set.
inline Trajectory continue_to_tmax(const State& U0, const SolverConfig& cfg) {
    cfg.validate();
    if (!(U0.grid() == cfg.grid)) throw DomainError("initial data grid differs from config grid");
    if (!U0.is_finite()) throw DomainError("initial data must be finite");

    Trajectory traj;
    const auto decision = check_admissible(natural_theorem(cfg.p), cfg.mu, cfg.p, cfg.grid.dim());
    traj.admissible = decision.admissible;
    traj.admissibility_reason = decision.reason;
    if (!decision.admissible && !cfg.override_admissibility) {
        throw NotAdmissible("parameters not admissible: " + decision.reason);
    }

    traj.snapshots.push_back(make_snapshot(0.0, U0, cfg.mu));
    if (!(traj.snapshots.back().norm.total < cfg.blowup_threshold)) {
        throw DomainError("initial phase norm already exceeds the blow-up threshold");
    }

    double t = 0.0;
    double T = cfg.slab_T_init;
    State U = U0;
    const double end_tol = 1e-12 * cfg.horizon;
    while (cfg.horizon - t > end_tol) {
        const double remaining = cfg.horizon - t;
        const bool final_piece = T >= remaining;
        const double T_try = final_piece ? remaining : T;

        SlabSolution sol;
        bool accepted = true;
        try {
            sol = picard_solve_slab(U, t, T_try, cfg);
            accepted = sol.contraction_estimate <= cfg.max_contraction_ratio;
        } catch (const NonContraction&) {
            accepted = false;
        }
        if (!accepted) {
            ++traj.rejected_slabs;
            T = T_try / 2.0;
            if (T < cfg.slab_T_min) {
                traj.outcome = Outcome::SlabUnderflow;
                return traj;
            }
            continue;
        }

        traj.slabs.push_back(SlabRecord{t, T_try, sol.iterations,
                                        sol.ratios.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                           : sol.ratios.front()});
        for (std::size_t j = 1; j < sol.slab.nodes.size(); ++j) {
            const auto norm = phase_norm(sol.slab.nodes[j], cfg.mu);
            if (!(norm.total < cfg.blowup_threshold)) {
                if (j > 1) {
                    traj.snapshots.push_back(
                        make_snapshot(sol.slab.node_time(j - 1), sol.slab.nodes[j - 1], cfg.mu));
                }
                traj.outcome = Outcome::BlowupDetected;
                traj.tmax_estimate = traj.snapshots.back().t;
                traj.snapshots.push_back(
                    make_snapshot(sol.slab.node_time(j), sol.slab.nodes[j], cfg.mu));
                return traj;
            }
        }

        t = final_piece ? cfg.horizon : t + T_try;
        U = sol.slab.nodes.back();
        traj.snapshots.push_back(make_snapshot(t, U, cfg.mu));
        if (!traj.resolution_warning_time &&
            traj.snapshots.back().spectral_tail > kResolutionTailLimit) {
            traj.resolution_warning_time = t;
        }
        // The ratio scales roughly linearly with T; grow only with headroom.
        if (sol.contraction_estimate < 0.25 * cfg.max_contraction_ratio) {
            T = std::min(2.0 * T, cfg.slab_T_init);
        }
    }
    traj.outcome = Outcome::ReachedHorizon;
    return traj;
}

/// Largest T with C T^eps (lambda + ||U0||)^p <= lambda and
/// C T^eps (lambda + ||U0||)^{p-1} < 1, times a safety factor 1/2.
inline double suggest_slab_T(double U0_norm, double lambda, double eps, double C_emp, double p) {
    if (!(eps > 0.0)) throw DomainError("suggest_slab_T requires eps > 0");
    if (!(lambda > 0.0) || !(C_emp > 0.0) || !(U0_norm >= 0.0) || !(p > 1.0)) {
        throw DomainError("suggest_slab_T requires lambda, C > 0, ||U0|| >= 0, p > 1");
    }
    const double base = lambda + U0_norm;
    const double invariance = std::pow(lambda / (C_emp * std::pow(base, p)), 1.0 / eps);
    const double contraction = std::pow(1.0 / (C_emp * std::pow(base, p - 1.0)), 1.0 / eps);
    return 0.5 * std::min(invariance, contraction);
}

}  // namespace awave
