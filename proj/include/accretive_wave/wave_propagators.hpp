#pragma once

// Free wave flow as exact-in-time Fourier multipliers, with sigma = |xi|:
//   K(t) = sin(sigma t) / sigma,  Kdot(t) = cos(sigma t),  Delta K(t) = -sigma sin(sigma t).
// H(t)(u0, v0) = (Kdot u0 + K v0, DeltaK u0 + Kdot v0).

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "accretive_wave/errors.hpp"
#include "accretive_wave/sobolev_norms.hpp"
#include "accretive_wave/spectral_core.hpp"

namespace awave {

namespace detail {

// Below this |xi| the sin(sigma t)/sigma multiplier is replaced by its limit t.
inline constexpr double kZeroFrequencyCutoff = 1e-8;

inline double multiplier_K(double xi, double t) noexcept {
    return xi < kZeroFrequencyCutoff ? t : std::sin(xi * t) / xi;
}
inline double multiplier_Kdot(double xi, double t) noexcept { return std::cos(xi * t); }
inline double multiplier_DeltaK(double xi, double t) noexcept { return -xi * std::sin(xi * t); }

inline void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("propagators are defined for finite t >= 0, got " + std::to_string(t));
    }
}

}  // namespace detail

struct PropagatorSet {
    Grid grid;
    double t;
    std::vector<double> m_K;
    std::vector<double> m_Kdot;
    std::vector<double> m_DeltaK;

    PropagatorSet(const Grid& g, double time) : grid(g), t(time) {
        detail::check_time(time);
        const auto mags = frequency_magnitudes(g);
        m_K.resize(mags.size());
        m_Kdot.resize(mags.size());
        m_DeltaK.resize(mags.size());
        for (std::size_t i = 0; i < mags.size(); ++i) {
            m_K[i] = detail::multiplier_K(mags[i], time);
            m_Kdot[i] = detail::multiplier_Kdot(mags[i], time);
            m_DeltaK[i] = detail::multiplier_DeltaK(mags[i], time);
        }
    }
};

inline SpectralField apply_multiplier(const std::vector<double>& m, const SpectralField& F) {
    SpectralField out(F.grid);
    for (std::size_t i = 0; i < m.size(); ++i) out.coeffs[i] = m[i] * F.coeffs[i];
    return out;
}

inline Field apply_K(double t, const Field& g) {
    detail::check_time(t);
    if (t == 0.0) return Field(g.grid);
    const PropagatorSet P(g.grid, t);
    return inverse_transform(apply_multiplier(P.m_K, forward_transform(g)));
}

inline Field apply_Kdot(double t, const Field& f) {
    detail::check_time(t);
    if (t == 0.0) return f;
    const PropagatorSet P(f.grid, t);
    return inverse_transform(apply_multiplier(P.m_Kdot, forward_transform(f)));
}

inline Field apply_DeltaK(double t, const Field& f) {
    detail::check_time(t);
    if (t == 0.0) return Field(f.grid);
    const PropagatorSet P(f.grid, t);
    return inverse_transform(apply_multiplier(P.m_DeltaK, forward_transform(f)));
}

/// Spectral pair (u_hat, v_hat).
struct SpectralState {
    SpectralField u;
    SpectralField v;

    explicit SpectralState(const Grid& g) : u(g), v(g) {}
    SpectralState(SpectralField u_, SpectralField v_) : u(std::move(u_)), v(std::move(v_)) {}

    static SpectralState of(const State& U) {
        return SpectralState(forward_transform(U.u), forward_transform(U.v));
    }
    State to_state() const { return State(inverse_transform(u), inverse_transform(v)); }
};

inline SpectralState homogeneous_solution(const PropagatorSet& P, const SpectralState& U0) {
    SpectralState out(P.grid);
    for (std::size_t i = 0; i < P.m_K.size(); ++i) {
        out.u.coeffs[i] = P.m_Kdot[i] * U0.u.coeffs[i] + P.m_K[i] * U0.v.coeffs[i];
        out.v.coeffs[i] = P.m_DeltaK[i] * U0.u.coeffs[i] + P.m_Kdot[i] * U0.v.coeffs[i];
    }
    return out;
}

/// H(t) U0; returns U0 unchanged at t = 0.
inline State homogeneous_solution(double t, const State& U0) {
    detail::check_time(t);
    if (t == 0.0) return U0;
    const PropagatorSet P(U0.grid(), t);
    return homogeneous_solution(P, SpectralState::of(U0)).to_state();
}

/// Composite Simpson weights for `count` (odd, >= 3) uniform nodes of spacing h.
inline std::vector<double> simpson_weights(std::size_t count, double h) {
    if (count < 3 || count % 2 == 0) {
        throw QuadratureError("Simpson rule needs an odd node count >= 3, got " +
                              std::to_string(count));
    }
    std::vector<double> w(count);
    for (std::size_t i = 0; i < count; ++i) {
        w[i] = (i == 0 || i + 1 == count) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        w[i] *= h / 3.0;
    }
    return w;
}

/// (omega(t), omega_t(t)) = (int_0^t K(t-s) f(s) ds, int_0^t Kdot(t-s) f(s) ds)
/// by composite Simpson over the forcing samples, with exact multipliers.
inline SpectralState duhamel_integral(double t, const std::vector<double>& nodes,
                                      const std::vector<SpectralField>& forcing) {
    detail::check_time(t);
    if (nodes.size() != forcing.size() || forcing.empty()) {
        throw QuadratureError("forcing samples and nodes differ in count");
    }
    const Grid& g = forcing.front().grid;
    SpectralState out(g);
    if (t == 0.0 && nodes.size() == 1) return out;

    const std::size_t count = nodes.size();
    if (count % 2 == 0 || count < 3) {
        throw QuadratureError("Duhamel quadrature needs an odd node count >= 3, got " +
                              std::to_string(count));
    }
    const double h = t / static_cast<double>(count - 1);
    const double tol = 1e-12 * std::max(1.0, t);
    for (std::size_t j = 0; j < count; ++j) {
        if (std::abs(nodes[j] - static_cast<double>(j) * h) > tol) {
            throw QuadratureError("Duhamel nodes must partition [0, t] uniformly");
        }
    }
    const auto w = simpson_weights(count, h);
    const auto mags = frequency_magnitudes(g);
    for (std::size_t j = 0; j < count; ++j) {
        const double lag = t - nodes[j];
        const auto& fj = forcing[j].coeffs;
        for (std::size_t i = 0; i < mags.size(); ++i) {
            out.u.coeffs[i] += w[j] * detail::multiplier_K(mags[i], lag) * fj[i];
            out.v.coeffs[i] += w[j] * detail::multiplier_Kdot(mags[i], lag) * fj[i];
        }
    }
    return out;
}

/// Field-valued front end: forcing given as (s_j, f_j) pairs.
inline State duhamel_integral(double t, const std::vector<std::pair<double, Field>>& forcing_at_nodes) {
    if (forcing_at_nodes.empty()) throw QuadratureError("no forcing samples");
    std::vector<double> nodes;
    std::vector<SpectralField> spectra;
    nodes.reserve(forcing_at_nodes.size());
    spectra.reserve(forcing_at_nodes.size());
    for (const auto& [s, f] : forcing_at_nodes) {
        nodes.push_back(s);
        spectra.push_back(forward_transform(f));
    }
    return duhamel_integral(t, nodes, spectra).to_state();
}

/// Uniform nodes j * t / (count - 1), j = 0..count-1.
inline std::vector<double> uniform_nodes(double t, std::size_t count) {
    std::vector<double> nodes(count);
    for (std::size_t j = 0; j < count; ++j) {
        nodes[j] = count == 1 ? 0.0 : static_cast<double>(j) * t / static_cast<double>(count - 1);
    }
    return nodes;
}

}  // namespace awave
