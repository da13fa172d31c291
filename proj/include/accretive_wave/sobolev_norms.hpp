#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "accretive_wave/errors.hpp"
#include "accretive_wave/spectral_core.hpp"

namespace awave {

/// Phase-space point U = (u, u_t).
struct State {
    Field u;
    Field v;

    State(Field u_, Field v_) : u(std::move(u_)), v(std::move(v_)) {
        if (!(u.grid == v.grid)) throw DomainError("state components live on different grids");
    }
    static State zero(const Grid& g) { return State(Field(g), Field(g)); }

    const Grid& grid() const noexcept { return u.grid; }
    bool is_finite() const noexcept { return u.is_finite() && v.is_finite(); }

    friend State operator-(const State& a, const State& b) { return State(a.u - b.u, a.v - b.v); }
    friend State operator+(const State& a, const State& b) { return State(a.u + b.u, a.v + b.v); }
    friend State operator*(double c, const State& a) { return State(c * a.u, c * a.v); }
};

/// Norm in Y^mu = H^mu x H^{mu-1}: total = ||u||_{H^mu} + ||v||_{H^{mu-1}}.
struct PhaseNorm {
    double u_norm = 0.0;
    double v_norm = 0.0;
    double total = 0.0;
    double order = 1.0;
};

/// Continuous L2 norm over the torus.
inline double l2_norm(const Field& f) {
    double sum = 0.0;
    for (double x : f.values) sum += x * x;
    return std::sqrt(f.grid.cell_volume() * sum);
}

/// (sum_k (1 + |xi_k|^2)^s |c_k|^2 * (2L)^dim)^{1/2}.
inline double h_norm(const SpectralField& F, double s) {
    const auto mags = frequency_magnitudes(F.grid);
    double sum = 0.0;
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
        const double c2 = std::norm(F.coeffs[i]);
        if (c2 == 0.0) continue;
        sum += (s == 0.0 ? 1.0 : std::pow(1.0 + mags[i] * mags[i], s)) * c2;
    }
    return std::sqrt(F.grid.volume() * sum);
}

inline double h_norm(const Field& f, double s) { return h_norm(forward_transform(f), s); }

/// Homogeneous seminorm with multiplier |xi|^{2s}; the k = 0 mode contributes 0.
/// Negative s is only defined for mean-zero fields.
inline double homogeneous_seminorm(const SpectralField& F, double s) {
    const double mean = std::abs(F.coeffs[0]);
    if (s < 0.0) {
        double scale = 0.0;
        for (const auto& c : F.coeffs) scale = std::max(scale, std::abs(c));
        if (mean > 1e-12 * scale && mean > 0.0) {
            throw MeanNotZero("homogeneous seminorm of negative order " + std::to_string(s) +
                              " needs a mean-zero field");
        }
    }
    const auto mags = frequency_magnitudes(F.grid);
    double sum = 0.0;
    for (std::size_t i = 1; i < F.coeffs.size(); ++i) {
        sum += std::pow(mags[i], 2.0 * s) * std::norm(F.coeffs[i]);
    }
    return std::sqrt(F.grid.volume() * sum);
}

inline double homogeneous_seminorm(const Field& f, double s) {
    return homogeneous_seminorm(forward_transform(f), s);
}

/// Gagliardo double integral seminorm on a 1D periodic grid,
///   ( sum_{i != j} h^2 (f_i - f_j)^2 / d_ij^{1 + 2s} )^{1/2},
/// with d_ij the minimum-image distance. Cost O(n^2).
inline double gagliardo_seminorm(const Field& f, double s) {
    const Grid& g = f.grid;
    if (g.dim() != 1) {
        throw UnsupportedDim("gagliardo_seminorm is implemented for 1D grids only");
    }
    if (!(s > 0.0 && s < 1.0)) {
        throw DomainError("gagliardo_seminorm requires s in (0, 1), got " + std::to_string(s));
    }
    const std::size_t n = g.n_per_axis();
    const double h = g.spacing();
    // Kernel depends on the index offset only.
    std::vector<double> kernel(n, 0.0);
    for (std::size_t m = 1; m < n; ++m) {
        const double d = h * static_cast<double>(std::min(m, n - m));
        kernel[m] = 1.0 / std::pow(d, 1.0 + 2.0 * s);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double diff = f.values[i] - f.values[j];
            sum += diff * diff * kernel[i > j ? i - j : j - i];
        }
    }
    return std::sqrt(h * h * sum);
}

inline double linf_norm(const Field& f) {
    double m = 0.0;
    for (double x : f.values) m = std::max(m, std::abs(x));
    return m;
}

/// max|f| + max over axes of max|d_a f|, derivatives computed spectrally.
inline double w1inf_norm(const Field& f) {
    const SpectralField F = forward_transform(f);
    double grad = 0.0;
    for (int a = 0; a < f.grid.dim(); ++a) {
        MultiIndex alpha{0, 0, 0};
        alpha[static_cast<std::size_t>(a)] = 1;
        grad = std::max(grad, linf_norm(inverse_transform(differentiate(F, alpha))));
    }
    return linf_norm(f) + grad;
}

inline PhaseNorm phase_norm(const SpectralField& u_hat, const SpectralField& v_hat, double mu) {
    PhaseNorm n;
    n.order = mu;
    n.u_norm = h_norm(u_hat, mu);
    n.v_norm = h_norm(v_hat, mu - 1.0);
    n.total = n.u_norm + n.v_norm;
    return n;
}

inline PhaseNorm phase_norm(const State& U, double mu) {
    return phase_norm(forward_transform(U.u), forward_transform(U.v), mu);
}

/// Spectral energy 1/2 int (v^2 + |grad u|^2) of the linear wave flow.
inline double linear_energy(const SpectralField& u_hat, const SpectralField& v_hat) {
    const auto mags = frequency_magnitudes(u_hat.grid);
    double sum = 0.0;
    for (std::size_t i = 0; i < mags.size(); ++i) {
        sum += std::norm(v_hat.coeffs[i]) + mags[i] * mags[i] * std::norm(u_hat.coeffs[i]);
    }
    return 0.5 * u_hat.grid.volume() * sum;
}

inline double linear_energy(const State& U) {
    return linear_energy(forward_transform(U.u), forward_transform(U.v));
}

}  // namespace awave
