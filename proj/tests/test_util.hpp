#pragma once

#include <random>

#include "accretive_wave/spectral_core.hpp"

namespace awave::testing {

// White-noise field smoothed by a Gaussian filter; independent of the library's
// ensemble generator.
inline Field smooth_random_field(const Grid& g, std::uint64_t seed, double amplitude = 1.0,
                                 double smoothing = 0.05) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Field noise(g);
    for (auto& x : noise.values) x = normal(rng);
    SpectralField F = forward_transform(noise);
    const auto mags = frequency_magnitudes(g);
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
        if (g.has_nyquist_component(i)) {
            F.coeffs[i] = 0.0;
            continue;
        }
        F.coeffs[i] *= std::exp(-smoothing * mags[i] * mags[i]);
    }
    Field f = inverse_transform(F);
    return amplitude * f;
}

inline Field white_noise(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Field f(g);
    for (auto& x : f.values) x = normal(rng);
    return f;
}

inline double relative_l2_difference(const Field& a, const Field& b) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        num += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
        den += b.values[i] * b.values[i];
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

inline double max_abs_difference(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    }
    return m;
}

}  // namespace awave::testing
