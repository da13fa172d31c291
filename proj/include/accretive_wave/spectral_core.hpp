#pragma once

// Periodic grids, Fourier transforms and the pointwise signed-power nonlinearity.
//
// Coefficients use the Fourier-series normalization: c_k = mean(f e^{-i xi_k x}),
// so the k = 0 coefficient is the mean of the field and f = sum_k c_k e^{i xi_k x}.
// Continuous L2 norms over the torus [-L, L)^dim are then
//   ||f||^2 = h^dim sum_j |f_j|^2 = (2L)^dim sum_k |c_k|^2.

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "accretive_wave/errors.hpp"

namespace awave {

using Complex = std::complex<double>;
using MultiIndex = std::array<long, 3>;

/// Uniform periodic grid on [-L, L)^dim with n points per axis.
class Grid {
public:
    Grid(int dim, std::size_t n_per_axis, double half_length)
        : dim_(dim), n_(n_per_axis), half_length_(half_length) {
        if (dim < 1 || dim > 3) {
            throw UnsupportedDim("grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
        }
        if (n_per_axis < 16 || (n_per_axis & (n_per_axis - 1)) != 0) {
            throw DomainError("points per axis must be a power of two >= 16, got " +
                              std::to_string(n_per_axis));
        }
        if (!(half_length > 0.0) || !std::isfinite(half_length)) {
            throw DomainError("half length must be positive and finite");
        }
        total_ = 1;
        for (int a = 0; a < dim_; ++a) total_ *= n_;
    }

    int dim() const noexcept { return dim_; }
    std::size_t n_per_axis() const noexcept { return n_; }
    double half_length() const noexcept { return half_length_; }
    std::size_t size() const noexcept { return total_; }

    double spacing() const noexcept { return 2.0 * half_length_ / static_cast<double>(n_); }
    double cell_volume() const noexcept { return std::pow(spacing(), dim_); }
    double volume() const noexcept { return std::pow(2.0 * half_length_, dim_); }

    /// Fundamental wavenumber pi / L.
    double base_frequency() const noexcept { return std::numbers::pi / half_length_; }

    /// Signed lattice index in [-n/2, n/2) for storage position j along an axis.
    long wavenumber(std::size_t j) const noexcept {
        const auto half = static_cast<long>(n_ / 2);
        const auto jj = static_cast<long>(j);
        return jj < half ? jj : jj - static_cast<long>(n_);
    }

    /// Storage position along an axis of signed lattice index k (taken modulo n).
    std::size_t position(long k) const noexcept {
        const auto n = static_cast<long>(n_);
        return static_cast<std::size_t>(((k % n) + n) % n);
    }

    double coordinate(std::size_t j) const noexcept {
        return -half_length_ + static_cast<double>(j) * spacing();
    }

    /// Per-axis storage positions of a flat row-major index (axis 0 slowest).
    std::array<std::size_t, 3> unflatten(std::size_t flat) const noexcept {
        std::array<std::size_t, 3> pos{0, 0, 0};
        for (int a = dim_ - 1; a >= 0; --a) {
            pos[static_cast<std::size_t>(a)] = flat % n_;
            flat /= n_;
        }
        return pos;
    }

    std::size_t flatten(const std::array<std::size_t, 3>& pos) const noexcept {
        std::size_t flat = 0;
        for (int a = 0; a < dim_; ++a) flat = flat * n_ + pos[static_cast<std::size_t>(a)];
        return flat;
    }

    MultiIndex lattice_index(std::size_t flat) const noexcept {
        const auto pos = unflatten(flat);
        MultiIndex k{0, 0, 0};
        for (int a = 0; a < dim_; ++a) {
            k[static_cast<std::size_t>(a)] = wavenumber(pos[static_cast<std::size_t>(a)]);
        }
        return k;
    }

    /// Flat index of lattice site -k.
    std::size_t mirror(std::size_t flat) const noexcept {
        const auto k = lattice_index(flat);
        std::array<std::size_t, 3> pos{0, 0, 0};
        for (int a = 0; a < dim_; ++a) {
            pos[static_cast<std::size_t>(a)] = position(-k[static_cast<std::size_t>(a)]);
        }
        return flatten(pos);
    }

    bool has_nyquist_component(std::size_t flat) const noexcept {
        const auto k = lattice_index(flat);
        const auto nyq = -static_cast<long>(n_ / 2);
        for (int a = 0; a < dim_; ++a) {
            if (k[static_cast<std::size_t>(a)] == nyq) return true;
        }
        return false;
    }

    /// Same domain, n scaled by `factor` (a power of two).
    Grid refined(std::size_t factor) const { return Grid(dim_, n_ * factor, half_length_); }

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.dim_ == b.dim_ && a.n_ == b.n_ && a.half_length_ == b.half_length_;
    }

private:
    int dim_;
    std::size_t n_;
    double half_length_;
    std::size_t total_ = 1;
};

/// Real function on a grid, sample representation.
struct Field {
    Grid grid;
    std::vector<double> values;

    explicit Field(Grid g) : grid(g), values(g.size(), 0.0) {}
    Field(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size()) throw DomainError("field size does not match grid");
    }

    static Field constant(Grid g, double c) { return Field(g, std::vector<double>(g.size(), c)); }

    bool is_finite() const noexcept {
        return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
    }

    Field& operator+=(const Field& o) {
        check_same(o);
        for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
        return *this;
    }
    Field& operator-=(const Field& o) {
        check_same(o);
        for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
        return *this;
    }
    Field& operator*=(double c) noexcept {
        for (auto& x : values) x *= c;
        return *this;
    }

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(double c, Field a) { return a *= c; }
    friend Field operator-(Field a) { return a *= -1.0; }

private:
    void check_same(const Field& o) const {
        if (!(grid == o.grid)) throw DomainError("fields live on different grids");
    }
};

/// Fourier coefficients of a real field, indexed like the sample array.
struct SpectralField {
    Grid grid;
    std::vector<Complex> coeffs;

    explicit SpectralField(Grid g) : grid(g), coeffs(g.size(), Complex{}) {}
    SpectralField(Grid g, std::vector<Complex> c) : grid(g), coeffs(std::move(c)) {
        if (coeffs.size() != grid.size()) throw DomainError("spectrum size does not match grid");
    }

    /// Largest |c(-k) - conj(c(k))| over the lattice.
    double hermitian_defect() const {
        double defect = 0.0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            defect = std::max(defect, std::abs(coeffs[grid.mirror(i)] - std::conj(coeffs[i])));
        }
        return defect;
    }
};

/// Samples fn(x) at every grid point; x is the coordinate triple (unused axes are 0).
template <typename Fn>
Field sample(const Grid& g, Fn&& fn) {
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto pos = g.unflatten(i);
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = 0; a < g.dim(); ++a) {
            x[static_cast<std::size_t>(a)] = g.coordinate(pos[static_cast<std::size_t>(a)]);
        }
        f.values[i] = fn(x);
    }
    return f;
}

namespace detail {

// FFTW planning is not thread-safe; execution on new arrays is. Plans are
// created once per (dim, n, direction) under a lock and reused.
class FftPlans {
public:
    static FftPlans& instance() {
        static FftPlans plans;
        return plans;
    }

    fftw_plan get(int dim, std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(dim, n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        std::size_t total = 1;
        std::array<int, 3> dims{1, 1, 1};
        for (int a = 0; a < dim; ++a) {
            dims[static_cast<std::size_t>(a)] = static_cast<int>(n);
            total *= n;
        }
        auto* in = fftw_alloc_complex(total);
        auto* out = fftw_alloc_complex(total);
        fftw_plan plan = fftw_plan_dft(dim, dims.data(), in, out, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, plan);
        return plan;
    }

    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;

private:
    FftPlans() = default;
    ~FftPlans() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<std::tuple<int, std::size_t, int>, fftw_plan> plans_;
};

inline void execute(const Grid& g, int sign, std::span<const Complex> in, std::span<Complex> out) {
    fftw_plan plan = FftPlans::instance().get(g.dim(), g.n_per_axis(), sign);
    // FFTW does not modify the input of an out-of-place complex transform.
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace detail

namespace detail {

// Samples sit at x_j = -L + j h, so coefficients relative to x pick up the
// phase e^{i xi_k L} = (-1)^{k_1 + ... + k_dim} against the raw DFT.
inline double origin_phase(const Grid& g, std::size_t flat) noexcept {
    const auto k = g.lattice_index(flat);
    long sum = 0;
    for (int a = 0; a < g.dim(); ++a) sum += k[static_cast<std::size_t>(a)];
    return (sum % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace detail

inline SpectralField forward_transform(const Field& f) {
    std::vector<Complex> in(f.values.begin(), f.values.end());
    SpectralField out(f.grid);
    detail::execute(f.grid, FFTW_FORWARD, in, out.coeffs);
    const double scale = 1.0 / static_cast<double>(f.grid.size());
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
        out.coeffs[i] *= scale * detail::origin_phase(f.grid, i);
    }
    return out;
}

/// Throws SymmetryViolation when the imaginary part of the synthesized samples
/// exceeds 1e-10 relative to the largest real sample.
inline Field inverse_transform(const SpectralField& F) {
    std::vector<Complex> in(F.coeffs);
    for (std::size_t i = 0; i < in.size(); ++i) in[i] *= detail::origin_phase(F.grid, i);
    std::vector<Complex> out(F.grid.size());
    detail::execute(F.grid, FFTW_BACKWARD, in, out);
    Field f(F.grid);
    double max_real = 0.0;
    double max_imag = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        f.values[i] = out[i].real();
        max_real = std::max(max_real, std::abs(out[i].real()));
        max_imag = std::max(max_imag, std::abs(out[i].imag()));
    }
    if (max_imag > 1e-10 * max_real && max_imag > 1e-300) {
        throw SymmetryViolation("inverse transform imaginary residue " + std::to_string(max_imag) +
                                " exceeds 1e-10 relative to " + std::to_string(max_real));
    }
    return f;
}

/// |xi_k| = (pi / L) |k| at every lattice site, in storage order.
inline std::vector<double> frequency_magnitudes(const Grid& g) {
    std::vector<double> mags(g.size());
    const double base = g.base_frequency();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto k = g.lattice_index(i);
        double k2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const auto ka = static_cast<double>(k[static_cast<std::size_t>(a)]);
            k2 += ka * ka;
        }
        mags[i] = base * std::sqrt(k2);
    }
    return mags;
}

/// Spectral derivative D^alpha. Odd-order derivatives drop the Nyquist modes,
/// which have no real-valued derivative on the grid.
inline SpectralField differentiate(const SpectralField& F, const MultiIndex& alpha) {
    const Grid& g = F.grid;
    SpectralField out(g);
    const double base = g.base_frequency();
    const auto nyq = -static_cast<long>(g.n_per_axis() / 2);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto k = g.lattice_index(i);
        Complex factor{1.0, 0.0};
        for (int a = 0; a < g.dim(); ++a) {
            const auto ua = static_cast<std::size_t>(a);
            if (alpha[ua] == 0) continue;
            if (k[ua] == nyq && alpha[ua] % 2 == 1) {
                factor = 0.0;
                break;
            }
            const Complex ixi{0.0, base * static_cast<double>(k[ua])};
            for (long r = 0; r < alpha[ua]; ++r) factor *= ixi;
        }
        out.coeffs[i] = factor * F.coeffs[i];
    }
    return out;
}

inline Field differentiate(const Field& f, const MultiIndex& alpha) {
    return inverse_transform(differentiate(forward_transform(f), alpha));
}

inline Field derivative(const Field& f, int axis) {
    MultiIndex alpha{0, 0, 0};
    alpha.at(static_cast<std::size_t>(axis)) = 1;
    return differentiate(f, alpha);
}

/// Fraction of spectral energy held by modes with some |k_a| > n/3.
inline double spectral_tail_fraction(std::span<const SpectralField* const> spectra) {
    double total = 0.0;
    double tail = 0.0;
    for (const SpectralField* F : spectra) {
        const Grid& g = F->grid;
        const double cutoff = static_cast<double>(g.n_per_axis()) / 3.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double e = std::norm(F->coeffs[i]);
            total += e;
            const auto k = g.lattice_index(i);
            for (int a = 0; a < g.dim(); ++a) {
                if (std::abs(static_cast<double>(k[static_cast<std::size_t>(a)])) > cutoff) {
                    tail += e;
                    break;
                }
            }
        }
    }
    return total > 0.0 ? tail / total : 0.0;
}

inline bool is_odd_integer(double p) noexcept {
    return std::floor(p) == p && std::fmod(p, 2.0) == 1.0;
}

/// Zero-padding factor (power of two) that makes the degree-p product alias-free.
inline std::size_t dealias_factor(double p) {
    const auto need = static_cast<std::size_t>(std::ceil((p + 1.0) / 2.0));
    std::size_t factor = 1;
    while (factor < need) factor *= 2;
    return factor;
}

namespace detail {

inline double signed_power(double v, double p) noexcept {
    return v * std::pow(std::abs(v), p - 1.0);
}

// Copies lattice modes with |k_a| < n/2 between two grids over the same domain;
// Nyquist modes of the smaller grid are left at zero.
inline void copy_common_modes(const SpectralField& from, SpectralField& to) {
    const Grid& small = from.grid.size() < to.grid.size() ? from.grid : to.grid;
    const auto half = static_cast<long>(small.n_per_axis() / 2);
    for (std::size_t i = 0; i < small.size(); ++i) {
        const auto k = small.lattice_index(i);
        bool keep = true;
        for (int a = 0; a < small.dim(); ++a) {
            if (std::abs(k[static_cast<std::size_t>(a)]) >= half) keep = false;
        }
        if (!keep) continue;
        auto locate = [&](const Grid& g) {
            std::array<std::size_t, 3> pos{0, 0, 0};
            for (int a = 0; a < g.dim(); ++a) {
                pos[static_cast<std::size_t>(a)] = g.position(k[static_cast<std::size_t>(a)]);
            }
            return g.flatten(pos);
        };
        to.coeffs[locate(to.grid)] = from.coeffs[locate(from.grid)];
    }
}

}  // namespace detail

/// Signed power v |v|^{p-1}.
///
/// For odd integer p the nonlinearity is the polynomial v^p, computed on a
/// zero-padded grid and truncated back, so the result carries no aliased modes
/// (and no Nyquist mode). For every other p > 1 it is evaluated pointwise on the
/// base grid; its aliasing error is controlled by resolution only.
inline Field pointwise_power(const Field& v, double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw DomainError("pointwise_power requires p > 1, got " + std::to_string(p));
    }
    if (!is_odd_integer(p)) {
        Field out(v.grid);
        for (std::size_t i = 0; i < v.values.size(); ++i) {
            out.values[i] = detail::signed_power(v.values[i], p);
        }
        return out;
    }

    const Grid padded = v.grid.refined(dealias_factor(p));
    SpectralField wide(padded);
    detail::copy_common_modes(forward_transform(v), wide);
    Field fine = inverse_transform(wide);
    for (auto& x : fine.values) x = detail::signed_power(x, p);
    SpectralField narrow(v.grid);
    detail::copy_common_modes(forward_transform(fine), narrow);
    return inverse_transform(narrow);
}

}  // namespace awave
