#pragma once

// Closed-form exponent bookkeeping for the local existence theory of
// u_tt - Delta u = u_t |u_t|^{p-1} in Y^mu = H^mu x H^{mu-1}.

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "accretive_wave/errors.hpp"

namespace awave {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Theorem { IntegerP, RealP };

inline const char* to_string(Theorem t) noexcept {
    return t == Theorem::IntegerP ? "integer_p" : "real_p";
}

/// Open interval (lo, hi), or [lo, hi) when lo_closed. hi may be infinite.
struct Interval {
    double lo = 1.0;
    double hi = kInfinity;
    bool lo_closed = false;

    bool contains(double x) const noexcept {
        return (lo_closed ? x >= lo : x > lo) && x < hi;
    }
};

struct AdmissibleDecision {
    Theorem theorem = Theorem::IntegerP;
    bool admissible = false;
    Interval p_interval;
    std::optional<double> eps;
    std::string reason;
};

/// Strichartz exponents with rho - 1/q = mu = 1 - (dual_rho - 1/dual_q).
struct StrichartzPair {
    double q = kInfinity;
    double rho = 0.0;
    double dual_q = kInfinity;
    double dual_rho = 0.0;
    /// Hoelder conjugate of dual_q, the time exponent on the forcing.
    double dual_q_conjugate = 1.0;
    double mu = 0.0;
};

/// max(0, (N/2 - s)(p - 1)/p).
inline double nu(double s, double p, int N) {
    if (!(p > 1.0)) throw DomainError("nu requires p > 1");
    return std::max(0.0, (0.5 * N - s) * (p - 1.0) / p);
}

/// Slab-size exponent: 1 when mu >= 1 + N/2, else 1 - (p - 1)(1 + N/2 - mu).
/// The sign is not checked; positivity is equivalent to subcriticality.
inline double epsilon(double mu, double p, int N) {
    if (!(p > 1.0)) throw DomainError("epsilon requires p > 1");
    const double critical = 1.0 + 0.5 * N;
    if (mu >= critical) return 1.0;
    return 1.0 - (p - 1.0) * (critical - mu);
}

/// Admissible p for the integer-p theorem: (1, inf) when mu >= 1 + N/2,
/// else (1, (N + 4 - 2mu)/(N + 2 - 2mu)).
inline Interval p_range(double mu, int N) {
    if (!(mu >= 1.0)) throw DomainError("p_range requires mu >= 1, got " + std::to_string(mu));
    if (N < 1) throw DomainError("p_range requires N >= 1");
    if (mu >= 1.0 + 0.5 * N) return Interval{1.0, kInfinity, false};
    return Interval{1.0, (N + 4.0 - 2.0 * mu) / (N + 2.0 - 2.0 * mu), false};
}

inline bool is_positive_integer(double x) noexcept {
    return x >= 1.0 && std::floor(x) == x;
}

inline AdmissibleDecision check_admissible(Theorem theorem, double mu, double p, int N) {
    AdmissibleDecision d;
    d.theorem = theorem;
    std::ostringstream why;

    if (theorem == Theorem::IntegerP) {
        d.p_interval = p_range(mu, N);
        if (p > 1.0) d.eps = epsilon(mu, p, N);
        if (!(p >= 2.0 && std::floor(p) == p)) {
            why << "p = " << p << " is not an integer >= 2";
        } else if (!d.p_interval.contains(p)) {
            why << "p = " << p << " outside the open interval (1, " << d.p_interval.hi << ")";
        } else {
            d.admissible = true;
            why << "p in (1, " << d.p_interval.hi << "), eps = " << *d.eps;
        }
        d.reason = why.str();
        return d;
    }

    // Real p: 1 <= N <= 3, p > 1, p >= mu - 1. The order set is taken as
    // (1, 2) U {1, 2, 3, ...}, the hypothesis of the power estimate that the
    // existence argument relies on; the theorem statement writes the
    // intersection (1, 2) n N*, which is empty.
    if (!(mu >= 1.0)) throw DomainError("mu >= 1 required, got " + std::to_string(mu));
    d.p_interval = Interval{std::max(1.0, mu - 1.0), kInfinity, mu - 1.0 > 1.0};
    const bool order_ok = (mu > 1.0 && mu < 2.0) || is_positive_integer(mu);
    if (N > 3) {
        why << "N>3 (real-p theory requires 1 <= N <= 3)";
    } else if (N < 1) {
        why << "N<1";
    } else if (!(p > 1.0)) {
        why << "p = " << p << " must exceed 1";
    } else if (p < mu - 1.0) {
        why << "p = " << p << " below mu - 1 = " << mu - 1.0;
    } else if (!order_ok) {
        why << "mu = " << mu << " not in (1,2) U N*";
    } else {
        d.admissible = true;
        why << "p >= max(1, mu - 1), N <= 3, mu in (1,2) U N*";
    }
    why << " [order set read as (1,2) U N*; stated as (1,2) n N*, which is empty]";
    d.reason = why.str();
    return d;
}

/// Theorem selection used by the solver: integer p >= 2 uses the integer-p
/// theory, anything else the real-p theory.
inline Theorem natural_theorem(double p) noexcept {
    return (p >= 2.0 && std::floor(p) == p) ? Theorem::IntegerP : Theorem::RealP;
}

inline StrichartzPair strichartz_pair(double q, double mu, double dual_q = kInfinity) {
    if (!(q >= 2.0)) throw DomainError("Strichartz time exponent q must be >= 2");
    if (!(dual_q >= 2.0)) throw DomainError("dual time exponent must be >= 2");
    StrichartzPair s;
    s.q = q;
    s.mu = mu;
    s.rho = mu + 1.0 / q;
    s.dual_q = dual_q;
    s.dual_rho = 1.0 - mu + 1.0 / dual_q;
    s.dual_q_conjugate = 1.0 / (1.0 - 1.0 / dual_q);
    return s;
}

}  // namespace awave
