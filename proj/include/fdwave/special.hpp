#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

// Self-contained special functions: modified Bessel I0, Bessel J0/Y0 of the
// first/second kind, and the normalized sinc. Power series for small
// arguments, Hankel asymptotic expansions beyond. Absolute accuracy is
// better than 1e-10 for J0/Y0 on (0, 50] and relative 1e-10 for I0.

namespace fdwave {

namespace detail {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240;

// Hankel asymptotic H0^(1)(x) ~ sqrt(2/(pi x)) e^{i(x - pi/4)} sum_k (-i)^k a_k / x^k
// with a_k = ((2k-1)!!)^2 / (k! 8^k); returns (J0, Y0) as (re, im).
inline void bessel_j0y0_asymptotic(double x, double& j0, double& y0) {
    double term = 1.0;          // a_k / x^k
    double re = 0.0, im = 0.0;  // sum of (-i)^k a_k / x^k
    double prev = std::numeric_limits<double>::max();
    for (int k = 0; k < 40; ++k) {
        switch (k % 4) {  // (-i)^k cycle: 1, -i, -1, +i
            case 0: re += term; break;
            case 1: im -= term; break;
            case 2: re -= term; break;
            case 3: im += term; break;
        }
        const double odd = 2.0 * k + 1.0;
        const double next = term * odd * odd / (8.0 * (k + 1) * x);
        if (std::abs(next) >= prev) break;  // asymptotic tail started growing
        prev = std::abs(next);
        term = next;
        if (std::abs(term) < 1e-18) break;
    }
    const double amp = std::sqrt(2.0 / (M_PI * x));
    const double theta = x - 0.25 * M_PI;
    const double c = std::cos(theta), s = std::sin(theta);
    j0 = amp * (c * re - s * im);
    y0 = amp * (s * re + c * im);
}

}  // namespace detail

/// Modified Bessel function of the first kind, order zero.
inline double bessel_i0(double x) {
    x = std::abs(x);
    if (x < 100.0) {
        // all-positive series, no cancellation
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum;
    }
    // e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 30; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= odd * odd / (8.0 * k * x);
        sum += term;
        if (std::abs(term) < sum * 1e-17) break;
    }
    return std::exp(x) / std::sqrt(2.0 * M_PI * x) * sum;
}

/// Bessel function of the first kind, order zero.
inline double bessel_j0(double x) {
    x = std::abs(x);
    if (x <= 14.0) {
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 80; ++k) {
            term *= -q / (static_cast<double>(k) * k);
            sum += term;
            if (std::abs(term) < 1e-18) break;
        }
        return sum;
    }
    double j0, y0;
    detail::bessel_j0y0_asymptotic(x, j0, y0);
    return j0;
}

/// Bessel function of the second kind, order zero. Defined for x > 0 only.
inline double bessel_y0(double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_y0: requires x > 0");
    if (x <= 14.0) {
        // (2/pi) [ (ln(x/2) + gamma) J0(x) + sum_k (-1)^{k+1} H_k q^k/(k!)^2 ]
        const double q = 0.25 * x * x;
        double term = 1.0, harmonic = 0.0, sum = 0.0;
        for (int k = 1; k < 80; ++k) {
            term *= -q / (static_cast<double>(k) * k);
            harmonic += 1.0 / k;
            sum -= term * harmonic;  // (-1)^{k+1} q^k/(k!)^2 * H_k
            if (std::abs(term) < 1e-18) break;
        }
        return (2.0 / M_PI) *
               ((std::log(0.5 * x) + detail::kEulerGamma) * bessel_j0(x) + sum);
    }
    double j0, y0;
    detail::bessel_j0y0_asymptotic(x, j0, y0);
    return y0;
}

/// Normalized sinc: sin(pi x)/(pi x), sinc(0) = 1. Exact zeros at nonzero
/// integers (pi x would otherwise be rounded).
inline double sinc(double x) {
    if (x == std::nearbyint(x)) return x == 0.0 ? 1.0 : 0.0;
    const double px = M_PI * x;
    if (std::abs(px) < 1e-4) return 1.0 - px * px / 6.0;
    return std::sin(px) / px;
}

}  // namespace fdwave
