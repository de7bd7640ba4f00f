#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "fdwave/stencil.hpp"

// Exact-rational oracle for the Taylor-moment systems, independent of the
// double-precision solver under test.
namespace {

using Rational = boost::multiprecision::cpp_rational;

std::vector<Rational> solve_rational(std::vector<std::vector<Rational>> a,
                                     std::vector<Rational> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (a[pivot][col] == 0) ++pivot;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            const Rational f = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

Rational ipow(int base, int exp) {
    Rational r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// second-derivative oracle: sum_j v_j j^{2m} = delta_{m,1}, v_0 = -2 sum v_j
std::vector<double> oracle_second(int order) {
    const int r = order / 2;
    std::vector<std::vector<Rational>> a(r, std::vector<Rational>(r));
    std::vector<Rational> b(r);
    for (int m = 1; m <= r; ++m) {
        for (int j = 1; j <= r; ++j) a[m - 1][j - 1] = ipow(j, 2 * m);
        b[m - 1] = m == 1 ? 1 : 0;
    }
    const std::vector<Rational> v = solve_rational(a, b);
    Rational v0 = 0;
    for (const auto& c : v) v0 -= 2 * c;
    std::vector<double> out{static_cast<double>(v0)};
    for (const auto& c : v) out.push_back(static_cast<double>(c));
    return out;
}

// first-derivative oracle: sum_j w_j j^{2m-1} = delta_{m,1}
std::vector<double> oracle_first(int order) {
    const int r = order / 2;
    std::vector<std::vector<Rational>> a(r, std::vector<Rational>(r));
    std::vector<Rational> b(r);
    for (int m = 1; m <= r; ++m) {
        for (int j = 1; j <= r; ++j) a[m - 1][j - 1] = ipow(j, 2 * m - 1);
        b[m - 1] = m == 1 ? 1 : 0;
    }
    const std::vector<Rational> w = solve_rational(a, b);
    std::vector<double> out;
    for (const auto& c : w) out.push_back(static_cast<double>(c));
    return out;
}

// Evaluates the assembled symmetric stencil on f(x) = x^k at x = 0, unit
// spacing. `magnitude` reports the cancellation scale sum |v_j| |x_j|^k so
// residuals can be judged relative to the terms actually summed.
double apply_second(const std::vector<double>& v, int k, double& magnitude) {
    const int r = static_cast<int>(v.size()) - 1;
    double acc = 0.0;
    magnitude = k == 0 ? std::abs(v[0]) : 0.0;
    for (int j = 1; j <= r; ++j) {
        const double term = v[j] * (std::pow(j, k) + std::pow(-j, k));
        acc += term;
        magnitude += std::abs(v[j]) * 2.0 * std::pow(j, k);
    }
    if (k == 0) acc += v[0];
    return acc;
}

double apply_first(const std::vector<double>& w, int k, double& magnitude) {
    const int r = static_cast<int>(w.size());
    double acc = 0.0;
    magnitude = 0.0;
    for (int j = 1; j <= r; ++j) {
        acc += w[j - 1] * (std::pow(j, k) - std::pow(-j, k));
        magnitude += std::abs(w[j - 1]) * 2.0 * std::pow(j, k);
    }
    return acc / 2.0;
}

}  // namespace

TEST(SecondDerivativeCoefficients, ClassicOrder2) {
    const auto v = fdwave::second_derivative_coefficients(2);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_DOUBLE_EQ(v[0], -2.0);
    EXPECT_DOUBLE_EQ(v[1], 1.0);
}

TEST(SecondDerivativeCoefficients, Order4MatchesRationals) {
    const auto v = fdwave::second_derivative_coefficients(4);
    ASSERT_EQ(v.size(), 3u);
    EXPECT_NEAR(v[0], -5.0 / 2.0, 1e-14);
    EXPECT_NEAR(v[1], 4.0 / 3.0, 1e-14);
    EXPECT_NEAR(v[2], -1.0 / 12.0, 1e-14);
}

TEST(SecondDerivativeCoefficients, AllOrdersMatchRationalOracle) {
    for (int order = 2; order <= 20; order += 2) {
        const auto got = fdwave::second_derivative_coefficients(order);
        const auto expect = oracle_second(order);
        ASSERT_EQ(got.size(), expect.size()) << "order " << order;
        for (std::size_t i = 0; i < got.size(); ++i)
            EXPECT_NEAR(got[i], expect[i], std::abs(expect[i]) * 1e-12)
                << "order " << order << " tap " << i;
    }
}

TEST(SecondDerivativeCoefficients, RejectsBadOrders) {
    EXPECT_THROW(fdwave::second_derivative_coefficients(3), std::invalid_argument);
    EXPECT_THROW(fdwave::second_derivative_coefficients(0), std::invalid_argument);
    EXPECT_THROW(fdwave::second_derivative_coefficients(22), std::invalid_argument);
    EXPECT_THROW(fdwave::first_derivative_coefficients(7), std::invalid_argument);
}

TEST(SecondDerivativeCoefficients, ExactOnMonomials) {
    for (int order = 2; order <= 20; order += 2) {
        const auto v = fdwave::second_derivative_coefficients(order);
        for (int k = 0; k <= order + 1; ++k) {
            const double expect = k == 2 ? 2.0 : 0.0;
            double magnitude = 0.0;
            const double got = apply_second(v, k, magnitude);
            const double scale = std::max(1.0, magnitude);
            EXPECT_NEAR(got, expect, 1e-10 * scale) << "order " << order << " k " << k;
        }
    }
}

TEST(SecondDerivativeCoefficients, ZeroSumOnConstants) {
    for (int order = 2; order <= 20; order += 2) {
        const auto v = fdwave::second_derivative_coefficients(order);
        double sum = v[0];
        for (std::size_t j = 1; j < v.size(); ++j) sum += 2.0 * v[j];
        EXPECT_NEAR(sum, 0.0, 1e-12) << "order " << order;
    }
}

TEST(FirstDerivativeCoefficients, Order2IsPlainCentralDifference) {
    const auto w = fdwave::first_derivative_coefficients(2);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_DOUBLE_EQ(w[0], 1.0);
}

TEST(FirstDerivativeCoefficients, Order4ExpandedForm) {
    // with the 1/(2 dx) prefactor the expanded taps are [1/12,-2/3,0,2/3,-1/12]/dx
    const auto w = fdwave::first_derivative_coefficients(4);
    ASSERT_EQ(w.size(), 2u);
    EXPECT_NEAR(w[0] / 2.0, 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(w[1] / 2.0, -1.0 / 12.0, 1e-14);
}

TEST(FirstDerivativeCoefficients, AllOrdersMatchRationalOracle) {
    for (int order = 2; order <= 20; order += 2) {
        const auto got = fdwave::first_derivative_coefficients(order);
        const auto expect = oracle_first(order);
        ASSERT_EQ(got.size(), expect.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            EXPECT_NEAR(got[i], expect[i], std::abs(expect[i]) * 1e-12)
                << "order " << order << " tap " << i;
    }
}

TEST(FirstDerivativeCoefficients, ExactOnMonomials) {
    for (int order = 2; order <= 20; order += 2) {
        const auto w = fdwave::first_derivative_coefficients(order);
        for (int k = 1; k <= order; k += 2) {  // even powers vanish by antisymmetry
            const double expect = k == 1 ? 1.0 : 0.0;
            double magnitude = 0.0;
            const double got = apply_first(w, k, magnitude);
            EXPECT_NEAR(got, expect, 1e-10 * std::max(1.0, magnitude))
                << "order " << order << " k " << k;
        }
    }
}

TEST(StableDt, MatchesHandEvaluatedBound) {
    const std::array<double, 2> h{0.5, 0.5};
    // order 2, 2D: a = 2 * (2 + 2*1) = 8
    EXPECT_NEAR(fdwave::stable_dt(1500.0, h, 2, 2), 2.0 * 0.5 / (1500.0 * std::sqrt(8.0)),
                1e-18);
    EXPECT_NEAR(fdwave::stable_dt(1500.0, h, 2, 2), 2.3570e-4, 1e-8);
}

TEST(StableDt, ThreeDimensionalScaling) {
    const std::array<double, 2> h2{0.5, 0.5};
    const std::array<double, 3> h3{0.5, 0.5, 0.5};
    const double dt2 = fdwave::stable_dt(1500.0, h2, 2, 2);
    const double dt3 = fdwave::stable_dt(1500.0, h3, 2, 3);
    EXPECT_NEAR(dt3, dt2 * std::sqrt(2.0 / 3.0), 1e-15);
}

TEST(StableDt, MonotoneInOrderVelocityAndSpacing) {
    const std::array<double, 2> h{0.5, 0.5};
    double prev = fdwave::stable_dt(1500.0, h, 2, 2);
    for (int order = 4; order <= 20; order += 2) {
        const double dt = fdwave::stable_dt(1500.0, h, order, 2);
        EXPECT_LT(dt, prev) << "order " << order;
        prev = dt;
    }
    EXPECT_LT(fdwave::stable_dt(3000.0, h, 2, 2), fdwave::stable_dt(1500.0, h, 2, 2));
    const std::array<double, 2> h_fine{0.25, 0.5};
    EXPECT_LT(fdwave::stable_dt(1500.0, h_fine, 2, 2), fdwave::stable_dt(1500.0, h, 2, 2));
}

TEST(StableDt, RejectsBadInput) {
    const std::array<double, 2> h{0.5, 0.5};
    EXPECT_THROW(fdwave::stable_dt(0.0, h, 2, 2), std::invalid_argument);
    const std::array<double, 2> bad{0.5, -0.5};
    EXPECT_THROW(fdwave::stable_dt(1500.0, bad, 2, 2), std::invalid_argument);
}
