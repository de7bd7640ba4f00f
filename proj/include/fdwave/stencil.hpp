#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fdwave {

namespace detail {

// Gaussian elimination with partial pivoting on a dense column-major-free
// augmented system. Small systems only (radius <= 10).
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (a[col][col] == 0.0)
            throw std::runtime_error("singular stencil moment system");
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
        double s = b[row];
        for (std::size_t k = row + 1; k < n; ++k) s -= a[row][k] * x[k];
        x[row] = s / a[row][row];
    }
    return x;
}

inline void check_order(int order) {
    if (order < 2 || order > 20 || order % 2 != 0)
        throw std::invalid_argument("spatial order must be even and in [2, 20]");
}

}  // namespace detail

/// Central second-derivative coefficients v_0..v_r (grid spacing factored
/// out). The symmetric completion v_{-j} = v_j is implied. Obtained from the
/// Taylor-moment conditions
///     2 * sum_j v_j j^{2m} / (2m)! = delta_{m,1} * 2/2!,   m = 1..r,
/// with v_0 fixed by the zero-sum condition on constants. The 1/(2m)!
/// scaling keeps the system well conditioned up to order 20.
inline std::vector<double> second_derivative_coefficients(int order) {
    detail::check_order(order);
    const int r = order / 2;
    std::vector<std::vector<double>> a(r, std::vector<double>(r));
    std::vector<double> rhs(r);
    for (int m = 1; m <= r; ++m) {
        double inv_fact = 1.0;
        for (int k = 2; k <= 2 * m; ++k) inv_fact /= static_cast<double>(k);
        for (int j = 1; j <= r; ++j)
            a[m - 1][j - 1] = std::pow(static_cast<double>(j), 2 * m) * inv_fact;
        rhs[m - 1] = (m == 1) ? inv_fact : 0.0;
    }
    std::vector<double> v = detail::solve_dense(std::move(a), std::move(rhs));
    double sum = 0.0;
    for (double c : v) sum += c;
    v.insert(v.begin(), -2.0 * sum);
    return v;  // v_0..v_r
}

/// Central first-derivative weights w_1..w_r, defined with the explicit
/// 1/(2 dx) prefactor:  d/dx phi_k ~ (1/(2 dx)) sum_j w_j (phi_{k+j} - phi_{k-j}).
/// Moment conditions: sum_j w_j j^{2m-1} / (2m-1)! = delta_{m,1}.
inline std::vector<double> first_derivative_coefficients(int order) {
    detail::check_order(order);
    const int r = order / 2;
    std::vector<std::vector<double>> a(r, std::vector<double>(r));
    std::vector<double> rhs(r);
    for (int m = 1; m <= r; ++m) {
        double inv_fact = 1.0;
        for (int k = 2; k <= 2 * m - 1; ++k) inv_fact /= static_cast<double>(k);
        for (int j = 1; j <= r; ++j)
            a[m - 1][j - 1] = std::pow(static_cast<double>(j), 2 * m - 1) * inv_fact;
        rhs[m - 1] = (m == 1) ? inv_fact : 0.0;
    }
    return detail::solve_dense(std::move(a), std::move(rhs));  // w_1..w_r
}

/// Both stencil families for one spatial order.
struct StencilCoeffs {
    int order = 2;
    int radius = 1;
    std::vector<double> second;  // v_0..v_r
    std::vector<double> first;   // w_1..w_r
};

inline StencilCoeffs make_stencil(int order) {
    StencilCoeffs s;
    s.order = order;
    s.radius = order / 2;
    s.second = second_derivative_coefficients(order);
    s.first = first_derivative_coefficients(order);
    return s;
}

/// CFL bound dt <= 2 dx_min / (c_max sqrt(a)) with
/// a = ndim * (|v_0| + 2 sum_j |v_j|). Absolute values: the signed sum of a
/// consistent second-derivative stencil is zero, so only the absolute sum
/// yields a usable bound (it reproduces dx/(c sqrt(2)) for 2D order 2).
inline double stable_dt(double c_max, std::span<const double> spacing, int order,
                        int ndim) {
    if (c_max <= 0.0) throw std::invalid_argument("stable_dt: c_max must be > 0");
    if (ndim != 2 && ndim != 3)
        throw std::invalid_argument("stable_dt: ndim must be 2 or 3");
    if (spacing.empty()) throw std::invalid_argument("stable_dt: empty spacing");
    double dx_min = spacing[0];
    for (double h : spacing) {
        if (h <= 0.0) throw std::invalid_argument("stable_dt: spacing must be > 0");
        dx_min = std::min(dx_min, h);
    }
    const std::vector<double> v = second_derivative_coefficients(order);
    double abs_sum = std::abs(v[0]);
    for (std::size_t j = 1; j < v.size(); ++j) abs_sum += 2.0 * std::abs(v[j]);
    const double a = static_cast<double>(ndim) * abs_sum;
    return 2.0 * dx_min / (c_max * std::sqrt(a));
}

}  // namespace fdwave
