#include "sta/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sta {

namespace {

// One-sided first-derivative estimate from the first four points (Fornberg
// weights for arbitrary spacing would be overkill; fit a cubic through them).
double one_sided_slope(std::span<const double> x, std::span<const double> y, bool at_front) {
    const std::size_t n = x.size();
    std::size_t i0 = at_front ? 0 : n - 4;
    const double x0 = at_front ? x[0] : x[n - 1];
    // Solve the 4x4 Vandermonde least-squares (exact) for the cubic derivative.
    double a[4][5] = {};
    for (int r = 0; r < 4; ++r) {
        const double dx = x[i0 + r] - x0;
        a[r][0] = 1;
        a[r][1] = dx;
        a[r][2] = dx * dx;
        a[r][3] = dx * dx * dx;
        a[r][4] = y[i0 + r];
    }
    for (int col = 0; col < 4; ++col) {  // Gaussian elimination with pivoting
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        for (int r = col + 1; r < 4; ++r) {
            const double m = a[r][col] / a[col][col];
            for (int c = col; c < 5; ++c) a[r][c] -= m * a[col][c];
        }
    }
    double coef[4];
    for (int r = 3; r >= 0; --r) {
        double s = a[r][4];
        for (int c = r + 1; c < 4; ++c) s -= a[r][c] * coef[c];
        coef[r] = s / a[r][r];
    }
    return coef[1];
}

}  // namespace

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    const std::size_t n = x_.size();
    if (n < 4) throw std::invalid_argument("CubicSpline: need at least 4 points");
    if (y_.size() != n) throw std::invalid_argument("CubicSpline: size mismatch");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("CubicSpline: x must be strictly increasing");

    const double s0 = one_sided_slope(x, y, true);
    const double sn = one_sided_slope(x, y, false);

    // Tridiagonal system for the interior first derivatives (clamped ends).
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];
    std::vector<double> diag(n), upper(n), rhs(n);
    diag[0] = 1;
    upper[0] = 0;
    rhs[0] = s0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        upper[i] = h[i - 1];
        rhs[i] = 3.0 * (h[i] * (y_[i] - y_[i - 1]) / h[i - 1] +
                        h[i - 1] * (y_[i + 1] - y_[i]) / h[i]);
    }
    diag[n - 1] = 1;
    rhs[n - 1] = sn;

    std::vector<double> slope(n);
    // Thomas algorithm; the lower diagonal for row i is h[i] (see rhs build).
    std::vector<double> cp(n);
    cp[0] = upper[0] / diag[0];
    rhs[0] /= diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double lower = (i + 1 < n) ? h[i] : 0.0;
        const double m = diag[i] - lower * cp[i - 1];
        cp[i] = upper[i] / m;
        rhs[i] = (rhs[i] - lower * rhs[i - 1]) / m;
    }
    slope[n - 1] = rhs[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) slope[i] = rhs[i] - cp[i] * slope[i + 1];

    b_.resize(n - 1);
    c_.resize(n - 1);
    d_.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dy = (y_[i + 1] - y_[i]) / h[i];
        b_[i] = slope[i];
        c_[i] = (3.0 * dy - 2.0 * slope[i] - slope[i + 1]) / h[i];
        d_[i] = (slope[i] + slope[i + 1] - 2.0 * dy) / (h[i] * h[i]);
    }
}

double CubicSpline::eval(double x, int order) const {
    if (order < 0 || order > 3) throw std::invalid_argument("CubicSpline: order 0..3");
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    i = std::min(i, x_.size() - 2);
    const double t = x - x_[i];
    switch (order) {
        case 0: return y_[i] + t * (b_[i] + t * (c_[i] + t * d_[i]));
        case 1: return b_[i] + t * (2.0 * c_[i] + t * 3.0 * d_[i]);
        case 2: return 2.0 * c_[i] + 6.0 * d_[i] * t;
        default: return 6.0 * d_[i];
    }
}

}  // namespace sta
