#include "sta/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "sta/errors.hpp"

namespace sta {

namespace {

// 15-point Kronrod nodes on [-1, 1] (positive half) with Kronrod weights, and
// the embedded 7-point Gauss weights on the odd-indexed nodes. QUADPACK values.
constexpr double kNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0,
};
constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
constexpr double kGaussW[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

template <typename Value>
struct GK15Result {
    Value integral;
    double error;
    double resabs;  // integral of |f|, the rounding-floor reference
};

template <typename Value, typename F>
GK15Result<Value> gk15(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Value fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(mid - half * kNodes[i]);
        fv[14 - i] = f(mid + half * kNodes[i]);
    }
    fv[7] = f(mid);
    Value kron = kKronrodW[7] * fv[7];
    Value gauss = kGaussW[3] * fv[7];
    double resabs = kKronrodW[7] * std::abs(fv[7]);
    for (int i = 0; i < 7; ++i) {
        kron += kKronrodW[i] * (fv[i] + fv[14 - i]);
        resabs += kKronrodW[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
        if (i % 2 == 1) gauss += kGaussW[i / 2] * (fv[i] + fv[14 - i]);
    }
    kron *= half;
    gauss *= half;
    resabs *= half;
    return {kron, std::abs(kron - gauss), resabs};
}

template <typename Value, typename F>
Value adaptive(const F& f, double a, double b, double tol, int depth) {
    const auto r = gk15<Value>(f, a, b);
    // Below ~50 eps of the L1 mass the difference estimate is rounding noise.
    if (r.error <= tol || r.error <= 1e-14 * r.resabs || b - a <= std::abs(a) * 1e-15)
        return r.integral;
    if (depth <= 0)
        throw QuadratureError("adaptive quadrature did not converge within max subdivisions");
    const double mid = 0.5 * (a + b);
    return adaptive<Value>(f, a, mid, 0.5 * tol, depth - 1) +
           adaptive<Value>(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadratureOptions& opts) {
    if (a == b) return 0.0;
    return adaptive<double>(f, a, b, opts.abs_tol, opts.max_depth);
}

std::complex<double> integrate(const std::function<std::complex<double>(double)>& f,
                               double a, double b, const QuadratureOptions& opts) {
    if (a == b) return {0.0, 0.0};
    return adaptive<std::complex<double>>(f, a, b, opts.abs_tol, opts.max_depth);
}

std::complex<double> integrate_segments(const std::function<std::complex<double>(double)>& f,
                                        double a, double b,
                                        std::span<const double> interior_breakpoints,
                                        const QuadratureOptions& opts) {
    std::vector<double> edges{a};
    for (double p : interior_breakpoints)
        if (p > a && p < b) edges.push_back(p);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    std::complex<double> total{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        total += integrate(f, edges[i], edges[i + 1], opts);
    return total;
}

double golden_section_minimize(const std::function<double(double)>& f, double a,
                               double b, double x_tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > x_tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace sta
