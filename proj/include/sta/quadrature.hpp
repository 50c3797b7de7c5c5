#ifndef STA_QUADRATURE_HPP_
#define STA_QUADRATURE_HPP_

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace sta {

struct QuadratureOptions {
    double abs_tol = 1e-15;
    int max_depth = 48;
};

// Adaptive Gauss-Kronrod (G7, K15) integration on [a, b].
double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadratureOptions& opts = {});

std::complex<double> integrate(const std::function<std::complex<double>(double)>& f,
                               double a, double b, const QuadratureOptions& opts = {});

// Integrates piecewise, splitting at the given interior breakpoints. Points
// outside (a, b) are ignored. The tolerance applies per segment.
std::complex<double> integrate_segments(const std::function<std::complex<double>(double)>& f,
                                        double a, double b,
                                        std::span<const double> interior_breakpoints,
                                        const QuadratureOptions& opts = {});

// Golden-section minimization of f on [a, b] to the given x tolerance.
double golden_section_minimize(const std::function<double(double)>& f, double a,
                               double b, double x_tol);

}  // namespace sta

#endif
