#ifndef STA_SPLINE_HPP_
#define STA_SPLINE_HPP_

#include <span>
#include <vector>

namespace sta {

// Clamped cubic spline interpolant. Endpoint slopes come from one-sided
// 4-point finite-difference stencils so that velocity estimates at the ends do
// not inherit the natural-spline curvature artifact.
class CubicSpline {
  public:
    CubicSpline(std::span<const double> x, std::span<const double> y);

    // Derivative of the given order (0..3); order 3 is piecewise constant.
    double eval(double x, int order = 0) const;

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

  private:
    std::vector<double> x_, y_, b_, c_, d_;  // y + b t + c t^2 + d t^3 per segment
};

}  // namespace sta

#endif
