#include "sta/sloshing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sta/constants.hpp"

namespace sta {

using constants::pi;
using cplx = std::complex<double>;

QuadratureOptions default_residual_quadrature() {
    // Zero means "derive from the plan": 1e-12 of the transport distance.
    return QuadratureOptions{0.0, 48};
}

namespace {

cplx expi(double phase) { return {std::cos(phase), std::sin(phase)}; }

// Closed form for the half-sine velocity profile:
// R = d (1 + e^{-2 pi i x}) / (2 (1 - 4 x^2)), x = w0 tf / 2 pi.
cplx sine_closed_form(double d, double x) {
    const double den = 1.0 - 4.0 * x * x;
    return d * (1.0 + expi(-2.0 * pi * x)) / (2.0 * den);
}

// Closed form for the triangular profile: R = -(d / (pi x)^2)(1 - e^{-i pi x})^2.
cplx triangular_closed_form(double d, double x) {
    const cplx q = 1.0 - expi(-pi * x);
    return -d * q * q / (pi * pi * x * x);
}

cplx residual_by_quadrature(const MotionPlan& plan, double omega0,
                            const QuadratureOptions& opts) {
    const double tf = plan.request.duration;
    QuadratureOptions scaled = opts;
    // Request absolute precision relative to the transport distance.
    scaled.abs_tol = std::max(opts.abs_tol, 1e-12 * std::abs(plan.request.distance));
    const auto breaks = plan.interior_breakpoints();
    auto integrand = [&](double t) { return expi(-omega0 * t) * plan.velocity(t); };
    return integrate_segments(integrand, 0.0, tf, breaks, scaled);
}

}  // namespace

SloshingResult sloshing_residual(const MotionPlan& trap_plan, double omega0,
                                 const QuadratureOptions& opts) {
    if (trap_plan.frame != Frame::Trap)
        throw std::invalid_argument("sloshing_residual: plan must be trap-frame");
    if (!(omega0 > 0)) throw std::invalid_argument("sloshing_residual: omega0 must be > 0");
    const double x = omega0 * trap_plan.request.duration / (2.0 * pi);
    const double d = trap_plan.request.distance;

    cplx r;
    if (trap_plan.family == Family::Sine && std::abs(4.0 * x * x - 1.0) > 1e-9) {
        r = sine_closed_form(d, x);
    } else if (trap_plan.family == Family::Triangular) {
        r = triangular_closed_form(d, x);
    } else {
        r = residual_by_quadrature(trap_plan, omega0, opts);
    }
    SloshingResult out;
    out.residual = r;
    out.amplitude = std::abs(r);
    out.phase = std::arg(r);
    if (out.phase < 0) out.phase += 2.0 * pi;
    return out;
}

double excitation_energy(double u, double udot, double omega0, double mass) {
    return 0.5 * mass * (udot * udot + omega0 * omega0 * u * u);
}

MotionPlan family_trap_plan(Family family, double distance, double f0, double x) {
    TransportRequest req{distance, x / f0, 2.0 * pi * f0};
    switch (family) {
        case Family::Sine: return sine_plan(req);
        case Family::Triangular: return triangular_plan(req);
        case Family::Quintic: return quintic_trap_plan(req);
        case Family::Septic: return septic_trap_plan(req);
        default:
            throw std::invalid_argument("family_trap_plan: no generator for this family");
    }
}

ZeroDurationSearch find_zero_durations(Family family, double distance, double f0,
                                       double x_lo, double x_hi, int count) {
    if (!(x_lo > 0) || !(x_hi > x_lo))
        throw std::invalid_argument("find_zero_durations: need 0 < x_lo < x_hi");
    if (count < 1) throw std::invalid_argument("find_zero_durations: count must be >= 1");

    const double w0 = 2.0 * pi * f0;
    auto amp2 = [&](double x) {
        const auto r = sloshing_residual(family_trap_plan(family, distance, f0, x), w0);
        const double a = r.amplitude / std::abs(distance);
        return a * a;
    };

    // Amplitudes touch zero without a sign change, so bracket local minima on a
    // grid and refine each by golden section on |R|^2.
    constexpr double grid_step = 5e-3;
    constexpr double x_tol = 1e-7;
    constexpr double zero_level = 1e-7;  // |R|/|d| below this counts as a zero

    ZeroDurationSearch out;
    const int n = static_cast<int>(std::ceil((x_hi - x_lo) / grid_step));
    double prev2 = amp2(x_lo);
    double prev1 = amp2(x_lo + (x_hi - x_lo) / n);
    for (int i = 2; i <= n && static_cast<int>(out.roots.size()) < count; ++i) {
        const double xi = x_lo + (x_hi - x_lo) * i / n;
        const double cur = amp2(xi);
        if (prev1 <= prev2 && prev1 <= cur) {
            const double a = x_lo + (x_hi - x_lo) * (i - 2) / n;
            const double root = golden_section_minimize(amp2, a, xi, x_tol);
            if (std::sqrt(amp2(root)) < zero_level) out.roots.push_back(root);
        }
        prev2 = prev1;
        prev1 = cur;
    }
    out.complete = static_cast<int>(out.roots.size()) >= count;
    if (out.complete) out.roots.resize(static_cast<std::size_t>(count));
    return out;
}

std::vector<DurationSweepRow> amplitude_vs_duration_sweep(Family family, double f0,
                                                          std::span<const double> xs,
                                                          double distance) {
    std::vector<DurationSweepRow> rows;
    rows.reserve(xs.size());
    const double w0 = 2.0 * pi * f0;
    for (double x : xs) {
        const auto r = sloshing_residual(family_trap_plan(family, distance, f0, x), w0);
        rows.push_back(DurationSweepRow{x, r.amplitude / std::abs(distance), r.phase});
    }
    return rows;
}

}  // namespace sta
