#ifndef STA_SLOSHING_HPP_
#define STA_SLOSHING_HPP_

#include <complex>
#include <span>
#include <vector>

#include "sta/plan.hpp"
#include "sta/quadrature.hpp"

namespace sta {

// Residual excitation of a transport: the Fourier component of the trap
// velocity at the trap frequency, R = integral exp(-i w0 t) zcup_dot dt.
// For a trap path that starts and ends at rest, |R| equals the final sloshing
// amplitude sqrt([z(tf)-d]^2 + zdot(tf)^2/w0^2) of a harmonic particle
// transported from rest.
struct SloshingResult {
    double amplitude = 0;            // |R| [m]
    double phase = 0;                // arg(R) in [0, 2pi)
    std::complex<double> residual{};  // R [m]
};

// Default quadrature request for Eq.-10 evaluation: abs_tol 0 means "derive
// from the plan" (1e-12 of the transport distance).
QuadratureOptions default_residual_quadrature();

SloshingResult sloshing_residual(const MotionPlan& trap_plan, double omega0,
                                 const QuadratureOptions& opts = default_residual_quadrature());

struct ZeroDurationSearch {
    std::vector<double> roots;  // values of t_f * f0
    bool complete = false;      // found the requested count within the range
};

// Durations (as t_f * f0) at which the family's sloshing amplitude vanishes,
// searched on [x_lo, x_hi]. Roots are minima of |R|^2 refined by golden
// section; only minima consistent with zero at quadrature precision qualify.
ZeroDurationSearch find_zero_durations(Family family, double distance, double f0,
                                       double x_lo, double x_hi, int count);

// Classical comoving-frame energy (m/2) udot^2 + (m/2) w0^2 u^2.
double excitation_energy(double u, double udot, double omega0, double mass);

struct DurationSweepRow {
    double x = 0;               // t_f * f0
    double amplitude_over_d = 0;
    double phase = 0;
};

std::vector<DurationSweepRow> amplitude_vs_duration_sweep(Family family, double f0,
                                                          std::span<const double> xs,
                                                          double distance = 1e-3);

// Internal helper shared with find_zero_durations: builds the family's
// trap-frame plan at dimensionless duration x.
MotionPlan family_trap_plan(Family family, double distance, double f0, double x);

}  // namespace sta

#endif
