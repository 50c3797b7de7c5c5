#ifndef STA_CORRECTION_HPP_
#define STA_CORRECTION_HPP_

#include <complex>
#include <span>
#include <vector>

#include "sta/plan.hpp"
#include "sta/sloshing.hpp"

namespace sta {

// A single spectral tone A(t) sin(omega_c t + phase) added to a trap path.
// The envelope ramps as A0 sin^2(omega_c t / 2) over half a correction period,
// holds at A0, and ramps back down time-reversed, so the tone and its first
// derivative vanish at both ends.
struct CorrectionParams {
    double amplitude = 0;  // A0 [m]
    double phase = 0;      // phi0 [rad]
    double omega_c = 0;    // correction (trap or effective) frequency [rad/s]

    double ramp_duration() const;  // pi / omega_c = half a period of omega_c
    void validate() const;
};

// Tolerance on the base plan's normalized end velocities (the correction
// method assumes the base trap path starts and ends at rest). Loose enough to
// admit spline-differentiated waveform imports, orders of magnitude below any
// genuine violation.
inline constexpr double kBaseRestTol = 1e-5;

MotionPlan apply_correction(const MotionPlan& base, const CorrectionParams& params);

struct CorrectionSolution {
    CorrectionParams params;
    std::complex<double> base_residual{};   // R of the uncorrected base [m]
    double corrected_amplitude = 0;         // |R| of the corrected plan [m]
    bool used_fallback = false;             // derivative-free path was taken
    bool converged = false;                 // corrected |R| < 1e-9 |d|
};

// Chooses (A0, phi0) so the corrected plan's residual at omega_c vanishes.
// The correction's contribution is linear in (A0 cos phi0, A0 sin phi0), so a
// 2x2 linear solve is exact; a Nelder-Mead fallback covers the degenerate
// case of a near-singular response matrix.
CorrectionSolution solve_correction(const MotionPlan& base, double omega_c);

struct AmplitudeSweepRow {
    double amplitude = 0;        // A0 [m]
    double sloshing = 0;         // corrected |R| [m]
    double sloshing_phase = 0;   // arg R in [0, 2pi)
};

std::vector<AmplitudeSweepRow> amplitude_sweep(const MotionPlan& base, double phi0,
                                               double omega_c,
                                               std::span<const double> amplitudes);

struct FrequencySweepRow {
    double omega1 = 0;           // frequency parameter used in trap_from_atom
    double sloshing = 0;         // |R| at the true trap frequency [m]
    double sloshing_phase = 0;
};

// Sensitivity of the trap_from_atom construction to the assumed frequency:
// for each omega1 build the trap path from the atom plan and evaluate the
// residual at the true omega0.
std::vector<FrequencySweepRow> frequency_sensitivity_sweep(const MotionPlan& atom_plan,
                                                           double omega0_true,
                                                           std::span<const double> omega1s);

// Complex responses of a unit-amplitude correction at phase 0 and pi/2,
// exposed for verification.
std::pair<std::complex<double>, std::complex<double>> correction_responses(
    double t_f, double omega_c);

}  // namespace sta

#endif
