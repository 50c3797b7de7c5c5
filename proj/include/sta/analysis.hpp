#ifndef STA_ANALYSIS_HPP_
#define STA_ANALYSIS_HPP_

#include <array>
#include <span>
#include <vector>

#include "sta/simulator.hpp"
#include "sta/sloshing.hpp"

namespace sta {

struct FitPoint {
    double t = 0;      // waiting time [s]
    double z = 0;      // measured (expanded) position, centered [m]
    double sigma = 0;  // 1-sigma uncertainty [m]; 0 = unweighted
};

struct FitOptions {
    int max_iterations = 200;
    double jacobian_rel_step = 1e-6;  // forward differences
    double param_tol = 1e-10;         // relative parameter change
};

// Fit of the time-of-flight-expanded decaying sine
//   A * sqrt((1 - t_e/tau)^2 + (w t_e)^2)
//     * sin(w t + phi + atan2(w t_e, 1 - t_e/tau)) * exp(-t/tau)
// where A is the in-situ sloshing amplitude. tau is parametrized internally as
// a decay rate constrained to be non-negative, so undamped data fits cleanly.
struct DecayingSineFit {
    double amplitude = 0;  // in-situ A [m]
    double tau = 0;        // decay time [s]; infinity when no decay resolved
    double omega = 0;      // [rad/s]
    double phi = 0;        // in-situ phase [rad, 0..2pi)
    double t_e = 0;        // expansion time used [s]
    std::array<std::array<double, 4>, 4> covariance{};  // order: A, 1/tau, w, phi
    double chi2 = 0;
    int iterations = 0;
    int dof = 0;

    double amplitude_sigma() const;
    double apparent_amplitude() const;  // A times the TOF prefactor
    double prefactor() const;
};

DecayingSineFit fit_decaying_sine(std::span<const FitPoint> data, double t_e,
                                  const FitOptions& opts = {});

// TOF magnification of the apparent sloshing amplitude relative to in situ.
double tof_prefactor(double omega, double t_e, double tau);

struct ExtractedSloshing {
    SloshingResult sloshing;  // in-situ amplitude and phase
    DecayingSineFit fit;
};

// Groups a stop-and-probe dataset by waiting time (repetition means carry
// standard-error weights), centers it on the transport target, fits, and
// reports the in-situ sloshing.
ExtractedSloshing extract_sloshing(std::span<const ProbeRecord> records, double t_e,
                                   double final_position, const FitOptions& opts = {});

}  // namespace sta

#endif
