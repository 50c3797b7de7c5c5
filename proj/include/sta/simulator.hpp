#ifndef STA_SIMULATOR_HPP_
#define STA_SIMULATOR_HPP_

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "sta/plan.hpp"
#include "sta/trap.hpp"

namespace sta {

struct ParticleState {
    double z = 0;  // [m]
    double v = 0;  // [m/s]
    double t = 0;  // [s]
};

// Fixed-step classic 4th-order Runge-Kutta. The step grid is aligned to the
// plan's breakpoints (segment lengths divided exactly) so kinks land on nodes
// and the nominal end time is hit without rounding drift.
struct IntegratorConfig {
    double dt = 0;               // explicit step [s]; 0 = derive from steps_per_period
    int steps_per_period = 1000;
    double escape_radius = 20;   // in Rayleigh ranges, FullGaussian/Quartic only

    double step_for(double omega0) const;
    void validate(double omega0) const;
};

struct Trajectory {
    std::vector<double> t, z, v;
    bool escaped = false;
    double escape_time = std::numeric_limits<double>::quiet_NaN();
    ParticleState final_state() const { return {z.back(), v.back(), t.back()}; }
};

// Single-particle dynamics in the moving trap; the plan is held at its final
// position for hold_time after the motion ends.
Trajectory integrate(const MotionPlan& trap_plan, const TrapConfig& cfg, ForceModel model,
                     ParticleState s0, const IntegratorConfig& icfg, double hold_time = 0);

struct EnsembleState {
    std::vector<ParticleState> particles;
    double temperature = 0;  // [K], metadata
    std::uint64_t seed = 0;

    EnsembleMoments moments(double z_cup = 0) const;  // axial variance about z_cup
};

// Boltzmann sample of the chosen model's axial potential about z = 0, with
// Gaussian velocities at the same temperature. FullGaussian and
// QuarticCorrected positions are rejection-sampled on bounded support (one
// Rayleigh range, resp. the quartic inflection radius). With antithetic = true
// particles come in (z, v) / (-z, -v) pairs, which cancels thermal
// center-of-mass noise in coherent-response measurements.
EnsembleState sample_thermal_ensemble(const TrapConfig& cfg, ForceModel model,
                                      double temperature, int n, std::uint64_t seed,
                                      bool antithetic = false);

// Equilibrium axial position variance of the sampled distribution (same
// truncation as the sampler), by quadrature.
double boltzmann_axial_variance(const TrapConfig& cfg, ForceModel model, double temperature);

// Temperature whose equilibrium RMS axial spread equals the target. The spread
// is a free knob: pick it to reproduce a measured cloud extent.
double temperature_for_axial_spread(const TrapConfig& cfg, ForceModel model,
                                    double target_rms);

struct TransportObservables {
    std::vector<double> t;
    std::vector<double> com;        // <z> [m]
    std::vector<double> variance;   // <(z - <z>)^2> [m^2]
    std::vector<double> excitation; // COM-mode comoving energy [J]
    std::vector<double> surviving;  // fraction not escaped
};

// Ensemble transport. Reductions use pairwise summation in fixed particle
// order, so results are deterministic and independent of any parallel split.
TransportObservables simulate_transport(const EnsembleState& ensemble,
                                        const MotionPlan& trap_plan, const TrapConfig& cfg,
                                        ForceModel model, const IntegratorConfig& icfg,
                                        double hold_time = 0, int record_stride = 1);

// Ballistic expansion: z -> z + v t_e.
double time_of_flight(double z, double v, double t_e);
ParticleState time_of_flight(const ParticleState& s, double t_e);

struct ProbeRecord {
    double t_wait = 0;  // [s] after motion end
    int rep = 0;
    double z_tof = 0;   // expanded COM position [m]
};

// Stop-and-probe protocol: transport, wait, release for t_e, record the
// expanded position plus Gaussian noise. The unperturbed-trap COM equals a
// single particle started from rest under the Harmonic model, which is what
// this synthesizes; repetitions differ only by the noise draw.
std::vector<ProbeRecord> stop_and_probe_scan(const MotionPlan& trap_plan,
                                             const TrapConfig& cfg, ForceModel model,
                                             std::span<const double> wait_times, double t_e,
                                             int repetitions, double noise_sigma,
                                             std::uint64_t seed, const IntegratorConfig& icfg);

// Boundary check for trap-only plans: the atom path is derived by harmonic
// forward simulation from rest at the configured trap frequency.
BoundaryReport check_boundaries(const MotionPlan& trap_plan, const TrapConfig& cfg,
                                double tol, const IntegratorConfig& icfg);

// Deterministic pairwise tree reduction (fixed order).
double pairwise_sum(std::span<const double> values);

}  // namespace sta

#endif
