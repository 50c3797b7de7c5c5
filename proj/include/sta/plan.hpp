#ifndef STA_PLAN_HPP_
#define STA_PLAN_HPP_

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace sta {

// Which path a plan prescribes: the particle's (atom frame, boundary
// conditions on z) or the potential minimum's (trap frame, the directly
// controllable one).
enum class Frame { Atom, Trap };

enum class Family { Sine, Triangular, Quintic, Septic, Corrected, Custom };

const char* to_string(Frame f);
const char* to_string(Family f);

struct TransportRequest {
    double distance = 0;   // d [m], non-zero
    double duration = 0;   // t_f [s]
    double trap_freq = 0;  // omega0 [rad/s]

    void validate() const;
    double x() const;  // dimensionless t_f * f0
};

// Evaluates a trajectory and its time derivatives. Implementations are
// immutable; evaluation is pure and thread-safe.
class Profile {
  public:
    virtual ~Profile() = default;
    // order 0 is position; derivatives are analytic (or spline-based for
    // sampled data). At interior kinks the value is a one-sided limit.
    virtual double eval(double t, int order) const = 0;
    virtual int max_order() const = 0;
    // Interior times where smoothness drops (integration grids align here).
    virtual std::vector<double> interior_breakpoints() const { return {}; }
};

struct MotionPlan {
    TransportRequest request;
    Frame frame = Frame::Trap;
    Family family = Family::Custom;
    std::shared_ptr<const Profile> profile;

    double position(double t) const { return profile->eval(t, 0); }
    double velocity(double t) const { return profile->eval(t, 1); }
    double acceleration(double t) const { return profile->eval(t, 2); }
    double derivative(double t, int order) const { return profile->eval(t, order); }
    std::vector<double> interior_breakpoints() const { return profile->interior_breakpoints(); }
};

// Trap-frame families (directly executable trap paths).
MotionPlan sine_plan(const TransportRequest& req);        // half-sine velocity
MotionPlan triangular_plan(const TransportRequest& req);  // constant accel/decel
// Polynomial atom-frame families.
MotionPlan quintic_plan(const TransportRequest& req);
MotionPlan septic_plan(const TransportRequest& req);
// The same polynomials driven as the trap path itself (no frame conversion);
// this is how the quintic is typically executed in practice.
MotionPlan quintic_trap_plan(const TransportRequest& req);
MotionPlan septic_trap_plan(const TransportRequest& req);

// Trap path that reproduces the atom path under a harmonic trap of frequency
// omega1: zcup = z + zddot / omega1^2. omega1 is a free parameter so the
// sensitivity of the construction to the assumed frequency can be scanned.
MotionPlan trap_from_atom(const MotionPlan& atom_plan, double omega1);

// Sampled trajectory, differentiated with a clamped cubic spline.
MotionPlan custom_plan_from_samples(std::span<const double> t, std::span<const double> z,
                                    double trap_freq, Frame frame = Frame::Trap);

// The eight transport boundary conditions: six on the atom path (position,
// velocity, acceleration at both ends) and two on the trap path (velocity at
// both ends). Residuals are normalized by d, d/t_f, d/t_f^2 as appropriate;
// the pass/fail verdict applies to the normalized value.
struct BoundaryCondition {
    std::string name;
    double residual = 0;    // natural units (m, m/s, m/s^2)
    double normalized = 0;  // dimensionless
    bool pass = false;
};

struct BoundaryReport {
    std::array<BoundaryCondition, 8> conditions;
    double tol = 0;
    bool atom_pass() const;   // conditions 0..5
    bool trap_pass() const;   // conditions 6..7
    bool all_pass() const;
    std::string summary() const;
};

// Checks an (atom, trap) plan pair analytically. For trap-only plans, the
// simulator module provides an overload that derives the atom path by
// harmonic forward integration.
BoundaryReport check_boundaries(const MotionPlan& atom_plan, const MotionPlan& trap_plan,
                                double tol);

}  // namespace sta

#endif
