#include "sta/plan.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sta/constants.hpp"
#include "sta/spline.hpp"

namespace sta {

using constants::pi;

const char* to_string(Frame f) {
    return f == Frame::Atom ? "atom" : "trap";
}

const char* to_string(Family f) {
    switch (f) {
        case Family::Sine: return "sine";
        case Family::Triangular: return "triangular";
        case Family::Quintic: return "quintic";
        case Family::Septic: return "septic";
        case Family::Corrected: return "corrected";
        case Family::Custom: return "custom";
    }
    return "?";
}

void TransportRequest::validate() const {
    if (distance == 0) throw std::invalid_argument("TransportRequest: distance must be non-zero");
    if (!(duration > 0)) throw std::invalid_argument("TransportRequest: duration must be > 0");
    if (!(trap_freq > 0)) throw std::invalid_argument("TransportRequest: trap_freq must be > 0");
}

double TransportRequest::x() const {
    return duration * trap_freq / (2.0 * pi);
}

namespace {

// z(t) = (d/2)(1 - cos(pi t / t_f)): the half-sine velocity profile.
class SineProfile : public Profile {
  public:
    SineProfile(double d, double tf) : d_(d), tf_(tf) {}
    double eval(double t, int order) const override {
        const double k = pi / tf_;
        const double ph = k * t;
        // order-th derivative of -cos(ph): cycle cos -> sin -> -cos... shifted
        const double cyc[4] = {-std::cos(ph), std::sin(ph), std::cos(ph), -std::sin(ph)};
        const double amp = 0.5 * d_ * std::pow(k, order);
        return (order == 0 ? 0.5 * d_ : 0.0) + amp * cyc[order % 4];
    }
    int max_order() const override { return 8; }

  private:
    double d_, tf_;
};

// Constant acceleration then deceleration (4 d / t_f^2), kink at t_f/2.
class TriangularProfile : public Profile {
  public:
    TriangularProfile(double d, double tf) : d_(d), tf_(tf) {}
    double eval(double t, int order) const override {
        const double a = 4.0 * d_ / (tf_ * tf_);
        switch (order) {
            case 0:
                if (t <= 0.5 * tf_) return 0.5 * a * t * t;
                return d_ - 0.5 * a * (tf_ - t) * (tf_ - t);
            case 1:
                if (t <= 0.5 * tf_) return a * t;
                return a * (tf_ - t);
            case 2:
                // One-sided at the kink: the left segment owns t = t_f/2.
                return t <= 0.5 * tf_ ? a : -a;
            default:
                return 0.0;
        }
    }
    int max_order() const override { return 3; }
    std::vector<double> interior_breakpoints() const override { return {0.5 * tf_}; }

  private:
    double d_, tf_;
};

// d * sum c_k s^k with s = t/t_f; evaluated in normalized time to avoid
// cancellation at large t_f.
class PolynomialProfile : public Profile {
  public:
    PolynomialProfile(std::vector<double> coeffs, double d, double tf)
        : c_(std::move(coeffs)), d_(d), tf_(tf) {}
    double eval(double t, int order) const override {
        const double s = t / tf_;
        const int top = static_cast<int>(c_.size()) - 1;
        if (order > top) return 0.0;
        double acc = 0.0;  // Horner on the order-th derivative polynomial
        for (int k = top; k >= order; --k) {
            double fac = 1.0;
            for (int j = 0; j < order; ++j) fac *= static_cast<double>(k - j);
            acc = acc * s + c_[static_cast<std::size_t>(k)] * fac;
        }
        double scale = d_;
        for (int j = 0; j < order; ++j) scale /= tf_;
        return scale * acc;
    }
    int max_order() const override { return 8; }

  private:
    std::vector<double> c_;
    double d_, tf_;
};

// zcup(t) = z(t) + zddot(t)/omega1^2 applied on top of an atom profile.
class TrapFromAtomProfile : public Profile {
  public:
    TrapFromAtomProfile(std::shared_ptr<const Profile> atom, double omega1)
        : atom_(std::move(atom)), inv_w2_(1.0 / (omega1 * omega1)) {}
    double eval(double t, int order) const override {
        return atom_->eval(t, order) + inv_w2_ * atom_->eval(t, order + 2);
    }
    int max_order() const override { return atom_->max_order() - 2; }
    std::vector<double> interior_breakpoints() const override {
        return atom_->interior_breakpoints();
    }

  private:
    std::shared_ptr<const Profile> atom_;
    double inv_w2_;
};

class SplineProfile : public Profile {
  public:
    explicit SplineProfile(CubicSpline spline) : spline_(std::move(spline)) {}
    double eval(double t, int order) const override { return spline_.eval(t, order); }
    int max_order() const override { return 3; }

  private:
    CubicSpline spline_;
};

MotionPlan make_plan(const TransportRequest& req, Frame frame, Family family,
                     std::shared_ptr<const Profile> profile) {
    req.validate();
    return MotionPlan{req, frame, family, std::move(profile)};
}

}  // namespace

MotionPlan sine_plan(const TransportRequest& req) {
    return make_plan(req, Frame::Trap, Family::Sine,
                     std::make_shared<SineProfile>(req.distance, req.duration));
}

MotionPlan triangular_plan(const TransportRequest& req) {
    return make_plan(req, Frame::Trap, Family::Triangular,
                     std::make_shared<TriangularProfile>(req.distance, req.duration));
}

namespace {
const std::vector<double> kQuinticCoeffs{0, 0, 0, 10, -15, 6};
const std::vector<double> kSepticCoeffs{0, 0, 0, 0, 35, -84, 70, -20};
}  // namespace

MotionPlan quintic_plan(const TransportRequest& req) {
    return make_plan(req, Frame::Atom, Family::Quintic,
                     std::make_shared<PolynomialProfile>(kQuinticCoeffs, req.distance,
                                                         req.duration));
}

MotionPlan septic_plan(const TransportRequest& req) {
    return make_plan(req, Frame::Atom, Family::Septic,
                     std::make_shared<PolynomialProfile>(kSepticCoeffs, req.distance,
                                                         req.duration));
}

MotionPlan quintic_trap_plan(const TransportRequest& req) {
    MotionPlan p = quintic_plan(req);
    p.frame = Frame::Trap;
    return p;
}

MotionPlan septic_trap_plan(const TransportRequest& req) {
    MotionPlan p = septic_plan(req);
    p.frame = Frame::Trap;
    return p;
}

MotionPlan trap_from_atom(const MotionPlan& atom_plan, double omega1) {
    if (atom_plan.frame != Frame::Atom)
        throw std::invalid_argument("trap_from_atom: plan must be atom-frame");
    if (!(omega1 > 0)) throw std::invalid_argument("trap_from_atom: omega1 must be > 0");
    if (atom_plan.profile->max_order() < 3)
        throw std::invalid_argument("trap_from_atom: atom plan needs derivatives beyond 2nd");
    MotionPlan p = atom_plan;
    p.frame = Frame::Trap;
    p.profile = std::make_shared<TrapFromAtomProfile>(atom_plan.profile, omega1);
    return p;
}

MotionPlan custom_plan_from_samples(std::span<const double> t, std::span<const double> z,
                                    double trap_freq, Frame frame) {
    if (t.size() != z.size() || t.size() < 4)
        throw std::invalid_argument("custom_plan_from_samples: need >= 4 matching samples");
    TransportRequest req{z.back() - z.front(), t.back() - t.front(), trap_freq};
    req.validate();
    MotionPlan p;
    p.request = req;
    p.frame = frame;
    p.family = Family::Custom;
    p.profile = std::make_shared<SplineProfile>(CubicSpline(t, z));
    return p;
}

bool BoundaryReport::atom_pass() const {
    for (int i = 0; i < 6; ++i)
        if (!conditions[i].pass) return false;
    return true;
}

bool BoundaryReport::trap_pass() const {
    return conditions[6].pass && conditions[7].pass;
}

bool BoundaryReport::all_pass() const {
    return atom_pass() && trap_pass();
}

std::string BoundaryReport::summary() const {
    std::ostringstream os;
    for (const auto& c : conditions) {
        os << (c.pass ? "  pass  " : "  FAIL  ") << c.name << "  residual " << c.residual
           << "  normalized " << c.normalized << "\n";
    }
    return os.str();
}

BoundaryReport check_boundaries(const MotionPlan& atom_plan, const MotionPlan& trap_plan,
                                double tol) {
    if (atom_plan.frame != Frame::Atom || trap_plan.frame != Frame::Trap)
        throw std::invalid_argument("check_boundaries: expected (atom, trap) pair");
    const double d = atom_plan.request.distance;
    const double tf = atom_plan.request.duration;
    const double vscale = std::abs(d) / tf;
    const double ascale = std::abs(d) / (tf * tf);

    BoundaryReport rep;
    rep.tol = tol;
    auto set = [&](int i, std::string name, double residual, double scale) {
        rep.conditions[i].name = std::move(name);
        rep.conditions[i].residual = residual;
        rep.conditions[i].normalized = std::abs(residual) / scale;
        rep.conditions[i].pass = rep.conditions[i].normalized <= tol;
    };
    set(0, "z(0) = 0", atom_plan.position(0.0), std::abs(d));
    set(1, "zdot(0) = 0", atom_plan.velocity(0.0), vscale);
    set(2, "zddot(0) = 0", atom_plan.acceleration(0.0), ascale);
    set(3, "z(tf) = d", atom_plan.position(tf) - d, std::abs(d));
    set(4, "zdot(tf) = 0", atom_plan.velocity(tf), vscale);
    set(5, "zddot(tf) = 0", atom_plan.acceleration(tf), ascale);
    set(6, "zcup_dot(0) = 0", trap_plan.velocity(0.0), vscale);
    set(7, "zcup_dot(tf) = 0", trap_plan.velocity(tf), vscale);
    return rep;
}

}  // namespace sta
