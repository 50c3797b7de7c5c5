#include "sta/correction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "sta/constants.hpp"
#include "sta/errors.hpp"
#include <limits>
#include "sta/quadrature.hpp"

namespace sta {

using constants::pi;
using cplx = std::complex<double>;

double CorrectionParams::ramp_duration() const { return pi / omega_c; }

void CorrectionParams::validate() const {
    if (!(omega_c > 0)) throw std::invalid_argument("CorrectionParams: omega_c must be > 0");
    if (!(amplitude >= 0) || !std::isfinite(amplitude))
        throw std::invalid_argument("CorrectionParams: amplitude must be finite and >= 0");
    if (!std::isfinite(phase)) throw std::invalid_argument("CorrectionParams: phase not finite");
}

namespace {

// Envelope A(t)/A0 and its derivatives up to third order.
struct Envelope {
    double omega_c, tf;
    double eval(double t, int order) const {
        const double tr = pi / omega_c;
        double tau, sign;
        if (t < tr) {
            tau = t;
            sign = 1.0;
        } else if (t > tf - tr) {
            tau = tf - t;
            sign = -1.0;  // odd-order derivatives flip under time reversal
        } else {
            return order == 0 ? 1.0 : 0.0;
        }
        // sin^2(w t / 2) = (1 - cos(w tau)) / 2
        const double w = omega_c;
        const double factor = (order % 2 == 1) ? sign : 1.0;
        switch (order) {
            case 0: return 0.5 * (1.0 - std::cos(w * tau));
            case 1: return factor * 0.5 * w * std::sin(w * tau);
            case 2: return factor * 0.5 * w * w * std::cos(w * tau);
            case 3: return factor * -0.5 * w * w * w * std::sin(w * tau);
            default: throw std::invalid_argument("Envelope: order 0..3");
        }
    }
};

class CorrectedProfile : public Profile {
  public:
    CorrectedProfile(std::shared_ptr<const Profile> base, CorrectionParams p, double tf)
        : base_(std::move(base)), p_(p), env_{p.omega_c, tf}, tf_(tf) {}

    double eval(double t, int order) const override {
        // Leibniz rule on A(t) * sin(w t + phi).
        double corr = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= order; ++j) {
            if (j > 0) binom = binom * (order - j + 1) / j;
            corr += binom * env_.eval(t, j) * tone(t, order - j);
        }
        return base_->eval(t, order) + p_.amplitude * corr;
    }
    int max_order() const override { return std::min(base_->max_order(), 3); }
    std::vector<double> interior_breakpoints() const override {
        auto b = base_->interior_breakpoints();
        b.push_back(p_.ramp_duration());
        b.push_back(tf_ - p_.ramp_duration());
        std::sort(b.begin(), b.end());
        return b;
    }

  private:
    double tone(double t, int order) const {
        const double ph = p_.omega_c * t + p_.phase + 0.5 * pi * order;
        double s = std::sin(ph);
        for (int j = 0; j < order; ++j) s *= p_.omega_c;
        return s;
    }

    std::shared_ptr<const Profile> base_;
    CorrectionParams p_;
    Envelope env_;
    double tf_;
};

void require_base_at_rest(const MotionPlan& base) {
    const double vscale = std::abs(base.request.distance) / base.request.duration;
    const double v0 = std::abs(base.velocity(0.0)) / vscale;
    const double v1 = std::abs(base.velocity(base.request.duration)) / vscale;
    if (v0 > kBaseRestTol || v1 > kBaseRestTol)
        throw std::invalid_argument(
            "apply_correction: base trap path must start and end at rest");
    if (std::abs(base.position(0.0)) / std::abs(base.request.distance) > kBaseRestTol)
        throw std::invalid_argument("apply_correction: base trap path must start at z = 0");
}

}  // namespace

MotionPlan apply_correction(const MotionPlan& base, const CorrectionParams& params) {
    params.validate();
    if (base.frame != Frame::Trap)
        throw std::invalid_argument("apply_correction: base must be trap-frame");
    require_base_at_rest(base);
    if (base.request.duration < 2.0 * params.ramp_duration())
        throw std::invalid_argument(
            "apply_correction: duration too short for both correction ramps");
    MotionPlan p = base;
    p.family = Family::Corrected;
    p.profile = std::make_shared<CorrectedProfile>(base.profile, params,
                                                   base.request.duration);
    return p;
}

std::pair<cplx, cplx> correction_responses(double t_f, double omega_c) {
    // Unit-amplitude corrections at phase 0 and pi/2 on a zero base. Build them
    // as profiles so the integral uses the same machinery as everything else.
    TransportRequest req{1.0, t_f, omega_c};  // distance is irrelevant here
    MotionPlan zero;
    zero.request = req;
    zero.frame = Frame::Trap;
    zero.family = Family::Custom;
    struct ZeroProfile : Profile {
        double eval(double, int) const override { return 0.0; }
        int max_order() const override { return 8; }
    };
    zero.profile = std::make_shared<ZeroProfile>();

    auto response = [&](double phase) {
        const MotionPlan tone =
            apply_correction(zero, CorrectionParams{1.0, phase, omega_c});
        QuadratureOptions opts{1e-14 * std::max(1.0, t_f * omega_c), 48};
        const auto breaks = tone.interior_breakpoints();
        return integrate_segments(
            [&](double t) {
                return cplx{std::cos(omega_c * t), -std::sin(omega_c * t)} * tone.velocity(t);
            },
            0.0, t_f, breaks, opts);
    };
    return {response(0.0), response(0.5 * pi)};
}

CorrectionSolution solve_correction(const MotionPlan& base, double omega_c) {
    if (!(omega_c > 0)) throw std::invalid_argument("solve_correction: omega_c must be > 0");
    require_base_at_rest(base);
    const double tf = base.request.duration;
    const double d = std::abs(base.request.distance);
    if (tf < 2.0 * pi / omega_c)
        throw std::invalid_argument("solve_correction: duration too short for both ramps");

    const SloshingResult base_res = sloshing_residual(base, omega_c);
    const auto [cc, cs] = correction_responses(tf, omega_c);

    // Solve R_base + p*Cc + q*Cs = 0 for (p, q) = A0 (cos phi0, sin phi0).
    const double a = cc.real(), b = cs.real();
    const double c = cc.imag(), e = cs.imag();
    const double det = a * e - b * c;
    // Condition number of the 2x2 via its singular values.
    const double fro2 = a * a + b * b + c * c + e * e;
    const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
    const double smax2 = 0.5 * (fro2 + disc);
    const double smin2 = 0.5 * (fro2 - disc);
    const double cond = smin2 > 0 ? std::sqrt(smax2 / smin2)
                                  : std::numeric_limits<double>::infinity();

    CorrectionSolution sol;
    sol.base_residual = base_res.residual;

    double p, q;
    if (cond < 1e8) {
        p = (-base_res.residual.real() * e + base_res.residual.imag() * b) / det;
        q = (-base_res.residual.imag() * a + base_res.residual.real() * c) / det;
    } else {
        // Degenerate response: derivative-free Nelder-Mead on |R|^2 in (p, q).
        sol.used_fallback = true;
        auto objective = [&](double pp, double qq) {
            const cplx r = base_res.residual + pp * cc + qq * cs;
            return std::norm(r);
        };
        const double scale = std::max(d, std::abs(base_res.residual));
        std::array<std::array<double, 2>, 3> simplex{{{0.0, 0.0}, {scale, 0.0}, {0.0, scale}}};
        std::array<double, 3> f{};
        for (int i = 0; i < 3; ++i) f[i] = objective(simplex[i][0], simplex[i][1]);
        for (int it = 0; it < 500; ++it) {
            std::array<int, 3> idx{0, 1, 2};
            std::sort(idx.begin(), idx.end(), [&](int i, int j) { return f[i] < f[j]; });
            const auto& best = simplex[idx[0]];
            const auto& worst = simplex[idx[2]];
            const std::array<double, 2> centroid{
                0.5 * (simplex[idx[0]][0] + simplex[idx[1]][0]),
                0.5 * (simplex[idx[0]][1] + simplex[idx[1]][1])};
            std::array<double, 2> refl{2.0 * centroid[0] - worst[0],
                                       2.0 * centroid[1] - worst[1]};
            double fr = objective(refl[0], refl[1]);
            if (fr < f[idx[0]]) {
                const std::array<double, 2> exp_{3.0 * centroid[0] - 2.0 * worst[0],
                                                 3.0 * centroid[1] - 2.0 * worst[1]};
                const double fe = objective(exp_[0], exp_[1]);
                if (fe < fr) {
                    simplex[idx[2]] = exp_;
                    f[idx[2]] = fe;
                } else {
                    simplex[idx[2]] = refl;
                    f[idx[2]] = fr;
                }
            } else if (fr < f[idx[1]]) {
                simplex[idx[2]] = refl;
                f[idx[2]] = fr;
            } else {
                const std::array<double, 2> con{0.5 * (centroid[0] + worst[0]),
                                                0.5 * (centroid[1] + worst[1])};
                const double fc = objective(con[0], con[1]);
                if (fc < f[idx[2]]) {
                    simplex[idx[2]] = con;
                    f[idx[2]] = fc;
                } else {
                    for (int i : {idx[1], idx[2]}) {
                        simplex[i][0] = 0.5 * (simplex[i][0] + best[0]);
                        simplex[i][1] = 0.5 * (simplex[i][1] + best[1]);
                        f[i] = objective(simplex[i][0], simplex[i][1]);
                    }
                }
            }
        }
        const int ibest = static_cast<int>(
            std::min_element(f.begin(), f.end()) - f.begin());
        p = simplex[ibest][0];
        q = simplex[ibest][1];
    }

    sol.params.amplitude = std::hypot(p, q);
    sol.params.phase = std::atan2(q, p);
    if (sol.params.phase < 0) sol.params.phase += 2.0 * pi;
    sol.params.omega_c = omega_c;

    const MotionPlan corrected = apply_correction(base, sol.params);
    sol.corrected_amplitude = sloshing_residual(corrected, omega_c).amplitude;
    sol.converged = sol.corrected_amplitude < 1e-9 * d;
    if (sol.used_fallback && !sol.converged)
        throw SolverError("solve_correction: fallback minimizer left residual above tolerance");
    return sol;
}

std::vector<AmplitudeSweepRow> amplitude_sweep(const MotionPlan& base, double phi0,
                                               double omega_c,
                                               std::span<const double> amplitudes) {
    std::vector<AmplitudeSweepRow> rows;
    rows.reserve(amplitudes.size());
    for (double a0 : amplitudes) {
        const MotionPlan plan =
            a0 == 0.0 ? base : apply_correction(base, CorrectionParams{a0, phi0, omega_c});
        const auto r = sloshing_residual(plan, omega_c);
        rows.push_back(AmplitudeSweepRow{a0, r.amplitude, r.phase});
    }
    return rows;
}

std::vector<FrequencySweepRow> frequency_sensitivity_sweep(const MotionPlan& atom_plan,
                                                           double omega0_true,
                                                           std::span<const double> omega1s) {
    if (atom_plan.frame != Frame::Atom)
        throw std::invalid_argument("frequency_sensitivity_sweep: need an atom-frame plan");
    std::vector<FrequencySweepRow> rows;
    rows.reserve(omega1s.size());
    for (double w1 : omega1s) {
        const MotionPlan trap = trap_from_atom(atom_plan, w1);
        const auto r = sloshing_residual(trap, omega0_true);
        rows.push_back(FrequencySweepRow{w1, r.amplitude, r.phase});
    }
    return rows;
}

}  // namespace sta
