#include "sta/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sta/constants.hpp"
#include "sta/errors.hpp"
#include "sta/quadrature.hpp"
#include "sta/sloshing.hpp"

namespace sta {

using constants::k_boltzmann;
using constants::pi;

double IntegratorConfig::step_for(double omega0) const {
    if (dt > 0) return dt;
    return 2.0 * pi / (omega0 * steps_per_period);
}

void IntegratorConfig::validate(double omega0) const {
    if (steps_per_period < 1)
        throw std::invalid_argument("IntegratorConfig: steps_per_period must be >= 1");
    if (dt < 0) throw std::invalid_argument("IntegratorConfig: dt must be >= 0");
    if (dt > 0 && dt > 2.0 * pi / (omega0 * steps_per_period) * (1.0 + 1e-12))
        throw std::invalid_argument("IntegratorConfig: dt exceeds 2pi/(omega0 steps_per_period)");
    if (!(escape_radius > 0))
        throw std::invalid_argument("IntegratorConfig: escape_radius must be > 0");
}

namespace {

// Segment grid covering [0, tf + hold] with nodes on every plan breakpoint.
std::vector<std::pair<double, int>> segment_grid(const MotionPlan& plan, double hold,
                                                 double h_target) {
    const double tf = plan.request.duration;
    std::vector<double> edges{0.0};
    for (double b : plan.interior_breakpoints())
        if (b > 0 && b < tf) edges.push_back(b);
    edges.push_back(tf);
    if (hold > 0) edges.push_back(tf + hold);
    std::sort(edges.begin(), edges.end());
    std::vector<std::pair<double, int>> segs;  // (end_time, steps)
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double len = edges[i + 1] - edges[i];
        const int n = std::max(1, static_cast<int>(std::ceil(len / h_target - 1e-9)));
        segs.emplace_back(edges[i + 1], n);
    }
    return segs;
}

struct HarmonicForce {
    double k;  // omega0^2
    double operator()(double u) const { return -k * u; }
};

struct QuarticForce {
    double k, inv_zr2;
    double operator()(double u) const { return -k * u * (1.0 - 2.0 * u * u * inv_zr2); }
};

struct GaussianForce {
    double k, inv_zr2;
    double operator()(double u) const {
        const double den = 1.0 + u * u * inv_zr2;
        return -k * u / (den * den);
    }
};

// One RK4 step for every live particle; the trap position is shared.
template <typename Force>
void rk4_step(const Force& acc, std::span<double> z, std::span<double> v,
              std::span<const unsigned char> alive, double zc0, double zc1, double zc2,
              double h) {
    const std::size_t n = z.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        const double k1z = v[i];
        const double k1v = acc(z[i] - zc0);
        const double k2z = v[i] + 0.5 * h * k1v;
        const double k2v = acc(z[i] + 0.5 * h * k1z - zc1);
        const double k3z = v[i] + 0.5 * h * k2v;
        const double k3v = acc(z[i] + 0.5 * h * k2z - zc1);
        const double k4z = v[i] + h * k3v;
        const double k4v = acc(z[i] + h * k3z - zc2);
        z[i] += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        v[i] += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
}

template <typename Force, typename Recorder>
void run_dynamics(const MotionPlan& plan, const Force& acc, double hold, double h_target,
                  double escape_dist, std::span<double> z, std::span<double> v,
                  std::span<unsigned char> alive, std::span<double> escape_time,
                  Recorder&& record) {
    const double tf = plan.request.duration;
    auto trap_at = [&](double t) { return plan.position(std::min(t, tf)); };
    const auto segs = segment_grid(plan, hold, h_target);
    double t = 0.0;
    record(t, trap_at(t));
    const bool check_escape = escape_dist > 0;
    for (const auto& [t_end, nsteps] : segs) {
        const double h = (t_end - t) / nsteps;
        for (int s = 0; s < nsteps; ++s) {
            const double zc0 = trap_at(t);
            const double zc1 = trap_at(t + 0.5 * h);
            const double zc2 = trap_at(t + h);
            rk4_step(acc, z, v, alive, zc0, zc1, zc2, h);
            t = (s + 1 == nsteps) ? t_end : t + h;
            if (check_escape) {
                for (std::size_t i = 0; i < z.size(); ++i) {
                    if (!alive[i]) continue;
                    if (!std::isfinite(z[i]) || std::abs(z[i] - zc2) > escape_dist) {
                        alive[i] = 0;
                        escape_time[i] = t;
                    }
                }
            }
            record(t, zc2);
        }
    }
}

template <typename Body>
auto with_force(const TrapConfig& cfg, ForceModel model, Body&& body) {
    const double w0 = cfg.axial_freq();
    const double k = w0 * w0;
    const double zr = cfg.rayleigh();
    switch (model) {
        case ForceModel::Harmonic: return body(HarmonicForce{k});
        case ForceModel::QuarticCorrected: return body(QuarticForce{k, 1.0 / (zr * zr)});
        case ForceModel::FullGaussian: return body(GaussianForce{k, 1.0 / (zr * zr)});
    }
    throw std::logic_error("unreachable");
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Trajectory integrate(const MotionPlan& trap_plan, const TrapConfig& cfg, ForceModel model,
                     ParticleState s0, const IntegratorConfig& icfg, double hold_time) {
    if (trap_plan.frame != Frame::Trap)
        throw std::invalid_argument("integrate: plan must be trap-frame");
    cfg.validate();
    const double w0 = cfg.axial_freq();
    icfg.validate(w0);
    if (!std::isfinite(s0.z) || !std::isfinite(s0.v))
        throw std::invalid_argument("integrate: initial state must be finite");

    double z = s0.z, v = s0.v;
    unsigned char alive = 1;
    double t_escape = std::numeric_limits<double>::quiet_NaN();
    const double escape_dist =
        model == ForceModel::Harmonic ? 0.0 : icfg.escape_radius * cfg.rayleigh();

    Trajectory traj;
    auto record = [&](double t, double) {
        traj.t.push_back(t);
        traj.z.push_back(z);
        traj.v.push_back(v);
    };
    with_force(cfg, model, [&](auto force) {
        run_dynamics(trap_plan, force, hold_time, icfg.step_for(w0), escape_dist, {&z, 1},
                     {&v, 1}, {&alive, 1}, {&t_escape, 1}, record);
    });
    traj.escaped = !alive;
    traj.escape_time = t_escape;
    return traj;
}

EnsembleMoments EnsembleState::moments(double z_cup) const {
    if (particles.empty()) throw std::invalid_argument("EnsembleState: empty");
    std::vector<double> sq(particles.size());
    for (std::size_t i = 0; i < particles.size(); ++i) {
        const double u = particles[i].z - z_cup;
        sq[i] = u * u;
    }
    EnsembleMoments m;
    m.axial_var = pairwise_sum(sq) / static_cast<double>(sq.size());
    m.radial_var = 0.0;
    return m;
}

namespace {

double sampling_support(const TrapConfig& cfg, ForceModel model) {
    // FullGaussian: one Rayleigh range. Quartic: inside the inflection radius,
    // beyond which that potential turns over and is unbounded below.
    const double zr = cfg.rayleigh();
    return model == ForceModel::QuarticCorrected ? zr / std::sqrt(2.0) : zr;
}

}  // namespace

double boltzmann_axial_variance(const TrapConfig& cfg, ForceModel model, double temperature) {
    cfg.validate();
    if (!(temperature > 0)) throw std::invalid_argument("temperature must be > 0");
    const double kT = k_boltzmann * temperature;
    if (model == ForceModel::Harmonic) {
        const double w0 = cfg.axial_freq();
        return kT / (cfg.mass * w0 * w0);
    }
    const double lim = sampling_support(cfg, model);
    auto weight = [&](double u) {
        const double du = axial_potential(u, 0.0, cfg, model) -
                          axial_potential(0.0, 0.0, cfg, model);
        return std::exp(-du / kT);
    };
    QuadratureOptions opts{1e-14 * lim, 48};
    const double norm = integrate_real([&](double u) { return weight(u); }, -lim, lim, opts);
    opts.abs_tol = 1e-14 * lim * lim * lim;
    const double second =
        integrate_real([&](double u) { return u * u * weight(u); }, -lim, lim, opts);
    return second / norm;
}

double temperature_for_axial_spread(const TrapConfig& cfg, ForceModel model,
                                    double target_rms) {
    if (!(target_rms > 0)) throw std::invalid_argument("target_rms must be > 0");
    const double target_var = target_rms * target_rms;
    const double w0 = cfg.axial_freq();
    // Harmonic guess, then bisection on the monotone variance(T) curve.
    const double t_harm = target_var * cfg.mass * w0 * w0 / k_boltzmann;
    if (model == ForceModel::Harmonic) return t_harm;
    double lo = t_harm * 0.2, hi = t_harm;
    if (boltzmann_axial_variance(cfg, model, hi) < target_var) {
        while (boltzmann_axial_variance(cfg, model, hi) < target_var) {
            hi *= 1.5;
            if (k_boltzmann * hi >= cfg.depth)
                throw std::invalid_argument(
                    "temperature_for_axial_spread: spread not reachable below trap depth");
        }
        lo = hi / 1.5;
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-14 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (boltzmann_axial_variance(cfg, model, mid) < target_var ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

EnsembleState sample_thermal_ensemble(const TrapConfig& cfg, ForceModel model,
                                      double temperature, int n, std::uint64_t seed,
                                      bool antithetic) {
    cfg.validate();
    if (n < 1) throw std::invalid_argument("sample_thermal_ensemble: n must be >= 1");
    if (!(temperature > 0)) throw std::invalid_argument("temperature must be > 0");
    const double kT = k_boltzmann * temperature;
    if (kT >= cfg.depth)
        throw std::invalid_argument("sample_thermal_ensemble: kT >= trap depth, no bound states");
    if (antithetic && n % 2 != 0)
        throw std::invalid_argument("sample_thermal_ensemble: antithetic needs even n");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> vel(0.0, std::sqrt(kT / cfg.mass));
    const double w0 = cfg.axial_freq();

    auto draw_position = [&]() -> double {
        if (model == ForceModel::Harmonic) {
            std::normal_distribution<double> pos(0.0, std::sqrt(kT / (cfg.mass * w0 * w0)));
            return pos(rng);
        }
        const double lim = sampling_support(cfg, model);
        std::uniform_real_distribution<double> uni(-lim, lim);
        std::uniform_real_distribution<double> acc(0.0, 1.0);
        const double u_floor = axial_potential(0.0, 0.0, cfg, model);
        for (long attempt = 0; attempt < 100'000'000L; ++attempt) {
            const double u = uni(rng);
            const double du = axial_potential(u, 0.0, cfg, model) - u_floor;
            if (acc(rng) < std::exp(-du / kT)) return u;
        }
        throw SolverError("sample_thermal_ensemble: rejection sampling stalled");
    };

    EnsembleState ens;
    ens.temperature = temperature;
    ens.seed = seed;
    ens.particles.resize(static_cast<std::size_t>(n));
    const int draws = antithetic ? n / 2 : n;
    for (int i = 0; i < draws; ++i) {
        const double z = draw_position();
        const double v = vel(rng);
        if (antithetic) {
            ens.particles[static_cast<std::size_t>(2 * i)] = {z, v, 0.0};
            ens.particles[static_cast<std::size_t>(2 * i + 1)] = {-z, -v, 0.0};
        } else {
            ens.particles[static_cast<std::size_t>(i)] = {z, v, 0.0};
        }
    }
    return ens;
}

TransportObservables simulate_transport(const EnsembleState& ensemble,
                                        const MotionPlan& trap_plan, const TrapConfig& cfg,
                                        ForceModel model, const IntegratorConfig& icfg,
                                        double hold_time, int record_stride) {
    if (ensemble.particles.empty())
        throw std::invalid_argument("simulate_transport: empty ensemble");
    if (trap_plan.frame != Frame::Trap)
        throw std::invalid_argument("simulate_transport: plan must be trap-frame");
    if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
    cfg.validate();
    const double w0 = cfg.axial_freq();
    icfg.validate(w0);

    const std::size_t n = ensemble.particles.size();
    std::vector<double> z(n), v(n), scratch(n), escape_time(n);
    std::vector<unsigned char> alive(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = ensemble.particles[i].z;
        v[i] = ensemble.particles[i].v;
    }
    const double escape_dist =
        model == ForceModel::Harmonic ? 0.0 : icfg.escape_radius * cfg.rayleigh();

    TransportObservables obs;
    long step_count = 0;
    auto record = [&](double t, double zc) {
        if (step_count++ % record_stride != 0) return;
        // Escaped particles are frozen and excluded from the averages.
        std::size_t live = 0;
        for (std::size_t i = 0; i < n; ++i) {
            scratch[i] = alive[i] ? z[i] : 0.0;
            live += alive[i];
        }
        if (live == 0) live = 1;
        const double com = pairwise_sum(scratch) / static_cast<double>(live);
        for (std::size_t i = 0; i < n; ++i)
            scratch[i] = alive[i] ? (z[i] - com) * (z[i] - com) : 0.0;
        const double var = pairwise_sum(scratch) / static_cast<double>(live);
        for (std::size_t i = 0; i < n; ++i) scratch[i] = alive[i] ? v[i] : 0.0;
        const double vcom = pairwise_sum(scratch) / static_cast<double>(live);
        obs.t.push_back(t);
        obs.com.push_back(com);
        obs.variance.push_back(var);
        obs.excitation.push_back(excitation_energy(com - zc, vcom, w0, cfg.mass));
        obs.surviving.push_back(static_cast<double>(live) / static_cast<double>(n));
    };
    with_force(cfg, model, [&](auto force) {
        run_dynamics(trap_plan, force, hold_time, icfg.step_for(w0), escape_dist, z, v,
                     alive, escape_time, record);
    });
    return obs;
}

double time_of_flight(double z, double v, double t_e) {
    if (t_e < 0) throw std::invalid_argument("time_of_flight: t_e must be >= 0");
    return z + v * t_e;
}

ParticleState time_of_flight(const ParticleState& s, double t_e) {
    return {time_of_flight(s.z, s.v, t_e), s.v, s.t + t_e};
}

std::vector<ProbeRecord> stop_and_probe_scan(const MotionPlan& trap_plan,
                                             const TrapConfig& cfg, ForceModel model,
                                             std::span<const double> wait_times, double t_e,
                                             int repetitions, double noise_sigma,
                                             std::uint64_t seed, const IntegratorConfig& icfg) {
    if (wait_times.empty()) throw std::invalid_argument("stop_and_probe_scan: no wait times");
    if (repetitions < 1) throw std::invalid_argument("stop_and_probe_scan: repetitions >= 1");
    if (noise_sigma < 0) throw std::invalid_argument("stop_and_probe_scan: noise_sigma >= 0");
    const double max_wait = *std::max_element(wait_times.begin(), wait_times.end());
    if (max_wait < 0) throw std::invalid_argument("stop_and_probe_scan: negative wait");

    const Trajectory traj =
        integrate(trap_plan, cfg, model, ParticleState{}, icfg, max_wait + 1e-12);
    const double tf = trap_plan.request.duration;

    // States at the requested waits, interpolated on the dense output.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma > 0 ? noise_sigma : 1.0);
    std::vector<ProbeRecord> out;
    out.reserve(wait_times.size() * static_cast<std::size_t>(repetitions));
    for (double w : wait_times) {
        const double t_abs = tf + w;
        const auto it = std::lower_bound(traj.t.begin(), traj.t.end(), t_abs);
        std::size_t j = static_cast<std::size_t>(it - traj.t.begin());
        double zw, vw;
        if (j >= traj.t.size()) {
            zw = traj.z.back();
            vw = traj.v.back();
        } else if (j == 0 || traj.t[j] == t_abs) {
            zw = traj.z[j];
            vw = traj.v[j];
        } else {
            const double f = (t_abs - traj.t[j - 1]) / (traj.t[j] - traj.t[j - 1]);
            zw = traj.z[j - 1] + f * (traj.z[j] - traj.z[j - 1]);
            vw = traj.v[j - 1] + f * (traj.v[j] - traj.v[j - 1]);
        }
        const double expanded = time_of_flight(zw, vw, t_e);
        for (int r = 0; r < repetitions; ++r) {
            const double eps = noise_sigma > 0 ? noise(rng) : 0.0;
            out.push_back({w, r, expanded + eps});
        }
    }
    return out;
}

BoundaryReport check_boundaries(const MotionPlan& trap_plan, const TrapConfig& cfg,
                                double tol, const IntegratorConfig& icfg) {
    if (trap_plan.frame != Frame::Trap)
        throw std::invalid_argument("check_boundaries: plan must be trap-frame");
    const double w0 = cfg.axial_freq();
    const Trajectory traj =
        integrate(trap_plan, cfg, ForceModel::Harmonic, ParticleState{}, icfg);
    const auto fin = traj.final_state();
    const double d = trap_plan.request.distance;
    const double tf = trap_plan.request.duration;
    const double vscale = std::abs(d) / tf;
    const double ascale = std::abs(d) / (tf * tf);

    BoundaryReport rep;
    rep.tol = tol;
    auto set = [&](int i, std::string name, double residual, double scale) {
        rep.conditions[static_cast<std::size_t>(i)] =
            BoundaryCondition{std::move(name), residual, std::abs(residual) / scale,
                              std::abs(residual) / scale <= tol};
    };
    // The simulated atom starts from rest at z = 0, so the start-of-motion atom
    // conditions reduce to the trap starting at its own minimum.
    set(0, "z(0) = 0", 0.0, std::abs(d));
    set(1, "zdot(0) = 0", 0.0, vscale);
    set(2, "zddot(0) = 0", -w0 * w0 * (0.0 - trap_plan.position(0.0)), ascale);
    set(3, "z(tf) = d", fin.z - d, std::abs(d));
    set(4, "zdot(tf) = 0", fin.v, vscale);
    set(5, "zddot(tf) = 0", -w0 * w0 * (fin.z - trap_plan.position(tf)), ascale);
    set(6, "zcup_dot(0) = 0", trap_plan.velocity(0.0), vscale);
    set(7, "zcup_dot(tf) = 0", trap_plan.velocity(tf), vscale);
    return rep;
}

}  // namespace sta
