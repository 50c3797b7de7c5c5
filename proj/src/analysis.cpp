#include "sta/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "sta/constants.hpp"
#include "sta/errors.hpp"

namespace sta {

using constants::pi;

double tof_prefactor(double omega, double t_e, double tau) {
    if (!(tau > 0)) throw std::invalid_argument("tof_prefactor: tau must be > 0");
    if (t_e < 0) throw std::invalid_argument("tof_prefactor: t_e must be >= 0");
    return std::hypot(1.0 - t_e / tau, omega * t_e);
}

namespace {

// Model in parameters p = (A, gamma, omega, phi), gamma = 1/tau >= 0.
double model_value(const std::array<double, 4>& p, double t, double t_e) {
    const double pref = std::hypot(1.0 - t_e * p[1], p[2] * t_e);
    const double shift = std::atan2(p[2] * t_e, 1.0 - t_e * p[1]);
    return p[0] * pref * std::sin(p[2] * t + p[3] + shift) * std::exp(-p[1] * t);
}

double chi_squared(const std::array<double, 4>& p, std::span<const FitPoint> data,
                   std::span<const double> weights, double t_e) {
    double s = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = (data[i].z - model_value(p, data[i].t, t_e)) * weights[i];
        s += r * r;
    }
    return s;
}

// Solves the symmetric 4x4 system in place; returns false if singular.
bool solve4(std::array<std::array<double, 5>, 4>& m) {
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-300) return false;
        std::swap(m[col], m[piv]);
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 5; ++c) m[r][c] -= f * m[col][c];
        }
    }
    for (int r = 0; r < 4; ++r) m[r][4] /= m[r][r];
    return true;
}

bool invert4(const std::array<std::array<double, 4>, 4>& a,
             std::array<std::array<double, 4>, 4>& inv) {
    std::array<std::array<double, 8>, 4> m{};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) m[r][c] = a[r][c];
        m[r][4 + r] = 1.0;
    }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-300) return false;
        std::swap(m[col], m[piv]);
        const double scale = m[col][col];
        for (int c = 0; c < 8; ++c) m[col][c] /= scale;
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = m[r][col];
            for (int c = 0; c < 8; ++c) m[r][c] -= f * m[col][c];
        }
    }
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) inv[r][c] = m[r][4 + c];
    return true;
}

// Resolvable frequency band: at least a quarter cycle over the span, and
// safely below the sample Nyquist rate, where equally spaced data make the
// amplitude unidentifiable (the aliasing ridge A sin(phi) = const).
std::pair<double, double> frequency_band(std::span<const FitPoint> data) {
    const double span = data.back().t - data.front().t;
    if (!(span > 0)) throw FitError("fit_decaying_sine: zero time span");
    double dt_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < data.size(); ++i)
        dt_min = std::min(dt_min, data[i].t - data[i - 1].t);
    return {0.5 * pi / span, 0.95 * pi / std::max(dt_min, span * 1e-6)};
}

// Initial frequency: peak of the direct Fourier magnitude on a dense grid.
double frequency_guess(std::span<const FitPoint> data) {
    const auto [w_lo, w_hi] = frequency_band(data);
    const int n_scan = 4000;
    double best_w = w_lo, best_mag = -1.0;
    for (int i = 0; i <= n_scan; ++i) {
        const double w = w_lo + (w_hi - w_lo) * i / n_scan;
        double re = 0.0, im = 0.0;
        for (const auto& pt : data) {
            re += pt.z * std::cos(w * pt.t);
            im -= pt.z * std::sin(w * pt.t);
        }
        const double mag = re * re + im * im;
        if (mag > best_mag) {
            best_mag = mag;
            best_w = w;
        }
    }
    return best_w;
}

// Initial decay rate from the slope of log |envelope| over local maxima.
double decay_guess(std::span<const FitPoint> data) {
    std::vector<std::pair<double, double>> peaks;
    for (std::size_t i = 1; i + 1 < data.size(); ++i) {
        const double a = std::abs(data[i].z);
        if (a >= std::abs(data[i - 1].z) && a >= std::abs(data[i + 1].z) && a > 0)
            peaks.emplace_back(data[i].t, std::log(a));
    }
    if (peaks.size() < 2) return 0.0;
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (const auto& [t, y] : peaks) {
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double n = static_cast<double>(peaks.size());
    const double den = n * stt - st * st;
    if (den <= 0) return 0.0;
    const double slope = (n * sty - st * sy) / den;
    return std::max(0.0, -slope);
}

}  // namespace

double DecayingSineFit::amplitude_sigma() const {
    return std::sqrt(std::max(0.0, covariance[0][0]));
}

double DecayingSineFit::prefactor() const {
    return std::hypot(1.0 - (std::isfinite(tau) ? t_e / tau : 0.0), omega * t_e);
}

double DecayingSineFit::apparent_amplitude() const { return amplitude * prefactor(); }

DecayingSineFit fit_decaying_sine(std::span<const FitPoint> data, double t_e,
                                  const FitOptions& opts) {
    if (data.size() < 8)
        throw std::invalid_argument("fit_decaying_sine: need at least 8 points");
    if (t_e < 0) throw std::invalid_argument("fit_decaying_sine: t_e must be >= 0");
    std::vector<FitPoint> pts(data.begin(), data.end());
    std::sort(pts.begin(), pts.end(), [](const FitPoint& a, const FitPoint& b) {
        return a.t < b.t;
    });

    // Degenerate-data guard: a constant series carries no oscillation.
    double zmin = pts.front().z, zmax = pts.front().z;
    for (const auto& p : pts) {
        zmin = std::min(zmin, p.z);
        zmax = std::max(zmax, p.z);
    }
    const double spread = zmax - zmin;
    if (!(spread > 0)) throw FitError("fit_decaying_sine: degenerate (constant) data");

    // Weights: standard weighted least squares when sigmas are supplied.
    // Vanishing sigmas are floored at a tenth of the median positive sigma so a
    // lucky repetition triple cannot dominate the fit.
    std::vector<double> weights(pts.size(), 1.0);
    std::vector<double> sig_pos;
    for (const auto& p : pts)
        if (p.sigma > 0) sig_pos.push_back(p.sigma);
    const bool weighted = !sig_pos.empty();
    if (weighted) {
        std::nth_element(sig_pos.begin(), sig_pos.begin() + sig_pos.size() / 2, sig_pos.end());
        const double floor_sigma = 0.1 * sig_pos[sig_pos.size() / 2];
        for (std::size_t i = 0; i < pts.size(); ++i)
            weights[i] = 1.0 / std::max(pts[i].sigma, floor_sigma);
    }

    // Identifiability bound on the decay rate: anything faster than e^{-20}
    // over the observation window is indistinguishable from a spike and lets
    // the amplitude run away on noise-floor data.
    const double gamma_max = 20.0 / (pts.back().t - pts.front().t);
    const auto [w_band_lo, w_band_hi] = frequency_band(pts);
    const double w_guess = frequency_guess(pts);
    const double g_guess = std::min(decay_guess(pts), gamma_max);
    // Amplitude/phase from the linear sub-fit at fixed (w, gamma):
    // z ~ a sin(wt) e^{-gt} + b cos(wt) e^{-gt}.
    double saa = 0, sab = 0, sbb = 0, saz = 0, sbz = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double e = std::exp(-g_guess * pts[i].t) * weights[i];
        const double fa = std::sin(w_guess * pts[i].t) * e;
        const double fb = std::cos(w_guess * pts[i].t) * e;
        const double zz = pts[i].z * weights[i];
        saa += fa * fa;
        sab += fa * fb;
        sbb += fb * fb;
        saz += fa * zz;
        sbz += fb * zz;
    }
    const double det2 = saa * sbb - sab * sab;
    double a_lin = 0, b_lin = spread * 0.5;
    if (std::abs(det2) > 1e-300) {
        a_lin = (saz * sbb - sbz * sab) / det2;
        b_lin = (sbz * saa - saz * sab) / det2;
    }
    const double apparent0 = std::hypot(a_lin, b_lin);
    const double total_phase0 = std::atan2(b_lin, a_lin);
    const double pref0 = std::hypot(1.0 - t_e * g_guess, w_guess * t_e);
    const double shift0 = std::atan2(w_guess * t_e, 1.0 - t_e * g_guess);

    std::array<double, 4> p{apparent0 / pref0, g_guess, w_guess, total_phase0 - shift0};
    const std::array<double, 4> scales{std::max(apparent0, spread * 0.1),
                                       std::max(g_guess, 1.0 / (pts.back().t - pts.front().t)),
                                       w_guess, 1.0};

    // Damped least squares with forward-difference Jacobian. Steps are accepted
    // only when chi^2 decreases.
    double chi2 = chi_squared(p, pts, weights, t_e);
    double lambda = 1e-3;
    int iter = 0;
    bool converged = false;
    double chi2_window = chi2;
    for (; iter < opts.max_iterations; ++iter) {
        // Five-iteration stall window: noise-floor data never meets the
        // parameter tolerance but stops making meaningful progress long
        // before (cf. the usual least-squares ftol).
        if (iter % 5 == 4) {
            if (chi2_window - chi2 <= 1e-6 * std::max(chi2, 1e-300)) {
                converged = true;
                break;
            }
            chi2_window = chi2;
        }
        // Jacobian
        std::vector<std::array<double, 4>> jac(pts.size());
        std::vector<double> resid(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            resid[i] = (pts[i].z - model_value(p, pts[i].t, t_e)) * weights[i];
        for (int k = 0; k < 4; ++k) {
            auto ph = p;
            const double h = opts.jacobian_rel_step * std::max(std::abs(p[k]), 0.1 * scales[k]);
            ph[k] += h;
            if (k == 1 && ph[k] < 0) ph[k] = 0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double f1 = model_value(ph, pts[i].t, t_e) * weights[i];
                const double f0 = model_value(p, pts[i].t, t_e) * weights[i];
                jac[i][k] = (f1 - f0) / (ph[k] - p[k]);
            }
        }
        bool accepted = false;
        for (int tries = 0; tries < 12 && !accepted; ++tries) {
            std::array<std::array<double, 5>, 4> normal{};
            for (int r = 0; r < 4; ++r) {
                for (int c = 0; c < 4; ++c) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < pts.size(); ++i) s += jac[i][r] * jac[i][c];
                    normal[r][c] = s;
                }
                double s = 0.0;
                for (std::size_t i = 0; i < pts.size(); ++i) s += jac[i][r] * resid[i];
                normal[r][4] = s;
            }
            for (int r = 0; r < 4; ++r) normal[r][r] *= 1.0 + lambda;
            auto sys = normal;
            if (!solve4(sys)) {
                lambda *= 10.0;
                continue;
            }
            std::array<double, 4> trial;
            for (int k = 0; k < 4; ++k) trial[k] = p[k] + sys[k][4];
            trial[1] = std::clamp(trial[1], 0.0, gamma_max);  // decay rate stays physical
            trial[2] = std::clamp(trial[2], w_band_lo, w_band_hi);
            if (trial[0] < 0) {                    // amplitude sign folds into phase
                trial[0] = -trial[0];
                trial[3] += pi;
            }
            const double chi2_trial = chi_squared(trial, pts, weights, t_e);
            if (chi2_trial <= chi2) {
                double max_rel = 0.0;
                for (int k = 0; k < 4; ++k)
                    max_rel = std::max(max_rel, std::abs(trial[k] - p[k]) /
                                                    std::max(std::abs(p[k]), scales[k] * 1e-6));
                const double gain = chi2 - chi2_trial;
                p = trial;
                chi2 = chi2_trial;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                if (max_rel < opts.param_tol) converged = true;
                // Stalled objective: residual-level minimum reached.
                if (gain <= 1e-12 * std::max(chi2, 1e-300)) converged = true;
            } else {
                lambda *= 10.0;
            }
        }
        if (!accepted || converged) {
            converged = converged || accepted;
            // No acceptable step at any damping: local minimum reached.
            if (!accepted) converged = true;
            break;
        }
    }
    // Budget exhausted while micro-stepping through a noise-floor landscape
    // still counts as converged; only substantial remaining descent is a
    // genuine failure.
    if (!converged && chi2_window - chi2 <= 1e-3 * chi2) converged = true;
    if (!converged && iter >= opts.max_iterations)
        throw FitError("fit_decaying_sine: no convergence within max iterations");

    // Covariance from the final Jacobian (recomputed at the solution).
    std::array<std::array<double, 4>, 4> jtj{};
    {
        std::vector<std::array<double, 4>> jac(pts.size());
        for (int k = 0; k < 4; ++k) {
            auto ph = p;
            const double h = opts.jacobian_rel_step * std::max(std::abs(p[k]), 0.1 * scales[k]);
            ph[k] += h;
            for (std::size_t i = 0; i < pts.size(); ++i)
                jac[i][k] = (model_value(ph, pts[i].t, t_e) - model_value(p, pts[i].t, t_e)) /
                            (ph[k] - p[k]) * weights[i];
        }
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                double s = 0.0;
                for (std::size_t i = 0; i < pts.size(); ++i) s += jac[i][r] * jac[i][c];
                jtj[r][c] = s;
            }
    }
    DecayingSineFit fit;
    fit.t_e = t_e;
    fit.amplitude = p[0];
    fit.tau = p[1] > 0 ? 1.0 / p[1] : std::numeric_limits<double>::infinity();
    fit.omega = p[2];
    fit.phi = std::fmod(p[3], 2.0 * pi);
    if (fit.phi < 0) fit.phi += 2.0 * pi;
    fit.chi2 = chi2;
    fit.iterations = iter;
    fit.dof = static_cast<int>(pts.size()) - 4;
    std::array<std::array<double, 4>, 4> inv{};
    if (invert4(jtj, inv)) {
        // Covariance scaled by the reduced chi^2 (curve-fit convention): with
        // correct absolute sigmas the factor averages to one, and it keeps the
        // intervals honest when the supplied sigmas are sample estimates.
        const double s2 = chi2 / std::max(1, fit.dof);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) fit.covariance[r][c] = inv[r][c] * s2;
    }
    return fit;
}

ExtractedSloshing extract_sloshing(std::span<const ProbeRecord> records, double t_e,
                                   double final_position, const FitOptions& opts) {
    if (records.empty()) throw std::invalid_argument("extract_sloshing: empty dataset");
    std::map<double, std::vector<double>> groups;
    for (const auto& r : records) groups[r.t_wait].push_back(r.z_tof);

    // Repetition means with standard-error weights. The detection noise is
    // homoscedastic, so the within-group scatter is pooled across waiting
    // times; per-group standard errors from 2-3 repetitions alone are far too
    // unstable to weight with.
    std::vector<FitPoint> pts;
    pts.reserve(groups.size());
    double pooled_ss = 0.0;
    long pooled_dof = 0;
    for (const auto& [t, zs] : groups) {
        double mean = 0.0;
        for (double z : zs) mean += z;
        mean /= static_cast<double>(zs.size());
        for (double z : zs) pooled_ss += (z - mean) * (z - mean);
        pooled_dof += static_cast<long>(zs.size()) - 1;
        pts.push_back({t, mean - final_position, 0.0});
    }
    const double s_pool = pooled_dof > 0 ? std::sqrt(pooled_ss / pooled_dof) : 0.0;
    if (s_pool > 0) {
        std::size_t i = 0;
        for (const auto& [t, zs] : groups)
            pts[i++].sigma = s_pool / std::sqrt(static_cast<double>(zs.size()));
    }

    ExtractedSloshing out;
    out.fit = fit_decaying_sine(pts, t_e, opts);
    out.sloshing.amplitude = out.fit.amplitude;
    out.sloshing.phase = out.fit.phi;
    out.sloshing.residual = std::polar(out.fit.amplitude, out.fit.phi);
    return out;
}

}  // namespace sta
