#include "sta/trap.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sta/constants.hpp"

namespace sta {

double TrapConfig::rayleigh() const {
    return constants::pi * waist * waist / wavelength;
}

double TrapConfig::axial_freq() const {
    const double zr = rayleigh();
    return std::sqrt(2.0 * depth / (mass * zr * zr));
}

void TrapConfig::validate() const {
    if (!(depth > 0)) throw std::invalid_argument("TrapConfig: depth must be > 0");
    if (!(waist > 0)) throw std::invalid_argument("TrapConfig: waist must be > 0");
    if (!(wavelength > 0)) throw std::invalid_argument("TrapConfig: wavelength must be > 0");
    if (!(mass > 0)) throw std::invalid_argument("TrapConfig: mass must be > 0");
    if (!(radial_freq > 0)) throw std::invalid_argument("TrapConfig: radial_freq must be > 0");
}

TrapConfig TrapConfig::from_depth(double depth, double waist, double wavelength,
                                  double mass, double radial_freq) {
    TrapConfig cfg{depth, waist, wavelength, mass, radial_freq};
    cfg.validate();
    return cfg;
}

TrapConfig TrapConfig::from_axial_freq(double omega0, double waist, double wavelength,
                                       double mass, double radial_freq) {
    if (!(omega0 > 0)) throw std::invalid_argument("TrapConfig: omega0 must be > 0");
    TrapConfig cfg{0, waist, wavelength, mass, radial_freq};
    const double zr = cfg.rayleigh();
    cfg.depth = 0.5 * mass * omega0 * omega0 * zr * zr;
    cfg.validate();
    return cfg;
}

TrapConfig TrapConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("TrapConfig: cannot open " + path);
    std::map<std::string, double> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto strip = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
        };
        strip(key);
        strip(val);
        if (key.empty() || val.empty()) continue;
        kv[key] = std::stod(val);
    }
    auto need = [&](const char* key) {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw std::invalid_argument(std::string("TrapConfig: missing key ") + key);
        return it->second;
    };
    const double waist = need("waist_um") * 1e-6;
    const double wavelength = need("wavelength_nm") * 1e-9;
    const double mass = need("mass_amu") * constants::atomic_mass_unit;
    const double radial_freq = 2.0 * constants::pi * need("omega_r_Hz");
    if (kv.count("depth_uK")) {
        const double depth = kv["depth_uK"] * 1e-6 * constants::k_boltzmann;
        return from_depth(depth, waist, wavelength, mass, radial_freq);
    }
    const double omega0 = 2.0 * constants::pi * need("omega0_Hz");
    return from_axial_freq(omega0, waist, wavelength, mass, radial_freq);
}

double axial_potential(double z, double z_cup, const TrapConfig& cfg, ForceModel model) {
    const double u = z - z_cup;
    const double zr = cfg.rayleigh();
    const double w0 = cfg.axial_freq();
    switch (model) {
        case ForceModel::Harmonic:
            return 0.5 * cfg.mass * w0 * w0 * u * u;
        case ForceModel::QuarticCorrected: {
            const double quad = 0.5 * cfg.mass * w0 * w0 * u * u;
            return quad * (1.0 - u * u / (zr * zr));
        }
        case ForceModel::FullGaussian: {
            const double s = u / zr;
            return -cfg.depth / (1.0 + s * s);
        }
    }
    throw std::logic_error("unreachable");
}

double axial_force(double z, double z_cup, const TrapConfig& cfg, ForceModel model) {
    const double u = z - z_cup;
    const double zr = cfg.rayleigh();
    const double w0 = cfg.axial_freq();
    const double k = cfg.mass * w0 * w0;
    switch (model) {
        case ForceModel::Harmonic:
            return -k * u;
        case ForceModel::QuarticCorrected:
            return -k * u * (1.0 - 2.0 * u * u / (zr * zr));
        case ForceModel::FullGaussian: {
            const double s = u / zr;
            const double den = 1.0 + s * s;
            return -k * u / (den * den);
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

double softening_bracket(const TrapConfig& cfg, const EnsembleMoments& mom) {
    if (mom.radial_var < 0 || mom.axial_var < 0)
        throw std::invalid_argument("EnsembleMoments: variances must be non-negative");
    const double zr = cfg.rayleigh();
    const double eps = 4.0 * mom.radial_var / (cfg.waist * cfg.waist) +
                       mom.axial_var / (zr * zr);
    if (eps >= 1.0)
        throw std::invalid_argument(
            "EnsembleMoments: outside the perturbative regime (4<r^2>/s^2 + <dz^2>/zR^2 >= 1)");
    return eps;
}

}  // namespace

double effective_frequency(const TrapConfig& cfg, const EnsembleMoments& mom,
                           SofteningForm form) {
    const double eps = softening_bracket(cfg, mom);
    const double w0 = cfg.axial_freq();
    return form == SofteningForm::PaperLinear ? w0 * (1.0 - eps)
                                              : w0 * std::sqrt(1.0 - eps);
}

double frequency_ratio(const TrapConfig& cfg, const EnsembleMoments& cold,
                       const EnsembleMoments& hot, SofteningForm form) {
    return effective_frequency(cfg, cold, form) / effective_frequency(cfg, hot, form);
}

double radial_variance_from_axial(const TrapConfig& cfg, double axial_var) {
    const double ratio = cfg.axial_freq() / cfg.radial_freq;
    return 2.0 * axial_var * ratio * ratio;
}

}  // namespace sta
