#ifndef STA_TRAP_HPP_
#define STA_TRAP_HPP_

#include <string>

namespace sta {

// Single-beam optical dipole trap. The Rayleigh range and axial frequency are
// always recomputed from the stored fields, so they cannot go stale.
struct TrapConfig {
    double depth = 0;        // U0 [J]
    double waist = 0;        // sigma [m]
    double wavelength = 0;   // lambda [m]
    double mass = 0;         // particle mass [kg]
    double radial_freq = 0;  // omega_r [rad/s]

    double rayleigh() const;    // zR = pi sigma^2 / lambda
    double axial_freq() const;  // omega0 = sqrt(2 U0 / (m zR^2))

    void validate() const;  // throws std::invalid_argument

    static TrapConfig from_depth(double depth, double waist, double wavelength,
                                 double mass, double radial_freq);
    // Same trap specified by its axial frequency; the depth is derived.
    static TrapConfig from_axial_freq(double omega0, double waist, double wavelength,
                                      double mass, double radial_freq);
    // key = value file; keys: depth_uK or omega0_Hz, waist_um, wavelength_nm,
    // mass_amu, omega_r_Hz.
    static TrapConfig from_file(const std::string& path);
};

enum class ForceModel {
    Harmonic,          // (m w0^2/2)(z - zcup)^2, measured from the well bottom
    QuarticCorrected,  // harmonic minus (m w0^2 / 2 zR^2)(z - zcup)^4
    FullGaussian,      // -U0 / (1 + ((z - zcup)/zR)^2), measured from vacuum
};

// Thermal second moments that enter the effective axial frequency.
struct EnsembleMoments {
    double radial_var = 0;  // <r^2> [m^2]
    double axial_var = 0;   // <(z - zcup)^2> [m^2]
};

// Axial potential energy at radial distance zero. Note the offset convention:
// Harmonic and QuarticCorrected are measured from the well bottom, FullGaussian
// from vacuum (zero at infinity, -U0 at the bottom).
double axial_potential(double z, double z_cup, const TrapConfig& cfg, ForceModel model);

// Exact negative gradient of axial_potential for the same model.
double axial_force(double z, double z_cup, const TrapConfig& cfg, ForceModel model);

// Two renderings of the anharmonic softening. PaperLinear applies the bracket
// directly to the frequency; SqrtOfSeries applies it to the squared frequency,
// which is what the series expansion of the Hamiltonian actually gives. The two
// differ by a factor of two on the correction at first order.
enum class SofteningForm { PaperLinear, SqrtOfSeries };

double effective_frequency(const TrapConfig& cfg, const EnsembleMoments& mom,
                           SofteningForm form = SofteningForm::PaperLinear);

double frequency_ratio(const TrapConfig& cfg, const EnsembleMoments& cold,
                       const EnsembleMoments& hot,
                       SofteningForm form = SofteningForm::PaperLinear);

// Radial variance estimate from the trap aspect ratio, assuming equipartition
// across the two radial degrees of freedom: <r^2> = 2 <dz^2> (w0/wr)^2.
double radial_variance_from_axial(const TrapConfig& cfg, double axial_var);

}  // namespace sta

#endif
