#pragma once

// Physical parameter sets and the classical (mean-field) working point of a
// laser-driven optomechanical cavity. Everything downstream works in units
// of the mechanical frequency: omega_m == 1 after normalization.

#include <complex>

namespace optocool {

namespace constants {
// CODATA 2018 / SI 2019 exact values; only the ratio hbar/k_B enters.
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double k_boltzmann = 1.380649e-23;     // J / K
}  // namespace constants

// Effective linearized model parameters. Rates and detuning are stored in
// units of omega_m; delta is the effective detuning (signed, negative on the
// red sideband), g the light-enhanced coupling, n_bar the mechanical bath
// occupation. The cavity bath is taken at zero occupation.
struct PhysicalParams {
    double omega_m = 1.0;
    double kappa = 0.5;
    double gamma_m = 1e-5;
    double delta = -1.0;
    double g = 0.2;
    double n_bar = 0.0;

    // Throws RangeError unless kappa > 0, gamma_m >= 0, g >= 0, n_bar >= 0,
    // omega_m > 0.
    void validate() const;

    // Q_m = omega_m / gamma_m (infinity at gamma_m == 0).
    double quality_factor() const;

    // Q_m < 100: the Markovian treatment of the mechanical bath is suspect.
    bool low_quality_factor() const;
};

// Pre-linearization drive description. delta_0 is the bare cavity detuning,
// g0 the single-photon coupling, drive_strength_E the drive amplitude.
struct DriveConfig {
    std::complex<double> drive_strength_E{0.0, 0.0};
    double delta_0 = 0.0;
    double g0 = 0.0;
    double kappa = 0.5;
    double gamma_m = 1e-5;
    double omega_m = 1.0;
    double n_bar = 0.0;

    void validate() const;  // throws RangeError
};

// Self-consistent classical steady state of the driven cavity. The cavity
// field reference phase is chosen so a_s is real positive, making the
// enhanced coupling g0 * |a_s| real.
struct WorkingPoint {
    std::complex<double> a_s{0.0, 0.0};  // rotated: real, >= 0
    double b_s = 0.0;                    // g0 |a_s|^2 / omega_m
    double delta_eff = 0.0;              // delta_0 - g0^2 |a_s|^2 / omega_m
    double photon_occupancy = 0.0;       // |a_s|^2
    double g_enhanced = 0.0;             // g0 |a_s|
};

// Bose-Einstein occupation 1/(exp(hbar omega / k_B T) - 1); exactly 0 at
// T = 0. omega in rad/s, temperature in kelvin.
double thermal_occupation(double omega, double temperature);

// Solves the real cubic for the intracavity occupation n_c = |a_s|^2,
//   n_c (kappa^2/4 + (delta_0 - g0^2 n_c / omega_m)^2) = |E|^2,
// exactly (companion-matrix roots plus Newton polish). Throws
// BistableWorkingPoint when several positive real roots coexist and
// NoPhysicalRoot when none does.
WorkingPoint classical_working_point(const DriveConfig& cfg);

// classical_working_point composed with the linearized parameterization:
// delta = delta_eff, g = g0 sqrt(n_c), rates copied, normalized to omega_m.
PhysicalParams to_effective(const DriveConfig& cfg);

}  // namespace optocool
