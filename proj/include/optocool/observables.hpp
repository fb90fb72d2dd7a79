#pragma once

// Physical outputs derived from moment vectors (occupations, quadrature
// variances of the combined modes d+- = (da +- db)/sqrt(2), squeezing
// classification) and the closed-form expressions used as cross-validation
// oracles for the numeric steady states.

#include <optional>

#include "optocool/moments.hpp"

namespace optocool {

// Mean phonon number Re<db+ db>. Throws NegativeOccupation below -1e-9.
double phonon_number(const MomentVector& mu);

// Mean photon number Re<da+ da>.
double photon_number(const MomentVector& mu);

// Closed-form steady-state phonon number of the rotating-wave system.
// Throws DegenerateDenominator when the denominator underflows.
double rwa_phonon_closed_form(double kappa, double gamma_m, double g,
                              double delta, double omega_m, double n_bar);
double rwa_phonon_closed_form(const PhysicalParams& p);

// Red-sideband resonance (delta = -omega_m) reduction:
// n_bar gamma_m / (gamma_m + kappa) * (1 + kappa^2 / (4 g^2 + gamma_m kappa)).
double rwa_resonant_phonon(double kappa, double gamma_m, double g, double n_bar);
double rwa_resonant_phonon(const PhysicalParams& p);

// Validity margin D = 4 omega_m^2 + kappa^2 - 16 g^2 of the gamma_m -> 0
// closed forms below; they diverge as D -> 0+.
double asymptotic_validity(double kappa, double g, double omega_m);

struct AsymptoticPhonon {
    double mechanical_term = 0.0;  // scales with n_gamma = gamma_m n_bar
    double backaction_term = 0.0;  // cavity quantum backaction heating
    double total = 0.0;
    double beta = 0.0;
};

// Minimum steady-state phonon number at delta = -omega_m in the
// gamma_m -> 0 limit with n_gamma = gamma_m n_bar held finite.
// Throws OutsideValidity when D <= 0.
AsymptoticPhonon min_phonon_asymptotic(double kappa, double g, double omega_m,
                                       double n_gamma);

struct VarianceSet {
    double var_x_plus = 0.0;
    double var_y_plus = 0.0;
    double var_x_minus = 0.0;
    double var_y_minus = 0.0;
    double uncertainty_product_plus = 0.0;   // var_x_plus * var_y_plus
    double uncertainty_product_minus = 0.0;  // var_x_minus * var_y_minus
};

// Quadrature variances of d+ and d- as linear combinations of the moments.
// Throws NonHermitianInput when the pairing invariant fails; the imaginary
// residue must vanish to 1e-9 (1 + max|mu|) and is discarded after the check.
VarianceSet variances(const MomentVector& mu);

struct AsymptoticVariances {
    double var_y_plus = 0.0;
    double var_x_minus = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
};

// gamma_m -> 0 closed forms of the two squeezable variances at
// delta = -omega_m. Throws OutsideValidity when D <= 0.
AsymptoticVariances variance_asymptotic(double kappa, double g, double omega_m,
                                        double n_gamma);

enum class FieldId { d_plus, d_minus };
enum class Quadrature { x, y };
enum class FieldKind { squeezed, coherent_or_vacuum, chaotic, mixed };

struct SqueezingVerdict {
    FieldId field_id = FieldId::d_plus;
    FieldKind classification = FieldKind::coherent_or_vacuum;
    std::optional<Quadrature> squeezed_quadrature;
    double margin = 0.0;  // 1/2 - min(var_x, var_y)
};

// Squeezed iff one variance sits below the vacuum level 1/2 by more than
// tol; coherent/vacuum iff both are within tol of 1/2; chaotic iff both
// exceed it; mixed otherwise.
SqueezingVerdict classify_field(const VarianceSet& vs, FieldId id, double tol = 1e-6);

const char* to_string(FieldKind kind);
const char* to_string(Quadrature q);

}  // namespace optocool
