#include "optocool/observables.hpp"

#include <cmath>
#include <sstream>

#include "optocool/errors.hpp"

namespace optocool {

using namespace mom;

namespace {

void check_paired(const MomentVector& mu, const char* where) {
    if (!is_hermitian_paired(mu)) {
        std::ostringstream msg;
        msg << where << ": moment vector violates the conjugation pairing (defect "
            << hermiticity_defect(mu) << ")";
        throw NonHermitianInput(msg.str());
    }
}

}  // namespace

double phonon_number(const MomentVector& mu) {
    check_paired(mu, "phonon_number");
    const double n_b = mu(mom::n_b).real();
    if (n_b < -1e-9) {
        std::ostringstream msg;
        msg << "phonon occupation " << n_b << " is negative beyond tolerance";
        throw NegativeOccupation(msg.str());
    }
    return n_b;
}

double photon_number(const MomentVector& mu) {
    check_paired(mu, "photon_number");
    const double n_a = mu(mom::n_a).real();
    if (n_a < -1e-9) {
        std::ostringstream msg;
        msg << "photon occupation " << n_a << " is negative beyond tolerance";
        throw NegativeOccupation(msg.str());
    }
    return n_a;
}

double rwa_phonon_closed_form(double kappa, double gamma_m, double g, double delta,
                              double omega_m, double n_bar) {
    const double det2 = 4.0 * (delta + omega_m) * (delta + omega_m);
    const double g2 = g * g;
    const double num = kappa * kappa * (kappa + 2.0 * gamma_m) +
                       kappa * (gamma_m * gamma_m + 4.0 * g2 + det2) +
                       4.0 * g2 * gamma_m;
    const double den = gamma_m * kappa * kappa * kappa +
                       (4.0 * g2 + 2.0 * gamma_m * gamma_m) * kappa * kappa +
                       (gamma_m * gamma_m + 8.0 * g2 + det2) * gamma_m * kappa +
                       4.0 * g2 * gamma_m * gamma_m;
    if (std::abs(den) < 1e-30)
        throw DegenerateDenominator("rwa_phonon_closed_form: denominator underflow");
    return n_bar * gamma_m * num / den;
}

double rwa_phonon_closed_form(const PhysicalParams& p) {
    p.validate();
    return rwa_phonon_closed_form(p.kappa, p.gamma_m, p.g, p.delta, p.omega_m, p.n_bar);
}

double rwa_resonant_phonon(double kappa, double gamma_m, double g, double n_bar) {
    const double damp = 4.0 * g * g + gamma_m * kappa;
    if (damp == 0.0 || gamma_m + kappa == 0.0)
        throw DegenerateDenominator("rwa_resonant_phonon: vanishing damping");
    return n_bar * gamma_m / (gamma_m + kappa) * (1.0 + kappa * kappa / damp);
}

double rwa_resonant_phonon(const PhysicalParams& p) {
    p.validate();
    return rwa_resonant_phonon(p.kappa, p.gamma_m, p.g, p.n_bar);
}

double asymptotic_validity(double kappa, double g, double omega_m) {
    return 4.0 * omega_m * omega_m + kappa * kappa - 16.0 * g * g;
}

AsymptoticPhonon min_phonon_asymptotic(double kappa, double g, double omega_m,
                                       double n_gamma) {
    if (!(g > 0)) throw RangeError("min_phonon_asymptotic: g must be positive");
    if (kappa < 0) throw RangeError("min_phonon_asymptotic: kappa must be non-negative");
    if (!(omega_m > 0)) throw RangeError("min_phonon_asymptotic: omega_m must be positive");
    const double d = asymptotic_validity(kappa, g, omega_m);
    if (d <= 0) {
        std::ostringstream msg;
        msg << "validity margin D = " << d << " <= 0 at kappa = " << kappa
            << ", g = " << g << "; the asymptotic form diverges";
        throw OutsideValidity(msg.str());
    }
    const double k2 = kappa * kappa, g2 = g * g, w2 = omega_m * omega_m;
    AsymptoticPhonon out;
    out.beta = 8.0 * g2 * (k2 + 4.0 * w2) / d;
    if (n_gamma != 0.0) {
        if (kappa == 0.0)
            throw RangeError("min_phonon_asymptotic: kappa must be positive when n_gamma != 0");
        out.mechanical_term = n_gamma / (64.0 * kappa * g2 * w2) *
                              (k2 * k2 + 16.0 * w2 * (k2 + 4.0 * g2) + 8.0 * g2 * out.beta);
    }
    out.backaction_term = (k2 + out.beta) / (16.0 * w2);
    out.total = out.mechanical_term + out.backaction_term;
    return out;
}

VarianceSet variances(const MomentVector& mu) {
    check_paired(mu, "variances");
    const Complex s_occ = mu(n_a) + mu(n_b);
    const Complex s_coh = mu(ad_b) + mu(a_bd);       // beam-splitter coherences
    const Complex s_sqz = mu(ab) + mu(ad_bd);        // two-mode squeezing
    const Complex s_self = mu(aa) + mu(adad) + mu(bb) + mu(bdbd);

    const Complex x_plus = 0.5 * (1.0 + s_occ + s_coh + s_sqz + 0.5 * s_self);
    const Complex x_minus = 0.5 * (1.0 + s_occ - s_coh - s_sqz + 0.5 * s_self);
    const Complex y_plus = 0.5 * (1.0 + s_occ + s_coh - s_sqz - 0.5 * s_self);
    const Complex y_minus = 0.5 * (1.0 + s_occ - s_coh + s_sqz - 0.5 * s_self);

    const double scale = 1.0 + mu.cwiseAbs().maxCoeff();
    for (const Complex& v : {x_plus, x_minus, y_plus, y_minus}) {
        if (std::abs(v.imag()) > 1e-9 * scale) {
            std::ostringstream msg;
            msg << "variance has imaginary residue " << v.imag()
                << " beyond 1e-9 * " << scale;
            throw NonHermitianInput(msg.str());
        }
    }

    VarianceSet vs;
    vs.var_x_plus = x_plus.real();
    vs.var_y_plus = y_plus.real();
    vs.var_x_minus = x_minus.real();
    vs.var_y_minus = y_minus.real();
    vs.uncertainty_product_plus = vs.var_x_plus * vs.var_y_plus;
    vs.uncertainty_product_minus = vs.var_x_minus * vs.var_y_minus;
    return vs;
}

AsymptoticVariances variance_asymptotic(double kappa, double g, double omega_m,
                                        double n_gamma) {
    if (!(g > 0)) throw RangeError("variance_asymptotic: g must be positive");
    if (kappa < 0) throw RangeError("variance_asymptotic: kappa must be non-negative");
    if (!(omega_m > 0)) throw RangeError("variance_asymptotic: omega_m must be positive");
    const double d = asymptotic_validity(kappa, g, omega_m);
    if (d <= 0) {
        std::ostringstream msg;
        msg << "validity margin D = " << d << " <= 0 at kappa = " << kappa
            << ", g = " << g << "; the asymptotic form diverges";
        throw OutsideValidity(msg.str());
    }
    const double k2 = kappa * kappa, g2 = g * g, w2 = omega_m * omega_m;
    const double bracket = g / (2.0 * omega_m) - k2 / (32.0 * w2) * (1.0 + 16.0 * g2 / d);

    AsymptoticVariances out;
    if (kappa > 0.0) {
        out.h1 = (1.0 / kappa) * (1.0 - g / omega_m) +
                 (kappa / (8.0 * g)) * (1.0 / g - 1.0 / omega_m) +
                 (kappa / (16.0 * w2)) * (1.0 + k2 / (8.0 * g2) + 16.0 * g2 / d);
        out.h2 = out.h1 + 8.0 * g2 * (omega_m - 2.0 * g) / (kappa * omega_m * d);
    } else if (n_gamma != 0.0) {
        throw RangeError("variance_asymptotic: kappa must be positive when n_gamma != 0");
    }
    out.var_y_plus = 0.5 - bracket + n_gamma * out.h1;
    out.var_x_minus =
        0.5 - (bracket - 4.0 * g2 / d * (omega_m - 2.0 * g)) + n_gamma * out.h2;
    return out;
}

SqueezingVerdict classify_field(const VarianceSet& vs, FieldId id, double tol) {
    const double vx = id == FieldId::d_plus ? vs.var_x_plus : vs.var_x_minus;
    const double vy = id == FieldId::d_plus ? vs.var_y_plus : vs.var_y_minus;
    if (vx < 0 || vy < 0) throw RangeError("classify_field: negative variance");

    SqueezingVerdict verdict;
    verdict.field_id = id;
    verdict.margin = 0.5 - std::min(vx, vy);
    const bool x_within = std::abs(vx - 0.5) <= tol;
    const bool y_within = std::abs(vy - 0.5) <= tol;
    if (std::min(vx, vy) < 0.5 - tol) {
        verdict.classification = FieldKind::squeezed;
        verdict.squeezed_quadrature = vx <= vy ? Quadrature::x : Quadrature::y;
    } else if (x_within && y_within) {
        verdict.classification = FieldKind::coherent_or_vacuum;
    } else if (vx > 0.5 + tol && vy > 0.5 + tol) {
        verdict.classification = FieldKind::chaotic;
    } else {
        verdict.classification = FieldKind::mixed;
    }
    return verdict;
}

const char* to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::squeezed: return "squeezed";
        case FieldKind::coherent_or_vacuum: return "coherent_or_vacuum";
        case FieldKind::chaotic: return "chaotic";
        case FieldKind::mixed: return "mixed";
    }
    return "unknown";
}

const char* to_string(Quadrature q) { return q == Quadrature::x ? "X" : "Y"; }

}  // namespace optocool
