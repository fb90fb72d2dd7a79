#include "optocool/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "optocool/errors.hpp"

namespace optocool {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw RangeError(what);
}

// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 (c3 != 0) via the companion
// matrix of the monic cubic, Newton-polished on the original coefficients.
std::vector<double> cubic_real_roots(double c3, double c2, double c1, double c0) {
    const double a = c2 / c3, b = c1 / c3, c = c0 / c3;
    Eigen::Matrix3d companion;
    companion << 0, 0, -c,
                 1, 0, -b,
                 0, 1, -a;
    Eigen::EigenSolver<Eigen::Matrix3d> es(companion);
    if (es.info() != Eigen::Success) throw EigenFailure("cubic companion-matrix eigensolve failed");

    auto f = [&](double x) { return ((c3 * x + c2) * x + c1) * x + c0; };
    auto fp = [&](double x) { return (3 * c3 * x + 2 * c2) * x + c1; };

    std::vector<double> roots;
    for (int i = 0; i < 3; ++i) {
        const std::complex<double> r = es.eigenvalues()(i);
        if (std::abs(r.imag()) > 1e-8 * (1.0 + std::abs(r))) continue;
        double x = r.real();
        for (int it = 0; it < 8; ++it) {
            const double d = fp(x);
            if (d == 0.0) break;
            const double step = f(x) / d;
            x -= step;
            if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
        }
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    // collapse numerically identical roots (double-root boundary)
    std::vector<double> unique;
    for (double x : roots) {
        if (unique.empty() || std::abs(x - unique.back()) > 1e-8 * (1.0 + std::abs(x)))
            unique.push_back(x);
    }
    return unique;
}

}  // namespace

void PhysicalParams::validate() const {
    require(omega_m > 0, "omega_m must be positive");
    require(kappa > 0, "kappa must be positive");
    require(gamma_m >= 0, "gamma_m must be non-negative");
    require(g >= 0, "g must be non-negative");
    require(n_bar >= 0, "n_bar must be non-negative");
}

double PhysicalParams::quality_factor() const {
    return gamma_m == 0.0 ? std::numeric_limits<double>::infinity() : omega_m / gamma_m;
}

bool PhysicalParams::low_quality_factor() const { return quality_factor() < 100.0; }

void DriveConfig::validate() const {
    require(omega_m > 0, "omega_m must be positive");
    require(kappa > 0, "kappa must be positive");
    require(gamma_m >= 0, "gamma_m must be non-negative");
    require(g0 >= 0, "g0 must be non-negative");
    require(n_bar >= 0, "n_bar must be non-negative");
}

double thermal_occupation(double omega, double temperature) {
    require(omega > 0, "thermal_occupation: omega must be positive");
    require(temperature >= 0, "thermal_occupation: temperature must be non-negative");
    if (temperature == 0.0) return 0.0;
    const double x = constants::hbar * omega / (constants::k_boltzmann * temperature);
    return 1.0 / std::expm1(x);
}

WorkingPoint classical_working_point(const DriveConfig& cfg) {
    cfg.validate();
    const double drive_sq = std::norm(cfg.drive_strength_E);
    const double shift_per_photon = cfg.g0 * cfg.g0 / cfg.omega_m;
    const double half_width_sq = cfg.kappa * cfg.kappa / 4.0;

    double n_c = 0.0;
    if (drive_sq == 0.0) {
        n_c = 0.0;
    } else if (shift_per_photon == 0.0) {
        n_c = drive_sq / (half_width_sq + cfg.delta_0 * cfg.delta_0);
    } else {
        // n (kappa^2/4 + (delta_0 - u n)^2) = |E|^2 expanded in n
        const double u = shift_per_photon;
        auto roots = cubic_real_roots(u * u, -2.0 * cfg.delta_0 * u,
                                      half_width_sq + cfg.delta_0 * cfg.delta_0,
                                      -drive_sq);
        std::vector<double> positive;
        for (double x : roots)
            if (x > 0.0) positive.push_back(x);
        if (positive.empty())
            throw NoPhysicalRoot("no non-negative intracavity occupation solves the cubic");
        if (positive.size() > 1) {
            std::ostringstream msg;
            msg << "working point is not unique; positive occupation roots:";
            for (double x : positive) msg << ' ' << x;
            throw BistableWorkingPoint(msg.str(), positive);
        }
        n_c = positive.front();
    }

    WorkingPoint wp;
    wp.photon_occupancy = n_c;
    wp.delta_eff = cfg.delta_0 - shift_per_photon * n_c;
    wp.a_s = std::sqrt(n_c);  // reference phase chosen so a_s is real positive
    wp.b_s = cfg.g0 * n_c / cfg.omega_m;
    wp.g_enhanced = cfg.g0 * std::sqrt(n_c);
    return wp;
}

PhysicalParams to_effective(const DriveConfig& cfg) {
    const WorkingPoint wp = classical_working_point(cfg);
    PhysicalParams p;
    p.omega_m = cfg.omega_m;
    p.kappa = cfg.kappa;
    p.gamma_m = cfg.gamma_m;
    p.delta = wp.delta_eff;
    p.g = wp.g_enhanced;
    p.n_bar = cfg.n_bar;
    p.validate();
    return p;
}

}  // namespace optocool
