#include "optocool/checks.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "optocool/errors.hpp"
#include "optocool/observables.hpp"
#include "optocool/solve.hpp"

namespace optocool {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

// log-uniform in [lo, hi]
double sample_log(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

PhysicalParams sample_params(std::mt19937_64& rng) {
    PhysicalParams p;
    p.omega_m = 1.0;
    p.kappa = sample_log(rng, 1e-3, 1.0);
    p.g = sample_log(rng, 1e-3, 1.0);
    p.gamma_m = sample_log(rng, 1e-7, 1e-3);
    p.n_bar = sample_log(rng, 1.0, 1e4);
    std::uniform_real_distribution<double> u(-2.0, -0.1);
    p.delta = u(rng);
    return p;
}

CheckResult rwa_oracle_equivalence() {
    std::mt19937_64 rng(0x5eedu);
    double worst = 0.0;
    int used = 0;
    while (used < 100) {
        const PhysicalParams p = sample_params(rng);
        const DriftSystem sys = build_rwa_system(p);
        if (!stability(sys).stable) continue;
        ++used;
        const double numeric = steady_state(sys).mu(mom::n_b).real();
        const double oracle = rwa_phonon_closed_form(p);
        worst = std::max(worst, std::abs(numeric - oracle) / std::abs(oracle));
    }
    return {"rwa_oracle_equivalence", worst <= 1e-9,
            "worst relative error " + fmt(worst) + " over 100 stable samples (tol 1e-9)"};
}

CheckResult resonant_reduction() {
    std::mt19937_64 rng(0xf00du);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        PhysicalParams p = sample_params(rng);
        p.delta = -p.omega_m;
        const double general = rwa_phonon_closed_form(p);
        const double resonant = rwa_resonant_phonon(p);
        worst = std::max(worst, std::abs(general - resonant) / std::abs(resonant));
    }
    return {"resonant_reduction", worst <= 1e-12,
            "worst relative difference " + fmt(worst) + " (tol 1e-12)"};
}

CheckResult asymptotic_phonon() {
    double worst = 0.0;
    for (int ik = 0; ik < 5; ++ik) {
        for (int ig = 0; ig < 5; ++ig) {
            PhysicalParams p;
            p.kappa = 0.2 + 0.2 * ik;
            p.g = 0.05 + 0.075 * ig;
            p.gamma_m = 1e-7;
            p.n_bar = 1e3;
            p.delta = -1.0;
            if (asymptotic_validity(p.kappa, p.g, 1.0) <= 0.25) continue;
            const double numeric = steady_state(build_full_system(p)).mu(mom::n_b).real();
            const double oracle =
                min_phonon_asymptotic(p.kappa, p.g, 1.0, p.gamma_m * p.n_bar).total;
            worst = std::max(worst, std::abs(numeric - oracle) / oracle);
        }
    }
    return {"asymptotic_phonon", worst <= 0.02,
            "worst relative difference " + fmt(worst) + " over the (kappa, g) grid (tol 2%)"};
}

CheckResult asymptotic_variances() {
    PhysicalParams p;
    p.kappa = 0.5;
    p.g = 0.2;
    p.gamma_m = 1e-5;
    p.n_bar = 1e3;
    p.delta = -1.0;
    const VarianceSet vs = variances(steady_state(build_full_system(p)).mu);
    const AsymptoticVariances av =
        variance_asymptotic(p.kappa, p.g, 1.0, p.gamma_m * p.n_bar);
    const double dy = std::abs(vs.var_y_plus - av.var_y_plus) / av.var_y_plus;
    const double dx = std::abs(vs.var_x_minus - av.var_x_minus) / av.var_x_minus;
    const bool squeezed = vs.var_y_plus < 0.5 && vs.var_x_minus < 0.5;
    return {"asymptotic_variances", squeezed && dy <= 0.05 && dx <= 0.05,
            "relative differences " + fmt(dy) + ", " + fmt(dx) +
                " (tol 5%); squeezed pair below 1/2: " + (squeezed ? "yes" : "no")};
}

CheckResult uncertainty_floor() {
    double min_product = 1e300;
    double min_variance = 1e300;
    for (int ig = 0; ig < 21; ++ig) {
        for (int ik = 0; ik < 21; ++ik) {
            PhysicalParams p;
            p.g = 0.01 + (0.5 - 0.01) * ig / 20.0;
            p.kappa = 0.01 + (1.0 - 0.01) * ik / 20.0;
            p.gamma_m = 1e-5;
            p.n_bar = 1e3;
            p.delta = -1.0;
            const DriftSystem sys = build_full_system(p);
            const StabilityReport rep = stability(sys);
            if (!rep.stable) continue;
            SolveOptions o;
            o.precomputed_stability = &rep;
            const VarianceSet vs = variances(steady_state(sys, o).mu);
            min_product = std::min({min_product, vs.uncertainty_product_plus,
                                    vs.uncertainty_product_minus});
            min_variance = std::min({min_variance, vs.var_x_plus, vs.var_y_plus,
                                     vs.var_x_minus, vs.var_y_minus});
        }
    }
    const bool pass = min_product >= 0.25 - 1e-9 && min_variance >= 0.0;
    return {"uncertainty_floor", pass,
            "min uncertainty product " + fmt(min_product) + ", min variance " +
                fmt(min_variance)};
}

CheckResult decoupled_exactness() {
    PhysicalParams p;
    p.kappa = 0.7;
    p.g = 0.0;
    p.gamma_m = 1e-4;
    p.n_bar = 123.0;
    p.delta = -1.3;
    const SteadyState st = steady_state(build_full_system(p));
    const double n_b = st.mu(mom::n_b).real();
    const double n_a = st.mu(mom::n_a).real();
    const VarianceSet vs = variances(st.mu);
    const double expected = (1.0 + p.n_bar) / 2.0;
    double worst = 0.0;
    for (double v : {vs.var_x_plus, vs.var_y_plus, vs.var_x_minus, vs.var_y_minus})
        worst = std::max(worst, std::abs(v - expected) / expected);
    const bool pass = n_b == p.n_bar && n_a == 0.0 && worst <= 1e-12;
    return {"decoupled_exactness", pass,
            "N_b error " + fmt(std::abs(n_b - p.n_bar)) + ", N_a " + fmt(n_a) +
                ", worst variance rel error " + fmt(worst)};
}

CheckResult hermiticity_evolution() {
    std::mt19937_64 rng(0xabcdu);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PhysicalParams p;
    p.kappa = 0.5;
    p.g = 0.2;
    p.gamma_m = 1e-5;
    p.n_bar = 1e3;
    p.delta = -1.0;
    const DriftSystem sys = build_full_system(p);

    MomentVector mu0;
    mu0(mom::n_a) = std::abs(u(rng)) * 5.0;
    mu0(mom::n_b) = std::abs(u(rng)) * 100.0;
    mu0(mom::ad_b) = Complex(u(rng), u(rng));
    mu0(mom::a_bd) = std::conj(mu0(mom::ad_b));
    mu0(mom::ab) = Complex(u(rng), u(rng));
    mu0(mom::ad_bd) = std::conj(mu0(mom::ab));
    mu0(mom::aa) = Complex(u(rng), u(rng));
    mu0(mom::adad) = std::conj(mu0(mom::aa));
    mu0(mom::bb) = Complex(u(rng), u(rng));
    mu0(mom::bdbd) = std::conj(mu0(mom::bb));

    std::vector<double> grid(101);
    for (int i = 0; i <= 100; ++i) grid[i] = 0.5 * i;
    const Trajectory traj = evolve(sys, mu0, grid);
    double worst = 0.0;
    for (const MomentVector& mu : traj.states) {
        const double scale = 1.0 + mu.cwiseAbs().maxCoeff();
        worst = std::max(worst, hermiticity_defect(mu) / scale);
    }
    return {"hermiticity_evolution", worst <= 1e-8,
            "worst scaled pairing defect " + fmt(worst) + " over 100 steps (tol 1e-8)"};
}

CheckResult base_point(const PhysicalParams& base) {
    const DriftSystem sys = build_rwa_system(base);
    if (!stability(sys).stable)
        return {"base_point_rwa_oracle", true, "base point RWA-unstable; comparison skipped"};
    const double numeric = steady_state(sys).mu(mom::n_b).real();
    const double oracle = rwa_phonon_closed_form(base);
    const double rel = std::abs(numeric - oracle) / std::abs(oracle);
    return {"base_point_rwa_oracle", rel <= 1e-9,
            "relative error " + fmt(rel) + " at the configured parameters"};
}

}  // namespace

std::vector<CheckResult> run_checks(const PhysicalParams& base) {
    base.validate();
    std::vector<CheckResult> results;
    results.push_back(rwa_oracle_equivalence());
    results.push_back(resonant_reduction());
    results.push_back(asymptotic_phonon());
    results.push_back(asymptotic_variances());
    results.push_back(uncertainty_floor());
    results.push_back(decoupled_exactness());
    results.push_back(hermiticity_evolution());
    results.push_back(base_point(base));
    return results;
}

}  // namespace optocool
