#include "optocool/solve.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "optocool/errors.hpp"

namespace optocool {

namespace {

using LongComplex = std::complex<long double>;
using DriftMatrixL = Eigen::Matrix<LongComplex, kNumMoments, kNumMoments>;
using MomentVectorL = Eigen::Vector<LongComplex, kNumMoments>;

double inf_norm(const MomentVector& v) { return v.cwiseAbs().maxCoeff(); }

double inf_norm(const DriftMatrix& m) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// (exp(z) - 1) / z, stable near z = 0.
Complex phi1(Complex z) {
    if (std::abs(z) < 1e-2) {
        Complex acc(1.0, 0.0);
        // Horner over 1 + z/2 + z^2/6 + ... + z^6/5040
        const double inv[] = {1.0 / 7, 1.0 / 6, 1.0 / 5, 1.0 / 4, 1.0 / 3, 1.0 / 2};
        acc = 1.0 + z * inv[0];
        for (int k = 1; k < 6; ++k) acc = 1.0 + z * inv[k] * acc;
        return acc;
    }
    return (std::exp(z) - 1.0) / z;
}

}  // namespace

StabilityReport stability(const DriftSystem& system) {
    Eigen::ComplexEigenSolver<DriftMatrix> es(system.A, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw EigenFailure("drift-matrix eigenvalue iteration did not converge");
    StabilityReport rep;
    rep.eigenvalues = es.eigenvalues();
    rep.max_real_part = rep.eigenvalues.real().maxCoeff();
    rep.stable = rep.max_real_part < 0.0;
    return rep;
}

SteadyState steady_state(const DriftSystem& system, const SolveOptions& opts) {
    const double a_norm = inf_norm(system.A);
    Eigen::PartialPivLU<DriftMatrix> lu(system.A);
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (min_pivot < 1e-14 * a_norm) {
        std::ostringstream msg;
        msg << "drift matrix is rank deficient (pivot " << min_pivot
            << " below 1e-14 * " << a_norm << ")";
        throw SingularDrift(msg.str());
    }

    SteadyState out;
    out.stability =
        opts.precomputed_stability ? *opts.precomputed_stability : stability(system);
    if (!out.stability.stable && !opts.allow_unstable) {
        std::ostringstream msg;
        msg << "drift matrix has growth rate " << out.stability.max_real_part
            << " >= 0; the algebraic steady state is not an attractor";
        throw UnstableSystem(msg.str());
    }

    MomentVector mu = lu.solve(-system.B);

    // Iterative refinement with the residual accumulated in long double;
    // brings the worst-case forward error well under the 1e-9 oracle
    // tolerances even for gamma_m/kappa ratios near 1e-7.
    const DriftMatrixL a_long = system.A.cast<LongComplex>();
    const MomentVectorL b_long = system.B.cast<LongComplex>();
    const double b_norm = inf_norm(system.B);
    auto long_residual = [&](const MomentVector& x) -> MomentVectorL {
        return -(a_long * x.cast<LongComplex>() + b_long);
    };
    for (int it = 0; it < 3; ++it) {
        const MomentVectorL r_long = long_residual(mu);
        if (static_cast<double>(r_long.cwiseAbs().maxCoeff()) <= 1e-15 * (1.0 + b_norm))
            break;
        const MomentVector correction = lu.solve(r_long.cast<Complex>());
        if (inf_norm(correction) <= 1e-17 * (1.0 + inf_norm(mu))) break;
        mu += correction;
    }
    const double residual =
        static_cast<double>(long_residual(mu).cwiseAbs().maxCoeff());
    out.residual_inf = residual;
    if (residual > 1e-10 * (1.0 + b_norm)) {
        std::ostringstream msg;
        msg << "steady-state residual " << residual << " exceeds 1e-10 * (1 + "
            << b_norm << ") after refinement";
        throw SingularDrift(msg.str());
    }

    const MomentVector paired = symmetrized(mu);
    out.symmetrization_delta = inf_norm(mu - paired);
    out.mu = paired;
    return out;
}

std::uint64_t system_hash(const DriftSystem& system) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&h](const void* p, size_t n) {
        const unsigned char* bytes = static_cast<const unsigned char*>(p);
        for (size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ull;
        }
    };
    const PhysicalParams& p = system.params;
    for (double v : {p.omega_m, p.kappa, p.gamma_m, p.delta, p.g, p.n_bar})
        mix(&v, sizeof(v));
    const unsigned char rwa = system.rwa ? 1 : 0;
    mix(&rwa, 1);
    return h;
}

namespace {

// Dormand-Prince 5(4) with PI step control on the scaled RMS error norm.
class DormandPrince {
public:
    DormandPrince(const DriftSystem& sys, double rtol, double atol)
        : sys_(sys), rtol_(rtol), atol_(atol) {}

    // advance from (t, y) to t_end, overwriting y
    void integrate_to(double& t, MomentVector& y, double t_end, double span) {
        const double floor = 1e-14 * span;
        double h = initial_step(t_end - t);
        while (t < t_end) {
            const bool last = h >= t_end - t;
            const double h_try = last ? t_end - t : h;
            MomentVector y_new, err;
            step(t, y, h_try, y_new, err);
            const double e = error_norm(y, y_new, err);
            if (std::isfinite(e) && e <= 1.0) {
                t = last ? t_end : t + h_try;
                y = y_new;
                h = h_try * std::clamp(0.9 * std::pow(std::max(e, 1e-10), -0.2), 0.9, 5.0);
            } else {
                const double shrink = std::isfinite(e)
                                          ? std::clamp(0.9 * std::pow(e, -0.2), 0.2, 0.9)
                                          : 0.5;
                h = h_try * shrink;
            }
            // only the controller may trip the floor, never the end-of-segment clamp
            if (h < floor) {
                std::ostringstream msg;
                msg << "adaptive step collapsed to " << h << " (< 1e-14 * span " << span
                    << ") at t = " << t;
                throw StiffnessFailure(msg.str());
            }
        }
    }

private:
    MomentVector f(const MomentVector& y) const { return sys_.A * y + sys_.B; }

    double initial_step(double dt) const {
        const double rate = 1.0 + inf_norm(sys_.A);
        return std::min(dt, 0.01 / rate);
    }

    void step(double /*t*/, const MomentVector& y, double h, MomentVector& y_new,
              MomentVector& err) const {
        const MomentVector k1 = f(y);
        const MomentVector k2 = f(y + h * (a21 * k1));
        const MomentVector k3 = f(y + h * (a31 * k1 + a32 * k2));
        const MomentVector k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const MomentVector k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const MomentVector k6 =
            f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const MomentVector k7 = f(y_new);
        err = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    }

    double error_norm(const MomentVector& y, const MomentVector& y_new,
                      const MomentVector& err) const {
        double acc = 0.0;
        for (int i = 0; i < kNumMoments; ++i) {
            const double scale =
                atol_ + rtol_ * std::max(std::abs(y(i)), std::abs(y_new(i)));
            const double q = std::abs(err(i)) / scale;
            acc += q * q;
        }
        return std::sqrt(acc / kNumMoments);
    }

    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                            e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;
    static constexpr double d1 = b1 - e1, d3 = b3 - e3, d4 = b4 - e4, d5 = b5 - e5,
                            d6 = b6 - e6, d7 = -e7;

    const DriftSystem& sys_;
    double rtol_, atol_;
};

}  // namespace

Trajectory evolve(const DriftSystem& system, const MomentVector& mu0,
                  std::span<const double> t_grid, const EvolveOptions& opts) {
    if (t_grid.empty()) throw RangeError("evolve: empty time grid");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw RangeError("evolve: time grid must be strictly ascending");

    Trajectory out;
    out.params_hash = system_hash(system);
    out.times.assign(t_grid.begin(), t_grid.end());
    out.states.reserve(t_grid.size());

    bool use_eigen = opts.method != EvolveOptions::Method::integrate;
    Eigen::ComplexEigenSolver<DriftMatrix> es;
    Eigen::Matrix<Complex, kNumMoments, kNumMoments> vinv;
    if (use_eigen) {
        es.compute(system.A, /*computeEigenvectors=*/true);
        if (es.info() != Eigen::Success) {
            if (opts.method == EvolveOptions::Method::eigendecomposition)
                throw EigenFailure("drift-matrix eigendecomposition did not converge");
            use_eigen = false;
        } else {
            const auto& v = es.eigenvectors();
            Eigen::FullPivLU<DriftMatrix> luv(v);
            if (!luv.isInvertible()) {
                use_eigen = false;
            } else {
                vinv = luv.inverse();
                const double cond = inf_norm(v) * inf_norm(vinv);
                if (cond > opts.eigenvector_cond_limit) use_eigen = false;
            }
            if (!use_eigen && opts.method == EvolveOptions::Method::eigendecomposition)
                throw EigenFailure("eigenvector matrix condition number exceeds limit");
        }
    }

    if (use_eigen) {
        // y' = L y + c in the eigenbasis; y_i(t) = e^{L_i dt} y0_i + dt phi1(L_i dt) c_i
        const MomentVector y0 = vinv * mu0;
        const MomentVector c = vinv * system.B;
        const double t0 = t_grid.front();
        for (double t : t_grid) {
            const double dt = t - t0;
            MomentVector y;
            for (int i = 0; i < kNumMoments; ++i) {
                const Complex z = es.eigenvalues()(i) * dt;
                y(i) = std::exp(z) * y0(i) + dt * phi1(z) * c(i);
            }
            out.states.push_back(es.eigenvectors() * y);
        }
        return out;
    }

    const double span = t_grid.back() - t_grid.front();
    DormandPrince integrator(system, opts.rtol, opts.atol);
    MomentVector y = mu0;
    double t = t_grid.front();
    out.states.push_back(y);
    for (size_t i = 1; i < t_grid.size(); ++i) {
        integrator.integrate_to(t, y, t_grid[i], span > 0 ? span : 1.0);
        out.states.push_back(y);
    }
    return out;
}

}  // namespace optocool
