#pragma once

// Steady states, drift-matrix stability analysis and time evolution of the
// moment system.

#include <cstdint>
#include <span>
#include <vector>

#include "optocool/moments.hpp"

namespace optocool {

struct StabilityReport {
    Eigen::Vector<Complex, kNumMoments> eigenvalues;
    double max_real_part = 0.0;
    bool stable = false;  // all real parts < 0
};

struct StabilityReport;

struct SolveOptions {
    // Return the algebraic steady state even when the drift matrix is
    // unstable (it then exists but is not an attractor).
    bool allow_unstable = false;
    // Reuse an already-computed stability report for this exact system
    // instead of re-running the eigensolver.
    const StabilityReport* precomputed_stability = nullptr;
};

struct SteadyState {
    MomentVector mu;
    double residual_inf = 0.0;          // ||A mu + B||_inf after refinement
    double symmetrization_delta = 0.0;  // inf-norm of the pairing correction
    StabilityReport stability;
};

// Dense eigenvalue analysis of A.
StabilityReport stability(const DriftSystem& system);

// Solves A mu = -B by partially pivoted LU with mixed-precision iterative
// refinement, then projects onto the hermitian-paired subspace. Throws
// SingularDrift on rank deficiency and UnstableSystem when the drift matrix
// has a non-negative growth rate (unless allow_unstable).
SteadyState steady_state(const DriftSystem& system, const SolveOptions& opts = {});

struct Trajectory {
    std::vector<double> times;
    std::vector<MomentVector> states;
    std::uint64_t params_hash = 0;
};

struct EvolveOptions {
    enum class Method { automatic, eigendecomposition, integrate };
    Method method = Method::automatic;
    double rtol = 1e-10;
    double atol = 1e-12;
    // Eigenvector-matrix condition number beyond which the exact propagator
    // is distrusted and the adaptive integrator is used instead.
    double eigenvector_cond_limit = 1e8;
};

// Propagates mu' = A mu + B from mu0 at t_grid.front() through every grid
// time. Exact eigendecomposition propagation when A is diagonalizable within
// the conditioning limit; embedded Dormand-Prince 5(4) otherwise. Throws
// StiffnessFailure if the fallback step size collapses below 1e-14 * span.
Trajectory evolve(const DriftSystem& system, const MomentVector& mu0,
                  std::span<const double> t_grid, const EvolveOptions& opts = {});

// FNV-1a over the generating parameters and the rwa flag.
std::uint64_t system_hash(const DriftSystem& system);

}  // namespace optocool
