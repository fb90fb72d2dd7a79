#pragma once

// Second-order moment vector of the linearized fluctuation operators and the
// drift system mu' = A mu + B derived from the Lindblad master equation, in
// the full (counter-rotating) form and the rotating-wave projection.

#include <complex>

#include <Eigen/Dense>

#include "optocool/model.hpp"

namespace optocool {

inline constexpr int kNumMoments = 10;

using Complex = std::complex<double>;
using MomentVector = Eigen::Vector<Complex, kNumMoments>;
using DriftMatrix = Eigen::Matrix<Complex, kNumMoments, kNumMoments>;

// Moment ordering (0-based storage of the conventional 1-based indexing):
//   0: <da+ da>   (N_a)       1: <db+ db>   (N_b)
//   2: <da+ db>               3: <da db+>
//   4: <da db>                5: <da+ db+>
//   6: <da^2>                 7: <da+^2>
//   8: <db^2>                 9: <db+^2>
namespace mom {
inline constexpr int n_a = 0;
inline constexpr int n_b = 1;
inline constexpr int ad_b = 2;
inline constexpr int a_bd = 3;
inline constexpr int ab = 4;
inline constexpr int ad_bd = 5;
inline constexpr int aa = 6;
inline constexpr int adad = 7;
inline constexpr int bb = 8;
inline constexpr int bdbd = 9;
}  // namespace mom

struct DriftSystem {
    DriftMatrix A;
    MomentVector B;
    PhysicalParams params;
    bool rwa = false;
};

// Drift system with all counter-rotating (two-mode-squeezing) terms kept.
// B is nonzero only at n_b (gamma_m n_bar), ab (+ig) and ad_bd (-ig).
DriftSystem build_full_system(const PhysicalParams& params);

// Full system with every coupling between the {n_a, n_b, ad_b, a_bd} block
// and the {ab .. bdbd} block removed and the ab/ad_bd sources zeroed. The
// first block then closes on itself; the second is homogeneous and decays
// to zero.
DriftSystem build_rwa_system(const PhysicalParams& params);

// A mu + B.
MomentVector rhs(const DriftSystem& system, const MomentVector& mu);

// Entrywise conjugation combined with the index swap
// ad_b<->a_bd, ab<->ad_bd, aa<->adad, bb<->bdbd. A physical moment vector is
// a fixed point of this map.
MomentVector conjugate_swapped(const MomentVector& mu);

// Largest violation of the conjugation pairing, including Im N_a, Im N_b.
double hermiticity_defect(const MomentVector& mu);

// defect <= tol_scale * (1 + max|mu_i|)
bool is_hermitian_paired(const MomentVector& mu, double tol_scale = 1e-9);

// Projection onto the paired subspace: average of mu with its
// conjugate-swapped image.
MomentVector symmetrized(const MomentVector& mu);

}  // namespace optocool
