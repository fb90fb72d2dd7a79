#include "optocool/moments.hpp"

namespace optocool {

using namespace mom;

DriftSystem build_full_system(const PhysicalParams& p) {
    p.validate();
    const double kappa = p.kappa, gm = p.gamma_m, wm = p.omega_m, delta = p.delta;
    const Complex ig(0.0, p.g);
    const Complex i2g(0.0, 2.0 * p.g);
    const Complex iw(0.0, wm);
    const Complex id(0.0, delta);
    const double half = (kappa + gm) / 2.0;

    DriftSystem sys;
    sys.params = p;
    sys.rwa = false;
    DriftMatrix& A = sys.A;
    MomentVector& B = sys.B;
    A.setZero();
    B.setZero();

    // d<da+ da> = -kappa N_a + ig <(da+ - da)(db+ + db)>
    A(n_a, n_a) = -kappa;
    A(n_a, ad_b) = ig;
    A(n_a, a_bd) = -ig;
    A(n_a, ab) = -ig;
    A(n_a, ad_bd) = ig;

    // d<db+ db> = -gamma_m N_b + gamma_m n_bar + ig <(da+ + da)(db+ - db)>
    A(n_b, n_b) = -gm;
    A(n_b, ad_b) = -ig;
    A(n_b, a_bd) = ig;
    A(n_b, ab) = -ig;
    A(n_b, ad_bd) = ig;
    B(n_b) = gm * p.n_bar;

    // d<da+ db> = -((kappa+gm)/2 + i(delta + wm)) <da+ db>
    //             - ig (N_b - N_a + <db^2> - <da+^2>)
    A(ad_b, ad_b) = -(half + id + iw);
    A(ad_b, n_a) = ig;
    A(ad_b, n_b) = -ig;
    A(ad_b, bb) = -ig;
    A(ad_b, adad) = ig;

    // d<da db+> = -((kappa+gm)/2 - i(delta + wm)) <da db+>
    //             + ig (N_b - N_a + <db+^2> - <da^2>)
    A(a_bd, a_bd) = -(half - id - iw);
    A(a_bd, n_a) = -ig;
    A(a_bd, n_b) = ig;
    A(a_bd, bdbd) = ig;
    A(a_bd, aa) = -ig;

    // d<da db> = -((kappa+gm)/2 - i delta + i wm) <da db>
    //            + ig (1 + N_b + N_a + <db^2> + <da^2>)
    A(ab, ab) = -(half - id + iw);
    A(ab, n_a) = ig;
    A(ab, n_b) = ig;
    A(ab, aa) = ig;
    A(ab, bb) = ig;
    B(ab) = ig;

    // d<da+ db+> = -((kappa+gm)/2 + i delta - i wm) <da+ db+>
    //              - ig (1 + N_b + N_a + <db+^2> + <da+^2>)
    A(ad_bd, ad_bd) = -(half + id - iw);
    A(ad_bd, n_a) = -ig;
    A(ad_bd, n_b) = -ig;
    A(ad_bd, adad) = -ig;
    A(ad_bd, bdbd) = -ig;
    B(ad_bd) = -ig;

    // d<da^2> = -(kappa - 2i delta) <da^2> + 2ig <(db+ + db) da>
    A(aa, aa) = -(Complex(kappa, 0.0) - 2.0 * id);
    A(aa, a_bd) = i2g;
    A(aa, ab) = i2g;

    // d<da+^2> = -(kappa + 2i delta) <da+^2> - 2ig <(db+ + db) da+>
    A(adad, adad) = -(Complex(kappa, 0.0) + 2.0 * id);
    A(adad, ad_b) = -i2g;
    A(adad, ad_bd) = -i2g;

    // d<db^2> = -(gamma_m + 2i wm) <db^2> + 2ig <(da+ + da) db>
    A(bb, bb) = -(Complex(gm, 0.0) + 2.0 * iw);
    A(bb, ad_b) = i2g;
    A(bb, ab) = i2g;

    // d<db+^2> = -(gamma_m - 2i wm) <db+^2> - 2ig <(da+ + da) db+>
    A(bdbd, bdbd) = -(Complex(gm, 0.0) - 2.0 * iw);
    A(bdbd, a_bd) = -i2g;
    A(bdbd, ad_bd) = -i2g;

    return sys;
}

DriftSystem build_rwa_system(const PhysicalParams& p) {
    DriftSystem sys = build_full_system(p);
    sys.rwa = true;
    // drop the counter-rotating couplings: the occupation/coherence block
    // {n_a, n_b, ad_b, a_bd} decouples from the squeezing block {ab..bdbd}
    sys.A.topRightCorner<4, 6>().setZero();
    sys.A.bottomLeftCorner<6, 4>().setZero();
    sys.B(ab) = 0.0;
    sys.B(ad_bd) = 0.0;
    return sys;
}

MomentVector rhs(const DriftSystem& system, const MomentVector& mu) {
    return system.A * mu + system.B;
}

MomentVector conjugate_swapped(const MomentVector& mu) {
    MomentVector out;
    out(n_a) = std::conj(mu(n_a));
    out(n_b) = std::conj(mu(n_b));
    out(ad_b) = std::conj(mu(a_bd));
    out(a_bd) = std::conj(mu(ad_b));
    out(ab) = std::conj(mu(ad_bd));
    out(ad_bd) = std::conj(mu(ab));
    out(aa) = std::conj(mu(adad));
    out(adad) = std::conj(mu(aa));
    out(bb) = std::conj(mu(bdbd));
    out(bdbd) = std::conj(mu(bb));
    return out;
}

double hermiticity_defect(const MomentVector& mu) {
    return (mu - conjugate_swapped(mu)).cwiseAbs().maxCoeff();
}

bool is_hermitian_paired(const MomentVector& mu, double tol_scale) {
    const double scale = 1.0 + mu.cwiseAbs().maxCoeff();
    return hermiticity_defect(mu) <= tol_scale * scale;
}

MomentVector symmetrized(const MomentVector& mu) {
    return 0.5 * (mu + conjugate_swapped(mu));
}

}  // namespace optocool
