#include "kernel_analysis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace mqd {

namespace {

struct NullSpace {
    Mat basis;       // orthonormal columns spanning the numerical null space
    double min_eig;  // smallest eigenvalue (PSD diagnostic)
    double norm;     // spectral norm
};

NullSpace null_space(const Mat& qs, double null_tol, double gap_ratio) {
    Eigen::SelfAdjointEigenSolver<Mat> es(qs);
    const Vec& ev = es.eigenvalues();
    const int n = static_cast<int>(ev.size());
    const double norm = std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
    const double cut = null_tol * norm;
    int k = 0;
    while (k < n && ev(k) < cut) ++k;
    // An eigenvalue sitting near the cutoff makes the null-space dimension
    // ill-conditioned; report it rather than guessing.
    for (int i = 0; i < n; ++i)
        if (std::abs(ev(i)) > cut / gap_ratio && std::abs(ev(i)) < cut * gap_ratio)
            fail(MQD_ERR_RANK_AMBIGUOUS,
                 "null-space decision is ill-conditioned: eigenvalue " +
                     std::to_string(ev(i)) + " near cutoff " + std::to_string(cut));
    Mat basis = es.eigenvectors().leftCols(k);
    fix_column_signs(basis);
    return NullSpace{std::move(basis), ev(0), norm};
}

void check_condition(const Mat& m, double cond_cap, const char* what) {
    Eigen::JacobiSVD<Mat> svd(m);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > 0.0) || smax / smin > cond_cap)
        fail(MQD_ERR_CONDITIONING,
             std::string(what) + " exceeds the configured condition cap");
}

double identity_tol(const Mat& d) { return 1e-8 * std::max(1.0, d.norm()); }

}  // namespace

KernelForm kernel_form(const SymplecticMatrix& s, const Config& cfg) {
    const int d = s.dim();
    SubspaceBases bases = subspace_bases(s, cfg);

    if (bases.rank_b == d) {
        const Mat b_inv = Mat(s.B()).partialPivLu().solve(Mat::Identity(d, d));
        FreeKernel k;
        k.b_inv = b_inv;
        k.db_inv = symmetrize(s.D() * b_inv);
        k.b_inv_a = symmetrize(b_inv * s.A());
        k.amplitude = 1.0 / std::sqrt(std::abs(Mat(s.B()).determinant()));
        return k;
    }
    if (bases.rank_b == 0) {
        DeltaKernel k;
        k.d_t = s.D().transpose();
        k.cd_t = symmetrize(s.C() * s.D().transpose());
        k.amplitude = std::sqrt(std::abs(Mat(s.D()).determinant()));
        return k;
    }
    GeneralKernel k;
    k.b_plus = pseudo_inverse(s.B(), cfg.rank_tol);
    k.b_plus_a = k.b_plus * s.A();
    k.db_plus = s.D() * k.b_plus;
    k.dc_t = symmetrize(s.D() * s.C().transpose());
    k.c_t = s.C().transpose();
    k.bases = std::move(bases);
    return k;
}

SmoothedKernelForm smoothed_form_freeB(const SymplecticMatrix& s, const Config& cfg) {
    const int d = s.dim();
    Eigen::JacobiSVD<Mat> svd_b(s.B());
    if (numerical_rank(svd_b.singularValues(), cfg.rank_tol, cfg.rank_gap_ratio) != d)
        fail(MQD_ERR_SINGULAR_MATRIX, "block B is singular");

    const Mat b_inv = Mat(s.B()).partialPivLu().solve(Mat::Identity(d, d));

    // N = Delta_B * S~ with Delta_B = diag(B^{-T}, B^{-1}) and
    // S~ = [[D^T, -I], [-I, A]]; N is symmetric and ker(N) = ker(S~).
    Mat stilde(2 * d, 2 * d);
    stilde.topLeftCorner(d, d) = s.D().transpose();
    stilde.topRightCorner(d, d) = -Mat::Identity(d, d);
    stilde.bottomLeftCorner(d, d) = -Mat::Identity(d, d);
    stilde.bottomRightCorner(d, d) = s.A();

    Mat delta_b = Mat::Zero(2 * d, 2 * d);
    delta_b.topLeftCorner(d, d) = b_inv.transpose();
    delta_b.bottomRightCorner(d, d) = b_inv;

    const Mat n = symmetrize(delta_b * stilde);
    Eigen::SelfAdjointEigenSolver<Mat> es(n);
    const Vec mu = es.eigenvalues();

    // Q_S = N (I + N^2)^{-1} N: eigenvalues mu^2 / (1 + mu^2).
    Vec lam(2 * d);
    double log_det = 0.0;  // log |det(I - iN)|
    for (int i = 0; i < 2 * d; ++i) {
        lam(i) = mu(i) * mu(i) / (1.0 + mu(i) * mu(i));
        log_det += 0.5 * std::log1p(mu(i) * mu(i));
    }
    SmoothedKernelForm out;
    out.qs = symmetrize(es.eigenvectors() * lam.asDiagonal() *
                        es.eigenvectors().transpose());
    out.amplitude = std::exp(-0.5 * std::log(std::abs(Mat(s.B()).determinant())) -
                             0.5 * log_det);
    out.amplitude_known = true;
    out.provenance = KernelCase::FreeB;
    NullSpace ns = null_space(out.qs, cfg.null_tol, cfg.rank_gap_ratio);
    out.kernel_basis = std::move(ns.basis);
    out.min_eigenvalue = ns.min_eig;
    return out;
}

SmoothedKernelForm smoothed_form_bzero(const SymplecticMatrix& s, const Config& cfg) {
    const int d = s.dim();
    if (s.B().cwiseAbs().maxCoeff() > cfg.rank_tol * std::max(1.0, s.matrix().norm()))
        fail(MQD_ERR_BAD_ARGUMENT, "block B is not zero");
    check_condition(s.D(), cfg.cond_cap, "block D");

    const Mat id = Mat::Identity(d, d);
    const Mat dd_t = s.D() * s.D().transpose();
    const Mat cd_t = s.C() * s.D().transpose();
    const Mat inner = (id + dd_t).partialPivLu().solve(s.D() * s.C().transpose());
    const Mat q = Mat(id + dd_t + cd_t * inner)
                      .partialPivLu()
                      .solve(id);

    SmoothedKernelForm out;
    out.qs.resize(2 * d, 2 * d);
    out.qs.topLeftCorner(d, d) = id - q;
    out.qs.topRightCorner(d, d) = -q * s.D();
    out.qs.bottomLeftCorner(d, d) = -s.D().transpose() * q;
    out.qs.bottomRightCorner(d, d) = id - s.D().transpose() * q * s.D();
    out.qs = symmetrize(out.qs);

    CMat z = (id + dd_t).cast<Complex>() - Complex(0.0, 1.0) * cd_t.cast<Complex>();
    const Complex det_z = z.partialPivLu().determinant();
    out.amplitude = std::sqrt(std::abs(Mat(s.D()).determinant())) /
                    std::sqrt(std::abs(det_z));
    out.amplitude_known = true;
    out.provenance = KernelCase::BZero;
    NullSpace ns = null_space(out.qs, cfg.null_tol, cfg.rank_gap_ratio);
    out.kernel_basis = std::move(ns.basis);
    out.min_eigenvalue = ns.min_eig;
    return out;
}

SmoothedKernelForm smoothed_form_general(const SymplecticMatrix& s, const Config& cfg,
                                         const BasisRemix* remix) {
    const int d = s.dim();
    const SubspaceBases bases = subspace_bases(s, cfg);
    const int r = bases.rank_b;
    if (r == 0 || r == d)
        fail(MQD_ERR_NOT_APPLICABLE, "general case requires 0 < rank(B) < d");

    Mat v1 = bases.range_b.columns;       // d x r
    Mat v2 = bases.range_b_perp.columns;  // d x (d-r)
    Mat w = bases.ker_b_perp.columns;     // d x r
    if (remix) {
        v1 = v1 * remix->o1;
        v2 = v2 * remix->o2;
        w = w * remix->ow;
    }

    // Smoothing integral in the variables (r, t, s) = (V1^T u1, W^T z, V2^T u2)
    // of the oscillatory kernel representation: the Gaussian windows give the
    // real part G, the kernel chirps give L, and the window centers enter
    // through zeta = i (V1^T x, W^T y, V2^T (x + D y)).
    const Mat b_plus = pseudo_inverse(s.B(), cfg.rank_tol);
    const Mat dmat = s.D();
    const Mat e = symmetrize(v2.transpose() * dmat * dmat.transpose() * v2);
    const Mat cross = w.transpose() * dmat.transpose() * v2;  // W^T D^T V2

    const int m = d + r;
    Mat g = Mat::Identity(m, m);
    g.block(r, 2 * r, r, d - r) = cross;
    g.block(2 * r, r, d - r, r) = cross.transpose();
    g.bottomRightCorner(d - r, d - r) += e;
    check_condition(g, cfg.cond_cap, "Gaussian block G");

    Mat l = Mat::Zero(m, m);
    l.block(0, 0, r, r) = v1.transpose() * dmat * b_plus * v1;
    l.block(0, r, r, r) = -v1.transpose() * b_plus.transpose() * w;
    l.block(r, 0, r, r) = -w.transpose() * b_plus * v1;
    l.block(r, r, r, r) = w.transpose() * b_plus * s.A() * w;
    l.block(r, 2 * r, r, d - r) = w.transpose() * s.C().transpose() * v2;
    l.block(2 * r, r, d - r, r) = v2.transpose() * s.C() * w;
    l.block(2 * r, 2 * r, d - r, d - r) =
        v2.transpose() * dmat * s.C().transpose() * v2;
    l = symmetrize(l);

    const Mat g_inv_l = g.partialPivLu().solve(l);
    const Mat core = symmetrize(g + l * g_inv_l);
    check_condition(core, cfg.cond_cap, "G + L G^{-1} L");
    const Mat m_mat = symmetrize(core.partialPivLu().solve(Mat::Identity(m, m)));

    Mat t_zeta = Mat::Zero(m, 2 * d);
    t_zeta.block(0, 0, r, d) = v1.transpose();
    t_zeta.block(r, d, r, d) = w.transpose();
    t_zeta.block(2 * r, 0, d - r, d) = v2.transpose();
    t_zeta.block(2 * r, d, d - r, d) = v2.transpose() * dmat;

    SmoothedKernelForm out;
    out.qs = symmetrize(Mat::Identity(2 * d, 2 * d) -
                        t_zeta.transpose() * m_mat * t_zeta);
    out.amplitude = 0.0;
    out.amplitude_known = false;
    out.provenance = KernelCase::General;
    NullSpace ns = null_space(out.qs, cfg.null_tol, cfg.rank_gap_ratio);
    out.kernel_basis = std::move(ns.basis);
    out.min_eigenvalue = ns.min_eig;
    return out;
}

SmoothedKernelForm smoothed_form(const SymplecticMatrix& s, const Config& cfg) {
    Eigen::JacobiSVD<Mat> svd_b(s.B());
    const int r =
        numerical_rank(svd_b.singularValues(), cfg.rank_tol, cfg.rank_gap_ratio);
    if (r == s.dim()) return smoothed_form_freeB(s, cfg);
    if (r == 0) return smoothed_form_bzero(s, cfg);
    return smoothed_form_general(s, cfg);
}

Mat LocalizationManifold::graph_basis() const {
    if (dim == 0) return Mat(2 * basis.rows(), 0);
    Mat stacked(2 * basis.rows(), dim);
    stacked.topRows(basis.rows()) = basis;
    stacked.bottomRows(basis.rows()) = image;
    Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeThinU);
    Mat u = svd.matrixU().leftCols(dim);
    fix_column_signs(u);
    return u;
}

LocalizationManifold localization_manifold(const SymplecticMatrix& s,
                                           const Config& cfg) {
    Eigen::JacobiSVD<Mat> svd_c(s.C(), Eigen::ComputeFullU);
    const int rc =
        numerical_rank(svd_c.singularValues(), cfg.rank_tol, cfg.rank_gap_ratio);
    const int d = s.dim();
    LocalizationManifold out;
    Mat basis = svd_c.matrixU().rightCols(d - rc);
    fix_column_signs(basis);
    out.basis = std::move(basis);
    out.image = s.D().transpose() * out.basis;
    out.dim = d - rc;
    return out;
}

const char* verdict_reason_name(VerdictReason r) {
    switch (r) {
        case VerdictReason::CInvertible: return "C-invertible";
        case VerdictReason::DRestrictedIdentity: return "D-restricted-identity";
        case VerdictReason::D1Rule: return "d1-rule";
        case VerdictReason::GammaInDelta: return "gamma-in-delta";
    }
    return "unknown";
}

Verdict verdict(const SymplecticMatrix& s, const Config& cfg) {
    const int d = s.dim();
    const LocalizationManifold gamma = localization_manifold(s, cfg);
    const double tol = identity_tol(s.D());

    Verdict out;
    double worst = 0.0;
    int worst_col = -1;
    for (int j = 0; j < gamma.dim; ++j) {
        const double dev = (gamma.image.col(j) - gamma.basis.col(j)).cwiseAbs().maxCoeff();
        if (dev > worst) {
            worst = dev;
            worst_col = j;
        }
    }
    out.quasi_diagonal = worst <= tol;

    if (d == 1) {
        out.reason = VerdictReason::D1Rule;
    } else if (gamma.dim == 0) {
        out.reason = VerdictReason::CInvertible;
    } else if (out.quasi_diagonal) {
        out.reason = VerdictReason::DRestrictedIdentity;
    } else {
        out.reason = VerdictReason::GammaInDelta;
    }

    if (!out.quasi_diagonal) {
        out.epsilon = 0.0;
        out.witness = std::make_pair(Vec(gamma.basis.col(worst_col)),
                                     Vec(gamma.image.col(worst_col)));
        return out;
    }

    // Tight decay constant: smallest generalized eigenvalue of
    // Q_S v = lambda Delta2 v on the complement of null(Q_S), where
    // Delta2(x, y) = |x - y|^2.
    const SmoothedKernelForm form = smoothed_form(s, cfg);
    Eigen::SelfAdjointEigenSolver<Mat> es(form.qs);
    const Vec& ev = es.eigenvalues();
    const double norm = std::max(std::abs(ev(0)), std::abs(ev(2 * d - 1)));
    int k = 0;
    while (k < 2 * d && ev(k) < cfg.null_tol * norm) ++k;
    const Mat vc = es.eigenvectors().rightCols(2 * d - k);

    Mat delta2(2 * d, 2 * d);
    delta2.topLeftCorner(d, d) = Mat::Identity(d, d);
    delta2.topRightCorner(d, d) = -Mat::Identity(d, d);
    delta2.bottomLeftCorner(d, d) = -Mat::Identity(d, d);
    delta2.bottomRightCorner(d, d) = Mat::Identity(d, d);

    const Mat a = symmetrize(vc.transpose() * form.qs * vc);
    const Mat b = symmetrize(vc.transpose() * delta2 * vc);
    Eigen::SelfAdjointEigenSolver<Mat> ea(a);
    const Mat a_inv_sqrt = ea.operatorInverseSqrt();
    Eigen::SelfAdjointEigenSolver<Mat> em(symmetrize(a_inv_sqrt * b * a_inv_sqrt));
    const double lam_max = em.eigenvalues()(em.eigenvalues().size() - 1);
    if (!(lam_max > std::numeric_limits<double>::min()))
        fail(MQD_ERR_INTERNAL, "degenerate decay-constant problem");
    out.epsilon = 1.0 / lam_max;
    return out;
}

const char* d2_scenario_name(D2Scenario s) {
    switch (s) {
        case D2Scenario::CInvertible: return "C-invertible";
        case D2Scenario::CZero: return "C-zero";
        case D2Scenario::Rank1Transversal: return "rank1-transversal";
        case D2Scenario::Rank1Dilation: return "rank1-dilation";
    }
    return "unknown";
}

D2Classification classify_d2(const SymplecticMatrix& s, const Config& cfg) {
    if (s.dim() != 2)
        fail(MQD_ERR_WRONG_DIMENSION, "classification is defined for d = 2 only");
    Eigen::JacobiSVD<Mat> svd_c(s.C(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const int rc =
        numerical_rank(svd_c.singularValues(), cfg.rank_tol, cfg.rank_gap_ratio);
    const double tol = identity_tol(s.D());

    if (rc == 2) return {D2Scenario::CInvertible, true};
    if (rc == 0) {
        const bool qd = (s.D() - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= tol;
        return {D2Scenario::CZero, qd};
    }
    // rank(C) = 1: ker(C^T) = R(C)^perp and ker(C) are lines.
    const Vec u = svd_c.matrixU().col(1);  // spans R(C)^perp
    const Vec v = svd_c.matrixV().col(1);  // spans ker(C)
    if (std::abs(u.dot(v)) >= 1.0 - 1e-8) {
        const bool qd =
            (s.D().transpose() * u - u).cwiseAbs().maxCoeff() <= tol;
        return {D2Scenario::Rank1Dilation, qd};
    }
    return {D2Scenario::Rank1Transversal, false};
}

double subspace_distance(const Mat& u, const Mat& v) {
    if (u.cols() == 0 && v.cols() == 0) return 0.0;
    if (u.cols() == 0 || v.cols() == 0) return 1.0;
    double r = 0.0;
    const Mat pu = u * u.transpose();
    const Mat pv = v * v.transpose();
    r = std::max(r, (u - pv * u).cwiseAbs().maxCoeff());
    r = std::max(r, (v - pu * v).cwiseAbs().maxCoeff());
    return r;
}

AnalysisReport analyze(const SymplecticMatrix& s, const Config& cfg) {
    AnalysisReport rep;
    rep.d = s.dim();
    rep.v = verdict(s, cfg);
    rep.gamma = localization_manifold(s, cfg);
    rep.form = smoothed_form(s, cfg);
    if (s.dim() == 2) rep.d2 = classify_d2(s, cfg);
    rep.symplectic_residual = s.residual();
    rep.null_gamma_residual =
        subspace_distance(rep.form.kernel_basis, rep.gamma.graph_basis());
    rep.gamma_strictly_inside_diagonal =
        rep.v.quasi_diagonal && rep.gamma.dim < s.dim();
    return rep;
}

}  // namespace mqd
