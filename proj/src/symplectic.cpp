#include "symplectic.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <sstream>

namespace mqd {

Mat standard_form(int d) {
    Mat j = Mat::Zero(2 * d, 2 * d);
    j.topRightCorner(d, d) = Mat::Identity(d, d);
    j.bottomLeftCorner(d, d) = -Mat::Identity(d, d);
    return j;
}

double symplectic_residual(const Mat& m) {
    const int d = static_cast<int>(m.rows()) / 2;
    const Mat j = standard_form(d);
    const auto a = m.topLeftCorner(d, d);
    const auto b = m.topRightCorner(d, d);
    const auto c = m.bottomLeftCorner(d, d);
    const auto dd = m.bottomRightCorner(d, d);
    const Mat id = Mat::Identity(d, d);

    double r = (m.transpose() * j * m - j).cwiseAbs().maxCoeff();
    r = std::max(r, (a.transpose() * c - c.transpose() * a).cwiseAbs().maxCoeff());
    r = std::max(r, (b.transpose() * dd - dd.transpose() * b).cwiseAbs().maxCoeff());
    r = std::max(r, (a.transpose() * dd - c.transpose() * b - id).cwiseAbs().maxCoeff());
    r = std::max(r, (dd * c.transpose() - c * dd.transpose()).cwiseAbs().maxCoeff());
    r = std::max(r, (b * a.transpose() - a * b.transpose()).cwiseAbs().maxCoeff());
    r = std::max(r, (dd * a.transpose() - c * b.transpose() - id).cwiseAbs().maxCoeff());
    r = std::max(r, std::abs(m.determinant() - 1.0));

    const double scale = std::max(1.0, m.squaredNorm());
    return r / scale;
}

SymplecticMatrix SymplecticMatrix::validate(const Mat& m, double tol) {
    if (m.rows() != m.cols()) fail(MQD_ERR_BAD_ARGUMENT, "matrix is not square");
    if (m.rows() % 2 != 0)
        fail(MQD_ERR_ODD_DIMENSION, "matrix side must be even, got " +
                                        std::to_string(m.rows()));
    if (m.size() == 0) fail(MQD_ERR_BAD_ARGUMENT, "matrix is empty");
    if (!m.allFinite()) fail(MQD_ERR_BAD_ARGUMENT, "matrix has non-finite entries");

    const double r = symplectic_residual(m);
    if (!(r <= tol)) {
        std::ostringstream os;
        os << "matrix is not symplectic: residual " << r << " exceeds tolerance "
           << tol;
        fail(MQD_ERR_NOT_SYMPLECTIC, os.str());
    }
    return SymplecticMatrix(static_cast<int>(m.rows()) / 2, m, r);
}

SymplecticMatrix SymplecticMatrix::inverse() const {
    Mat inv(2 * d_, 2 * d_);
    inv.topLeftCorner(d_, d_) = D().transpose();
    inv.topRightCorner(d_, d_) = -B().transpose();
    inv.bottomLeftCorner(d_, d_) = -C().transpose();
    inv.bottomRightCorner(d_, d_) = A().transpose();
    return SymplecticMatrix(d_, std::move(inv), symplectic_residual(inv));
}

Generator Generator::fourier(int d) {
    if (d < 1) fail(MQD_ERR_BAD_ARGUMENT, "generator dimension must be positive");
    return Generator{Kind::Fourier, d, Mat()};
}

Generator Generator::chirp(const Mat& p, double sym_tol) {
    if (p.rows() != p.cols() || p.rows() < 1)
        fail(MQD_ERR_BAD_ARGUMENT, "chirp parameter must be square");
    const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    if (symmetry_residual(p) > sym_tol * scale)
        fail(MQD_ERR_NON_SYMMETRIC_P, "chirp parameter P is not symmetric");
    return Generator{Kind::Chirp, static_cast<int>(p.rows()), symmetrize(p)};
}

Generator Generator::dilation(const Mat& e, double cond_cap) {
    if (e.rows() != e.cols() || e.rows() < 1)
        fail(MQD_ERR_BAD_ARGUMENT, "dilation parameter must be square");
    Eigen::JacobiSVD<Mat> svd(e);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin <= 0.0 || smax / smin > cond_cap)
        fail(MQD_ERR_SINGULAR_E, "dilation parameter E is singular or too ill-conditioned");
    return Generator{Kind::Dilation, static_cast<int>(e.rows()), e};
}

Mat Generator::matrix() const {
    Mat m = Mat::Zero(2 * d, 2 * d);
    const Mat id = Mat::Identity(d, d);
    switch (kind) {
        case Kind::Fourier:
            return standard_form(d);
        case Kind::Chirp:
            m.topLeftCorner(d, d) = id;
            m.bottomLeftCorner(d, d) = param;
            m.bottomRightCorner(d, d) = id;
            return m;
        case Kind::Dilation:
            m.topLeftCorner(d, d) = param.partialPivLu().solve(id);
            m.bottomRightCorner(d, d) = param.transpose();
            return m;
    }
    fail(MQD_ERR_INTERNAL, "unknown generator kind");
}

GeneratorWord::GeneratorWord(int dim, std::vector<Generator> f)
    : d(dim), factors(std::move(f)) {
    if (d < 1) fail(MQD_ERR_BAD_ARGUMENT, "word dimension must be positive");
    for (const auto& g : factors)
        if (g.d != d)
            fail(MQD_ERR_BAD_ARGUMENT, "word mixes generator dimensions");
}

Mat GeneratorWord::product_matrix() const {
    Mat m = Mat::Identity(2 * d, 2 * d);
    for (const auto& g : factors) m = m * g.matrix();
    return m;
}

SymplecticMatrix GeneratorWord::product(double tol) const {
    return SymplecticMatrix::validate(product_matrix(), tol);
}

Mat pseudo_inverse(const Mat& m, double rank_tol) {
    if (m.size() == 0) return Mat(m.cols(), m.rows());
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    Vec inv = Vec::Zero(sv.size());
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > rank_tol * smax && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

int numerical_rank(const Vec& svals, double rank_tol, double gap_ratio) {
    const int n = static_cast<int>(svals.size());
    if (n == 0) return 0;
    const double smax = svals(0);
    if (smax == 0.0) return 0;
    const double cut = rank_tol * smax;
    int r = 0;
    while (r < n && svals(r) > cut) ++r;

    bool ambiguous = false;
    double gap = std::numeric_limits<double>::infinity();
    if (r == n) {
        gap = svals(n - 1) / cut;
        ambiguous = gap < gap_ratio;
    } else if (r > 0 && svals(r) > 0.0) {
        gap = svals(r - 1) / svals(r);
        ambiguous = gap < gap_ratio;
    }
    if (ambiguous) {
        std::ostringstream os;
        os << "rank decision is ill-conditioned: singular-value gap " << gap
           << " at cutoff " << cut << " is below " << gap_ratio;
        fail(MQD_ERR_RANK_AMBIGUOUS, os.str());
    }
    return r;
}

void fix_column_signs(Mat& m) {
    for (int c = 0; c < m.cols(); ++c) {
        const double colmax = m.col(c).cwiseAbs().maxCoeff();
        if (colmax == 0.0) continue;
        for (int i = 0; i < m.rows(); ++i) {
            if (std::abs(m(i, c)) > 1e-12 * colmax) {
                if (m(i, c) < 0.0) m.col(c) = -m.col(c);
                break;
            }
        }
    }
}

namespace {

SubspaceBasis make_basis(int dim, Mat cols, SubspaceRole role) {
    fix_column_signs(cols);
    return SubspaceBasis{dim, static_cast<int>(cols.cols()), std::move(cols), role};
}

}  // namespace

SubspaceBases subspace_bases(const SymplecticMatrix& s, const Config& cfg) {
    const int d = s.dim();
    SubspaceBases out;

    Eigen::JacobiSVD<Mat> svd_b(s.B(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.rank_b = numerical_rank(svd_b.singularValues(), cfg.rank_tol, cfg.rank_gap_ratio);
    const int rb = out.rank_b;
    out.range_b = make_basis(d, svd_b.matrixU().leftCols(rb), SubspaceRole::RangeB);
    out.range_b_perp =
        make_basis(d, svd_b.matrixU().rightCols(d - rb), SubspaceRole::RangeBPerp);
    out.ker_b_perp = make_basis(d, svd_b.matrixV().leftCols(rb), SubspaceRole::KerBPerp);
    out.ker_b = make_basis(d, svd_b.matrixV().rightCols(d - rb), SubspaceRole::KerB);

    Eigen::JacobiSVD<Mat> svd_c(s.C(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.rank_c = numerical_rank(svd_c.singularValues(), cfg.rank_tol, cfg.rank_gap_ratio);
    const int rc = out.rank_c;
    out.range_c_perp =
        make_basis(d, svd_c.matrixU().rightCols(d - rc), SubspaceRole::RangeCPerp);
    out.ker_c = make_basis(d, svd_c.matrixV().rightCols(d - rc), SubspaceRole::KerC);

    return out;
}

Mat complete_orthogonal(const Mat& partial) {
    const int d = static_cast<int>(partial.rows());
    const int k = static_cast<int>(partial.cols());
    if (k == d) return partial;
    // Complement basis from the SVD of the orthogonal projector.
    Mat proj = Mat::Identity(d, d) - partial * partial.transpose();
    Eigen::JacobiSVD<Mat> svd(proj, Eigen::ComputeFullU);
    Mat comp = svd.matrixU().leftCols(d - k);
    fix_column_signs(comp);
    Mat full(d, d);
    full.leftCols(k) = partial;
    full.rightCols(d - k) = comp;
    return full;
}

Orientation normalize_orientation(const SymplecticMatrix& s, const Config& cfg) {
    const int d = s.dim();
    const SubspaceBases bases = subspace_bases(s, cfg);
    const int r = bases.rank_b;
    if (r == 0 || r == d)
        fail(MQD_ERR_NOT_APPLICABLE,
             "orientation normalization applies only when 0 < rank(B) < d");

    // Q: first d-r columns span ker(B). P: first d-r rows span R(B)^perp.
    const Mat q = complete_orthogonal(bases.ker_b.columns);
    const Mat p = complete_orthogonal(bases.range_b_perp.columns).transpose();

    Mat sp(2 * d, 2 * d);
    sp.topLeftCorner(d, d) = p * s.A() * q;
    sp.topRightCorner(d, d) = p * s.B() * q;
    sp.bottomLeftCorner(d, d) = p * s.C() * q;
    sp.bottomRightCorner(d, d) = p * s.D() * q;

    Orientation out{p, q, SymplecticMatrix::validate(sp, std::max(cfg.symplectic_tol,
                                                                  10 * s.residual()))};
    return out;
}

SymmetryReport check_symmetry_lemma(const SymplecticMatrix& s, const Config& cfg) {
    const SubspaceBases bases = subspace_bases(s, cfg);
    SymmetryReport rep;
    rep.rank_b = bases.rank_b;
    if (bases.rank_b == 0) return rep;  // vacuous: empty parametrizations

    const Mat bplus = pseudo_inverse(s.B(), cfg.rank_tol);
    const Mat& w = bases.ker_b_perp.columns;
    const Mat& v1 = bases.range_b.columns;
    rep.w_residual = symmetry_residual(w.transpose() * bplus * s.A() * w);
    rep.v1_residual = symmetry_residual(v1.transpose() * s.D() * bplus * v1);
    return rep;
}

}  // namespace mqd
