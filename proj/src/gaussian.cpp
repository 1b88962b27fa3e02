#include "gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>

namespace mqd {

namespace {

const double kPi = 3.14159265358979323846;

double min_real_eigenvalue(const CMat& q) {
    Mat re = 0.5 * (q.real() + q.real().transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(re);
    return es.eigenvalues()(0);
}

}  // namespace

ComplexQuadraticForm ComplexQuadraticForm::make(const CMat& q, Complex amplitude,
                                                double sym_tol) {
    if (q.rows() != q.cols() || q.rows() < 1)
        fail(MQD_ERR_BAD_ARGUMENT, "quadratic form matrix must be square");
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale)
        fail(MQD_ERR_BAD_ARGUMENT, "quadratic form matrix is not symmetric");
    return ComplexQuadraticForm{static_cast<int>(q.rows()),
                                0.5 * (q + q.transpose()), amplitude};
}

RealQuadraticFormPSD RealQuadraticFormPSD::make(const Mat& q, double amplitude,
                                                double psd_tol) {
    if (q.rows() != q.cols() || q.rows() < 1)
        fail(MQD_ERR_BAD_ARGUMENT, "quadratic form matrix must be square");
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if (symmetry_residual(q) > 1e-12 * scale)
        fail(MQD_ERR_BAD_ARGUMENT, "quadratic form matrix is not symmetric");
    if (amplitude < 0.0)
        fail(MQD_ERR_BAD_ARGUMENT, "amplitude must be non-negative");
    Mat sym = symmetrize(q);
    Eigen::SelfAdjointEigenSolver<Mat> es(sym);
    if (es.eigenvalues()(0) < -psd_tol * scale)
        fail(MQD_ERR_BAD_ARGUMENT, "quadratic form matrix is not PSD");
    return RealQuadraticFormPSD{static_cast<int>(q.rows()), std::move(sym), amplitude};
}

GaussianFourierResult gaussian_fourier(const CMat& q, const CVec& xi) {
    const auto form = ComplexQuadraticForm::make(q);
    if (xi.size() != form.n)
        fail(MQD_ERR_BAD_ARGUMENT, "frequency vector has wrong dimension");
    if (min_real_eigenvalue(form.q) <= 0.0)
        fail(MQD_ERR_NOT_INTEGRABLE, "Re(Q) is not positive-definite");

    // det(Q)^{-1/2}: magnitude from the LU determinant, phase from the
    // principal square roots of the eigenvalues. Re(Q) > 0 keeps every
    // eigenvalue in the right half plane, away from the branch cut.
    Eigen::ComplexEigenSolver<CMat> es(form.q);
    Complex half_phase{1.0, 0.0};
    for (int i = 0; i < form.n; ++i) {
        Complex s = std::sqrt(es.eigenvalues()(i));
        half_phase *= s / std::abs(s);
    }
    const Complex det = form.q.partialPivLu().determinant();
    const Complex det_inv_sqrt = std::pow(std::abs(det), -0.5) * std::conj(half_phase);

    const CVec qixi = form.q.partialPivLu().solve(xi);
    const Complex expo = -kPi * (qixi.transpose() * xi)(0, 0);
    return GaussianFourierResult{det_inv_sqrt * std::exp(expo), true};
}

std::pair<Mat, Mat> complex_inverse_split(const Mat& m1, const Mat& m2) {
    if (m1.rows() != m1.cols() || m2.rows() != m2.cols() || m1.rows() != m2.rows())
        fail(MQD_ERR_BAD_ARGUMENT, "matrices must be square of equal size");
    Eigen::PartialPivLU<Mat> lu1(m1);
    const double rcond1 = m1.norm() <= 0 ? 0.0 : lu1.rcond();
    if (!(rcond1 > 1e-14))
        fail(MQD_ERR_SINGULAR_MATRIX, "M1 is singular");
    const Mat m1_inv_m2 = lu1.solve(m2);
    const Mat schur = m1 + m2 * m1_inv_m2;
    Eigen::PartialPivLU<Mat> lus(schur);
    if (!(lus.rcond() > 1e-14))
        fail(MQD_ERR_SINGULAR_MATRIX, "M1 + M2 M1^{-1} M2 is singular");
    const Mat re = lus.solve(Mat::Identity(m1.rows(), m1.cols()));
    const Mat im = -m1_inv_m2 * re;
    return {re, im};
}

RealQuadraticFormPSD convolve_gaussians(const RealQuadraticFormPSD& g1,
                                        const RealQuadraticFormPSD& g2) {
    if (g1.n != g2.n) fail(MQD_ERR_BAD_ARGUMENT, "dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Mat> e1(g1.q), e2(g2.q);
    const double floor1 = 1e-12 * std::max(1.0, g1.q.norm());
    const double floor2 = 1e-12 * std::max(1.0, g2.q.norm());
    if (e1.eigenvalues()(0) <= floor1 || e2.eigenvalues()(0) <= floor2)
        fail(MQD_ERR_NOT_INTEGRABLE,
             "convolution requires strictly positive-definite factors");

    const Mat sum = g1.q + g2.q;
    const Mat q = symmetrize(g1.q * sum.partialPivLu().solve(g2.q));
    const double amp =
        g1.amplitude * g2.amplitude / std::sqrt(sum.partialPivLu().determinant());
    return RealQuadraticFormPSD::make(q, amp);
}

double eval_form(const RealQuadraticFormPSD& f, const Vec& t) {
    if (t.size() != f.n) fail(MQD_ERR_BAD_ARGUMENT, "point has wrong dimension");
    return f.amplitude * std::exp(-kPi * t.dot(f.q * t));
}

Complex eval_form(const ComplexQuadraticForm& f, const Vec& t) {
    if (t.size() != f.n) fail(MQD_ERR_BAD_ARGUMENT, "point has wrong dimension");
    const CVec tc = t.cast<Complex>();
    const Complex bilinear = (tc.transpose() * (f.q * tc))(0, 0);
    return f.amplitude * std::exp(-kPi * bilinear);
}

}  // namespace mqd
