#pragma once

#include <utility>

#include "common.hpp"

namespace mqd {

/// t |-> c * exp(-pi Q t . t) with Q complex symmetric.
struct ComplexQuadraticForm {
    int n = 0;
    CMat q;
    Complex amplitude{1.0, 0.0};

    static ComplexQuadraticForm make(const CMat& q, Complex amplitude = {1.0, 0.0},
                                     double sym_tol = 1e-12);
};

/// t |-> c * exp(-pi Q t . t) with Q real symmetric positive semi-definite;
/// represents magnitude profiles.
struct RealQuadraticFormPSD {
    int n = 0;
    Mat q;
    double amplitude = 1.0;

    static RealQuadraticFormPSD make(const Mat& q, double amplitude = 1.0,
                                     double psd_tol = 1e-10);
};

struct GaussianFourierResult {
    Complex value;
    /// The magnitude is branch-independent; the phase comes from the
    /// principal square roots of the eigenvalues of Q and is reported as
    /// defined modulo sign.
    bool phase_modulo_sign = true;
};

/// Integral of exp(-pi Q t.t) exp(-2 pi i xi.t) over R^n:
/// det(Q)^{-1/2} exp(-pi Q^{-1} xi.xi). Requires Re(Q) positive-definite.
GaussianFourierResult gaussian_fourier(const CMat& q, const CVec& xi);

/// Real and imaginary parts of (M1 + i M2)^{-1} for real M1, M2:
/// X = (M1 + M2 M1^{-1} M2)^{-1}, inverse = X - i M1^{-1} M2 X.
std::pair<Mat, Mat> complex_inverse_split(const Mat& m1, const Mat& m2);

/// Closed-form convolution of two positive-definite Gaussians:
/// Q = (Q1^{-1} + Q2^{-1})^{-1}, amplitude c1 c2 det(Q1 + Q2)^{-1/2}.
RealQuadraticFormPSD convolve_gaussians(const RealQuadraticFormPSD& g1,
                                        const RealQuadraticFormPSD& g2);

double eval_form(const RealQuadraticFormPSD& f, const Vec& t);
Complex eval_form(const ComplexQuadraticForm& f, const Vec& t);

}  // namespace mqd
