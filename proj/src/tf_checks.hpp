#pragma once

#include <cstdint>

#include "oracle.hpp"

namespace mqd {

/// Phase-space point z = (x, xi).
struct PhaseSpacePoint {
    Vec x;
    Vec xi;
};

/// Discrete short-time Fourier transform V_g f(x, xi); the window is shifted
/// by band-limited interpolation when x is off-grid (d = 1 only in that
/// case; on-grid shifts work for d <= 2).
Complex stft(const SampledField& f, const SampledField& g, const PhaseSpacePoint& z);

/// Wigner samples on the plane: x on the field grid, xi on the natural
/// half-density frequency grid of spacing 1/(2L).
struct WignerField {
    int nx = 0, nxi = 0;
    double x0 = 0.0, dx = 0.0, xi0 = 0.0, dxi = 0.0;
    Mat values;  // values(i, k) = W f(x_i, xi_k)

    double x(int i) const { return x0 + i * dx; }
    double xi(int k) const { return xi0 + k * dxi; }
};

/// Wigner distribution of a d = 1 field via the DFT of the correlation
/// product f(x + tau) conj(f(x - tau)).
WignerField wigner(const SampledField& f);

/// Pointwise Wigner evaluation at an arbitrary phase-space point; exact
/// sample lookup when x is on the grid, trigonometric interpolation
/// otherwise.
double wigner_at(const SampledField& f, double x, double xi);

/// Gabor matrix entry <S^ pi(z) g, pi(v) g> with the L2-normalised Gaussian
/// window, pi(z) f(t) = exp(2 pi i t.xi) f(t - x).
Complex gabor_matrix(const GeneratorWord& w, const PhaseSpacePoint& z,
                     const PhaseSpacePoint& v, const Config& cfg);

struct CovarianceReport {
    double max_abs_dev = 0.0;
    int points = 0;
    int grid_n = 0;
    double extent = 0.0;
};

/// Compares W(S^ f) with W f composed with S^{-1} over the significant
/// support; the word must be 1-dimensional.
CovarianceReport check_wigner_covariance(const GeneratorWord& w,
                                         const SampledField& f, const Config& cfg);

struct GaborIdentityReport {
    double spread_max = 0.0;       // relative spread of |h| at fixed v - Sz
    double fit_max_rel_err = 0.0;  // worst deviation from the log-quadratic fit
    Mat q_fit;                     // fitted 2x2 decay form
    double c_fit = 0.0;
    int points = 0;
};

/// Verifies that |h(z, v)| depends on (z, v) only through u = v - Sz and
/// that the profile is a log-quadratic decay in u (d = 1).
GaborIdentityReport check_gabor_kernel_identity(const GeneratorWord& w,
                                                const std::vector<Vec>& offsets,
                                                int pairs_per_offset,
                                                const Config& cfg, uint64_t seed);

/// Default offset set for the Gabor profile check: a polar lattice of
/// phase-space offsets with |u| <= radius.
std::vector<Vec> default_gabor_offsets(double radius);

}  // namespace mqd
