#pragma once

#include <vector>

#include "fft.hpp"
#include "symplectic.hpp"

namespace mqd {

/// Uniform centered grid covering [-L/2, L/2)^d with spacing L/n.
struct Grid {
    int d = 1;
    int n = 0;
    double extent = 0.0;

    static Grid make(int d, int n, double extent);

    double spacing() const { return extent / n; }
    double nyquist() const { return n / (2.0 * extent); }
    double coord(int i) const { return (i - n / 2) * spacing(); }
    long size() const;
    bool operator==(const Grid& o) const {
        return d == o.d && n == o.n && extent == o.extent;
    }
};

/// Complex samples on a grid; d = 2 fields are stored row-major
/// (index = i0 * n + i1).
struct SampledField {
    Grid grid;
    std::vector<Complex> values;

    double norm() const;  // discrete L2 norm, sqrt(spacing^d sum |v|^2)
    Complex& at(int i0, int i1 = 0);
    Complex at(int i0, int i1 = 0) const;
};

/// Samples of exp(-pi |t - center|^2). The center must keep margin distance
/// from the grid boundary.
SampledField sample_gaussian(const Grid& grid, const Vec& center, const Config& cfg);

/// Largest significant frequency (inf-norm over axes) present in the field,
/// from its discrete spectrum with a 1e-9 relative floor.
double field_band(const SampledField& f);

/// One metaplectic pipeline step:
///   J    -> continuous Fourier transform evaluated on the grid,
///   V_P  -> pointwise multiplication by exp(i pi P t.t),
///   D_E  -> |det E|^{1/2} f(E t) by exact index mapping when E maps the
///           grid to itself, band-limited interpolation otherwise.
/// Chirps and expanding dilations are pre-checked against the Nyquist bound
/// on the support where |f| > 1e-12 (AliasRisk); a relative L2 drift above
/// cfg.unitarity_tol reports ExtentOverflow.
SampledField apply_generator(const Generator& g, const SampledField& f,
                             const Config& cfg);

/// Applies the word with the left factor last, matching the matrix product.
SampledField apply_word(const GeneratorWord& w, const SampledField& f,
                        const Config& cfg);

struct KernelSamples {
    Eigen::MatrixXcd values;  // entry (i, j) = k~(x_i, y_j)
    bool quadrature_warning = false;
    double tail_mass = 0.0;
};

/// Smoothed-kernel samples through the pipeline:
/// k~(x, y) = <S^(translate_y phi), translate_x phi> on the grid.
KernelSamples sample_smoothed_kernel(const GeneratorWord& w,
                                     const std::vector<Vec>& xs,
                                     const std::vector<Vec>& ys, const Config& cfg);

struct FitReport {
    double c_fit = 0.0;
    double max_rel_err = 0.0;
    int points_used = 0;
};

/// Least-squares fit of log|sample| = log c - pi Q_S(z).z over the sample
/// points with |value| > 1e-6 of the maximum; requires at least 10 such
/// points. Reports the fitted amplitude and the worst relative deviation.
FitReport fit_against_analytic(const KernelSamples& samples,
                               const std::vector<Vec>& xs,
                               const std::vector<Vec>& ys, const Mat& qs,
                               const Config& cfg);

/// Default lattice of sample centers for verification fits, clustered
/// around the diagonal region where the smoothed kernel is significant.
void default_fit_points(int d, std::vector<Vec>& xs, std::vector<Vec>& ys);

}  // namespace mqd
