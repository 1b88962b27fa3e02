#pragma once

#include <vector>

#include "common.hpp"

namespace mqd {

/// Standard symplectic form J = [[0, I], [-I, 0]] of size 2d x 2d.
Mat standard_form(int d);

/// Residual of the symplectic relations: max of ||S^T J S - J||_max and the
/// six block identities, normalised by max(1, ||S||_F^2).
double symplectic_residual(const Mat& m);

/// A validated 2d x 2d real symplectic matrix with block views.
class SymplecticMatrix {
public:
    static SymplecticMatrix validate(const Mat& m, double tol);

    int dim() const { return d_; }
    const Mat& matrix() const { return m_; }
    double residual() const { return residual_; }

    Eigen::Block<const Mat> A() const { return m_.topLeftCorner(d_, d_); }
    Eigen::Block<const Mat> B() const { return m_.topRightCorner(d_, d_); }
    Eigen::Block<const Mat> C() const { return m_.bottomLeftCorner(d_, d_); }
    Eigen::Block<const Mat> D() const { return m_.bottomRightCorner(d_, d_); }

    /// S^{-1} = [[D^T, -B^T], [-C^T, A^T]].
    SymplecticMatrix inverse() const;

private:
    SymplecticMatrix(int d, Mat m, double residual)
        : d_(d), m_(std::move(m)), residual_(residual) {}
    int d_;
    Mat m_;
    double residual_;
};

/// One generator factor: the Fourier matrix J, a chirp V_P = [[I,0],[P,I]]
/// with symmetric P, or a dilation D_E = [[E^{-1},0],[0,E^T]].
struct Generator {
    enum class Kind { Fourier, Chirp, Dilation };

    Kind kind;
    int d;
    Mat param;  // P for Chirp, E for Dilation; empty for Fourier

    static Generator fourier(int d);
    static Generator chirp(const Mat& p, double sym_tol = 1e-12);
    static Generator dilation(const Mat& e, double cond_cap = 1e8);

    Mat matrix() const;
};

/// Ordered list of generator factors; the product (left to right) defines S.
struct GeneratorWord {
    int d = 1;
    std::vector<Generator> factors;

    GeneratorWord() = default;
    GeneratorWord(int dim, std::vector<Generator> f);

    Mat product_matrix() const;  // left-to-right product, I for empty word
    SymplecticMatrix product(double tol) const;
};

/// Moore-Penrose pseudo-inverse; singular values below rank_tol * sigma_max
/// are treated as zero. The zero matrix maps to the zero matrix.
Mat pseudo_inverse(const Mat& m, double rank_tol);

enum class SubspaceRole { RangeB, KerB, KerBPerp, RangeBPerp, RangeCPerp, KerC };

/// Orthonormal basis (possibly 0 columns) of a tagged subspace of R^d.
struct SubspaceBasis {
    int dim  = 0;   // ambient dimension
    int rank = 0;   // number of columns
    Mat columns;    // dim x rank, orthonormal
    SubspaceRole role{};
};

struct SubspaceBases {
    SubspaceBasis range_b, ker_b, ker_b_perp, range_b_perp, range_c_perp, ker_c;
    int rank_b = 0;
    int rank_c = 0;
};

/// Numerical rank of a descending singular-value list. Throws RankAmbiguous
/// when the gap at the cutoff rank_tol * sigma_max is smaller than gap_ratio.
int numerical_rank(const Vec& svals, double rank_tol, double gap_ratio);

/// The six bases used by the kernel analysis, all derived from one SVD of B
/// and one SVD of C, with deterministic column signs.
SubspaceBases subspace_bases(const SymplecticMatrix& s, const Config& cfg);

/// Result of the orthogonal normalization S = D_P S' D_Q: S' = [[PAQ, PBQ],
/// [PCQ, PDQ]] satisfies D'^T(R(B')^perp) = ker(B').
struct Orientation {
    Mat p, q;  // orthogonal d x d
    SymplecticMatrix s_prime;
};

/// Requires 1 <= rank(B) < d; otherwise throws NotApplicable. The first
/// d - r columns of Q span ker(B) and the first d - r rows of P span
/// R(B)^perp; both are completed deterministically from the SVD of B.
Orientation normalize_orientation(const SymplecticMatrix& s, const Config& cfg);

/// Symmetry residuals for W^T B^+ A W (W spanning ker(B)^perp) and
/// V1^T D B^+ V1 (V1 spanning R(B)). Vacuous (zeros) when B = 0.
struct SymmetryReport {
    double w_residual  = 0.0;
    double v1_residual = 0.0;
    int rank_b = 0;
};

SymmetryReport check_symmetry_lemma(const SymplecticMatrix& s, const Config& cfg);

/// Deterministic sign fix: flip each column so its first entry of
/// significant magnitude is positive.
void fix_column_signs(Mat& m);

/// Deterministic orthonormal completion of a partial orthonormal column set
/// to a full orthogonal matrix; the complement comes from the SVD of the
/// projector onto the orthogonal complement.
Mat complete_orthogonal(const Mat& partial);

}  // namespace mqd
