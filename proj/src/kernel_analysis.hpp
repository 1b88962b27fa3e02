#pragma once

#include <optional>
#include <variant>

#include "symplectic.hpp"

namespace mqd {

enum class KernelCase { FreeB, BZero, General };

/// Kernel data for invertible B:
/// k(x,y) = |det B|^{-1/2} exp(i pi D B^{-1} x.x) exp(i pi B^{-1}A y.y)
///          exp(-2 pi i B^{-1} x . y), up to a phase factor.
struct FreeKernel {
    Mat b_inv, db_inv, b_inv_a;  // D B^{-1} and B^{-1} A are symmetric
    double amplitude = 0.0;      // |det B|^{-1/2}
};

/// Kernel data for B = 0 (D is then invertible):
/// k(x,y) = |det D|^{1/2} exp(i pi C D^T x.x) delta_{y = D^T x}.
struct DeltaKernel {
    Mat d_t, cd_t;           // C D^T is symmetric
    double amplitude = 0.0;  // |det D|^{1/2}
};

/// Kernel data for 0 < rank(B) < d: oscillatory-integral form built from
/// pseudo-inverses and the subspace bases; the amplitude constant is not
/// available in closed form.
struct GeneralKernel {
    Mat b_plus, b_plus_a, db_plus, dc_t, c_t;
    SubspaceBases bases;
};

using KernelForm = std::variant<FreeKernel, DeltaKernel, GeneralKernel>;

KernelForm kernel_form(const SymplecticMatrix& s, const Config& cfg);

/// |k~(x,y)| = c * exp(-pi Q_S (x,y).(x,y)) with Q_S PSD on R^{2d}; the null
/// space of Q_S is the localization manifold.
struct SmoothedKernelForm {
    Mat qs;               // 2d x 2d symmetric PSD
    double amplitude = 0.0;
    bool amplitude_known = false;  // false = constant must be fitted
    Mat kernel_basis;     // 2d x k orthonormal basis of null(qs)
    KernelCase provenance = KernelCase::FreeB;
    double min_eigenvalue = 0.0;  // smallest eigenvalue of qs (diagnostic)
};

/// Orthogonal re-mixing of the internal parametrizations V1, V2, W; the
/// result must not depend on it (identity when absent).
struct BasisRemix {
    Mat o1;  // r x r
    Mat o2;  // (d-r) x (d-r)
    Mat ow;  // r x r
};

SmoothedKernelForm smoothed_form_freeB(const SymplecticMatrix& s, const Config& cfg);
SmoothedKernelForm smoothed_form_bzero(const SymplecticMatrix& s, const Config& cfg);
SmoothedKernelForm smoothed_form_general(const SymplecticMatrix& s, const Config& cfg,
                                         const BasisRemix* remix = nullptr);

/// Dispatch on rank(B).
SmoothedKernelForm smoothed_form(const SymplecticMatrix& s, const Config& cfg);

/// The graph of D^T over R(C)^perp: generators (x, D^T x) for basis columns
/// x of R(C)^perp. Depends on the blocks C and D only.
struct LocalizationManifold {
    Mat basis;  // d x r orthonormal basis of R(C)^perp
    Mat image;  // d x r, D^T applied to the basis columns
    int dim = 0;

    /// Orthonormal basis of the manifold subspace of R^{2d}.
    Mat graph_basis() const;
};

LocalizationManifold localization_manifold(const SymplecticMatrix& s, const Config& cfg);

enum class VerdictReason { CInvertible, DRestrictedIdentity, D1Rule, GammaInDelta };

const char* verdict_reason_name(VerdictReason r);

struct Verdict {
    bool quasi_diagonal = false;
    VerdictReason reason = VerdictReason::GammaInDelta;
    /// Largest constant with Q_S(x,y) >= epsilon |x-y|^2; 0 when the kernel
    /// is not quasi-diagonal.
    double epsilon = 0.0;
    /// A generator (x, D^T x) of the manifold violating D^T x = x, when the
    /// kernel is not quasi-diagonal.
    std::optional<std::pair<Vec, Vec>> witness;
};

Verdict verdict(const SymplecticMatrix& s, const Config& cfg);

enum class D2Scenario { CInvertible, CZero, Rank1Transversal, Rank1Dilation };

const char* d2_scenario_name(D2Scenario s);

struct D2Classification {
    D2Scenario scenario;
    bool quasi_diagonal;
};

/// Geometric classification of the d = 2 case by the rank of C and the
/// relative position of ker(C) and ker(C^T).
D2Classification classify_d2(const SymplecticMatrix& s, const Config& cfg);

/// One-shot analysis used by the reporting layer.
struct AnalysisReport {
    int d = 0;
    Verdict v;
    LocalizationManifold gamma;
    SmoothedKernelForm form;
    std::optional<D2Classification> d2;
    double symplectic_residual = 0.0;
    double null_gamma_residual = 0.0;  // mutual containment of null(Q_S) and Gamma
    bool gamma_strictly_inside_diagonal = false;
};

AnalysisReport analyze(const SymplecticMatrix& s, const Config& cfg);

/// Mutual-containment residual between the column spans of two orthonormal
/// basis matrices (0 when they span the same subspace).
double subspace_distance(const Mat& u, const Mat& v);

}  // namespace mqd
