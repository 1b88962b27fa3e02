#include "tf_checks.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <random>

namespace mqd {

namespace {

const double kPi = 3.14159265358979323846;

bool on_grid(double x, double h, long* index_out, int n) {
    const double pos = x / h + n / 2;
    const double r = std::round(pos);
    if (std::abs(pos - r) > 1e-9) return false;
    *index_out = static_cast<long>(r);
    return true;
}

/// Direct Wigner evaluation helper for one field; owns the interpolant used
/// for off-grid positions.
class WignerEvaluator {
public:
    explicit WignerEvaluator(const SampledField& f)
        : f_(f), interp_(f.values, f.grid.extent) {}

    double at(double x, double xi) const {
        const Grid& g = f_.grid;
        const int n = g.n;
        const double h = g.spacing();
        Complex acc(0, 0);
        long i0 = 0;
        if (on_grid(x, h, &i0, n)) {
            for (int m = 0; m < n; ++m) {
                const long kp = i0 + m - n / 2;
                const long km = i0 - m + n / 2;
                if (kp < 0 || kp >= n || km < 0 || km >= n) continue;
                const Complex prod =
                    f_.values[static_cast<size_t>(kp)] *
                    std::conj(f_.values[static_cast<size_t>(km)]);
                acc += prod * std::polar(1.0, -4.0 * kPi * g.coord(m) * xi);
            }
        } else {
            const double half = g.extent / 2.0;
            for (int m = 0; m < n; ++m) {
                const double tau = g.coord(m);
                const double up = x + tau;
                const double um = x - tau;
                if (up < -half || up >= half || um < -half || um >= half) continue;
                const Complex prod = interp_(up) * std::conj(interp_(um));
                acc += prod * std::polar(1.0, -4.0 * kPi * tau * xi);
            }
        }
        return 2.0 * h * acc.real();
    }

private:
    const SampledField& f_;
    TrigInterp1D interp_;
};

SampledField modulated_window(const Grid& grid, const PhaseSpacePoint& z,
                              const Config& cfg) {
    SampledField w = sample_gaussian(grid, z.x, cfg);
    const double inv_norm = 1.0 / w.norm();
    const int n = grid.n;
    if (grid.d == 1) {
        for (int i = 0; i < n; ++i)
            w.values[static_cast<size_t>(i)] *=
                inv_norm * std::polar(1.0, 2.0 * kPi * grid.coord(i) * z.xi(0));
    } else {
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1)
                w.at(i0, i1) *= inv_norm *
                                std::polar(1.0, 2.0 * kPi * (grid.coord(i0) * z.xi(0) +
                                                             grid.coord(i1) * z.xi(1)));
    }
    return w;
}

Complex grid_inner(const SampledField& a, const SampledField& b) {
    Complex acc(0, 0);
    for (size_t k = 0; k < a.values.size(); ++k)
        acc += a.values[k] * std::conj(b.values[k]);
    return acc * std::pow(a.grid.spacing(), a.grid.d);
}

}  // namespace

Complex stft(const SampledField& f, const SampledField& g, const PhaseSpacePoint& z) {
    if (!(f.grid == g.grid)) fail(MQD_ERR_GRID_MISMATCH, "field grids differ");
    const Grid& grid = f.grid;
    const int n = grid.n;
    const double h = grid.spacing();

    if (grid.d == 1) {
        Complex acc(0, 0);
        long shift = 0;
        if (on_grid(z.x(0), h, &shift, n)) {
            const long s = shift - n / 2;
            for (int j = 0; j < n; ++j) {
                const long k = j - s;
                if (k < 0 || k >= n) continue;
                acc += f.values[static_cast<size_t>(j)] *
                       std::conj(g.values[static_cast<size_t>(k)]) *
                       std::polar(1.0, -2.0 * kPi * grid.coord(j) * z.xi(0));
            }
        } else {
            TrigInterp1D interp(g.values, grid.extent);
            const double half = grid.extent / 2.0;
            for (int j = 0; j < n; ++j) {
                const double u = grid.coord(j) - z.x(0);
                if (u < -half || u >= half) continue;
                acc += f.values[static_cast<size_t>(j)] * std::conj(interp(u)) *
                       std::polar(1.0, -2.0 * kPi * grid.coord(j) * z.xi(0));
            }
        }
        return acc * h;
    }

    long s0 = 0, s1 = 0;
    if (!on_grid(z.x(0), h, &s0, n) || !on_grid(z.x(1), h, &s1, n))
        fail(MQD_ERR_BAD_ARGUMENT, "2-d STFT requires on-grid window positions");
    Complex acc(0, 0);
    const long o0 = s0 - n / 2, o1 = s1 - n / 2;
    for (int j0 = 0; j0 < n; ++j0) {
        const long k0 = j0 - o0;
        if (k0 < 0 || k0 >= n) continue;
        for (int j1 = 0; j1 < n; ++j1) {
            const long k1 = j1 - o1;
            if (k1 < 0 || k1 >= n) continue;
            acc += f.at(j0, j1) *
                   std::conj(g.at(static_cast<int>(k0), static_cast<int>(k1))) *
                   std::polar(1.0, -2.0 * kPi * (grid.coord(j0) * z.xi(0) +
                                                 grid.coord(j1) * z.xi(1)));
        }
    }
    return acc * h * h;
}

WignerField wigner(const SampledField& f) {
    if (f.grid.d != 1)
        fail(MQD_ERR_WRONG_DIMENSION, "Wigner output is 2-dimensional; d must be 1");
    const Grid& g = f.grid;
    const int n = g.n;
    const double h = g.spacing();

    WignerField out;
    out.nx = n;
    out.nxi = n;
    out.x0 = -g.extent / 2.0;
    out.dx = h;
    out.dxi = 1.0 / (2.0 * g.extent);
    out.xi0 = -(n / 2) * out.dxi;
    out.values.resize(n, n);

    std::vector<Complex> corr(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int m = 0; m < n; ++m) {
            const long kp = i + m - n / 2;
            const long km = i - m + n / 2;
            corr[static_cast<size_t>(m)] =
                (kp >= 0 && kp < n && km >= 0 && km < n)
                    ? f.values[static_cast<size_t>(kp)] *
                          std::conj(f.values[static_cast<size_t>(km)])
                    : Complex(0, 0);
        }
        auto row = fractional_centered_dft(corr, 1.0, -1);
        for (int k = 0; k < n; ++k)
            out.values(i, k) = 2.0 * h * row[static_cast<size_t>(k)].real();
    }
    return out;
}

double wigner_at(const SampledField& f, double x, double xi) {
    if (f.grid.d != 1) fail(MQD_ERR_WRONG_DIMENSION, "d must be 1");
    return WignerEvaluator(f).at(x, xi);
}

Complex gabor_matrix(const GeneratorWord& w, const PhaseSpacePoint& z,
                     const PhaseSpacePoint& v, const Config& cfg) {
    const Grid grid = Grid::make(w.d, cfg.grid_n_for(w.d), cfg.extent_for(w.d));
    SampledField in = modulated_window(grid, z, cfg);
    SampledField transformed = apply_word(w, in, cfg);
    SampledField probe = modulated_window(grid, v, cfg);
    return grid_inner(transformed, probe);
}

CovarianceReport check_wigner_covariance(const GeneratorWord& w,
                                         const SampledField& f, const Config& cfg) {
    if (w.d != 1 || f.grid.d != 1)
        fail(MQD_ERR_WRONG_DIMENSION, "covariance check is implemented for d = 1");

    const SampledField sf = apply_word(w, f, cfg);
    const Mat sinv = w.product(cfg.symplectic_tol).inverse().matrix();

    const WignerField w1 = wigner(sf);
    const WignerField wf = wigner(f);
    const double max_wf = wf.values.cwiseAbs().maxCoeff();
    const double max_w1 = w1.values.cwiseAbs().maxCoeff();

    // Candidate points: significant entries of W(S^ f), strided down to a
    // bounded budget.
    long candidates = 0;
    for (int i = 0; i < w1.nx; ++i)
        for (int k = 0; k < w1.nxi; ++k)
            if (std::abs(w1.values(i, k)) > 1e-6 * max_w1) ++candidates;
    const int stride = std::max(
        1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(candidates) / 400.0))));

    WignerEvaluator eval_sf(sf);
    WignerEvaluator eval_f(f);

    CovarianceReport rep;
    rep.grid_n = f.grid.n;
    rep.extent = f.grid.extent;
    for (int i = 0; i < w1.nx; i += stride) {
        for (int k = 0; k < w1.nxi; k += stride) {
            if (std::abs(w1.values(i, k)) <= 1e-6 * max_w1) continue;
            const Eigen::Vector2d zpt(w1.x(i), w1.xi(k));
            const Eigen::Vector2d back = sinv * zpt;
            const double ref = eval_f.at(back(0), back(1));
            if (std::abs(ref) <= 1e-6 * max_wf) continue;
            const double got = eval_sf.at(zpt(0), zpt(1));
            rep.max_abs_dev = std::max(rep.max_abs_dev, std::abs(got - ref));
            ++rep.points;
        }
    }
    return rep;
}

std::vector<Vec> default_gabor_offsets(double radius) {
    std::vector<Vec> out;
    Vec zero = Vec::Zero(2);
    out.push_back(zero);
    const double radii[3] = {radius / 3.0, 2.0 * radius / 3.0, radius};
    for (double r : radii)
        for (int a = 0; a < 8; ++a) {
            Vec u(2);
            u(0) = r * std::cos(kPi * a / 4.0);
            u(1) = r * std::sin(kPi * a / 4.0);
            out.push_back(u);
        }
    return out;
}

GaborIdentityReport check_gabor_kernel_identity(const GeneratorWord& w,
                                                const std::vector<Vec>& offsets,
                                                int pairs_per_offset,
                                                const Config& cfg, uint64_t seed) {
    if (w.d != 1)
        fail(MQD_ERR_WRONG_DIMENSION, "Gabor profile check is implemented for d = 1");
    if (offsets.empty() || pairs_per_offset < 1)
        fail(MQD_ERR_BAD_ARGUMENT, "empty sample set");

    const Mat s = w.product(cfg.symplectic_tol).matrix();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(-1.2, 1.2);

    std::vector<Vec> us;
    std::vector<double> mags;
    GaborIdentityReport rep;
    for (const auto& u : offsets) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0, sum = 0.0;
        for (int p = 0; p < pairs_per_offset; ++p) {
            Eigen::Vector2d zv(box(rng), box(rng));
            const Eigen::Vector2d vv = s * zv + Eigen::Vector2d(u(0), u(1));
            PhaseSpacePoint z{Vec::Constant(1, zv(0)), Vec::Constant(1, zv(1))};
            PhaseSpacePoint v{Vec::Constant(1, vv(0)), Vec::Constant(1, vv(1))};
            const double mag = std::abs(gabor_matrix(w, z, v, cfg));
            lo = std::min(lo, mag);
            hi = std::max(hi, mag);
            sum += mag;
        }
        const double mean = sum / pairs_per_offset;
        if (mean > 0.0 && pairs_per_offset > 1)
            rep.spread_max = std::max(rep.spread_max, (hi - lo) / mean);
        us.push_back(u);
        mags.push_back(mean);
    }

    // Log-quadratic fit: log|h| = log c - pi (q11 u1^2 + 2 q12 u1 u2 + q22 u2^2).
    // A fit needs at least 5 offsets; smaller sets are spread-only runs.
    rep.q_fit = Mat::Zero(2, 2);
    if (offsets.size() < 5) return rep;
    double mmax = 0.0;
    for (double m : mags) mmax = std::max(mmax, m);
    std::vector<int> keep;
    for (size_t i = 0; i < mags.size(); ++i)
        if (mags[i] > 1e-6 * mmax) keep.push_back(static_cast<int>(i));
    if (keep.size() < 5)
        fail(MQD_ERR_INSUFFICIENT_SAMPLES, "too few usable profile points");

    Mat a(keep.size(), 4);
    Vec b(keep.size());
    for (size_t r = 0; r < keep.size(); ++r) {
        const Vec& u = us[static_cast<size_t>(keep[r])];
        a(r, 0) = 1.0;
        a(r, 1) = -kPi * u(0) * u(0);
        a(r, 2) = -2.0 * kPi * u(0) * u(1);
        a(r, 3) = -kPi * u(1) * u(1);
        b(r) = std::log(mags[static_cast<size_t>(keep[r])]);
    }
    const Vec coef = a.colPivHouseholderQr().solve(b);
    rep.c_fit = std::exp(coef(0));
    rep.q_fit.resize(2, 2);
    rep.q_fit << coef(1), coef(2), coef(2), coef(3);
    rep.points = static_cast<int>(keep.size());
    for (size_t r = 0; r < keep.size(); ++r) {
        const double pred = a.row(r).dot(coef);
        rep.fit_max_rel_err =
            std::max(rep.fit_max_rel_err, std::abs(std::expm1(b(r) - pred)));
    }
    return rep;
}

}  // namespace mqd
