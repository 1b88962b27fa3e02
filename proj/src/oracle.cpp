#include "oracle.hpp"

#include <cmath>
#include <sstream>

namespace mqd {

namespace {
const double kPi = 3.14159265358979323846;
const double kSupportFloor = 1e-12;  // relative cutoff defining the support
const double kBandFloor = 1e-9;      // relative cutoff in the spectrum
}  // namespace

Grid Grid::make(int d, int n, double extent) {
    if (d < 1 || d > 2) fail(MQD_ERR_BAD_GRID, "grid dimension must be 1 or 2");
    if (n < 64 || !is_power_of_two(n))
        fail(MQD_ERR_BAD_GRID, "grid size must be a power of two >= 64");
    if (!(extent > 0.0)) fail(MQD_ERR_BAD_GRID, "grid extent must be positive");
    return Grid{d, n, extent};
}

long Grid::size() const {
    long s = 1;
    for (int i = 0; i < d; ++i) s *= n;
    return s;
}

double SampledField::norm() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return std::sqrt(s * std::pow(grid.spacing(), grid.d));
}

Complex& SampledField::at(int i0, int i1) {
    return values[static_cast<size_t>(i0) * (grid.d == 2 ? grid.n : 1) + i1];
}

Complex SampledField::at(int i0, int i1) const {
    return values[static_cast<size_t>(i0) * (grid.d == 2 ? grid.n : 1) + i1];
}

SampledField sample_gaussian(const Grid& grid, const Vec& center, const Config& cfg) {
    if (center.size() != grid.d)
        fail(MQD_ERR_BAD_ARGUMENT, "center has wrong dimension");
    for (int i = 0; i < grid.d; ++i)
        if (std::abs(center(i)) > grid.extent / 2.0 - cfg.margin)
            fail(MQD_ERR_CENTER_OUT_OF_RANGE,
                 "window center leaves insufficient boundary margin");

    SampledField f{grid, std::vector<Complex>(static_cast<size_t>(grid.size()))};
    if (grid.d == 1) {
        for (int i = 0; i < grid.n; ++i) {
            const double t = grid.coord(i) - center(0);
            f.values[static_cast<size_t>(i)] = std::exp(-kPi * t * t);
        }
    } else {
        for (int i0 = 0; i0 < grid.n; ++i0) {
            const double t0 = grid.coord(i0) - center(0);
            for (int i1 = 0; i1 < grid.n; ++i1) {
                const double t1 = grid.coord(i1) - center(1);
                f.at(i0, i1) = std::exp(-kPi * (t0 * t0 + t1 * t1));
            }
        }
    }
    return f;
}

namespace {

/// Apply a length-n centered fractional DFT along each axis, scaling each
/// pass by `weight`.
void transform_axes(SampledField& f, double alpha, int sign, double weight) {
    const int n = f.grid.n;
    if (f.grid.d == 1) {
        f.values = fractional_centered_dft(f.values, alpha, sign);
        for (auto& v : f.values) v *= weight;
        return;
    }
    std::vector<Complex> line(static_cast<size_t>(n));
    // axis 1 (contiguous rows)
    for (int i0 = 0; i0 < n; ++i0) {
        for (int i1 = 0; i1 < n; ++i1) line[static_cast<size_t>(i1)] = f.at(i0, i1);
        auto out = fractional_centered_dft(line, alpha, sign);
        for (int i1 = 0; i1 < n; ++i1) f.at(i0, i1) = out[static_cast<size_t>(i1)] * weight;
    }
    // axis 0
    for (int i1 = 0; i1 < n; ++i1) {
        for (int i0 = 0; i0 < n; ++i0) line[static_cast<size_t>(i0)] = f.at(i0, i1);
        auto out = fractional_centered_dft(line, alpha, sign);
        for (int i0 = 0; i0 < n; ++i0) f.at(i0, i1) = out[static_cast<size_t>(i0)] * weight;
    }
}

double max_abs(const std::vector<Complex>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Max |P t|_inf over grid points where |f| exceeds the support floor.
double chirp_peak_frequency(const Mat& p, const SampledField& f) {
    const double floor = kSupportFloor * max_abs(f.values);
    double peak = 0.0;
    const int n = f.grid.n;
    if (f.grid.d == 1) {
        for (int i = 0; i < n; ++i) {
            if (std::abs(f.values[static_cast<size_t>(i)]) <= floor) continue;
            peak = std::max(peak, std::abs(p(0, 0) * f.grid.coord(i)));
        }
    } else {
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1) {
                if (std::abs(f.at(i0, i1)) <= floor) continue;
                Eigen::Vector2d t(f.grid.coord(i0), f.grid.coord(i1));
                peak = std::max(peak, (p * t).cwiseAbs().maxCoeff());
            }
    }
    return peak;
}

void check_alias(double new_freq, double band, const SampledField& f,
                 const char* what) {
    const double nyq = f.grid.nyquist();
    if (new_freq + band > nyq) {
        std::ostringstream os;
        os << what << " would exceed the Nyquist bound: peak frequency " << new_freq
           << " + field band " << band << " > " << nyq
           << " (grid n=" << f.grid.n << ", L=" << f.grid.extent << ")";
        fail(MQD_ERR_ALIAS_RISK, os.str());
    }
}

SampledField apply_fourier(const SampledField& f) {
    SampledField out = f;
    const double alpha = f.grid.extent * f.grid.extent / f.grid.n;
    transform_axes(out, alpha, -1, f.grid.spacing());
    return out;
}

SampledField apply_chirp(const Mat& p, const SampledField& f) {
    SampledField out = f;
    const int n = f.grid.n;
    if (f.grid.d == 1) {
        for (int i = 0; i < n; ++i) {
            const double t = f.grid.coord(i);
            out.values[static_cast<size_t>(i)] *=
                std::polar(1.0, kPi * p(0, 0) * t * t);
        }
    } else {
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1) {
                Eigen::Vector2d t(f.grid.coord(i0), f.grid.coord(i1));
                out.at(i0, i1) *= std::polar(1.0, kPi * t.dot(p * t));
            }
    }
    return out;
}

bool maps_grid_to_grid(const Mat& e) {
    // E t_j must land on a grid coordinate (or outside) for every j; with
    // t_j = (j - n/2) h this holds exactly when E has integer entries.
    for (int i = 0; i < e.rows(); ++i)
        for (int j = 0; j < e.cols(); ++j)
            if (std::abs(e(i, j) - std::round(e(i, j))) > 1e-12) return false;
    return true;
}

SampledField apply_dilation(const Mat& e, const SampledField& f) {
    const Grid& g = f.grid;
    const int n = g.n;
    const double h = g.spacing();
    const double half = g.extent / 2.0;
    const double amp = std::sqrt(std::abs(e.determinant()));
    SampledField out{g, std::vector<Complex>(static_cast<size_t>(g.size()))};

    auto inside = [&](double u) { return u >= -half && u < half; };

    if (maps_grid_to_grid(e)) {
        if (g.d == 1) {
            for (int j = 0; j < n; ++j) {
                const double u = e(0, 0) * g.coord(j);
                const long k = std::lround(u / h) + n / 2;
                out.values[static_cast<size_t>(j)] =
                    (k >= 0 && k < n) ? amp * f.values[static_cast<size_t>(k)]
                                      : Complex(0, 0);
            }
        } else {
            for (int j0 = 0; j0 < n; ++j0)
                for (int j1 = 0; j1 < n; ++j1) {
                    Eigen::Vector2d u =
                        e * Eigen::Vector2d(g.coord(j0), g.coord(j1));
                    const long k0 = std::lround(u(0) / h) + n / 2;
                    const long k1 = std::lround(u(1) / h) + n / 2;
                    out.at(j0, j1) = (k0 >= 0 && k0 < n && k1 >= 0 && k1 < n)
                                         ? amp * f.at(static_cast<int>(k0),
                                                      static_cast<int>(k1))
                                         : Complex(0, 0);
                }
        }
        return out;
    }

    if (g.d == 1) {
        TrigInterp1D interp(f.values, g.extent);
        for (int j = 0; j < n; ++j) {
            const double u = e(0, 0) * g.coord(j);
            out.values[static_cast<size_t>(j)] =
                inside(u) ? amp * interp(u) : Complex(0, 0);
        }
        return out;
    }

    // d = 2 off-grid resampling is supported for diagonal E (separable
    // interpolation); a general off-grid E would cost O(n^2) per point.
    if (std::abs(e(0, 1)) > 1e-12 || std::abs(e(1, 0)) > 1e-12)
        fail(MQD_ERR_BAD_ARGUMENT,
             "off-grid dilation on 2-d grids requires diagonal E");
    std::vector<Complex> line(static_cast<size_t>(n));
    SampledField mid = f;
    for (int i0 = 0; i0 < n; ++i0) {
        for (int i1 = 0; i1 < n; ++i1) line[static_cast<size_t>(i1)] = f.at(i0, i1);
        TrigInterp1D interp(line, g.extent);
        for (int j1 = 0; j1 < n; ++j1) {
            const double u = e(1, 1) * g.coord(j1);
            mid.at(i0, j1) = inside(u) ? interp(u) : Complex(0, 0);
        }
    }
    for (int j1 = 0; j1 < n; ++j1) {
        for (int i0 = 0; i0 < n; ++i0) line[static_cast<size_t>(i0)] = mid.at(i0, j1);
        TrigInterp1D interp(line, g.extent);
        for (int j0 = 0; j0 < n; ++j0) {
            const double u = e(0, 0) * g.coord(j0);
            out.at(j0, j1) = inside(u) ? amp * interp(u) : Complex(0, 0);
        }
    }
    return out;
}

}  // namespace

double field_band(const SampledField& f) {
    SampledField spec = f;
    transform_axes(spec, 1.0, -1, 1.0);
    const double floor = kBandFloor * max_abs(spec.values);
    const int n = f.grid.n;
    const double dnu = 1.0 / f.grid.extent;
    double band = 0.0;
    if (f.grid.d == 1) {
        for (int k = 0; k < n; ++k)
            if (std::abs(spec.values[static_cast<size_t>(k)]) > floor)
                band = std::max(band, std::abs((k - n / 2) * dnu));
    } else {
        for (int k0 = 0; k0 < n; ++k0)
            for (int k1 = 0; k1 < n; ++k1)
                if (std::abs(spec.at(k0, k1)) > floor)
                    band = std::max(band, std::max(std::abs((k0 - n / 2) * dnu),
                                                   std::abs((k1 - n / 2) * dnu)));
    }
    return band;
}

SampledField apply_generator(const Generator& g, const SampledField& f,
                             const Config& cfg) {
    if (g.d != f.grid.d)
        fail(MQD_ERR_WRONG_DIMENSION, "generator and field dimensions differ");

    const double norm_in = f.norm();
    SampledField out{f.grid, {}};
    switch (g.kind) {
        case Generator::Kind::Fourier:
            out = apply_fourier(f);
            break;
        case Generator::Kind::Chirp:
            check_alias(chirp_peak_frequency(g.param, f), field_band(f), f, "chirp");
            out = apply_chirp(g.param, f);
            break;
        case Generator::Kind::Dilation: {
            Eigen::JacobiSVD<Mat> svd(g.param);
            const double smax = svd.singularValues()(0);
            if (smax > 1.0 + 1e-12) {
                const double band = field_band(f);
                check_alias(band * (smax - 1.0), band, f, "dilation");
            }
            out = apply_dilation(g.param, f);
            break;
        }
    }

    const double norm_out = out.norm();
    if (norm_in > 0.0 &&
        std::abs(norm_out - norm_in) > cfg.unitarity_tol * norm_in) {
        std::ostringstream os;
        os << "pipeline step lost L2 mass beyond the grid extent: |out|/|in| = "
           << norm_out / norm_in;
        fail(MQD_ERR_EXTENT_OVERFLOW, os.str());
    }
    return out;
}

SampledField apply_word(const GeneratorWord& w, const SampledField& f,
                        const Config& cfg) {
    SampledField cur = f;
    // Left factor acts last: S = G1 G2 ... Gk means S^ = G1^ ... Gk^.
    for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it)
        cur = apply_generator(*it, cur, cfg);
    return cur;
}

namespace {

double boundary_tail_mass(const SampledField& f) {
    const double m = max_abs(f.values);
    if (m == 0.0) return 0.0;
    const int n = f.grid.n;
    double tail = 0.0;
    if (f.grid.d == 1) {
        tail = std::max(std::abs(f.values.front()), std::abs(f.values.back()));
    } else {
        for (int i = 0; i < n; ++i) {
            tail = std::max(tail, std::abs(f.at(0, i)));
            tail = std::max(tail, std::abs(f.at(n - 1, i)));
            tail = std::max(tail, std::abs(f.at(i, 0)));
            tail = std::max(tail, std::abs(f.at(i, n - 1)));
        }
    }
    return tail / m;
}

}  // namespace

KernelSamples sample_smoothed_kernel(const GeneratorWord& w,
                                     const std::vector<Vec>& xs,
                                     const std::vector<Vec>& ys, const Config& cfg) {
    const int d = w.d;
    const Grid grid = Grid::make(d, cfg.grid_n_for(d), cfg.extent_for(d));
    const double weight = std::pow(grid.spacing(), d);

    KernelSamples out;
    out.values.resize(static_cast<Eigen::Index>(xs.size()),
                      static_cast<Eigen::Index>(ys.size()));

    // Pre-sample the analysis windows centered at each x.
    std::vector<SampledField> windows;
    windows.reserve(xs.size());
    for (const auto& x : xs) windows.push_back(sample_gaussian(grid, x, cfg));

    for (size_t j = 0; j < ys.size(); ++j) {
        SampledField phi_y = sample_gaussian(grid, ys[j], cfg);
        SampledField sy = apply_word(w, phi_y, cfg);
        out.tail_mass = std::max(out.tail_mass, boundary_tail_mass(sy));
        for (size_t i = 0; i < xs.size(); ++i) {
            Complex acc(0, 0);
            const auto& wv = windows[i].values;
            for (size_t k = 0; k < wv.size(); ++k)
                acc += sy.values[k] * std::conj(wv[k]);
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                acc * weight;
        }
    }
    out.quadrature_warning = out.tail_mass > 1e-9;
    return out;
}

FitReport fit_against_analytic(const KernelSamples& samples,
                               const std::vector<Vec>& xs,
                               const std::vector<Vec>& ys, const Mat& qs,
                               const Config& cfg) {
    (void)cfg;
    const double vmax = samples.values.cwiseAbs().maxCoeff();
    if (!(vmax > 0.0)) fail(MQD_ERR_INSUFFICIENT_SAMPLES, "all samples vanish");

    const int d = static_cast<int>(xs.empty() ? 0 : xs.front().size());
    std::vector<double> logs;   // log|s| + pi Q(z).z
    std::vector<double> qvals;  // pi Q(z).z
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < ys.size(); ++j) {
            const double a = std::abs(samples.values(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(j)));
            if (a <= 1e-6 * vmax) continue;
            Vec z(2 * d);
            z.head(d) = xs[i];
            z.tail(d) = ys[j];
            const double q = kPi * z.dot(qs * z);
            logs.push_back(std::log(a) + q);
            qvals.push_back(q);
        }
    if (logs.size() < 10)
        fail(MQD_ERR_INSUFFICIENT_SAMPLES,
             "fewer than 10 sample points above the magnitude floor");

    double mean = 0.0;
    for (double v : logs) mean += v;
    mean /= static_cast<double>(logs.size());

    FitReport rep;
    rep.c_fit = std::exp(mean);
    rep.points_used = static_cast<int>(logs.size());
    for (size_t k = 0; k < logs.size(); ++k) {
        // relative deviation of |s| from c exp(-pi Q)
        const double rel = std::abs(std::expm1(logs[k] - mean));
        rep.max_rel_err = std::max(rep.max_rel_err, rel);
    }
    return rep;
}

void default_fit_points(int d, std::vector<Vec>& xs, std::vector<Vec>& ys) {
    xs.clear();
    ys.clear();
    if (d == 1) {
        for (double v = -1.5; v <= 1.5 + 1e-9; v += 0.5) {
            Vec p(1);
            p(0) = v;
            xs.push_back(p);
            ys.push_back(p);
        }
    } else {
        for (double a = -1.0; a <= 1.0 + 1e-9; a += 1.0)
            for (double b = -1.0; b <= 1.0 + 1e-9; b += 1.0) {
                Vec p(2);
                p(0) = a;
                p(1) = b;
                xs.push_back(p);
                ys.push_back(p);
            }
    }
}

}  // namespace mqd
