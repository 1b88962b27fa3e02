#pragma once

// Test-only quadrature oracle for complex Gaussian integrals in n <= 3
// dimensions: composite tensor Gauss-Legendre on a box chosen from the decay
// of Re(Q), with one自 doubling refinement until two resolutions agree.

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <vector>

#include "common.hpp"

namespace mqd::testing {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights by Newton iteration on P_n.
inline GaussRule gauss_legendre(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    return r;
}

/// Integrates fn over [-L, L]^n with `panels` subdivisions per axis.
inline Complex tensor_integral(const std::function<Complex(const Vec&)>& fn, int n,
                               double box, int panels, const GaussRule& rule) {
    const double h = 2.0 * box / panels;
    const int per_axis = panels * static_cast<int>(rule.nodes.size());
    std::vector<double> nodes(per_axis), weights(per_axis);
    for (int p = 0; p < panels; ++p) {
        const double lo = -box + p * h;
        for (size_t k = 0; k < rule.nodes.size(); ++k) {
            nodes[p * rule.nodes.size() + k] = lo + 0.5 * h * (rule.nodes[k] + 1.0);
            weights[p * rule.nodes.size() + k] = 0.5 * h * rule.weights[k];
        }
    }
    Complex acc(0, 0);
    Vec t(n);
    std::function<void(int, double)> rec = [&](int dim, double wacc) {
        if (dim == n) {
            acc += wacc * fn(t);
            return;
        }
        for (int i = 0; i < per_axis; ++i) {
            t(dim) = nodes[static_cast<size_t>(i)];
            rec(dim + 1, wacc * weights[static_cast<size_t>(i)]);
        }
    };
    rec(0, 1.0);
    return acc;
}

/// \int exp(-pi Q t.t) exp(-2 pi i xi.t) dt by quadrature; independent of
/// the closed-form path under test.
inline Complex gaussian_quadrature_oracle(const CMat& q, const CVec& xi,
                                          double rel_tol = 1e-9) {
    const int n = static_cast<int>(q.rows());
    const double pi = 3.14159265358979323846;

    Mat re = 0.5 * (q.real() + q.real().transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(re);
    const double lam_min = es.eigenvalues()(0);
    double im_xi = 0.0;
    for (int i = 0; i < n; ++i) im_xi = std::max(im_xi, std::abs(xi(i).imag()));
    const double box = std::sqrt(38.0 / (pi * lam_min)) + im_xi / lam_min;

    double re_xi = 0.0;
    for (int i = 0; i < n; ++i) re_xi = std::max(re_xi, std::abs(xi(i).real()));
    const double freq =
        q.imag().cwiseAbs().maxCoeff() * std::sqrt(double(n)) * box + re_xi;
    int panels = std::max(8, static_cast<int>(std::ceil(box * freq / 1.5)) + 6);

    const GaussRule rule = gauss_legendre(12);
    auto fn = [&](const Vec& t) {
        const CVec tc = t.cast<Complex>();
        const Complex quad = (tc.transpose() * (q * tc))(0, 0);
        const Complex lin = (xi.transpose() * tc)(0, 0);
        return std::exp(-pi * quad - Complex(0, 2.0 * pi) * lin);
    };

    Complex prev = tensor_integral(fn, n, box, panels, rule);
    for (int refine = 0; refine < 2; ++refine) {
        panels *= 2;
        const Complex cur = tensor_integral(fn, n, box, panels, rule);
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace mqd::testing
