#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "generators.hpp"
#include "tf_checks.hpp"

using namespace mqd;
using namespace mqd::testing;

namespace {

const double kPi = 3.14159265358979323846;

Config tf_config() {
    Config cfg;
    cfg.grid_n = 256;
    cfg.extent = 12.0;
    return cfg;
}

PhaseSpacePoint pt(double x, double xi) {
    return PhaseSpacePoint{Vec::Constant(1, x), Vec::Constant(1, xi)};
}

Generator chirp1(double p) {
    Mat m(1, 1);
    m << p;
    return Generator::chirp(m);
}

Generator dil1(double e) {
    Mat m(1, 1);
    m << e;
    return Generator::dilation(m);
}

}  // namespace

TEST_CASE("STFT of the Gaussian against closed forms") {
    const Config cfg = tf_config();
    const Grid g = Grid::make(1, cfg.grid_n, cfg.extent);
    const auto phi = sample_gaussian(g, Vec::Zero(1), cfg);

    // V_phi phi(0, 0) = int phi^2 = 2^{-1/2}
    CHECK(std::abs(stft(phi, phi, pt(0.0, 0.0)) - Complex(std::sqrt(0.5), 0.0)) <
          1e-5);

    // |V_phi phi(x, xi)| = 2^{-1/2} exp(-pi (x^2 + xi^2) / 2)
    for (double x : {0.0, 0.5, -1.0})
        for (double xi : {0.0, 0.75}) {
            const double expected =
                std::sqrt(0.5) * std::exp(-kPi * (x * x + xi * xi) / 2.0);
            CHECK(std::abs(std::abs(stft(phi, phi, pt(x, xi))) - expected) < 1e-5);
        }

    // translated window: the magnitude peaks at x = a
    const auto ta = sample_gaussian(g, Vec::Constant(1, 1.5), cfg);
    CHECK(std::abs(stft(ta, phi, pt(1.5, 0.0))) >
          4.0 * std::abs(stft(ta, phi, pt(0.0, 0.0))));

    // modulated Gaussian: the peak sits at its time-frequency center (0, b)
    SampledField mod = phi;
    const double b = 1.1;
    for (int i = 0; i < g.n; ++i)
        mod.values[static_cast<size_t>(i)] *=
            std::polar(1.0, 2.0 * kPi * b * g.coord(i));
    CHECK(std::abs(std::abs(stft(mod, phi, pt(0.0, b))) - std::sqrt(0.5)) < 1e-5);
    CHECK(std::abs(stft(mod, phi, pt(0.0, b))) >
          4.0 * std::abs(stft(mod, phi, pt(0.0, 0.0))));

    const Grid other = Grid::make(1, 128, 12.0);
    const auto small = sample_gaussian(other, Vec::Zero(1), cfg);
    CHECK_THROWS_AS(stft(phi, small, pt(0, 0)), Error);
}

TEST_CASE("2-d STFT at on-grid positions") {
    Config cfg;
    const Grid g = Grid::make(2, 128, 12.0);
    const auto phi = sample_gaussian(g, Vec::Zero(2), cfg);
    PhaseSpacePoint z{Vec::Zero(2), Vec::Zero(2)};
    CHECK(std::abs(stft(phi, phi, z) - Complex(0.5, 0.0)) < 1e-5);

    // one-cell window shift stays on the grid
    z.x = Vec::Constant(2, g.spacing());
    CHECK(std::abs(stft(phi, phi, z)) < 0.5);
    CHECK(std::abs(stft(phi, phi, z)) > 0.4);

    z.x = Vec::Constant(2, 0.33 * g.spacing());  // off-grid is rejected for d=2
    CHECK_THROWS_AS(stft(phi, phi, z), Error);
}

TEST_CASE("Wigner distribution of Gaussians") {
    const Config cfg = tf_config();
    const Grid g = Grid::make(1, cfg.grid_n, cfg.extent);
    const auto phi = sample_gaussian(g, Vec::Zero(1), cfg);
    const auto w = wigner(phi);

    double worst = 0.0;
    for (int i = 0; i < w.nx; i += 3)
        for (int k = 0; k < w.nxi; k += 3) {
            const double x = w.x(i), xi = w.xi(k);
            if (x * x + xi * xi > 4.0) continue;
            const double expected =
                std::sqrt(2.0) * std::exp(-2.0 * kPi * (x * x + xi * xi));
            worst = std::max(worst, std::abs(w.values(i, k) - expected));
        }
    CHECK(worst < 1e-4);

    // translation covariance: W(tau_a phi)(x, xi) = W(phi)(x - a, 0 + xi)
    const auto ta = sample_gaussian(g, Vec::Constant(1, 1.0), cfg);
    const auto wa = wigner(ta);
    double shift_dev = 0.0;
    for (int i = 0; i < wa.nx; i += 5)
        for (int k = 0; k < wa.nxi; k += 5) {
            const double x = wa.x(i), xi = wa.xi(k);
            if ((x - 1.0) * (x - 1.0) + xi * xi > 4.0) continue;
            const double expected =
                std::sqrt(2.0) *
                std::exp(-2.0 * kPi * ((x - 1.0) * (x - 1.0) + xi * xi));
            shift_dev = std::max(shift_dev, std::abs(wa.values(i, k) - expected));
        }
    CHECK(shift_dev < 1e-4);

    CHECK_THROWS_AS(wigner(sample_gaussian(Grid::make(2, 64, 12.0), Vec::Zero(2), cfg)),
                    Error);
}

TEST_CASE("Wigner marginal in frequency recovers |f|^2") {
    const Config cfg = tf_config();
    const Grid g = Grid::make(1, cfg.grid_n, cfg.extent);
    for (double center : {0.0, 0.8}) {
        const auto f = sample_gaussian(g, Vec::Constant(1, center), cfg);
        const auto w = wigner(f);
        double worst = 0.0;
        for (int i = 0; i < w.nx; i += 2) {
            double marginal = 0.0;
            for (int k = 0; k < w.nxi; ++k) marginal += w.values(i, k);
            marginal *= w.dxi;
            const double expected =
                std::norm(f.values[static_cast<size_t>(i)]);
            worst = std::max(worst, std::abs(marginal - expected));
        }
        CHECK(worst < 0.01);
    }
}

TEST_CASE("pointwise Wigner evaluation matches the field") {
    const Config cfg = tf_config();
    const Grid g = Grid::make(1, cfg.grid_n, cfg.extent);
    const auto phi = sample_gaussian(g, Vec::Constant(1, 0.3), cfg);
    const auto w = wigner(phi);
    for (int i : {100, 128, 150})
        for (int k : {120, 128, 140}) {
            CHECK(std::abs(wigner_at(phi, w.x(i), w.xi(k)) - w.values(i, k)) <
                  1e-10);
        }
    // off-grid evaluation stays close to the closed form
    const double val = wigner_at(phi, 0.3 + 0.013, 0.07);
    const double expected =
        std::sqrt(2.0) * std::exp(-2.0 * kPi * (0.013 * 0.013 + 0.07 * 0.07));
    CHECK(std::abs(val - expected) < 1e-4);
}

TEST_CASE("Gabor matrix normalization and the psi-profile identity") {
    Config cfg;  // default d=1 grid (1024, 16)
    const GeneratorWord empty(1, {});
    CHECK(std::abs(gabor_matrix(empty, pt(0.4, -0.7), pt(0.4, -0.7), cfg) -
                   Complex(1.0, 0.0)) < 1e-9);

    // |h(z, v)| = |psi(v - Sz)| with psi = V_phi(S^ phi), phi normalised
    const GeneratorWord jw(1, {Generator::fourier(1)});
    const Grid g = Grid::make(1, cfg.grid_n_for(1), cfg.extent_for(1));
    SampledField phin = sample_gaussian(g, Vec::Zero(1), cfg);
    const double inv_norm = 1.0 / phin.norm();
    for (auto& v : phin.values) v *= inv_norm;
    const SampledField sphi = apply_word(jw, phin, cfg);

    const Mat s = jw.product(1e-12).matrix();
    std::mt19937_64 rng(401);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        const Eigen::Vector2d z(u(rng), u(rng));
        const Eigen::Vector2d offset(0.5 * u(rng), 0.5 * u(rng));
        const Eigen::Vector2d v = s * z + offset;
        const double h =
            std::abs(gabor_matrix(jw, pt(z(0), z(1)), pt(v(0), v(1)), cfg));
        const double psi = std::abs(stft(sphi, phin, pt(offset(0), offset(1))));
        CHECK(std::abs(h - psi) < 1e-6);
    }
}

TEST_CASE("Wigner covariance residuals") {
    const Config cfg = tf_config();
    const Grid g = Grid::make(1, cfg.grid_n, cfg.extent);
    const auto phi = sample_gaussian(g, Vec::Zero(1), cfg);

    // empty word: both sides evaluate identically
    auto rep = check_wigner_covariance(GeneratorWord(1, {}), phi, cfg);
    CHECK(rep.max_abs_dev == 0.0);
    CHECK(rep.points > 50);

    rep = check_wigner_covariance(GeneratorWord(1, {Generator::fourier(1)}), phi, cfg);
    CHECK(rep.max_abs_dev < 1e-3);

    rep = check_wigner_covariance(GeneratorWord(1, {chirp1(1.0)}), phi, cfg);
    CHECK(rep.max_abs_dev < 1e-3);

    rep = check_wigner_covariance(GeneratorWord(1, {dil1(2.0)}), phi, cfg);
    CHECK(rep.max_abs_dev < 1e-3);

    CHECK_THROWS_AS(
        check_wigner_covariance(GeneratorWord(2, {Generator::fourier(2)}), phi, cfg),
        Error);
}

TEST_CASE("Gabor profile checks") {
    Config cfg;
    const auto offsets = default_gabor_offsets(1.2);

    // empty word: |h| = exp(-pi |u|^2 / 2) exactly
    auto rep = check_gabor_kernel_identity(GeneratorWord(1, {}), offsets, 3, cfg, 7);
    CHECK(rep.fit_max_rel_err < 0.01);
    CHECK(rep.spread_max < 1e-6);
    CHECK(std::abs(rep.c_fit - 1.0) < 0.01);
    CHECK((rep.q_fit - 0.5 * Mat::Identity(2, 2)).norm() < 0.01);

    // Fourier word: same profile, now through the pipeline
    rep = check_gabor_kernel_identity(GeneratorWord(1, {Generator::fourier(1)}),
                                      offsets, 4, cfg, 11);
    CHECK(rep.fit_max_rel_err < 0.05);
    CHECK(rep.spread_max < 0.02);
    CHECK((rep.q_fit - 0.5 * Mat::Identity(2, 2)).norm() < 0.05);

    // chirp-then-Fourier word
    rep = check_gabor_kernel_identity(
        GeneratorWord(1, {chirp1(1.5), Generator::fourier(1)}), offsets, 4, cfg, 13);
    CHECK(rep.fit_max_rel_err < 0.05);
    CHECK(rep.spread_max < 0.02);
}
