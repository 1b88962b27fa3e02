#include "fft.hpp"

#include <cmath>

namespace mqd {

namespace {
const double kPi = 3.14159265358979323846;
}

void fft_inplace(std::vector<Complex>& a, int sign) {
    const size_t n = a.size();
    if (!is_power_of_two(static_cast<long>(n)))
        fail(MQD_ERR_BAD_ARGUMENT, "FFT size must be a power of two");
    // bit reversal
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * kPi / static_cast<double>(len);
        for (size_t i = 0; i < n; i += len) {
            for (size_t k = 0; k < len / 2; ++k) {
                const Complex w = std::polar(1.0, ang * static_cast<double>(k));
                const Complex u = a[i + k];
                const Complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

std::vector<Complex> fractional_centered_dft(const std::vector<Complex>& in,
                                             double alpha, int sign) {
    const long n = static_cast<long>(in.size());
    if (!is_power_of_two(n))
        fail(MQD_ERR_BAD_ARGUMENT, "transform size must be a power of two");
    const double a = sign * alpha / static_cast<double>(n);
    const double pi_a = kPi * a;

    // Bluestein: exp(2 pi i a (m - n/2)(j - n/2))
    //   = exp(pi i a (m^2 - n m)) exp(pi i a (j^2 - n j)) exp(pi i a n^2/2)
    //     exp(-pi i a (m - j)^2)
    const size_t conv_n = static_cast<size_t>(2 * n);
    std::vector<Complex> u(conv_n, Complex(0, 0));
    std::vector<Complex> v(conv_n, Complex(0, 0));
    for (long m = 0; m < n; ++m) {
        const double ph = pi_a * static_cast<double>(m * m - n * m);
        u[static_cast<size_t>(m)] = in[static_cast<size_t>(m)] * std::polar(1.0, ph);
    }
    for (long k = 0; k < n; ++k) {
        const Complex c = std::polar(1.0, -pi_a * static_cast<double>(k * k));
        v[static_cast<size_t>(k)] = c;
        if (k > 0) v[conv_n - static_cast<size_t>(k)] = c;
    }
    fft_inplace(u, -1);
    fft_inplace(v, -1);
    for (size_t i = 0; i < conv_n; ++i) u[i] *= v[i];
    fft_inplace(u, +1);

    const double inv = 1.0 / static_cast<double>(conv_n);
    const double ph0 = pi_a * static_cast<double>(n) * static_cast<double>(n) * 0.5;
    std::vector<Complex> out(static_cast<size_t>(n));
    for (long j = 0; j < n; ++j) {
        const double ph = pi_a * static_cast<double>(j * j - n * j) + ph0;
        out[static_cast<size_t>(j)] =
            u[static_cast<size_t>(j)] * inv * std::polar(1.0, ph);
    }
    return out;
}

TrigInterp1D::TrigInterp1D(const std::vector<Complex>& samples, double extent)
    : n_(static_cast<int>(samples.size())), extent_(extent) {
    coeff_ = fractional_centered_dft(samples, 1.0, -1);
    const double inv = 1.0 / static_cast<double>(n_);
    for (auto& c : coeff_) c *= inv;
}

Complex TrigInterp1D::operator()(double t) const {
    // sum_k coeff_k exp(2 pi i (k - n/2) t / L), evaluated with an
    // incremental phasor.
    const double base = 2.0 * kPi * t / extent_;
    Complex p = std::polar(1.0, -base * static_cast<double>(n_ / 2));
    const Complex step = std::polar(1.0, base);
    Complex sum(0, 0);
    for (int k = 0; k < n_; ++k) {
        sum += coeff_[static_cast<size_t>(k)] * p;
        p *= step;
    }
    return sum;
}

}  // namespace mqd
