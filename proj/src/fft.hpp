#pragma once

#include <vector>

#include "common.hpp"

namespace mqd {

/// In-place radix-2 FFT; size must be a power of two. sign = -1 forward.
void fft_inplace(std::vector<Complex>& a, int sign);

/// Centered fractional DFT of length n (power of two):
///   out[j] = sum_m in[m] * exp(2 pi i * sign * alpha * (m - n/2)(j - n/2) / n)
/// computed with Bluestein's chirp factorization in O(n log n). With
/// alpha = 1 this is the plain centered DFT; grids with extent L and spacing
/// L/n use alpha = L^2/n to evaluate the continuous transform on the grid.
std::vector<Complex> fractional_centered_dft(const std::vector<Complex>& in,
                                             double alpha, int sign);

/// Trigonometric interpolant of samples on the centered grid
/// t_j = (j - n/2) L / n: exact at the grid points, band-limited between
/// them. Evaluation at one point costs O(n).
class TrigInterp1D {
public:
    TrigInterp1D(const std::vector<Complex>& samples, double extent);
    Complex operator()(double t) const;
    int size() const { return n_; }

private:
    int n_;
    double extent_;
    std::vector<Complex> coeff_;  // centered DFT coefficients / n
};

}  // namespace mqd
