#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

#include "mqd/mqd.h"

namespace mqd {

using Mat     = Eigen::MatrixXd;
using Vec     = Eigen::VectorXd;
using CMat    = Eigen::MatrixXcd;
using CVec    = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Library error; carries the status code exposed through the C interface.
class Error : public std::runtime_error {
public:
    Error(mqd_status code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    mqd_status code() const noexcept { return code_; }

private:
    mqd_status code_;
};

[[noreturn]] inline void fail(mqd_status code, const std::string& msg) {
    throw Error(code, msg);
}

/// Run configuration shared by all modules. Mirrors mqd_config.
struct Config {
    double rank_tol       = 1e-10;
    double rank_gap_ratio = 100.0;
    double symplectic_tol = 1e-9;
    double psd_tol        = 1e-8;
    double null_tol       = 1e-7;
    double cond_cap       = 1e8;
    int    grid_n         = 0;    // 0 = per-dimension default
    double extent         = 0.0;  // 0 = per-dimension default
    double margin         = 3.0;
    double max_rel_err    = 0.02;
    double unitarity_tol  = 1e-6;
    double tf_covariance_tol = 1e-3;
    double tf_profile_tol    = 0.05;
    int    verbosity      = 0;

    int grid_n_for(int d) const {
        if (grid_n > 0) return grid_n;
        return d <= 1 ? 1024 : 256;
    }
    double extent_for(int d) const {
        if (extent > 0.0) return extent;
        return d <= 1 ? 16.0 : 12.0;
    }
};

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

/// Max-abs deviation from symmetry, ||M - M^T||_max.
inline double symmetry_residual(const Mat& m) {
    return (m - m.transpose()).cwiseAbs().maxCoeff();
}

inline Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace mqd
