#pragma once

#include <string>
#include <vector>

#include "kernel_analysis.hpp"
#include "oracle.hpp"
#include "tf_checks.hpp"

namespace mqd {

/// Parses {"d": int, "rows": [[...], ...]} with 2d x 2d row-major entries;
/// rejects non-finite entries and shape mismatches.
Mat matrix_from_json(const std::string& text);
std::string matrix_to_json(const Mat& m);

/// Word format: a list of {"type":"J"} | {"type":"VP","P":[[...]]} |
/// {"type":"DE","E":[[...]]}, optionally wrapped as {"d":int,"factors":[...]}.
/// A bare all-J list defaults to d = 1.
GeneratorWord word_from_json(const std::string& text);
std::string word_to_json(const GeneratorWord& w);

std::string analysis_to_json(const AnalysisReport& rep);

struct VerifyReport {
    GeneratorWord word;
    int grid_n = 0;
    double extent = 0.0;
    FitReport fit;
    bool analytic_amplitude_known = false;
    double analytic_amplitude = 0.0;
    double bound = 0.0;
    bool passed = false;
    bool quadrature_warning = false;
};

std::string verify_to_json(const VerifyReport& rep);

struct TfReport {
    CovarianceReport covariance;
    GaborIdentityReport gabor;
    double covariance_tol = 0.0;
    double profile_tol = 0.0;
    bool passed = false;
};

std::string tf_to_json(const TfReport& rep);

/// CSV dump of kernel samples: one row per (x, y) pair with columns
/// x..., y..., re, im, abs.
std::string samples_to_csv(const KernelSamples& samples, const std::vector<Vec>& xs,
                           const std::vector<Vec>& ys);

struct CorpusEntry {
    std::string name;
    std::string matrix_json;
    std::string word_json;
    std::string expected_json;
};

/// Named example matrices with generator words and expected verdicts.
std::vector<CorpusEntry> corpus_entries();

}  // namespace mqd
