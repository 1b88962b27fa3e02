#include <cstring>
#include <new>
#include <string>

#include "json_io.hpp"
#include "mqd/mqd.h"

using namespace mqd;

struct mqd_matrix {
    SymplecticMatrix s;
};

struct mqd_word {
    GeneratorWord w;
};

struct mqd_report {
    std::string json;
};

namespace {

thread_local std::string g_last_error;

Config to_config(const mqd_config* cfg) {
    Config c;
    if (!cfg) return c;
    if (cfg->rank_tol > 0) c.rank_tol = cfg->rank_tol;
    if (cfg->rank_gap_ratio > 0) c.rank_gap_ratio = cfg->rank_gap_ratio;
    if (cfg->symplectic_tol > 0) c.symplectic_tol = cfg->symplectic_tol;
    if (cfg->psd_tol > 0) c.psd_tol = cfg->psd_tol;
    if (cfg->null_tol > 0) c.null_tol = cfg->null_tol;
    if (cfg->cond_cap > 0) c.cond_cap = cfg->cond_cap;
    if (cfg->grid_n > 0) c.grid_n = cfg->grid_n;
    if (cfg->extent > 0) c.extent = cfg->extent;
    if (cfg->margin > 0) c.margin = cfg->margin;
    if (cfg->max_rel_err > 0) c.max_rel_err = cfg->max_rel_err;
    if (cfg->unitarity_tol > 0) c.unitarity_tol = cfg->unitarity_tol;
    if (cfg->tf_covariance_tol > 0) c.tf_covariance_tol = cfg->tf_covariance_tol;
    if (cfg->tf_profile_tol > 0) c.tf_profile_tol = cfg->tf_profile_tol;
    c.verbosity = cfg->verbosity;
    return c;
}

template <typename Fn>
mqd_status guarded(Fn&& fn) {
    try {
        fn();
        return MQD_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return e.code();
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return MQD_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MQD_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

VerifyReport run_verify(const GeneratorWord& w, const Config& cfg) {
    VerifyReport rep;
    rep.word = w;
    rep.grid_n = cfg.grid_n_for(w.d);
    rep.extent = cfg.extent_for(w.d);
    rep.bound = cfg.max_rel_err;

    const SymplecticMatrix s = w.product(cfg.symplectic_tol);
    const SmoothedKernelForm form = smoothed_form(s, cfg);
    rep.analytic_amplitude_known = form.amplitude_known;
    rep.analytic_amplitude = form.amplitude;

    std::vector<Vec> xs, ys;
    default_fit_points(w.d, xs, ys);
    const KernelSamples samples = sample_smoothed_kernel(w, xs, ys, cfg);
    rep.fit = fit_against_analytic(samples, xs, ys, form.qs, cfg);
    rep.quadrature_warning = samples.quadrature_warning;
    rep.passed = rep.fit.max_rel_err <= cfg.max_rel_err;
    return rep;
}

TfReport run_tfcheck(const GeneratorWord& w, const Config& cfg) {
    TfReport rep;
    rep.covariance_tol = cfg.tf_covariance_tol;
    rep.profile_tol = cfg.tf_profile_tol;

    const Grid grid = Grid::make(1, cfg.grid_n_for(1), cfg.extent_for(1));
    const SampledField phi = sample_gaussian(grid, Vec::Zero(1), cfg);
    rep.covariance = check_wigner_covariance(w, phi, cfg);
    rep.gabor =
        check_gabor_kernel_identity(w, default_gabor_offsets(1.2), 4, cfg, 20250401);
    rep.passed = rep.covariance.max_abs_dev <= cfg.tf_covariance_tol &&
                 rep.gabor.fit_max_rel_err <= cfg.tf_profile_tol;
    return rep;
}

}  // namespace

extern "C" {

void mqd_config_defaults(mqd_config* cfg) {
    if (!cfg) return;
    Config c;
    cfg->rank_tol = c.rank_tol;
    cfg->rank_gap_ratio = c.rank_gap_ratio;
    cfg->symplectic_tol = c.symplectic_tol;
    cfg->psd_tol = c.psd_tol;
    cfg->null_tol = c.null_tol;
    cfg->cond_cap = c.cond_cap;
    cfg->grid_n = 0;
    cfg->extent = 0.0;
    cfg->margin = c.margin;
    cfg->max_rel_err = c.max_rel_err;
    cfg->unitarity_tol = c.unitarity_tol;
    cfg->tf_covariance_tol = c.tf_covariance_tol;
    cfg->tf_profile_tol = c.tf_profile_tol;
    cfg->verbosity = 0;
}

mqd_status mqd_matrix_from_json(const char* json, const mqd_config* cfg,
                                mqd_matrix** out) {
    if (!json || !out) {
        g_last_error = "null argument";
        return MQD_ERR_BAD_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        const Config c = to_config(cfg);
        Mat m = matrix_from_json(json);
        *out = new mqd_matrix{SymplecticMatrix::validate(m, c.symplectic_tol)};
    });
}

mqd_status mqd_matrix_from_data(int d, const double* rowmajor,
                                const mqd_config* cfg, mqd_matrix** out) {
    if (!rowmajor || !out || d < 1) {
        g_last_error = "null or invalid argument";
        return MQD_ERR_BAD_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        const Config c = to_config(cfg);
        Mat m(2 * d, 2 * d);
        for (int i = 0; i < 2 * d; ++i)
            for (int j = 0; j < 2 * d; ++j) m(i, j) = rowmajor[i * 2 * d + j];
        *out = new mqd_matrix{SymplecticMatrix::validate(m, c.symplectic_tol)};
    });
}

mqd_status mqd_matrix_to_json(const mqd_matrix* m, char** json_out) {
    if (!m || !json_out) {
        g_last_error = "null argument";
        return MQD_ERR_BAD_ARGUMENT;
    }
    return guarded([&] { *json_out = dup_string(matrix_to_json(m->s.matrix())); });
}

int mqd_matrix_dim(const mqd_matrix* m) { return m ? m->s.dim() : 0; }

void mqd_matrix_free(mqd_matrix* m) { delete m; }

mqd_status mqd_word_from_json(const char* json, mqd_word** out) {
    if (!json || !out) {
        g_last_error = "null argument";
        return MQD_ERR_BAD_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] { *out = new mqd_word{word_from_json(json)}; });
}

mqd_status mqd_word_to_json(const mqd_word* w, char** json_out) {
    if (!w || !json_out) {
        g_last_error = "null argument";
        return MQD_ERR_BAD_ARGUMENT;
    }
    return guarded([&] { *json_out = dup_string(word_to_json(w->w)); });
}

int mqd_word_dim(const mqd_word* w) { return w ? w->w.d : 0; }

mqd_status mqd_word_product(const mqd_word* w, const mqd_config* cfg,
                            mqd_matrix** out) {
    if (!w || !out) {
        g_last_error = "null argument";
        return MQD_ERR_BAD_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        const Config c = to_config(cfg);
        *out = new mqd_matrix{w->w.product(c.symplectic_tol)};
    });
}

void mqd_word_free(mqd_word* w) { delete w; }

mqd_status mqd_analyze(const mqd_matrix* m, const mqd_config* cfg,
                       mqd_report** out) {
    if (!m || !out) {
        g_last_error = "null argument";
        return MQD_ERR_BAD_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        const Config c = to_config(cfg);
        *out = new mqd_report{analysis_to_json(analyze(m->s, c))};
    });
}

mqd_status mqd_verify(const mqd_word* w, const mqd_config* cfg, mqd_report** out) {
    if (!w || !out) {
        g_last_error = "null argument";
        return MQD_ERR_BAD_ARGUMENT;
    }
    *out = nullptr;
    bool passed = true;
    const mqd_status st = guarded([&] {
        const Config c = to_config(cfg);
        VerifyReport rep = run_verify(w->w, c);
        passed = rep.passed;
        *out = new mqd_report{verify_to_json(rep)};
    });
    if (st != MQD_OK) return st;
    if (!passed) {
        g_last_error = "oracle fit error exceeds the configured bound";
        return MQD_ERR_FIT_EXCEEDS_BOUND;
    }
    return MQD_OK;
}

mqd_status mqd_tfcheck(const mqd_word* w, const mqd_config* cfg, mqd_report** out) {
    if (!w || !out) {
        g_last_error = "null argument";
        return MQD_ERR_BAD_ARGUMENT;
    }
    *out = nullptr;
    bool passed = true;
    const mqd_status st = guarded([&] {
        const Config c = to_config(cfg);
        TfReport rep = run_tfcheck(w->w, c);
        passed = rep.passed;
        *out = new mqd_report{tf_to_json(rep)};
    });
    if (st != MQD_OK) return st;
    if (!passed) {
        g_last_error = "time-frequency residual exceeds the configured threshold";
        return MQD_ERR_FIT_EXCEEDS_BOUND;
    }
    return MQD_OK;
}

const char* mqd_report_json(const mqd_report* r) {
    return r ? r->json.c_str() : nullptr;
}

void mqd_report_free(mqd_report* r) { delete r; }

mqd_status mqd_sample_csv(const mqd_word* w, const mqd_config* cfg, char** csv_out) {
    if (!w || !csv_out) {
        g_last_error = "null argument";
        return MQD_ERR_BAD_ARGUMENT;
    }
    return guarded([&] {
        const Config c = to_config(cfg);
        std::vector<Vec> xs, ys;
        default_fit_points(w->w.d, xs, ys);
        const KernelSamples samples = sample_smoothed_kernel(w->w, xs, ys, c);
        *csv_out = dup_string(samples_to_csv(samples, xs, ys));
    });
}

mqd_status mqd_gabor_profile_csv(const mqd_word* w, const mqd_config* cfg,
                                 char** csv_out) {
    if (!w || !csv_out) {
        g_last_error = "null argument";
        return MQD_ERR_BAD_ARGUMENT;
    }
    return guarded([&] {
        const Config c = to_config(cfg);
        if (w->w.d != 1)
            fail(MQD_ERR_WRONG_DIMENSION, "profile dump is implemented for d = 1");
        std::string csv = "u0,u1,abs\n";
        PhaseSpacePoint origin{Vec::Zero(1), Vec::Zero(1)};
        for (const auto& u : default_gabor_offsets(1.5)) {
            PhaseSpacePoint v{Vec::Constant(1, u(0)), Vec::Constant(1, u(1))};
            const double mag = std::abs(gabor_matrix(w->w, origin, v, c));
            csv += std::to_string(u(0)) + "," + std::to_string(u(1)) + "," +
                   std::to_string(mag) + "\n";
        }
        *csv_out = dup_string(csv);
    });
}

int mqd_corpus_count(void) {
    static const int n = static_cast<int>(corpus_entries().size());
    return n;
}

mqd_status mqd_corpus_entry(int index, char** name, char** matrix_json,
                            char** word_json, char** expected_json) {
    if (!name || !matrix_json || !word_json || !expected_json) {
        g_last_error = "null argument";
        return MQD_ERR_BAD_ARGUMENT;
    }
    return guarded([&] {
        const auto entries = corpus_entries();
        if (index < 0 || index >= static_cast<int>(entries.size()))
            fail(MQD_ERR_BAD_ARGUMENT, "corpus index out of range");
        *name = dup_string(entries[static_cast<size_t>(index)].name);
        *matrix_json = dup_string(entries[static_cast<size_t>(index)].matrix_json);
        *word_json = dup_string(entries[static_cast<size_t>(index)].word_json);
        *expected_json = dup_string(entries[static_cast<size_t>(index)].expected_json);
    });
}

void mqd_string_free(char* s) { delete[] s; }

const char* mqd_status_name(mqd_status s) {
    switch (s) {
        case MQD_OK: return "ok";
        case MQD_ERR_BAD_ARGUMENT: return "bad-argument";
        case MQD_ERR_PARSE: return "parse-error";
        case MQD_ERR_IO: return "io-error";
        case MQD_ERR_ODD_DIMENSION: return "odd-dimension";
        case MQD_ERR_NOT_SYMPLECTIC: return "not-symplectic";
        case MQD_ERR_NON_SYMMETRIC_P: return "non-symmetric-P";
        case MQD_ERR_SINGULAR_E: return "singular-E";
        case MQD_ERR_SINGULAR_MATRIX: return "singular-matrix";
        case MQD_ERR_RANK_AMBIGUOUS: return "rank-ambiguous";
        case MQD_ERR_NOT_APPLICABLE: return "not-applicable";
        case MQD_ERR_NOT_INTEGRABLE: return "not-integrable";
        case MQD_ERR_CONDITIONING: return "conditioning";
        case MQD_ERR_WRONG_DIMENSION: return "wrong-dimension";
        case MQD_ERR_GRID_MISMATCH: return "grid-mismatch";
        case MQD_ERR_CENTER_OUT_OF_RANGE: return "center-out-of-range";
        case MQD_ERR_ALIAS_RISK: return "alias-risk";
        case MQD_ERR_EXTENT_OVERFLOW: return "extent-overflow";
        case MQD_ERR_INSUFFICIENT_SAMPLES: return "insufficient-samples";
        case MQD_ERR_FIT_EXCEEDS_BOUND: return "fit-exceeds-bound";
        case MQD_ERR_BAD_GRID: return "bad-grid";
        case MQD_ERR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

const char* mqd_last_error(void) { return g_last_error.c_str(); }

const char* mqd_version(void) { return "0.1.0"; }

}  // extern "C"
