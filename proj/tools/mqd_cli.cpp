// Command-line front end; talks to the library through the C interface only.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mqd/mqd.h"

namespace {

int exit_code_for(mqd_status s) {
    switch (s) {
        case MQD_OK:
            return 0;
        case MQD_ERR_PARSE:
        case MQD_ERR_IO:
        case MQD_ERR_BAD_ARGUMENT:
        case MQD_ERR_ODD_DIMENSION:
        case MQD_ERR_NOT_SYMPLECTIC:
        case MQD_ERR_NON_SYMMETRIC_P:
        case MQD_ERR_SINGULAR_E:
        case MQD_ERR_WRONG_DIMENSION:
        case MQD_ERR_GRID_MISMATCH:
            return 2;
        case MQD_ERR_RANK_AMBIGUOUS:
            return 3;
        case MQD_ERR_FIT_EXCEEDS_BOUND:
            return 4;
        case MQD_ERR_ALIAS_RISK:
        case MQD_ERR_EXTENT_OVERFLOW:
        case MQD_ERR_CENTER_OUT_OF_RANGE:
        case MQD_ERR_NOT_INTEGRABLE:
        case MQD_ERR_CONDITIONING:
        case MQD_ERR_SINGULAR_MATRIX:
        case MQD_ERR_NOT_APPLICABLE:
        case MQD_ERR_INSUFFICIENT_SAMPLES:
        case MQD_ERR_BAD_GRID:
            return 5;
        default:
            return 1;
    }
}

int report_failure(const char* what, mqd_status s) {
    std::cerr << what << " failed [" << mqd_status_name(s)
              << "]: " << mqd_last_error() << "\n";
    return exit_code_for(s);
}

bool read_file(const std::string& path, std::string* out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
    return true;
}

bool write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << "\n";
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << text;
    return out.good();
}

struct Options {
    std::string input;
    std::string out;
    std::string csv;
    mqd_config cfg{};
};

void add_common_flags(CLI::App* cmd, Options* opt) {
    cmd->add_option("--rank-tol", opt->cfg.rank_tol, "relative SVD rank cutoff");
    cmd->add_option("--grid-n", opt->cfg.grid_n, "oracle grid points per axis");
    cmd->add_option("--extent", opt->cfg.extent, "oracle grid extent");
    cmd->add_option("--max-err", opt->cfg.max_rel_err,
                    "allowed oracle-vs-analytic relative error");
    cmd->add_option("--symplectic-tol", opt->cfg.symplectic_tol,
                    "symplectic validation tolerance");
    cmd->add_option("--out", opt->out, "report destination (default stdout)");
}

int cmd_analyze(const Options& opt) {
    std::string text;
    if (!read_file(opt.input, &text)) {
        std::cerr << "cannot read " << opt.input << "\n";
        return 2;
    }
    mqd_matrix* m = nullptr;
    mqd_status s = mqd_matrix_from_json(text.c_str(), &opt.cfg, &m);
    if (s != MQD_OK) return report_failure("analyze", s);
    mqd_report* rep = nullptr;
    s = mqd_analyze(m, &opt.cfg, &rep);
    mqd_matrix_free(m);
    if (s != MQD_OK) return report_failure("analyze", s);
    const bool ok = write_output(opt.out, mqd_report_json(rep));
    mqd_report_free(rep);
    if (!ok) {
        std::cerr << "cannot write " << opt.out << "\n";
        return 2;
    }
    return 0;
}

int cmd_verify(const Options& opt) {
    std::string text;
    if (!read_file(opt.input, &text)) {
        std::cerr << "cannot read " << opt.input << "\n";
        return 2;
    }
    mqd_word* w = nullptr;
    mqd_status s = mqd_word_from_json(text.c_str(), &w);
    if (s != MQD_OK) return report_failure("verify", s);

    mqd_report* rep = nullptr;
    s = mqd_verify(w, &opt.cfg, &rep);
    int rc = 0;
    if (rep) {
        if (!write_output(opt.out, mqd_report_json(rep))) {
            std::cerr << "cannot write " << opt.out << "\n";
            rc = 2;
        }
        mqd_report_free(rep);
    }
    if (s != MQD_OK) {
        mqd_word_free(w);
        return report_failure("verify", s);
    }

    if (!opt.csv.empty()) {
        char* csv = nullptr;
        s = mqd_sample_csv(w, &opt.cfg, &csv);
        if (s == MQD_OK) {
            if (!write_output(opt.csv, csv)) {
                std::cerr << "cannot write " << opt.csv << "\n";
                rc = 2;
            }
            mqd_string_free(csv);
        } else {
            rc = report_failure("sample dump", s);
        }
    }
    mqd_word_free(w);
    return rc;
}

int cmd_tfcheck(const Options& opt) {
    std::string text;
    if (!read_file(opt.input, &text)) {
        std::cerr << "cannot read " << opt.input << "\n";
        return 2;
    }
    mqd_word* w = nullptr;
    mqd_status s = mqd_word_from_json(text.c_str(), &w);
    if (s != MQD_OK) return report_failure("tfcheck", s);

    mqd_report* rep = nullptr;
    s = mqd_tfcheck(w, &opt.cfg, &rep);
    int rc = 0;
    if (rep) {
        if (!write_output(opt.out, mqd_report_json(rep))) {
            std::cerr << "cannot write " << opt.out << "\n";
            rc = 2;
        }
        mqd_report_free(rep);
    }
    if (s != MQD_OK) {
        mqd_word_free(w);
        return report_failure("tfcheck", s);
    }

    if (!opt.csv.empty()) {
        char* csv = nullptr;
        s = mqd_gabor_profile_csv(w, &opt.cfg, &csv);
        if (s == MQD_OK) {
            if (!write_output(opt.csv, csv)) {
                std::cerr << "cannot write " << opt.csv << "\n";
                rc = 2;
            }
            mqd_string_free(csv);
        } else {
            rc = report_failure("profile dump", s);
        }
    }
    mqd_word_free(w);
    return rc;
}

int cmd_corpus(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        std::cerr << "cannot create " << dir << ": " << ec.message() << "\n";
        return 2;
    }
    const int n = mqd_corpus_count();
    for (int i = 0; i < n; ++i) {
        char *name = nullptr, *matrix = nullptr, *word = nullptr, *expected = nullptr;
        const mqd_status s = mqd_corpus_entry(i, &name, &matrix, &word, &expected);
        if (s != MQD_OK) return report_failure("corpus", s);
        const std::string base = std::string(dir) + "/" + name;
        bool ok = write_output(base + ".matrix.json", matrix) &&
                  write_output(base + ".word.json", word) &&
                  write_output(base + ".expected.json", expected);
        std::cout << name << "\n";
        mqd_string_free(name);
        mqd_string_free(matrix);
        mqd_string_free(word);
        mqd_string_free(expected);
        if (!ok) {
            std::cerr << "cannot write corpus files under " << dir << "\n";
            return 2;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metaplectic smoothed-kernel analysis and verification"};
    app.require_subcommand(1);

    Options a_opt, v_opt, t_opt;
    mqd_config_defaults(&a_opt.cfg);
    mqd_config_defaults(&v_opt.cfg);
    mqd_config_defaults(&t_opt.cfg);
    std::string corpus_dir;

    auto* analyze = app.add_subcommand(
        "analyze", "analyze a symplectic matrix file (JSON)");
    analyze->add_option("matrix", a_opt.input, "matrix JSON file")->required();
    add_common_flags(analyze, &a_opt);

    auto* verify = app.add_subcommand(
        "verify", "fit the grid oracle against the analytic form for a word");
    verify->add_option("word", v_opt.input, "generator word JSON file")->required();
    add_common_flags(verify, &v_opt);
    verify->add_option("--csv", v_opt.csv, "dump kernel samples as CSV");

    auto* tfcheck = app.add_subcommand(
        "tfcheck", "time-frequency identity checks for a d=1 word");
    tfcheck->add_option("word", t_opt.input, "generator word JSON file")->required();
    add_common_flags(tfcheck, &t_opt);
    tfcheck->add_option("--csv", t_opt.csv, "dump the |h| profile as CSV");

    auto* corpus = app.add_subcommand(
        "corpus", "write the named example corpus with expected verdicts");
    corpus->add_option("dir", corpus_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand(analyze)) return cmd_analyze(a_opt);
    if (app.got_subcommand(verify)) return cmd_verify(v_opt);
    if (app.got_subcommand(tfcheck)) return cmd_tfcheck(t_opt);
    if (app.got_subcommand(corpus)) return cmd_corpus(corpus_dir);
    return 1;
}
