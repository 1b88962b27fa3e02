#include "json_io.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace mqd {

using nlohmann::json;

namespace {

json matrix_rows(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat rows_to_matrix(const json& rows, const char* what) {
    if (!rows.is_array() || rows.empty())
        fail(MQD_ERR_PARSE, std::string(what) + ": expected a non-empty array of rows");
    const size_t nr = rows.size();
    size_t nc = 0;
    Mat m;
    for (size_t i = 0; i < nr; ++i) {
        const json& row = rows[i];
        if (!row.is_array())
            fail(MQD_ERR_PARSE, std::string(what) + ": row is not an array");
        if (i == 0) {
            nc = row.size();
            if (nc == 0) fail(MQD_ERR_PARSE, std::string(what) + ": empty row");
            m.resize(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nc));
        } else if (row.size() != nc) {
            fail(MQD_ERR_PARSE, std::string(what) + ": ragged rows");
        }
        for (size_t j = 0; j < nc; ++j) {
            if (!row[j].is_number())
                fail(MQD_ERR_PARSE, std::string(what) + ": non-numeric entry");
            const double v = row[j].get<double>();
            if (!std::isfinite(v))
                fail(MQD_ERR_PARSE, std::string(what) + ": non-finite entry");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    }
    return m;
}

json parse(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail(MQD_ERR_PARSE, "invalid JSON");
    return doc;
}

}  // namespace

Mat matrix_from_json(const std::string& text) {
    json doc = parse(text);
    if (!doc.is_object() || !doc.contains("d") || !doc.contains("rows"))
        fail(MQD_ERR_PARSE, "matrix document must have fields \"d\" and \"rows\"");
    if (!doc["d"].is_number_integer() || doc["d"].get<int>() < 1)
        fail(MQD_ERR_PARSE, "\"d\" must be a positive integer");
    const int d = doc["d"].get<int>();
    Mat m = rows_to_matrix(doc["rows"], "matrix");
    if (m.rows() != 2 * d || m.cols() != 2 * d)
        fail(MQD_ERR_PARSE, "matrix must be 2d x 2d for the declared d");
    return m;
}

std::string matrix_to_json(const Mat& m) {
    json doc;
    doc["d"] = static_cast<int>(m.rows()) / 2;
    doc["rows"] = matrix_rows(m);
    return doc.dump(2);
}

GeneratorWord word_from_json(const std::string& text) {
    json doc = parse(text);
    int declared_d = 0;
    const json* factors = nullptr;
    if (doc.is_array()) {
        factors = &doc;
    } else if (doc.is_object() && doc.contains("factors")) {
        factors = &doc["factors"];
        if (doc.contains("d")) {
            if (!doc["d"].is_number_integer() || doc["d"].get<int>() < 1)
                fail(MQD_ERR_PARSE, "\"d\" must be a positive integer");
            declared_d = doc["d"].get<int>();
        }
    } else {
        fail(MQD_ERR_PARSE, "word document must be a factor list or {d, factors}");
    }
    if (!factors->is_array()) fail(MQD_ERR_PARSE, "\"factors\" must be an array");

    // First pass: infer the dimension from parameterised factors.
    int d = declared_d;
    for (const auto& f : *factors) {
        if (!f.is_object() || !f.contains("type") || !f["type"].is_string())
            fail(MQD_ERR_PARSE, "word factor must be an object with a \"type\"");
        const std::string type = f["type"].get<std::string>();
        int fd = 0;
        if (type == "VP") {
            if (!f.contains("P")) fail(MQD_ERR_PARSE, "VP factor lacks \"P\"");
            fd = static_cast<int>(rows_to_matrix(f["P"], "P").rows());
        } else if (type == "DE") {
            if (!f.contains("E")) fail(MQD_ERR_PARSE, "DE factor lacks \"E\"");
            fd = static_cast<int>(rows_to_matrix(f["E"], "E").rows());
        } else if (type != "J") {
            fail(MQD_ERR_PARSE, "unknown factor type \"" + type + "\"");
        }
        if (fd > 0) {
            if (d == 0) d = fd;
            else if (d != fd)
                fail(MQD_ERR_PARSE, "word mixes factor dimensions");
        }
    }
    if (d == 0) d = 1;  // all-J word without a declared dimension

    std::vector<Generator> gens;
    gens.reserve(factors->size());
    for (const auto& f : *factors) {
        const std::string type = f["type"].get<std::string>();
        if (type == "J") {
            gens.push_back(Generator::fourier(d));
        } else if (type == "VP") {
            gens.push_back(Generator::chirp(rows_to_matrix(f["P"], "P")));
        } else {
            gens.push_back(Generator::dilation(rows_to_matrix(f["E"], "E")));
        }
    }
    return GeneratorWord(d, std::move(gens));
}

std::string word_to_json(const GeneratorWord& w) {
    json doc;
    doc["d"] = w.d;
    json factors = json::array();
    for (const auto& g : w.factors) {
        json f;
        switch (g.kind) {
            case Generator::Kind::Fourier: f["type"] = "J"; break;
            case Generator::Kind::Chirp:
                f["type"] = "VP";
                f["P"] = matrix_rows(g.param);
                break;
            case Generator::Kind::Dilation:
                f["type"] = "DE";
                f["E"] = matrix_rows(g.param);
                break;
        }
        factors.push_back(std::move(f));
    }
    doc["factors"] = std::move(factors);
    return doc.dump(2);
}

namespace {

const char* case_name(KernelCase c) {
    switch (c) {
        case KernelCase::FreeB: return "free-B";
        case KernelCase::BZero: return "B-zero";
        case KernelCase::General: return "general";
    }
    return "unknown";
}

}  // namespace

std::string analysis_to_json(const AnalysisReport& rep) {
    json doc;
    doc["d"] = rep.d;

    json verdict;
    verdict["quasi_diagonal"] = rep.v.quasi_diagonal;
    verdict["reason"] = verdict_reason_name(rep.v.reason);
    verdict["epsilon"] = rep.v.epsilon;
    if (rep.v.witness) {
        json w;
        w["x"] = std::vector<double>(rep.v.witness->first.data(),
                                     rep.v.witness->first.data() +
                                         rep.v.witness->first.size());
        w["y"] = std::vector<double>(rep.v.witness->second.data(),
                                     rep.v.witness->second.data() +
                                         rep.v.witness->second.size());
        verdict["witness"] = std::move(w);
    } else {
        verdict["witness"] = nullptr;
    }
    doc["verdict"] = std::move(verdict);

    json gamma;
    gamma["dim"] = rep.gamma.dim;
    gamma["basis"] = matrix_rows(rep.gamma.basis);
    gamma["image"] = matrix_rows(rep.gamma.image);
    doc["gamma_basis"] = std::move(gamma);

    doc["QS"] = matrix_rows(rep.form.qs);
    doc["case"] = case_name(rep.form.provenance);
    doc["amplitude_known"] = rep.form.amplitude_known;
    if (rep.form.amplitude_known)
        doc["amplitude"] = rep.form.amplitude;
    else
        doc["amplitude"] = nullptr;
    doc["strictly_inside_diagonal"] = rep.gamma_strictly_inside_diagonal;
    if (rep.d2) doc["d2_scenario"] = d2_scenario_name(rep.d2->scenario);

    json res;
    res["symplectic"] = rep.symplectic_residual;
    res["null_gamma"] = rep.null_gamma_residual;
    res["qs_min_eigenvalue"] = rep.form.min_eigenvalue;
    doc["residuals"] = std::move(res);
    return doc.dump(2);
}

std::string verify_to_json(const VerifyReport& rep) {
    json doc;
    doc["d"] = rep.word.d;
    doc["grid"] = {{"n", rep.grid_n}, {"extent", rep.extent}};
    doc["c_fit"] = rep.fit.c_fit;
    doc["max_rel_err"] = rep.fit.max_rel_err;
    doc["points_used"] = rep.fit.points_used;
    doc["bound"] = rep.bound;
    doc["passed"] = rep.passed;
    doc["analytic_amplitude_known"] = rep.analytic_amplitude_known;
    if (rep.analytic_amplitude_known)
        doc["analytic_amplitude"] = rep.analytic_amplitude;
    else
        doc["analytic_amplitude"] = nullptr;
    doc["quadrature_warning"] = rep.quadrature_warning;
    return doc.dump(2);
}

std::string tf_to_json(const TfReport& rep) {
    json cov;
    cov["identity"] = "wigner-covariance";
    cov["residual"] = rep.covariance.max_abs_dev;
    cov["points"] = rep.covariance.points;
    cov["grid"] = {{"n", rep.covariance.grid_n}, {"extent", rep.covariance.extent}};
    cov["tolerance"] = rep.covariance_tol;

    json gab;
    gab["identity"] = "gabor-profile";
    gab["residual"] = rep.gabor.fit_max_rel_err;
    gab["spread"] = rep.gabor.spread_max;
    gab["points"] = rep.gabor.points;
    gab["c_fit"] = rep.gabor.c_fit;
    gab["Q_fit"] = matrix_rows(rep.gabor.q_fit);
    gab["tolerance"] = rep.profile_tol;

    json doc;
    doc["checks"] = json::array({std::move(cov), std::move(gab)});
    doc["passed"] = rep.passed;
    return doc.dump(2);
}

std::string samples_to_csv(const KernelSamples& samples, const std::vector<Vec>& xs,
                           const std::vector<Vec>& ys) {
    const int d = static_cast<int>(xs.empty() ? 0 : xs.front().size());
    std::ostringstream os;
    os.precision(17);
    for (int k = 0; k < d; ++k) os << "x" << k << ",";
    for (int k = 0; k < d; ++k) os << "y" << k << ",";
    os << "re,im,abs\n";
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < ys.size(); ++j) {
            for (int k = 0; k < d; ++k) os << xs[i](k) << ",";
            for (int k = 0; k < d; ++k) os << ys[j](k) << ",";
            const Complex v = samples.values(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(j));
            os << v.real() << "," << v.imag() << "," << std::abs(v) << "\n";
        }
    return os.str();
}

namespace {

json expected_doc(const std::string& name, int d, bool quasi, const char* reason,
                  int gamma_dim, bool strict, const char* scenario,
                  const char* note) {
    json e;
    e["name"] = name;
    e["d"] = d;
    e["quasi_diagonal"] = quasi;
    e["reason"] = reason;
    e["gamma_dim"] = gamma_dim;
    e["strictly_inside_diagonal"] = strict;
    if (scenario) e["scenario"] = scenario;
    e["note"] = note;
    return e;
}

CorpusEntry make_entry(const std::string& name, const GeneratorWord& w,
                       const json& expected) {
    CorpusEntry e;
    e.name = name;
    e.matrix_json = matrix_to_json(w.product_matrix());
    e.word_json = word_to_json(w);
    e.expected_json = expected.dump(2);
    return e;
}

}  // namespace

std::vector<CorpusEntry> corpus_entries() {
    std::vector<CorpusEntry> out;

    // Fourier transform, d = 1.
    GeneratorWord s3(1, {Generator::fourier(1)});
    out.push_back(make_entry(
        "s3_fourier", s3,
        expected_doc("s3_fourier", 1, true, "d1-rule", 0, true, nullptr,
                     "C is invertible; the smoothed kernel is Schwartz")));

    // Dilation with D = 2, d = 1: the classic non-quasi-diagonal case.
    Mat e2(1, 1);
    e2 << 2.0;
    GeneratorWord s1(1, {Generator::dilation(e2)});
    out.push_back(make_entry(
        "s1_dilation", s1,
        expected_doc("s1_dilation", 1, false, "d1-rule", 1, false, nullptr,
                     "C = 0 and D != 1; the kernel concentrates on y = 2x")));

    // Upper shear with B = 1, d = 1 (C = 0, D = 1).
    Mat one(1, 1);
    one << 1.0;
    Mat neg(1, 1);
    neg << -1.0;
    GeneratorWord s2(1, {Generator::fourier(1), Generator::chirp(neg),
                         Generator::dilation(neg), Generator::fourier(1)});
    out.push_back(make_entry(
        "s2_shear", s2,
        expected_doc("s2_shear", 1, true, "d1-rule", 1, false, nullptr,
                     "C = 0 and D = 1; the manifold is the full diagonal")));

    // Partial Fourier transform in the second variable, d = 2.
    Mat p2 = Mat::Zero(2, 2);
    p2(1, 1) = -1.0;
    Mat mi = -Mat::Identity(2, 2);
    GeneratorWord pi2(2, {Generator::chirp(p2), Generator::fourier(2),
                          Generator::chirp(p2), Generator::dilation(mi),
                          Generator::fourier(2), Generator::chirp(p2)});
    out.push_back(make_entry(
        "pi2_interchange", pi2,
        expected_doc("pi2_interchange", 2, true, "D-restricted-identity", 1, true,
                     "rank1-dilation",
                     "rank(B) = 1; the manifold is a line strictly inside the "
                     "diagonal")));

    // D = I with C = 0 (upper shear in d = 2).
    Mat bsym(2, 2);
    bsym << 1.0, 0.5, 0.5, -1.0;
    GeneratorWord c0(2, {Generator::fourier(2), Generator::chirp(-bsym),
                         Generator::dilation(mi), Generator::fourier(2)});
    out.push_back(make_entry(
        "cor33_rank0", c0,
        expected_doc("cor33_rank0", 2, true, "D-restricted-identity", 2, false,
                     "C-zero", "D = I and C = 0; the manifold is the diagonal")));

    // D = I with rank(C) = 1.
    Mat p1(2, 2);
    p1 << 1.0, 1.0, 1.0, 1.0;
    GeneratorWord c1(2, {Generator::fourier(2), Generator::chirp(-bsym),
                         Generator::dilation(mi), Generator::fourier(2),
                         Generator::chirp(p1)});
    out.push_back(make_entry(
        "cor33_rank1", c1,
        expected_doc("cor33_rank1", 2, true, "D-restricted-identity", 1, true,
                     "rank1-dilation",
                     "D = I; the manifold is the diagonal over ker(C)")));

    return out;
}

}  // namespace mqd
