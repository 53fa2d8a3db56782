#include "symfi/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "symfi/version.hpp"

namespace symfi {

namespace {

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

FisherMatrix estimate_for(const RunConfig& config, const InputModel& inputs) {
    // the top-level sample count and seed are authoritative
    EstimatorConfig estimator = config.estimator;
    estimator.sample_count = config.samples;
    estimator.seed = config.seed;

    switch (config.model) {
    case RunConfig::Model::identity:
        // y = x carries the full input information; the analytic FIM is the
        // exact limit of the estimator and costs nothing.
        return analytic_fim(inputs);
    case RunConfig::Model::benchmark: {
        if (config.benchmark_coefficients.empty()) {
            throw ConfigError("benchmark model requires [benchmark] coefficients = <path>");
        }
        BenchmarkFunction f = load_benchmark_coefficients(config.benchmark_coefficients);
        return estimate_fim(inputs, benchmark_map(f), estimator);
    }
    case RunConfig::Model::beam:
        return estimate_fim(inputs, beam_map(beam_from_config(config)), estimator);
    }
    throw ConfigError("unreachable model");
}

SensitivityReport assemble(FisherMatrix fim_raw, Normalization mode, const PairingSpec& pairing,
                           ReportMetadata metadata) {
    pairing.validate(fim_raw.dim());
    FisherMatrix fim_normalized = (mode == Normalization::raw) ? fim_raw : normalize(fim_raw, mode);
    FisherMatrix canonical = apply_pairing(fim_normalized, pairing);

    EigenSpectrum eig = sym_eig(fim_normalized.sym());
    SymplecticSpectrum sym = williamson(canonical.sym());
    ContributionReport contributions = parameter_contributions(fim_normalized, eig, pairing);

    double cond_raw = condition_number(fim_raw);
    double cond_nor = condition_number(fim_normalized);
    return SensitivityReport{std::move(fim_raw), std::move(fim_normalized), pairing,
                             std::move(eig),     std::move(sym),            cond_raw,
                             cond_nor,           std::move(contributions),  std::move(metadata)};
}

// |log prod lambda - log prod d^2|; must stay within 1e-8 for every report.
double determinant_gap(const SensitivityReport& report) {
    double log_lambda = report.eig.eigenvalues.array().log().sum();
    double log_d2 = 2.0 * report.sym.d.array().log().sum();
    return std::abs(log_lambda - log_d2);
}

void write_csv_line(std::ofstream& out, const VectorXd& values) {
    for (Index i = 0; i < values.size(); ++i) {
        if (i) out << ',';
        out << format_double(values(i));
    }
    out << '\n';
}

nlohmann::json matrix_json(const MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json vector_json(const VectorXd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

nlohmann::json labels_json(const std::vector<ParamLabel>& labels) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& label : labels) out.push_back(label.display());
    return out;
}

} // namespace

SensitivityReport run(const RunConfig& config) {
    InputModel inputs = resolved_inputs(config);
    PairingSpec pairing = resolved_pairing(config, inputs.n_variables());

    ReportMetadata metadata;
    metadata.seed = config.seed;
    metadata.samples = config.samples;
    metadata.generated_at = utc_timestamp();
    metadata.tool_version = kVersion;
    metadata.source = "run";
    metadata.config_echo = config_echo(config);

    SensitivityReport report =
        assemble(estimate_for(config, inputs), config.normalization, pairing, std::move(metadata));
    if (!config.output_dir.empty()) {
        emit_report(report, config.output_dir);
    }
    return report;
}

SensitivityReport decompose_fim(const FisherMatrix& fim, const PairingSpec& pairing,
                                std::optional<Normalization> renormalize) {
    ReportMetadata metadata;
    metadata.generated_at = utc_timestamp();
    metadata.tool_version = kVersion;
    metadata.source = "decompose";
    metadata.config_echo = nlohmann::json::object();
    return assemble(fim, renormalize.value_or(Normalization::raw), pairing, std::move(metadata));
}

PairingComparison compare_pairings_full(const RunConfig& config, const std::vector<PairingSpec>& pairings) {
    if (pairings.empty()) throw ConfigError("compare_pairings: need at least one pairing");
    InputModel inputs = resolved_inputs(config);
    FisherMatrix fim_raw = estimate_for(config, inputs);
    FisherMatrix fim_normalized =
        (config.normalization == Normalization::raw) ? fim_raw : normalize(fim_raw, config.normalization);

    PairingComparison out{fim_normalized, sym_eig(fim_normalized.sym()), {}};
    for (const auto& pairing : pairings) {
        pairing.validate(fim_normalized.dim());
        out.spectra.push_back(williamson(apply_pairing(fim_normalized, pairing).sym()));
    }
    return out;
}

std::vector<SymplecticSpectrum> compare_pairings(const RunConfig& config,
                                                 const std::vector<PairingSpec>& pairings) {
    return compare_pairings_full(config, pairings).spectra;
}

nlohmann::json report_json(const SensitivityReport& report) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["metadata"] = {{"seed", report.metadata.seed},
                     {"samples", report.metadata.samples},
                     {"generated_at", report.metadata.generated_at},
                     {"tool_version", report.metadata.tool_version},
                     {"source", report.metadata.source},
                     {"config_echo", report.metadata.config_echo}};

    j["fim"] = {{"raw", {{"labels", labels_json(report.fim_raw.labels())}, {"matrix", matrix_json(report.fim_raw.mat())}}},
                {"normalized",
                 {{"labels", labels_json(report.fim_normalized.labels())},
                  {"normalization", to_string(report.fim_normalized.normalization())},
                  {"matrix", matrix_json(report.fim_normalized.mat())}}},
                {"condition_number", {{"raw", report.condition_raw}, {"normalized", report.condition_normalized}}}};

    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [a, b] : report.pairing.pairs()) pairs.push_back({a, b});
    j["pairing"] = pairs;

    j["eigen"] = {{"values", vector_json(report.eig.eigenvalues)}, {"vectors", matrix_json(report.eig.eigenvectors)}};
    j["symplectic"] = {{"values", vector_json(report.sym.d)},
                       {"u", matrix_json(report.sym.U)},
                       {"v", matrix_json(report.sym.V)},
                       {"layout", "canonical"}};

    j["contributions"] = {{"per_parameter", vector_json(report.contributions.per_parameter)},
                          {"per_variable", vector_json(report.contributions.per_variable)}};

    double log_lambda = report.eig.eigenvalues.array().log().sum();
    double log_d2 = 2.0 * report.sym.d.array().log().sum();
    j["determinant_audit"] = {{"log_product_eigenvalues", log_lambda},
                              {"log_product_symplectic_squared", log_d2},
                              {"gap", std::abs(log_lambda - log_d2)}};
    return j;
}

void emit_report(const SensitivityReport& report, const std::string& dir) {
    double gap = determinant_gap(report);
    if (!(gap <= 1e-8)) {
        throw NumericalError("emit_report: determinant audit failed, |log prod lambda - log prod d^2| = " +
                             std::to_string(gap));
    }

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(dir) / "plotdata", ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());

    auto open = [&](const std::string& name) {
        std::ofstream out(fs::path(dir) / name);
        if (!out) throw IoError("cannot open '" + name + "' in '" + dir + "' for writing");
        return out;
    };

    const auto& labels = report.fim_normalized.labels();
    const Index dim = report.fim_normalized.dim();
    const Index n = report.sym.n;

    {
        std::ofstream out = open("report.json");
        out << report_json(report).dump(2) << '\n';
    }

    {
        std::ofstream out = open("fim.csv");
        for (Index j = 0; j < dim; ++j) out << (j ? "," : "") << labels[j].display();
        out << '\n';
        for (Index i = 0; i < dim; ++i) write_csv_line(out, report.fim_normalized.mat().row(i));
    }

    {
        // first line: eigenvalues; then one labeled row per parameter with
        // that parameter's component in each eigenvector
        std::ofstream out = open("eigen.csv");
        write_csv_line(out, report.eig.eigenvalues);
        out << "parameter";
        for (Index k = 0; k < dim; ++k) out << ",q" << (k + 1);
        out << '\n';
        for (Index p = 0; p < dim; ++p) {
            out << labels[p].display();
            for (Index k = 0; k < dim; ++k) out << ',' << format_double(report.eig.eigenvectors(p, k));
            out << '\n';
        }
    }

    // map canonical rows back onto the user parameter order
    std::vector<int> to_orig = report.pairing.to_original();
    std::vector<Index> row_of_param(dim);
    for (Index c = 0; c < dim; ++c) row_of_param[to_orig[c]] = c;

    {
        std::ofstream out = open("symplectic.csv");
        write_csv_line(out, report.sym.d);
        out << "parameter";
        for (Index k = 0; k < n; ++k) out << ",u" << (k + 1);
        for (Index k = 0; k < n; ++k) out << ",v" << (k + 1);
        out << '\n';
        for (Index p = 0; p < dim; ++p) {
            out << labels[p].display();
            Index c = row_of_param[p];
            for (Index k = 0; k < n; ++k) out << ',' << format_double(report.sym.U(c, k));
            for (Index k = 0; k < n; ++k) out << ',' << format_double(report.sym.V(c, k));
            out << '\n';
        }
    }

    {
        std::ofstream out = open("plotdata/eigen_spectrum.csv");
        out << "index,eigenvalue\n";
        for (Index k = 0; k < dim; ++k)
            out << (k + 1) << ',' << format_double(report.eig.eigenvalues(k)) << '\n';
    }
    {
        std::ofstream out = open("plotdata/symplectic_spectrum.csv");
        out << "index,symplectic_eigenvalue\n";
        for (Index k = 0; k < n; ++k) out << (k + 1) << ',' << format_double(report.sym.d(k)) << '\n';
    }
    {
        // leading eigenvectors, one bar group per parameter
        Index keep = std::min<Index>(4, dim);
        std::ofstream out = open("plotdata/eigen_vectors.csv");
        out << "parameter";
        for (Index k = 0; k < keep; ++k) out << ",q" << (k + 1);
        out << '\n';
        for (Index p = 0; p < dim; ++p) {
            out << labels[p].display();
            for (Index k = 0; k < keep; ++k) out << ',' << format_double(report.eig.eigenvectors(p, k));
            out << '\n';
        }
    }
    {
        // leading symplectic pairs in the user parameter order
        Index keep = std::min<Index>(2, n);
        std::ofstream out = open("plotdata/symplectic_vectors.csv");
        out << "parameter";
        for (Index k = 0; k < keep; ++k) out << ",u" << (k + 1) << ",v" << (k + 1);
        out << '\n';
        for (Index p = 0; p < dim; ++p) {
            out << labels[p].display();
            Index c = row_of_param[p];
            for (Index k = 0; k < keep; ++k) {
                out << ',' << format_double(report.sym.U(c, k)) << ',' << format_double(report.sym.V(c, k));
            }
            out << '\n';
        }
    }
    {
        std::ofstream out = open("plotdata/contributions.csv");
        out << "variable,contribution\n";
        for (int k = 0; k < report.pairing.n(); ++k) {
            const auto& [a, b] = report.pairing.pairs()[static_cast<size_t>(k)];
            std::string name = labels[a].variable == labels[b].variable
                                   ? labels[a].variable
                                   : labels[a].display() + "+" + labels[b].display();
            out << name << ',' << format_double(report.contributions.per_variable(k)) << '\n';
        }
    }
}

} // namespace symfi
