#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "symfi/pipeline.hpp"
#include "symfi/version.hpp"

namespace {

using namespace symfi;

void print_spectrum_line(const std::string& name, const VectorXd& values) {
    std::cout << name << ":";
    for (Index i = 0; i < values.size(); ++i) std::cout << ' ' << format_double(values(i));
    std::cout << '\n';
}

void print_report_summary(const SensitivityReport& report) {
    std::cout << "parameters:";
    for (const auto& label : report.fim_normalized.labels()) std::cout << ' ' << label.display();
    std::cout << '\n';
    std::cout << "condition number (raw): " << format_double(report.condition_raw) << '\n';
    std::cout << "condition number (" << to_string(report.fim_normalized.normalization())
              << "): " << format_double(report.condition_normalized) << '\n';
    print_spectrum_line("eigenvalues", report.eig.eigenvalues);
    print_spectrum_line("symplectic eigenvalues", report.sym.d);
    print_spectrum_line("per-variable contributions", report.contributions.per_variable);
}

int run_command(const std::string& config_path, const std::optional<long>& seed,
                const std::optional<long>& samples, const std::optional<std::string>& out) {
    RunConfig config = load_config(config_path);
    if (seed) {
        config.seed = static_cast<std::uint64_t>(*seed);
        config.estimator.seed = config.seed;
    }
    if (samples) {
        if (*samples < 2) throw ConfigError("--samples must be >= 2");
        config.samples = static_cast<int>(*samples);
        config.estimator.sample_count = config.samples;
    }
    if (out) config.output_dir = *out;

    SensitivityReport report = run(config);
    print_report_summary(report);
    if (!config.output_dir.empty()) {
        std::cout << "report written to " << config.output_dir << '\n';
    }
    return 0;
}

int decompose_command(const std::string& fim_path, const std::optional<std::string>& pairs,
                      const std::optional<std::string>& normalize_mode,
                      const std::optional<std::string>& out) {
    FisherMatrix fim = load_fim(fim_path);
    if (fim.dim() % 2 != 0) {
        throw DimensionOdd("decompose: FIM dimension " + std::to_string(fim.dim()) +
                           " is odd; the symplectic decomposition needs parameter pairs");
    }
    PairingSpec pairing = pairs ? parse_pairs(*pairs) : PairingSpec::natural(static_cast<int>(fim.dim() / 2));
    std::optional<Normalization> mode;
    if (normalize_mode) mode = normalization_from_string(*normalize_mode);

    SensitivityReport report = decompose_fim(fim, pairing, mode);
    print_report_summary(report);
    if (out) {
        emit_report(report, *out);
        std::cout << "report written to " << *out << '\n';
    }
    return 0;
}

int compare_command(const std::string& config_path, const std::vector<std::string>& pair_texts,
                    const std::optional<long>& seed, const std::optional<long>& samples,
                    const std::optional<std::string>& out) {
    RunConfig config = load_config(config_path);
    if (seed) {
        config.seed = static_cast<std::uint64_t>(*seed);
        config.estimator.seed = config.seed;
    }
    if (samples) {
        if (*samples < 2) throw ConfigError("--samples must be >= 2");
        config.samples = static_cast<int>(*samples);
        config.estimator.sample_count = config.samples;
    }

    std::vector<PairingSpec> pairings;
    for (const auto& text : pair_texts) pairings.push_back(parse_pairs(text));

    PairingComparison cmp = compare_pairings_full(config, pairings);
    print_spectrum_line("eigenvalues", cmp.eig.eigenvalues);
    for (size_t k = 0; k < cmp.spectra.size(); ++k) {
        print_spectrum_line("pairing " + std::to_string(k + 1) + " symplectic eigenvalues",
                            cmp.spectra[k].d);
    }

    if (out) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(*out, ec);
        if (ec) throw IoError("cannot create output directory '" + *out + "': " + ec.message());
        nlohmann::json j;
        j["schema"] = kReportSchema;
        j["eigenvalues"] = std::vector<double>(cmp.eig.eigenvalues.data(),
                                               cmp.eig.eigenvalues.data() + cmp.eig.eigenvalues.size());
        nlohmann::json spectra = nlohmann::json::array();
        for (size_t k = 0; k < cmp.spectra.size(); ++k) {
            nlohmann::json entry;
            nlohmann::json pair_list = nlohmann::json::array();
            for (const auto& [a, b] : pairings[k].pairs()) pair_list.push_back({a, b});
            entry["pairing"] = pair_list;
            entry["symplectic_eigenvalues"] = std::vector<double>(
                cmp.spectra[k].d.data(), cmp.spectra[k].d.data() + cmp.spectra[k].d.size());
            spectra.push_back(std::move(entry));
        }
        j["pairings"] = spectra;
        std::ofstream file(fs::path(*out) / "compare_pairings.json");
        if (!file) throw IoError("cannot write compare_pairings.json in '" + *out + "'");
        file << j.dump(2) << '\n';
        std::cout << "comparison written to " << *out << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fisher information sensitivity spectra: standard and symplectic (Williamson) decompositions"};
    app.set_version_flag("--version", symfi::kVersion);
    app.require_subcommand(1);

    std::string config_path, fim_path;
    std::optional<long> seed, samples;
    std::optional<std::string> out, pairs, normalize_mode;
    std::vector<std::string> pair_list;

    CLI::App* cmd_run = app.add_subcommand("run", "Estimate a FIM and report both spectral decompositions");
    cmd_run->add_option("--config", config_path, "run configuration file")->required();
    cmd_run->add_option("--seed", seed, "override the RNG seed");
    cmd_run->add_option("--samples", samples, "override the Monte Carlo sample count");
    cmd_run->add_option("--out", out, "override the output directory");

    CLI::App* cmd_dec = app.add_subcommand("decompose", "Decompose a FIM loaded from a matrix file");
    cmd_dec->add_option("--fim", fim_path, "FIM matrix file")->required();
    cmd_dec->add_option("--pairs", pairs, "pairing, e.g. \"0,1; 2,3\" (default: consecutive pairs)");
    cmd_dec->add_option("--normalize", normalize_mode, "re-normalize first: proportional or stddev");
    cmd_dec->add_option("--out", out, "write the full report here");

    CLI::App* cmd_cmp = app.add_subcommand("compare-pairings",
                                           "Decompose one estimated FIM under several pairings");
    cmd_cmp->add_option("--config", config_path, "run configuration file")->required();
    cmd_cmp->add_option("--pairs", pair_list, "pairing (repeatable)")->required();
    cmd_cmp->add_option("--seed", seed, "override the RNG seed");
    cmd_cmp->add_option("--samples", samples, "override the Monte Carlo sample count");
    cmd_cmp->add_option("--out", out, "write the comparison here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(cmd_run)) return run_command(config_path, seed, samples, out);
        if (app.got_subcommand(cmd_dec)) return decompose_command(fim_path, pairs, normalize_mode, out);
        if (app.got_subcommand(cmd_cmp)) return compare_command(config_path, pair_list, seed, samples, out);
    } catch (const symfi::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 4;
    } catch (const symfi::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const symfi::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
