#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "symfi/config.hpp"
#include "symfi/entropy.hpp"

namespace symfi {

struct ReportMetadata {
    std::uint64_t seed = 0;
    int samples = 0;
    std::string generated_at; // ISO 8601 UTC
    std::string tool_version;
    std::string source; // "run" or "decompose"
    nlohmann::json config_echo;
};

/// Everything a sensitivity run produces: the raw and normalized FIM, both
/// spectral decompositions, conditioning diagnostics and the per-parameter
/// entropy contributions. Symplectic eigenvector rows are kept in the
/// canonical (paired) layout; pairing.to_original() maps them back onto the
/// user parameter order.
struct SensitivityReport {
    FisherMatrix fim_raw;
    FisherMatrix fim_normalized;
    PairingSpec pairing;
    EigenSpectrum eig; // of fim_normalized, user parameter order
    SymplecticSpectrum sym;
    double condition_raw = 0.0;
    double condition_normalized = 0.0;
    ContributionReport contributions;
    ReportMetadata metadata;
};

/// Estimation pipeline: estimate (analytic for the identity model) ->
/// normalize -> pair -> decompose -> aggregate. Writes report files when the
/// config names an output directory.
SensitivityReport run(const RunConfig& config);

/// Decomposition pieces for an externally supplied FIM (the CLI `decompose`
/// path); optionally re-normalizes with the labels' nominal values first.
SensitivityReport decompose_fim(const FisherMatrix& fim, const PairingSpec& pairing,
                                std::optional<Normalization> renormalize = std::nullopt);

/// Writes report.json, fim.csv, eigen.csv, symplectic.csv and the
/// plotdata/*.csv set. Refuses to emit any report whose eigenvalue and
/// symplectic-eigenvalue products disagree (the determinant audit).
void emit_report(const SensitivityReport& report, const std::string& dir);

nlohmann::json report_json(const SensitivityReport& report);

struct PairingComparison {
    FisherMatrix fim_normalized;
    EigenSpectrum eig; // invariant across pairings, reported once
    std::vector<SymplecticSpectrum> spectra;
};

/// One estimation pass, one Williamson decomposition per pairing.
PairingComparison compare_pairings_full(const RunConfig& config, const std::vector<PairingSpec>& pairings);
std::vector<SymplecticSpectrum> compare_pairings(const RunConfig& config,
                                                 const std::vector<PairingSpec>& pairings);

} // namespace symfi
