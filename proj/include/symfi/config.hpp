#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "symfi/distributions.hpp"
#include "symfi/estimator.hpp"
#include "symfi/models.hpp"

namespace symfi {

/// Everything one sensitivity run needs. Loaded from a sectioned key-value
/// config file (see the repository README for the grammar) or rebuilt from
/// the config echo of an earlier report.
struct RunConfig {
    enum class Model { identity, benchmark, beam };

    Model model = Model::identity;
    std::optional<InputModel> inputs;  // resolved against model defaults
    int samples = 20000;
    std::uint64_t seed = 0;
    Normalization normalization = Normalization::stddev;
    std::optional<PairingSpec> pairing; // default: natural (mu, sigma) pairs
    EstimatorConfig estimator;
    std::string output_dir;

    // model == benchmark
    std::string benchmark_coefficients;

    // model == beam
    std::string beam_case = "case1"; // case1 | case2 | custom
    int beam_modes = 3;
    double beam_damping = 0.1;
    double beam_excitation = 0.5;
    int beam_stations = 21;
};

std::string to_string(RunConfig::Model m);
RunConfig::Model model_from_string(const std::string& s);

/// Parse the sectioned key-value config format. Unknown sections or keys
/// are rejected.
RunConfig load_config(const std::string& path);

/// Inputs with model defaults applied: Table-1 beam cases, standard normal
/// benchmark inputs. Throws ConfigError when the dimensions disagree with
/// the model or when an identity run omits its inputs.
InputModel resolved_inputs(const RunConfig& config);

/// Effective pairing: the configured one, or natural (mu, sigma) pairs.
PairingSpec resolved_pairing(const RunConfig& config, int n_vars);

/// The nominal beam built from the run's input means plus the configured
/// modal settings.
BeamModel beam_from_config(const RunConfig& config);

/// Lossless structured echo of the effective configuration; feeding it to
/// config_from_echo reproduces the run.
nlohmann::json config_echo(const RunConfig& config);
RunConfig config_from_echo(const nlohmann::json& echo);

/// "0,1; 2,3; 4,5" -> PairingSpec. Pairs separated by ';', members by ','.
PairingSpec parse_pairs(const std::string& text);

} // namespace symfi
