#include "symfi/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace symfi {

namespace {

const std::vector<std::string> kBeamNames{"E", "rho", "L", "w", "t"};
const std::vector<double> kBeamMeans{69e9, 2700.0, 0.45, 2e-2, 2e-3};
const std::vector<double> kBeamCov1{1.0 / 200.0, 1.0 / 80.0, 1.0 / 100.0, 1.0 / 60.0, 1.0 / 80.0};
const std::vector<double> kBeamCov2{1.0 / 5.0, 1.0 / 5.0, 1.0 / 30.0, 1.0 / 6.0, 1.0 / 8.0};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& tok, const std::string& context) {
    try {
        size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("config: cannot parse number '" + tok + "' for " + context);
    }
}

long parse_integer(const std::string& tok, const std::string& context) {
    try {
        size_t used = 0;
        long v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("config: cannot parse integer '" + tok + "' for " + context);
    }
}

InputModel beam_case_inputs(const std::string& beam_case) {
    const auto& cov = (beam_case == "case1") ? kBeamCov1 : kBeamCov2;
    std::vector<NormalVariable> vars;
    for (size_t i = 0; i < kBeamNames.size(); ++i) {
        vars.push_back({kBeamNames[i], kBeamMeans[i], kBeamMeans[i] * cov[i]});
    }
    return InputModel(std::move(vars));
}

InputModel benchmark_default_inputs() {
    std::vector<NormalVariable> vars;
    for (int i = 1; i <= BenchmarkFunction::dim; ++i) {
        vars.push_back({"x" + std::to_string(i), 0.0, 1.0});
    }
    return InputModel(std::move(vars));
}

} // namespace

std::string to_string(RunConfig::Model m) {
    switch (m) {
    case RunConfig::Model::identity: return "identity";
    case RunConfig::Model::benchmark: return "benchmark";
    case RunConfig::Model::beam: return "beam";
    }
    return "identity";
}

RunConfig::Model model_from_string(const std::string& s) {
    if (s == "identity") return RunConfig::Model::identity;
    if (s == "benchmark") return RunConfig::Model::benchmark;
    if (s == "beam") return RunConfig::Model::beam;
    throw ParseError("config: unknown model '" + s + "' (expected identity, benchmark or beam)");
}

PairingSpec parse_pairs(const std::string& text) {
    std::vector<std::pair<int, int>> pairs;
    std::stringstream ss(text);
    std::string chunk;
    while (std::getline(ss, chunk, ';')) {
        chunk = trim(chunk);
        if (chunk.empty()) continue;
        size_t comma = chunk.find(',');
        if (comma == std::string::npos) {
            throw ParseError("pairing '" + chunk + "' must be two comma-separated indices");
        }
        int a = static_cast<int>(parse_integer(trim(chunk.substr(0, comma)), "pairing"));
        int b = static_cast<int>(parse_integer(trim(chunk.substr(comma + 1)), "pairing"));
        pairs.emplace_back(a, b);
    }
    if (pairs.empty()) throw ParseError("pairing text contains no pairs");
    return PairingSpec(std::move(pairs));
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");

    RunConfig config;
    std::vector<NormalVariable> inputs;
    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("config line " + std::to_string(line_no) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "run" && section != "inputs" && section != "benchmark" && section != "beam" &&
                section != "pairing" && section != "estimator") {
                throw ParseError("config: unknown section [" + section + "]");
            }
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ParseError("config line " + std::to_string(line_no) + ": empty key or value");
        }

        if (section == "run") {
            if (key == "model") {
                config.model = model_from_string(value);
            } else if (key == "samples") {
                long v = parse_integer(value, "samples");
                if (v < 2) throw ParseError("config: samples must be >= 2");
                config.samples = static_cast<int>(v);
            } else if (key == "seed") {
                config.seed = static_cast<std::uint64_t>(parse_integer(value, "seed"));
            } else if (key == "normalization") {
                config.normalization = normalization_from_string(value);
            } else if (key == "out") {
                config.output_dir = value;
            } else {
                throw ParseError("config: unknown key '" + key + "' in [run]");
            }
        } else if (section == "inputs") {
            size_t comma = value.find(',');
            if (comma == std::string::npos) {
                throw ParseError("config: input '" + key + "' must be 'mean, stddev'");
            }
            double mean = parse_number(trim(value.substr(0, comma)), "input " + key);
            double sd = parse_number(trim(value.substr(comma + 1)), "input " + key);
            inputs.push_back({key, mean, sd});
        } else if (section == "benchmark") {
            if (key == "coefficients") {
                config.benchmark_coefficients = value;
            } else {
                throw ParseError("config: unknown key '" + key + "' in [benchmark]");
            }
        } else if (section == "beam") {
            if (key == "case") {
                if (value != "case1" && value != "case2" && value != "custom") {
                    throw ParseError("config: beam case must be case1, case2 or custom");
                }
                config.beam_case = value;
            } else if (key == "modes") {
                config.beam_modes = static_cast<int>(parse_integer(value, "modes"));
            } else if (key == "damping") {
                config.beam_damping = parse_number(value, "damping");
            } else if (key == "excitation") {
                config.beam_excitation = parse_number(value, "excitation");
            } else if (key == "stations") {
                config.beam_stations = static_cast<int>(parse_integer(value, "stations"));
            } else {
                throw ParseError("config: unknown key '" + key + "' in [beam]");
            }
        } else if (section == "pairing") {
            if (key == "pairs") {
                config.pairing = parse_pairs(value);
            } else {
                throw ParseError("config: unknown key '" + key + "' in [pairing]");
            }
        } else if (section == "estimator") {
            if (key == "bandwidth") {
                if (value == "silverman") {
                    config.estimator.bandwidth_rule = EstimatorConfig::BandwidthRule::silverman;
                } else if (value.rfind("fixed:", 0) == 0) {
                    config.estimator.bandwidth_rule = EstimatorConfig::BandwidthRule::fixed;
                    std::stringstream hs(value.substr(6));
                    std::vector<double> hvals;
                    std::string tok;
                    while (hs >> tok) hvals.push_back(parse_number(tok, "bandwidth"));
                    if (hvals.empty()) throw ParseError("config: fixed bandwidth list is empty");
                    config.estimator.fixed_bandwidths =
                        Eigen::Map<VectorXd>(hvals.data(), static_cast<Index>(hvals.size()));
                } else {
                    throw ParseError("config: bandwidth must be 'silverman' or 'fixed: h1 h2 ...'");
                }
            } else {
                throw ParseError("config: unknown key '" + key + "' in [estimator]");
            }
        } else {
            throw ParseError("config line " + std::to_string(line_no) + ": key outside any section");
        }
    }

    if (!inputs.empty()) {
        if (config.model == RunConfig::Model::beam && config.beam_case != "custom") {
            throw ParseError("config: [inputs] conflicts with beam case '" + config.beam_case +
                             "'; use case = custom");
        }
        config.inputs = InputModel(std::move(inputs));
    }
    config.estimator.sample_count = config.samples;
    config.estimator.seed = config.seed;
    return config;
}

InputModel resolved_inputs(const RunConfig& config) {
    if (config.inputs) {
        int n = config.inputs->n_variables();
        if (config.model == RunConfig::Model::benchmark && n != BenchmarkFunction::dim) {
            throw ConfigError("benchmark model needs exactly 15 input variables, got " + std::to_string(n));
        }
        if (config.model == RunConfig::Model::beam && n != 5) {
            throw ConfigError("beam model needs exactly 5 input variables (E, rho, L, w, t), got " +
                              std::to_string(n));
        }
        return *config.inputs;
    }
    switch (config.model) {
    case RunConfig::Model::identity:
        throw ConfigError("identity model requires an [inputs] section");
    case RunConfig::Model::benchmark:
        return benchmark_default_inputs();
    case RunConfig::Model::beam:
        if (config.beam_case == "custom") {
            throw ConfigError("beam case 'custom' requires an [inputs] section");
        }
        return beam_case_inputs(config.beam_case);
    }
    throw ConfigError("unreachable model");
}

PairingSpec resolved_pairing(const RunConfig& config, int n_vars) {
    if (config.pairing) return *config.pairing;
    return PairingSpec::natural(n_vars);
}

BeamModel beam_from_config(const RunConfig& config) {
    InputModel inputs = resolved_inputs(config);
    BeamModel beam;
    beam.elastic_modulus = inputs.variable(0).mean;
    beam.density = inputs.variable(1).mean;
    beam.length = inputs.variable(2).mean;
    beam.width = inputs.variable(3).mean;
    beam.thickness = inputs.variable(4).mean;
    beam.n_modes = config.beam_modes;
    beam.modal_damping = config.beam_damping;
    beam.excitation_fraction = config.beam_excitation;
    beam.response_grid = config.beam_stations;
    return beam;
}

nlohmann::json config_echo(const RunConfig& config) {
    nlohmann::json echo;
    echo["model"] = to_string(config.model);
    echo["samples"] = config.samples;
    echo["seed"] = config.seed;
    echo["normalization"] = to_string(config.normalization);
    echo["out"] = config.output_dir;

    InputModel inputs = resolved_inputs(config);
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& v : inputs.variables()) {
        vars.push_back({{"name", v.name},
                        {"mean", v.mean},
                        {"stddev", v.stddev},
                        {"cov", v.mean != 0.0 ? v.stddev / v.mean : 0.0}});
    }
    echo["inputs"] = vars;

    PairingSpec pairing = resolved_pairing(config, inputs.n_variables());
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [a, b] : pairing.pairs()) {
        pairs.push_back({a, b});
    }
    echo["pairing"] = pairs;

    if (config.estimator.bandwidth_rule == EstimatorConfig::BandwidthRule::silverman) {
        echo["estimator"] = {{"bandwidth", "silverman"}};
    } else {
        std::vector<double> h(config.estimator.fixed_bandwidths.data(),
                              config.estimator.fixed_bandwidths.data() + config.estimator.fixed_bandwidths.size());
        echo["estimator"] = {{"bandwidth", "fixed"}, {"values", h}};
    }

    if (config.model == RunConfig::Model::benchmark) {
        echo["benchmark"] = {{"coefficients", config.benchmark_coefficients}};
    }
    if (config.model == RunConfig::Model::beam) {
        echo["beam"] = {{"case", config.beam_case},
                        {"modes", config.beam_modes},
                        {"damping", config.beam_damping},
                        {"excitation", config.beam_excitation},
                        {"stations", config.beam_stations}};
    }
    return echo;
}

RunConfig config_from_echo(const nlohmann::json& echo) {
    RunConfig config;
    config.model = model_from_string(echo.at("model").get<std::string>());
    config.samples = echo.at("samples").get<int>();
    config.seed = echo.at("seed").get<std::uint64_t>();
    config.normalization = normalization_from_string(echo.at("normalization").get<std::string>());
    config.output_dir = echo.value("out", "");

    std::vector<NormalVariable> vars;
    for (const auto& v : echo.at("inputs")) {
        vars.push_back({v.at("name").get<std::string>(), v.at("mean").get<double>(), v.at("stddev").get<double>()});
    }
    config.inputs = InputModel(std::move(vars));

    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : echo.at("pairing")) {
        pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    }
    config.pairing = PairingSpec(std::move(pairs));

    const auto& est = echo.at("estimator");
    if (est.at("bandwidth").get<std::string>() == "fixed") {
        config.estimator.bandwidth_rule = EstimatorConfig::BandwidthRule::fixed;
        std::vector<double> h = est.at("values").get<std::vector<double>>();
        config.estimator.fixed_bandwidths = Eigen::Map<VectorXd>(h.data(), static_cast<Index>(h.size()));
    }
    if (echo.contains("benchmark")) {
        config.benchmark_coefficients = echo["benchmark"].at("coefficients").get<std::string>();
    }
    if (echo.contains("beam")) {
        const auto& beam = echo["beam"];
        config.beam_case = beam.at("case").get<std::string>();
        config.beam_modes = beam.at("modes").get<int>();
        config.beam_damping = beam.at("damping").get<double>();
        config.beam_excitation = beam.at("excitation").get<double>();
        config.beam_stations = beam.at("stations").get<int>();
        config.beam_case = "custom"; // the echo carries the inputs explicitly
    }
    config.estimator.sample_count = config.samples;
    config.estimator.seed = config.seed;
    return config;
}

} // namespace symfi
