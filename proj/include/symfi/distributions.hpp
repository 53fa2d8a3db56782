#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symfi/fim.hpp"

namespace symfi {

/// One independent normally distributed input variable.
struct NormalVariable {
    std::string name;
    double mean = 0.0;
    double stddev = 1.0;
};

/// Parametric input model: independent normal variables with unique names
/// and strictly positive standard deviations. Parameters are ordered
/// interleaved: (mu_1, sigma_1, mu_2, sigma_2, ...).
class InputModel {
public:
    explicit InputModel(std::vector<NormalVariable> variables);

    int n_variables() const { return static_cast<int>(vars_.size()); }
    int n_parameters() const { return 2 * n_variables(); }
    const std::vector<NormalVariable>& variables() const { return vars_; }
    const NormalVariable& variable(int i) const { return vars_[static_cast<size_t>(i)]; }

    /// Interleaved (mu, sigma) labels carrying the nominal values.
    std::vector<ParamLabel> labels() const;

private:
    std::vector<NormalVariable> vars_;
};

namespace rng {

/// Stateless counter mix: one 64-bit word per (seed, sample, column) cell.
/// Sampling through this gives bitwise-identical draws for a fixed seed no
/// matter how the sample loop is batched or threaded.
std::uint64_t mix(std::uint64_t seed, std::uint64_t sample, std::uint64_t column);

/// Uniform draw in the open interval (0, 1) from one 64-bit word.
double uniform01(std::uint64_t bits);

/// Inverse standard normal CDF (Wichura's PPND16), |error| ~ 1e-15.
double normal_quantile(double p);

/// Standard normal draw for one counter cell.
double standard_normal(std::uint64_t seed, std::uint64_t sample, std::uint64_t column);

} // namespace rng

/// count x n matrix of i.i.d. draws, row per sample, column per variable.
MatrixXd sample(const InputModel& model, int count, std::uint64_t seed);

/// Score vector d ln p(x)/d b at one point, interleaved over parameters:
/// d/d mu = (x - mu)/sigma^2, d/d sigma = ((x - mu)^2 - sigma^2)/sigma^3.
VectorXd score(const InputModel& model, const VectorXd& x);

/// Scores for every row of a sample matrix: count x 2n.
MatrixXd score_rows(const InputModel& model, const MatrixXd& x);

/// Closed-form FIM for independent normals and the identity output map:
/// diag(sigma_1^-2, 2 sigma_1^-2, sigma_2^-2, ...), raw normalization.
FisherMatrix analytic_fim(const InputModel& model);

} // namespace symfi
