#pragma once

#include <cstdint>

#include "symfi/distributions.hpp"
#include "symfi/models.hpp"

namespace symfi {

/// Paired Monte Carlo draws: outputs y (N x q) and the exact input-parameter
/// scores (N x 2n) of the samples that produced them.
struct OutputSamples {
    MatrixXd y;
    MatrixXd x_scores;
};

struct EstimatorConfig {
    enum class BandwidthRule { silverman, fixed };

    BandwidthRule bandwidth_rule = BandwidthRule::silverman;
    VectorXd fixed_bandwidths; // one per output dimension when rule == fixed
    int sample_count = 20000;
    std::uint64_t seed = 0;
};

/// How output_scores turns input scores into output scores.
/// kernel: Nadaraya-Watson regression of the scores on y (q <= 3).
/// passthrough: the scores are already exact conditional expectations; used
/// for identity maps where y = x carries full information.
enum class ScoreRoute { kernel, passthrough };

/// Row i approximates E[input score | y = y_i] with a product Gaussian
/// kernel; bandwidth per output dimension from Silverman's rule
/// h = 1.06 sigma N^{-1/(q+4)} unless fixed. Weights are accumulated in log
/// space with a max shift. Throws OutputDimTooHigh for q > 3 on the kernel
/// route and DegenerateKernel when a query collects no usable weight.
MatrixXd output_scores(const OutputSamples& samples, const EstimatorConfig& cfg,
                       ScoreRoute route = ScoreRoute::kernel);

/// Likelihood-ratio Monte Carlo FIM estimate for y = h(x):
/// F_jk = (1/N) sum_m s_j(y_m) s_k(y_m) with s = output_scores. Identity
/// maps skip the regression (the conditional expectation is exact).
FisherMatrix estimate_fim(const InputModel& model, const OutputMap& h, const EstimatorConfig& cfg);

/// The sampling half of estimate_fim, exposed for reuse: draws, evaluates
/// the map (applying ensemble max scaling when the map requests it) and
/// collects exact input scores.
OutputSamples draw_output_samples(const InputModel& model, const OutputMap& h, const EstimatorConfig& cfg);

} // namespace symfi
