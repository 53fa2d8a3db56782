#include "symfi/estimator.hpp"

#include <cmath>

namespace symfi {

namespace {

void check_samples(const OutputSamples& samples) {
    if (samples.y.rows() != samples.x_scores.rows()) {
        throw DimensionMismatch("output_scores: y and x_scores row counts differ");
    }
    if (samples.y.rows() < 2) {
        throw DimensionMismatch("output_scores: need at least 2 samples");
    }
    if (!samples.y.allFinite() || !samples.x_scores.allFinite()) {
        throw NumericalError("output_scores: samples contain non-finite values");
    }
}

VectorXd bandwidths(const OutputSamples& samples, const EstimatorConfig& cfg) {
    const Index q = samples.y.cols();
    if (cfg.bandwidth_rule == EstimatorConfig::BandwidthRule::fixed) {
        if (cfg.fixed_bandwidths.size() != q) {
            throw DimensionMismatch("output_scores: " + std::to_string(cfg.fixed_bandwidths.size()) +
                                    " fixed bandwidths for " + std::to_string(q) + " output dimensions");
        }
        if (cfg.fixed_bandwidths.minCoeff() <= 0.0) {
            throw ConfigError("output_scores: fixed bandwidths must be positive");
        }
        return cfg.fixed_bandwidths;
    }
    const double n = static_cast<double>(samples.y.rows());
    VectorXd h(q);
    for (Index d = 0; d < q; ++d) {
        double mean = samples.y.col(d).mean();
        double sd = std::sqrt((samples.y.col(d).array() - mean).square().sum() / (n - 1.0));
        // A constant output column carries no information; any positive
        // bandwidth reduces the regression to the plain score mean.
        if (sd == 0.0) sd = 1.0;
        h(d) = 1.06 * sd * std::pow(n, -1.0 / (static_cast<double>(q) + 4.0));
    }
    return h;
}

} // namespace

MatrixXd output_scores(const OutputSamples& samples, const EstimatorConfig& cfg, ScoreRoute route) {
    check_samples(samples);
    if (route == ScoreRoute::passthrough) {
        return samples.x_scores;
    }
    const Index q = samples.y.cols();
    if (q > 3) {
        throw OutputDimTooHigh("output_scores: kernel regression supports at most 3 output dimensions, got " +
                               std::to_string(q));
    }
    const Index n = samples.y.rows();
    const Index p = samples.x_scores.cols();

    VectorXd h = bandwidths(samples, cfg);
    MatrixXd scaled = samples.y;
    for (Index d = 0; d < q; ++d) scaled.col(d) /= h(d);

    MatrixXd out(n, p);
    bool degenerate = false;

// Each query row is reduced in a fixed serial order, so the result is
// bitwise identical for any thread count.
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
        // max-shifted log weights: the self weight keeps the denominator >= 1
        VectorXd log_w(n);
        double log_max = -std::numeric_limits<double>::infinity();
        for (Index m = 0; m < n; ++m) {
            double d2 = (scaled.row(m) - scaled.row(i)).squaredNorm();
            log_w(m) = -0.5 * d2;
            if (log_w(m) > log_max) log_max = log_w(m);
        }
        double denom = 0.0;
        Eigen::RowVectorXd numer = Eigen::RowVectorXd::Zero(p);
        for (Index m = 0; m < n; ++m) {
            double w = std::exp(log_w(m) - log_max);
            denom += w;
            numer += w * samples.x_scores.row(m);
        }
        if (!(denom > 0.0) || !std::isfinite(denom)) {
#pragma omp atomic write
            degenerate = true;
            continue;
        }
        out.row(i) = numer / denom;
    }
    if (degenerate) {
        throw DegenerateKernel("output_scores: kernel weights vanished for at least one query point");
    }
    return out;
}

OutputSamples draw_output_samples(const InputModel& model, const OutputMap& h, const EstimatorConfig& cfg) {
    if (h.input_dim() != model.n_variables()) {
        throw DimensionMismatch("estimate_fim: map expects " + std::to_string(h.input_dim()) +
                                " inputs, model has " + std::to_string(model.n_variables()));
    }
    if (cfg.sample_count < 2) throw ConfigError("estimate_fim: sample count must be >= 2");

    OutputSamples samples;
    MatrixXd x = sample(model, cfg.sample_count, cfg.seed);
    samples.x_scores = score_rows(model, x);
    if (h.is_identity()) {
        samples.y = std::move(x);
        return samples;
    }
    samples.y.resize(cfg.sample_count, h.output_dim());
    for (Index i = 0; i < x.rows(); ++i) {
        samples.y.row(i) = h(x.row(i).transpose()).transpose();
    }
    if (h.scale_by_ensemble_max()) {
        for (Index d = 0; d < samples.y.cols(); ++d) {
            double peak = samples.y.col(d).cwiseAbs().maxCoeff();
            if (peak > 0.0) samples.y.col(d) /= peak;
        }
    }
    return samples;
}

FisherMatrix estimate_fim(const InputModel& model, const OutputMap& h, const EstimatorConfig& cfg) {
    OutputSamples samples = draw_output_samples(model, h, cfg);
    ScoreRoute route = h.is_identity() ? ScoreRoute::passthrough : ScoreRoute::kernel;
    MatrixXd s = output_scores(samples, cfg, route);
    MatrixXd f = (s.transpose() * s) / static_cast<double>(s.rows());
    return FisherMatrix(std::move(f), model.labels(), Normalization::raw);
}

} // namespace symfi
