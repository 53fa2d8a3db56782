#include "symfi/distributions.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

namespace symfi {

InputModel::InputModel(std::vector<NormalVariable> variables) : vars_(std::move(variables)) {
    if (vars_.empty()) throw ConfigError("InputModel: at least one variable required");
    std::unordered_set<std::string> names;
    for (const auto& v : vars_) {
        if (v.name.empty()) throw ConfigError("InputModel: variable names must be nonempty");
        if (!names.insert(v.name).second) {
            throw ConfigError("InputModel: duplicate variable name '" + v.name + "'");
        }
        if (!(v.stddev > 0.0) || !std::isfinite(v.stddev) || !std::isfinite(v.mean)) {
            throw ConfigError("InputModel: variable '" + v.name + "' needs finite mean and stddev > 0");
        }
    }
}

std::vector<ParamLabel> InputModel::labels() const {
    std::vector<ParamLabel> out;
    out.reserve(vars_.size() * 2);
    for (const auto& v : vars_) {
        out.push_back(ParamLabel::mean(v.name, v.mean));
        out.push_back(ParamLabel::stddev(v.name, v.stddev));
    }
    return out;
}

namespace rng {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t mix(std::uint64_t seed, std::uint64_t sample, std::uint64_t column) {
    std::uint64_t h = splitmix(seed ^ 0x5851f42d4c957f2dULL);
    h = splitmix(h ^ sample);
    h = splitmix(h ^ column);
    return h;
}

double uniform01(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

double normal_quantile(double p) {
    // Wichura's algorithm AS 241, PPND16.
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r + 6.7265770927008700853e4) * r +
                    4.5921953931549871457e4) * r + 1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r + 3.9307895800092710610e4) * r +
                    2.1213794301586595867e4) * r + 5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    if (r <= 0.0) return q < 0.0 ? -std::numeric_limits<double>::infinity()
                                 : std::numeric_limits<double>::infinity();
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r + 2.41780725177450611770e-1) * r +
                   1.27045825245236838258e0) * r + 3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r + 1.51986665636164571966e-2) * r +
                   1.48103976427480074590e-1) * r + 6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 1.24266094738807843860e-3) * r +
                   2.65321895265761230930e-2) * r + 2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r + 1.84631831751005468180e-5) * r +
                   7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

double standard_normal(std::uint64_t seed, std::uint64_t sample, std::uint64_t column) {
    return normal_quantile(uniform01(mix(seed, sample, column)));
}

} // namespace rng

MatrixXd sample(const InputModel& model, int count, std::uint64_t seed) {
    if (count < 1) throw ConfigError("sample: count must be >= 1");
    const int n = model.n_variables();
    MatrixXd out(count, n);
    for (int i = 0; i < count; ++i) {
        for (int v = 0; v < n; ++v) {
            const NormalVariable& var = model.variable(v);
            out(i, v) = var.mean + var.stddev * rng::standard_normal(seed, static_cast<std::uint64_t>(i),
                                                                     static_cast<std::uint64_t>(v));
        }
    }
    return out;
}

VectorXd score(const InputModel& model, const VectorXd& x) {
    const int n = model.n_variables();
    if (x.size() != n) {
        throw DimensionMismatch("score: point has " + std::to_string(x.size()) + " entries for " +
                                std::to_string(n) + " variables");
    }
    VectorXd s(2 * n);
    for (int v = 0; v < n; ++v) {
        const NormalVariable& var = model.variable(v);
        double d = x(v) - var.mean;
        double s2 = var.stddev * var.stddev;
        s(2 * v) = d / s2;
        s(2 * v + 1) = (d * d - s2) / (s2 * var.stddev);
    }
    return s;
}

MatrixXd score_rows(const InputModel& model, const MatrixXd& x) {
    const int n = model.n_variables();
    if (x.cols() != n) {
        throw DimensionMismatch("score_rows: samples have " + std::to_string(x.cols()) + " columns for " +
                                std::to_string(n) + " variables");
    }
    MatrixXd s(x.rows(), 2 * n);
    for (Index i = 0; i < x.rows(); ++i) {
        s.row(i) = score(model, x.row(i).transpose()).transpose();
    }
    return s;
}

FisherMatrix analytic_fim(const InputModel& model) {
    const int n = model.n_variables();
    VectorXd diag(2 * n);
    for (int v = 0; v < n; ++v) {
        double inv_s2 = 1.0 / (model.variable(v).stddev * model.variable(v).stddev);
        diag(2 * v) = inv_s2;
        diag(2 * v + 1) = 2.0 * inv_s2;
    }
    return FisherMatrix(MatrixXd(diag.asDiagonal()), model.labels(), Normalization::raw);
}

} // namespace symfi
