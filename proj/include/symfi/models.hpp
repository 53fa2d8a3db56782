#pragma once

#include <complex>
#include <functional>
#include <string>

#include "symfi/linalg.hpp"

namespace symfi {

/// Deterministic output map y = h(x). Identity maps are tagged so the
/// estimator can use the exact conditional-score shortcut; ensemble-scaled
/// maps ask the estimator to divide each output column by its ensemble max.
class OutputMap {
public:
    using Fn = std::function<VectorXd(const VectorXd&)>;

    OutputMap(int input_dim, int output_dim, Fn fn, std::string name = "custom");

    static OutputMap identity(int n);
    static OutputMap constant(int n, VectorXd value);
    static OutputMap coordinate(int n, int index); // scalar y = x_index

    VectorXd operator()(const VectorXd& x) const;

    int input_dim() const { return input_dim_; }
    int output_dim() const { return output_dim_; }
    bool is_identity() const { return identity_; }
    bool scale_by_ensemble_max() const { return ensemble_scaled_; }
    const std::string& name() const { return name_; }

private:
    friend OutputMap beam_map(const struct BeamModel&);
    int input_dim_;
    int output_dim_;
    Fn fn_;
    std::string name_;
    bool identity_ = false;
    bool ensemble_scaled_ = false;
};

/// f(x) = a1.x + a2.sin(x) + a3.cos(x) + x^T M x on a 15-dimensional input.
struct BenchmarkFunction {
    VectorXd a1, a2, a3; // 15 each
    MatrixXd M;          // 15 x 15

    static constexpr int dim = 15;
    bool loaded() const { return a1.size() == dim && a2.size() == dim && a3.size() == dim && M.rows() == dim && M.cols() == dim; }
};

double benchmark_eval(const BenchmarkFunction& f, const VectorXd& x);

/// a1 + a2 .* cos(x) - a3 .* sin(x) + (M + M^T) x
VectorXd benchmark_gradient(const BenchmarkFunction& f, const VectorXd& x);

/// Coefficient file: "a1:" then 15 numbers, "a2:", "a3:" likewise, then
/// "M:" and 15 rows of 15. Whitespace is free-form.
BenchmarkFunction load_benchmark_coefficients(const std::string& path);
void save_benchmark_coefficients(const BenchmarkFunction& f, const std::string& path);

OutputMap benchmark_map(const BenchmarkFunction& f);

/// Uniform rectangular cantilever driven by band-limited white noise at a
/// point along the span. Clamped-free analytic modes, modal summation.
struct BeamModel {
    double elastic_modulus = 69e9; // Pa
    double density = 2700.0;       // kg/m^3
    double length = 0.45;          // m
    double width = 2e-2;           // m
    double thickness = 2e-3;       // m
    int n_modes = 3;
    double modal_damping = 0.1;
    double excitation_fraction = 0.5; // position of the force, fraction of span
    int response_grid = 21;           // stations from the root, tip excluded
    double force_amplitude = 1.0;     // scales the white-noise spectral amplitude
};

/// Peak (over stations) r.m.s. responses for one parameter set, before any
/// ensemble normalization.
struct BeamResponse {
    double peak_rms_acceleration = 0.0;
    double peak_rms_strain = 0.0;
};

/// Undamped natural frequency of the clamped-free beam in rad/s, mode >= 1.
double beam_natural_frequency(const BeamModel& m, int mode);

/// Displacement frequency response between two span fractions.
std::complex<double> beam_displacement_frf(const BeamModel& m, double force_frac, double response_frac,
                                           double omega);

/// r.m.s. responses with the excitation band [0.1 w_1, 1.2 w_nmodes] taken
/// from this parameter set's own natural frequencies.
BeamResponse beam_response(const BeamModel& m);

/// Same, over an externally fixed excitation band (rad/s).
BeamResponse beam_response(const BeamModel& m, double band_lo, double band_hi);

/// Output map x = (E, rho, L, w, t) -> (peak rms acceleration, peak rms
/// strain). The excitation band is frozen at the nominal model's natural
/// frequencies: the band is a property of the experiment, not of a sample.
OutputMap beam_map(const BeamModel& nominal);

} // namespace symfi
