#include "symfi/models.hpp"

#include "symfi/fim.hpp"

#include <cmath>
#include <fstream>
#include <utility>
#include <vector>

namespace symfi {

OutputMap::OutputMap(int input_dim, int output_dim, Fn fn, std::string name)
    : input_dim_(input_dim), output_dim_(output_dim), fn_(std::move(fn)), name_(std::move(name)) {
    if (input_dim_ < 1 || output_dim_ < 1) throw ConfigError("OutputMap: dimensions must be positive");
}

OutputMap OutputMap::identity(int n) {
    OutputMap m(n, n, [](const VectorXd& x) { return x; }, "identity");
    m.identity_ = true;
    return m;
}

OutputMap OutputMap::constant(int n, VectorXd value) {
    int q = static_cast<int>(value.size());
    return OutputMap(n, q, [v = std::move(value)](const VectorXd&) { return v; }, "constant");
}

OutputMap OutputMap::coordinate(int n, int index) {
    if (index < 0 || index >= n) throw ConfigError("OutputMap::coordinate: index out of range");
    return OutputMap(n, 1, [index](const VectorXd& x) { return VectorXd::Constant(1, x(index)); },
                     "coordinate");
}

VectorXd OutputMap::operator()(const VectorXd& x) const {
    if (x.size() != input_dim_) {
        throw DimensionMismatch("OutputMap: point has " + std::to_string(x.size()) + " entries, expected " +
                                std::to_string(input_dim_));
    }
    VectorXd y = fn_(x);
    if (y.size() != output_dim_) {
        throw DimensionMismatch("OutputMap: map returned " + std::to_string(y.size()) + " outputs, expected " +
                                std::to_string(output_dim_));
    }
    return y;
}

double benchmark_eval(const BenchmarkFunction& f, const VectorXd& x) {
    if (!f.loaded()) throw CoefficientsNotLoaded("benchmark function coefficients not loaded");
    if (x.size() != BenchmarkFunction::dim) {
        throw DimensionMismatch("benchmark_eval: input must have 15 entries");
    }
    return f.a1.dot(x) + f.a2.dot(x.array().sin().matrix()) + f.a3.dot(x.array().cos().matrix()) +
           x.dot(f.M * x);
}

VectorXd benchmark_gradient(const BenchmarkFunction& f, const VectorXd& x) {
    if (!f.loaded()) throw CoefficientsNotLoaded("benchmark function coefficients not loaded");
    if (x.size() != BenchmarkFunction::dim) {
        throw DimensionMismatch("benchmark_gradient: input must have 15 entries");
    }
    return f.a1 + (f.a2.array() * x.array().cos()).matrix() - (f.a3.array() * x.array().sin()).matrix() +
           (f.M + f.M.transpose()) * x;
}

namespace {

std::vector<double> read_numbers(std::ifstream& in, int count, const std::string& path) {
    std::vector<double> vals;
    vals.reserve(count);
    std::string tok;
    while (static_cast<int>(vals.size()) < count && in >> tok) {
        try {
            size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            vals.push_back(v);
        } catch (const std::exception&) {
            // hitting the next section header means the count was short
            throw DimensionMismatch("coefficient file '" + path + "': expected " + std::to_string(count) +
                                    " numbers, found " + std::to_string(vals.size()) + " before '" + tok + "'");
        }
    }
    if (static_cast<int>(vals.size()) < count) {
        throw DimensionMismatch("coefficient file '" + path + "': expected " + std::to_string(count) +
                                " numbers, file ended after " + std::to_string(vals.size()));
    }
    return vals;
}

void expect_header(std::ifstream& in, const std::string& header, const std::string& path) {
    std::string tok;
    if (!(in >> tok) || tok != header) {
        throw ParseError("coefficient file '" + path + "': expected '" + header + "', found '" + tok + "'");
    }
}

} // namespace

BenchmarkFunction load_benchmark_coefficients(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open coefficient file '" + path + "'");
    constexpr int n = BenchmarkFunction::dim;

    BenchmarkFunction f;
    expect_header(in, "a1:", path);
    auto a1 = read_numbers(in, n, path);
    expect_header(in, "a2:", path);
    auto a2 = read_numbers(in, n, path);
    expect_header(in, "a3:", path);
    auto a3 = read_numbers(in, n, path);
    expect_header(in, "M:", path);
    auto m = read_numbers(in, n * n, path);

    std::string trailing;
    if (in >> trailing) {
        throw DimensionMismatch("coefficient file '" + path + "': unexpected trailing token '" + trailing + "'");
    }

    f.a1 = Eigen::Map<VectorXd>(a1.data(), n);
    f.a2 = Eigen::Map<VectorXd>(a2.data(), n);
    f.a3 = Eigen::Map<VectorXd>(a3.data(), n);
    f.M = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(m.data(), n, n);
    return f;
}

void save_benchmark_coefficients(const BenchmarkFunction& f, const std::string& path) {
    if (!f.loaded()) throw CoefficientsNotLoaded("benchmark function coefficients not loaded");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    auto write_vec = [&](const char* header, const VectorXd& v) {
        out << header << "\n";
        for (Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << format_double(v(i));
        out << "\n";
    };
    write_vec("a1:", f.a1);
    write_vec("a2:", f.a2);
    write_vec("a3:", f.a3);
    out << "M:\n";
    for (Index i = 0; i < f.M.rows(); ++i) {
        for (Index j = 0; j < f.M.cols(); ++j) out << (j ? " " : "") << format_double(f.M(i, j));
        out << "\n";
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

OutputMap benchmark_map(const BenchmarkFunction& f) {
    if (!f.loaded()) throw CoefficientsNotLoaded("benchmark function coefficients not loaded");
    return OutputMap(BenchmarkFunction::dim, 1,
                     [f](const VectorXd& x) { return VectorXd::Constant(1, benchmark_eval(f, x)); },
                     "benchmark");
}

namespace {

// Roots of cos(k) cosh(k) = -1 (clamped-free frequency equation).
constexpr double kClampedFreeRoots[] = {1.8751040687119611, 4.6940911329741746, 7.8547574382376126,
                                        10.995540734875467, 14.137168391046471};

double mode_root(int mode) {
    if (mode <= 5) return kClampedFreeRoots[mode - 1];
    return (2.0 * mode - 1.0) * M_PI / 2.0;
}

void validate(const BeamModel& m) {
    if (!(m.elastic_modulus > 0.0 && m.density > 0.0 && m.length > 0.0 && m.width > 0.0 && m.thickness > 0.0)) {
        throw ConfigError("BeamModel: physical parameters must be positive");
    }
    if (m.n_modes < 1) throw ConfigError("BeamModel: n_modes must be >= 1");
    if (!(m.modal_damping > 0.0 && m.modal_damping < 1.0)) {
        throw ConfigError("BeamModel: modal damping must lie in (0, 1)");
    }
    if (m.response_grid < 2) throw ConfigError("BeamModel: response grid needs at least 2 stations");
    if (!(m.excitation_fraction >= 0.0 && m.excitation_fraction <= 1.0)) {
        throw ConfigError("BeamModel: excitation position must lie in [0, 1]");
    }
}

// phi(xi) and phi''(x) L^2 / k^2 for the clamped-free mode shape at xi = x/L.
double mode_shape(int mode, double xi) {
    double k = mode_root(mode);
    double sigma = (std::cosh(k) + std::cos(k)) / (std::sinh(k) + std::sin(k));
    double a = k * xi;
    return std::cosh(a) - std::cos(a) - sigma * (std::sinh(a) - std::sin(a));
}

double mode_curvature_shape(int mode, double xi) {
    double k = mode_root(mode);
    double sigma = (std::cosh(k) + std::cos(k)) / (std::sinh(k) + std::sin(k));
    double a = k * xi;
    return std::cosh(a) + std::cos(a) - sigma * (std::sinh(a) + std::sin(a));
}

struct ModalBasis {
    std::vector<double> omega;      // natural frequencies
    std::vector<double> phi_force;  // shape at the excitation point
    double modal_mass;              // rho A L, same for every mode here
};

ModalBasis modal_basis(const BeamModel& m) {
    ModalBasis basis;
    double area = m.width * m.thickness;
    double inertia = m.width * std::pow(m.thickness, 3) / 12.0;
    double stiffness = std::sqrt(m.elastic_modulus * inertia / (m.density * area)) / (m.length * m.length);
    basis.modal_mass = m.density * area * m.length;
    for (int r = 1; r <= m.n_modes; ++r) {
        double k = mode_root(r);
        basis.omega.push_back(k * k * stiffness);
        basis.phi_force.push_back(mode_shape(r, m.excitation_fraction));
    }
    return basis;
}

} // namespace

double beam_natural_frequency(const BeamModel& m, int mode) {
    validate(m);
    if (mode < 1) throw ConfigError("beam_natural_frequency: mode must be >= 1");
    double area = m.width * m.thickness;
    double inertia = m.width * std::pow(m.thickness, 3) / 12.0;
    double k = mode_root(mode);
    return k * k * std::sqrt(m.elastic_modulus * inertia / (m.density * area)) / (m.length * m.length);
}

std::complex<double> beam_displacement_frf(const BeamModel& m, double force_frac, double response_frac,
                                           double omega) {
    validate(m);
    double area = m.width * m.thickness;
    double inertia = m.width * std::pow(m.thickness, 3) / 12.0;
    double stiffness = std::sqrt(m.elastic_modulus * inertia / (m.density * area)) / (m.length * m.length);
    double modal_mass = m.density * area * m.length;
    std::complex<double> h(0.0, 0.0);
    for (int r = 1; r <= m.n_modes; ++r) {
        double k = mode_root(r);
        double wr = k * k * stiffness;
        std::complex<double> denom(wr * wr - omega * omega, 2.0 * m.modal_damping * wr * omega);
        h += mode_shape(r, force_frac) * mode_shape(r, response_frac) / (modal_mass * denom);
    }
    return h;
}

BeamResponse beam_response(const BeamModel& m, double band_lo, double band_hi) {
    validate(m);
    if (!(band_lo > 0.0 && band_hi > band_lo)) throw ConfigError("beam_response: bad excitation band");

    ModalBasis basis = modal_basis(m);
    constexpr int n_freq = 512;
    std::vector<double> grid(n_freq);
    double log_lo = std::log(band_lo), log_hi = std::log(band_hi);
    for (int i = 0; i < n_freq; ++i) {
        grid[i] = std::exp(log_lo + (log_hi - log_lo) * i / double(n_freq - 1));
    }

    double spectral_density = m.force_amplitude * m.force_amplitude;
    double half_t = 0.5 * m.thickness;
    double inv_l2 = 1.0 / (m.length * m.length);

    BeamResponse out;
    for (int s = 0; s < m.response_grid; ++s) {
        double xi = double(s) / double(m.response_grid); // root in, free tip out
        std::vector<double> phi(m.n_modes), curv(m.n_modes);
        for (int r = 0; r < m.n_modes; ++r) {
            double k = mode_root(r + 1);
            phi[r] = mode_shape(r + 1, xi);
            curv[r] = k * k * inv_l2 * mode_curvature_shape(r + 1, xi);
        }

        double acc_prev = 0.0, strain_prev = 0.0, acc_sum = 0.0, strain_sum = 0.0;
        for (int i = 0; i < n_freq; ++i) {
            double w = grid[i];
            std::complex<double> hw(0.0, 0.0), hs(0.0, 0.0);
            for (int r = 0; r < m.n_modes; ++r) {
                double wr = basis.omega[r];
                std::complex<double> denom(wr * wr - w * w, 2.0 * m.modal_damping * wr * w);
                std::complex<double> base = basis.phi_force[r] / (basis.modal_mass * denom);
                hw += phi[r] * base;
                hs += curv[r] * base;
            }
            double acc_val = w * w * w * w * std::norm(hw);
            double strain_val = half_t * half_t * std::norm(hs);
            if (i > 0) {
                double dw = grid[i] - grid[i - 1];
                acc_sum += 0.5 * (acc_val + acc_prev) * dw;
                strain_sum += 0.5 * (strain_val + strain_prev) * dw;
            }
            acc_prev = acc_val;
            strain_prev = strain_val;
        }
        out.peak_rms_acceleration = std::max(out.peak_rms_acceleration, std::sqrt(spectral_density * acc_sum));
        out.peak_rms_strain = std::max(out.peak_rms_strain, std::sqrt(spectral_density * strain_sum));
    }
    return out;
}

BeamResponse beam_response(const BeamModel& m) {
    validate(m);
    double w1 = beam_natural_frequency(m, 1);
    double wn = beam_natural_frequency(m, m.n_modes);
    return beam_response(m, 0.1 * w1, 1.2 * wn);
}

OutputMap beam_map(const BeamModel& nominal) {
    validate(nominal);
    double band_lo = 0.1 * beam_natural_frequency(nominal, 1);
    double band_hi = 1.2 * beam_natural_frequency(nominal, nominal.n_modes);
    OutputMap map(5, 2,
                  [nominal, band_lo, band_hi](const VectorXd& x) {
                      BeamModel m = nominal;
                      m.elastic_modulus = x(0);
                      m.density = x(1);
                      m.length = x(2);
                      m.width = x(3);
                      m.thickness = x(4);
                      BeamResponse r = beam_response(m, band_lo, band_hi);
                      Eigen::Vector2d y(r.peak_rms_acceleration, r.peak_rms_strain);
                      return VectorXd(y);
                  },
                  "beam");
    map.ensemble_scaled_ = true;
    return map;
}

} // namespace symfi
