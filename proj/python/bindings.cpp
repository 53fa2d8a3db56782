#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symfi/distributions.hpp"
#include "symfi/entropy.hpp"
#include "symfi/estimator.hpp"
#include "symfi/linalg.hpp"
#include "symfi/version.hpp"

namespace py = pybind11;
using namespace symfi;

namespace {

InputModel model_from_arrays(const VectorXd& means, const VectorXd& stddevs) {
    if (means.size() != stddevs.size()) {
        throw DimensionMismatch("means and stddevs must have the same length");
    }
    std::vector<NormalVariable> vars;
    for (Index i = 0; i < means.size(); ++i) {
        vars.push_back({"x" + std::to_string(i + 1), means(i), stddevs(i)});
    }
    return InputModel(std::move(vars));
}

MatrixXd permute(const MatrixXd& f, const std::vector<std::pair<int, int>>& pairs) {
    PairingSpec spec(pairs);
    spec.validate(f.rows());
    std::vector<int> to_orig = spec.to_original();
    MatrixXd out(f.rows(), f.cols());
    for (Index i = 0; i < f.rows(); ++i)
        for (Index j = 0; j < f.cols(); ++j) out(i, j) = f(to_orig[i], to_orig[j]);
    return out;
}

MatrixXd normalize_stddev_matrix(const MatrixXd& f, const VectorXd& stddevs) {
    if (f.rows() != 2 * stddevs.size()) {
        throw DimensionMismatch("matrix dimension must be twice the variable count");
    }
    VectorXd scale(f.rows());
    for (Index v = 0; v < stddevs.size(); ++v) {
        scale(2 * v) = stddevs(v);
        scale(2 * v + 1) = stddevs(v);
    }
    return scale.asDiagonal() * SymMatrix(f).mat() * scale.asDiagonal();
}

MatrixXd fim_from_scores(const MatrixXd& y, const MatrixXd& x_scores, const VectorXd& bandwidths,
                         bool passthrough) {
    OutputSamples samples{y, x_scores};
    EstimatorConfig cfg;
    cfg.sample_count = static_cast<int>(y.rows());
    if (bandwidths.size() > 0) {
        cfg.bandwidth_rule = EstimatorConfig::BandwidthRule::fixed;
        cfg.fixed_bandwidths = bandwidths;
    }
    MatrixXd s = output_scores(samples, cfg, passthrough ? ScoreRoute::passthrough : ScoreRoute::kernel);
    return (s.transpose() * s) / static_cast<double>(s.rows());
}

} // namespace

PYBIND11_MODULE(symfi, m) {
    m.doc() = "Fisher information sensitivity spectra: standard and symplectic (Williamson) decompositions";
    m.attr("__version__") = kVersion;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("symplectic_form", &symplectic_form, py::arg("n"),
          "Canonical symplectic form J = [[0, I], [-I, 0]] of size 2n x 2n.");

    m.def(
        "spd_sqrt", [](const MatrixXd& f) { return spd_sqrt(SymMatrix(f)).mat(); }, py::arg("f"),
        "Symmetric positive definite square root.");

    m.def(
        "skew_schur",
        [](const MatrixXd& m_in) {
            SkewSchur s = skew_schur(m_in);
            return py::make_tuple(s.Q, s.d);
        },
        py::arg("m"),
        "Real Schur form of a skew-symmetric matrix: (Q, d) with Q^T M Q in canonical 2x2 blocks.");

    m.def(
        "williamson",
        [](const MatrixXd& f) {
            SymplecticSpectrum spec = williamson(SymMatrix(f));
            return py::make_tuple(spec.d, spec.U, spec.V);
        },
        py::arg("f"),
        "Williamson decomposition of an SPD matrix in split-half layout: (d, U, V) with S = [U | V].");

    m.def(
        "sym_eig",
        [](const MatrixXd& f) {
            EigenSpectrum spec = sym_eig(SymMatrix(f));
            return py::make_tuple(spec.eigenvalues, spec.eigenvectors);
        },
        py::arg("f"), "Symmetric eigendecomposition, eigenvalues descending.");

    m.def("symplectic_check", &symplectic_check, py::arg("s"),
          "max |(S^T J S - J)_ij|; zero iff S is symplectic.");

    m.def(
        "regularize", [](const MatrixXd& f, double eps) { return regularize(SymMatrix(f), eps).mat(); },
        py::arg("f"), py::arg("epsilon"), "F + epsilon I.");

    m.def(
        "analytic_normal_fim",
        [](const VectorXd& means, const VectorXd& stddevs) {
            return analytic_fim(model_from_arrays(means, stddevs)).mat();
        },
        py::arg("means"), py::arg("stddevs"),
        "Closed-form FIM of independent normals, interleaved (mu, sigma) parameter order.");

    m.def(
        "sample_normal",
        [](const VectorXd& means, const VectorXd& stddevs, int count, std::uint64_t seed) {
            return sample(model_from_arrays(means, stddevs), count, seed);
        },
        py::arg("means"), py::arg("stddevs"), py::arg("count"), py::arg("seed"),
        "Reproducible independent normal draws, one row per sample.");

    m.def(
        "normal_scores",
        [](const VectorXd& means, const VectorXd& stddevs, const MatrixXd& x) {
            return score_rows(model_from_arrays(means, stddevs), x);
        },
        py::arg("means"), py::arg("stddevs"), py::arg("x"),
        "Per-sample score vectors d ln p / d (mu_i, sigma_i), interleaved.");

    m.def("normalize_stddev", &normalize_stddev_matrix, py::arg("f"), py::arg("stddevs"),
          "Standard-deviation normalization of an interleaved FIM.");

    m.def("apply_pairing", &permute, py::arg("f"), py::arg("pairs"),
          "Permute an interleaved FIM into the split-half layout given index pairs.");

    m.def(
        "kl_quadratic",
        [](const MatrixXd& f, const VectorXd& db) { return 0.5 * db.dot(SymMatrix(f).mat() * db); },
        py::arg("f"), py::arg("db"), "Second-order relative entropy change (1/2) db^T F db.");

    m.def(
        "ellipsoid_radii", [](const VectorXd& values) { return ellipsoid_radii(values); }, py::arg("values"),
        "Principal radii 1/sqrt(value) of the entropy ellipsoid.");

    m.def(
        "entropy_contributions",
        [](const MatrixXd& f, int truncation) {
            std::vector<std::pair<int, int>> pairs;
            for (int k = 0; 2 * k < f.rows(); ++k) pairs.emplace_back(2 * k, 2 * k + 1);
            std::vector<ParamLabel> labels;
            for (Index i = 0; i < f.rows(); ++i) {
                ParamLabel l;
                l.variable = "p" + std::to_string(i);
                l.kind = ParamKind::other;
                labels.push_back(l);
            }
            FisherMatrix fim(f, labels);
            EigenSpectrum eig = sym_eig(fim.sym());
            ContributionReport report = parameter_contributions(fim, eig, PairingSpec(pairs), truncation);
            return py::make_tuple(report.per_parameter, report.per_variable);
        },
        py::arg("f"), py::arg("truncation") = -1,
        "(per-parameter, per-variable) entropy contribution weights for an interleaved FIM.");

    m.def("estimate_fim_from_scores", &fim_from_scores, py::arg("y"), py::arg("x_scores"),
          py::arg("bandwidths") = VectorXd(), py::arg("passthrough") = false,
          "Likelihood-ratio FIM estimate from output samples and input scores. Kernel-regresses the "
          "scores on y unless passthrough is set (exact for identity maps).");
}
