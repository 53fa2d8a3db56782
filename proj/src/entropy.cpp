#include "symfi/entropy.hpp"

#include <cmath>

namespace symfi {

double kl_quadratic(const FisherMatrix& f, const VectorXd& db) {
    if (db.size() != f.dim()) {
        throw DimensionMismatch("kl_quadratic: perturbation has " + std::to_string(db.size()) +
                                " entries for dimension " + std::to_string(f.dim()));
    }
    return 0.5 * db.dot(f.mat() * db);
}

PerturbationResult decompose_perturbation(const FisherMatrix& f, const VectorXd& db, const EigenSpectrum& eig,
                                          const SymplecticSpectrum& sym) {
    const Index dim = f.dim();
    if (db.size() != dim || eig.eigenvalues.size() != dim || 2 * sym.n != dim) {
        throw DimensionMismatch("decompose_perturbation: inconsistent dimensions");
    }
    PerturbationResult out;
    out.delta_h = kl_quadratic(f, db);
    out.xi = eig.eigenvectors.transpose() * db;

    // S^{-1} = J^{-1} S^T J, exact once S^T J S = J.
    MatrixXd j = symplectic_form(sym.n);
    VectorXd coords = (-j) * (sym.S().transpose() * (j * db));
    out.alpha = coords.head(sym.n);
    out.beta = coords.tail(sym.n);
    return out;
}

VectorXd ellipsoid_radii(const VectorXd& values) {
    if (values.size() == 0) throw DimensionMismatch("ellipsoid_radii: empty spectrum");
    if (values.minCoeff() <= 0.0) {
        throw NonPositiveEigenvalue("ellipsoid_radii: spectrum must be strictly positive");
    }
    return values.cwiseSqrt().cwiseInverse();
}

VectorXd ellipsoid_radii(const EigenSpectrum& spec) { return ellipsoid_radii(spec.eigenvalues); }

VectorXd ellipsoid_radii(const SymplecticSpectrum& spec) { return ellipsoid_radii(spec.d); }

ContributionReport parameter_contributions(const FisherMatrix& f, const EigenSpectrum& eig,
                                           const PairingSpec& aggregation, int truncation) {
    const Index dim = f.dim();
    if (eig.eigenvalues.size() != dim) {
        throw DimensionMismatch("parameter_contributions: spectrum dimension mismatch");
    }
    aggregation.validate(dim);
    Index keep = (truncation < 0) ? dim : std::min<Index>(truncation, dim);

    ContributionReport report;
    report.per_parameter = VectorXd::Zero(dim);
    for (Index j = 0; j < keep; ++j) {
        report.per_parameter += eig.eigenvalues(j) * eig.eigenvectors.col(j).array().square().matrix();
    }
    report.per_variable = VectorXd::Zero(aggregation.n());
    for (int k = 0; k < aggregation.n(); ++k) {
        const auto& [a, b] = aggregation.pairs()[static_cast<size_t>(k)];
        report.per_variable(k) = report.per_parameter(a) + report.per_parameter(b);
    }
    return report;
}

} // namespace symfi
