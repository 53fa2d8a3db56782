#pragma once

#include "symfi/fim.hpp"

namespace symfi {

/// A parameter perturbation expressed in both spectral coordinate systems.
/// The quadratic entropy change satisfies
/// 2 dH = sum_j lambda_j xi_j^2 = sum_j d_j (alpha_j^2 + beta_j^2).
struct PerturbationResult {
    double delta_h = 0.0; // nats
    VectorXd xi;          // orthogonal coordinates Q^T db
    VectorXd alpha;       // first half of S^{-1} db
    VectorXd beta;        // second half of S^{-1} db
};

/// Per-parameter entropy-change weights sum_j lambda_j q_kj^2 (algebraically
/// the diagonal of F when the full spectrum is used) and their per-variable
/// aggregation over each pairing's two members.
struct ContributionReport {
    VectorXd per_parameter;
    VectorXd per_variable;
};

/// Second-order relative-entropy change (1/2) db^T F db.
double kl_quadratic(const FisherMatrix& f, const VectorXd& db);

/// Splits a perturbation into orthogonal coordinates xi = Q^T db and
/// symplectic coordinates (alpha, beta) from S^{-1} db, with the symplectic
/// inverse taken exactly as S^{-1} = J^{-1} S^T J. Both spectra must come
/// from the same matrix in the split-half canonical layout.
PerturbationResult decompose_perturbation(const FisherMatrix& f, const VectorXd& db, const EigenSpectrum& eig,
                                          const SymplecticSpectrum& sym);

/// Principal radii 1/sqrt(value) of the entropy ellipsoid (or circles for a
/// symplectic spectrum). Throws NonPositiveEigenvalue unless all values > 0.
VectorXd ellipsoid_radii(const VectorXd& values);
VectorXd ellipsoid_radii(const EigenSpectrum& spec);
VectorXd ellipsoid_radii(const SymplecticSpectrum& spec);

/// Contribution of each parameter (and of each variable, aggregated over the
/// pairing) to the entropy change when perturbed alone. A nonnegative
/// truncation keeps only the leading `truncation` eigenvectors; the default
/// uses the full spectrum.
ContributionReport parameter_contributions(const FisherMatrix& f, const EigenSpectrum& eig,
                                           const PairingSpec& aggregation, int truncation = -1);

} // namespace symfi
