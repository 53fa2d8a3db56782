#pragma once

#include <Eigen/Dense>

#include "symfi/errors.hpp"

namespace symfi {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Square real matrix kept symmetric by construction: the input is replaced
/// by (A + A^T)/2, so downstream solvers may rely on exact symmetry.
class SymMatrix {
public:
    explicit SymMatrix(MatrixXd m);

    const MatrixXd& mat() const { return mat_; }
    Index dim() const { return mat_.rows(); }
    double operator()(Index i, Index j) const { return mat_(i, j); }

private:
    MatrixXd mat_;
};

/// Standard symmetric eigendecomposition F q_k = lambda_k q_k.
/// Eigenvalues descending; eigenvector columns orthonormal, column k paired
/// with eigenvalue k; sign fixed so the largest-magnitude component of each
/// column is positive.
struct EigenSpectrum {
    VectorXd eigenvalues;
    MatrixXd eigenvectors;
};

/// Williamson normal form of a 2n x 2n positive definite matrix:
/// S^T F S = diag(D, D) with S = [U | V] symplectic (S^T J S = J).
/// Symplectic eigenvalues d descending; each d_j owns the eigenvector pair
/// (u_j, v_j) with F u_j = d_j J v_j and F v_j = -d_j J u_j.
struct SymplecticSpectrum {
    Index n = 0;
    VectorXd d;
    MatrixXd U;
    MatrixXd V;

    /// The full symplectic eigenvector matrix [U | V].
    MatrixXd S() const;
};

/// The canonical symplectic form J = [[0, I],[-I, 0]] of size 2n x 2n.
MatrixXd symplectic_form(Index n);

/// Symmetric positive definite square root: returns symmetric R with R R = F.
/// Throws NotPositiveDefinite when the smallest eigenvalue is at or below
/// 1e-12 * ||F||_F.
SymMatrix spd_sqrt(const SymMatrix& f);

/// F + epsilon * I. Explicit ridge for semidefinite matrices; nothing in this
/// module regularizes silently.
SymMatrix regularize(const SymMatrix& f, double epsilon);

struct SkewSchur {
    MatrixXd Q;  // orthogonal
    VectorXd d;  // block magnitudes, descending
};

/// Real Schur form of a skew-symmetric matrix M of even size 2n:
/// Q^T M Q = blockdiag([[0, d_j],[-d_j, 0]]) with d_1 >= d_2 >= ... >= 0 and
/// each block rotated so its (1,2) entry is +d_j. Blocks are adjacent column
/// pairs (2j, 2j+1) of Q. Throws NotSkewSymmetric when
/// ||M + M^T|| > 1e-10 * ||M||, DimensionOdd for odd sizes.
SkewSchur skew_schur(const MatrixXd& m);

/// Williamson decomposition of a positive definite 2n x 2n matrix, computed
/// through the skew-symmetric Schur form of F^{1/2} J F^{1/2}.
/// The input must already be in the split-half parameter layout matching J;
/// callers with interleaved parameters permute first (see fim module).
SymplecticSpectrum williamson(const SymMatrix& f);

/// Symmetric eigendecomposition with descending eigenvalues and the sign
/// convention documented on EigenSpectrum.
EigenSpectrum sym_eig(const SymMatrix& f);

/// max |(S^T J S - J)_ij|; zero iff S is symplectic. Throws DimensionOdd.
double symplectic_check(const MatrixXd& s);

} // namespace symfi
