#include "symfi/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace symfi {

namespace {

// Index of the largest-magnitude component; first index wins ties.
Index argmax_abs(const VectorXd& v) {
    Index best = 0;
    double mag = std::abs(v(0));
    for (Index i = 1; i < v.size(); ++i) {
        if (std::abs(v(i)) > mag) {
            mag = std::abs(v(i));
            best = i;
        }
    }
    return best;
}

} // namespace

SymMatrix::SymMatrix(MatrixXd m) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("SymMatrix: matrix must be square, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (m.rows() == 0) {
        throw DimensionMismatch("SymMatrix: dimension must be positive");
    }
    mat_ = 0.5 * (m + m.transpose());
}

MatrixXd SymplecticSpectrum::S() const {
    MatrixXd s(2 * n, 2 * n);
    s.leftCols(n) = U;
    s.rightCols(n) = V;
    return s;
}

MatrixXd symplectic_form(Index n) {
    MatrixXd j = MatrixXd::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = MatrixXd::Identity(n, n);
    j.bottomLeftCorner(n, n) = -MatrixXd::Identity(n, n);
    return j;
}

SymMatrix spd_sqrt(const SymMatrix& f) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(f.mat());
    const VectorXd& lam = es.eigenvalues();
    double floor = 1e-12 * f.mat().norm();
    if (lam.minCoeff() <= floor) {
        throw NotPositiveDefinite("spd_sqrt: smallest eigenvalue " + std::to_string(lam.minCoeff()) +
                                  " is at or below the positive definiteness floor " + std::to_string(floor));
    }
    MatrixXd r = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    return SymMatrix(std::move(r));
}

SymMatrix regularize(const SymMatrix& f, double epsilon) {
    return SymMatrix(f.mat() + epsilon * MatrixXd::Identity(f.dim(), f.dim()));
}

SkewSchur skew_schur(const MatrixXd& m) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("skew_schur: matrix must be square");
    }
    const Index dim = m.rows();
    if (dim % 2 != 0) {
        throw DimensionOdd("skew_schur: dimension must be even, got " + std::to_string(dim));
    }
    double scale = m.norm();
    if ((m + m.transpose()).norm() > 1e-10 * scale) {
        throw NotSkewSymmetric("skew_schur: ||M + M^T|| exceeds 1e-10 * ||M||");
    }
    const Index n = dim / 2;

    // Exact skew part; roundoff in the caller's product must not leak into
    // the Schur iteration.
    MatrixXd ms = 0.5 * (m - m.transpose());

    Eigen::RealSchur<MatrixXd> schur(ms);
    MatrixXd t = schur.matrixT();
    MatrixXd q = schur.matrixU();

    // Collect 2x2 blocks; 1x1 blocks carry eigenvalue ~0 and are paired up.
    struct Block {
        Index first, second;
        double d;
    };
    std::vector<Block> blocks;
    std::vector<Index> singletons;
    Index i = 0;
    while (i < dim) {
        if (i + 1 < dim && t(i + 1, i) != 0.0) {
            double b = t(i, i + 1);
            double c = t(i + 1, i);
            if (b - c < 0.0) {
                // Conjugate the block by diag(1,-1) so the (1,2) entry is +d.
                q.col(i + 1) = -q.col(i + 1);
                b = -b;
                c = -c;
            }
            blocks.push_back({i, i + 1, 0.5 * (b - c)});
            i += 2;
        } else {
            singletons.push_back(i);
            i += 1;
        }
    }
    for (size_t k = 0; k + 1 < singletons.size(); k += 2) {
        blocks.push_back({singletons[k], singletons[k + 1], 0.0});
    }
    if (static_cast<Index>(blocks.size()) != n) {
        throw NotSkewSymmetric("skew_schur: Schur form did not pair into 2x2 skew blocks");
    }

    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const Block& a, const Block& b) { return a.d > b.d; });

    SkewSchur out;
    out.Q.resize(dim, dim);
    out.d.resize(n);
    for (Index k = 0; k < n; ++k) {
        out.Q.col(2 * k) = q.col(blocks[k].first);
        out.Q.col(2 * k + 1) = q.col(blocks[k].second);
        out.d(k) = blocks[k].d;
    }
    return out;
}

SymplecticSpectrum williamson(const SymMatrix& f) {
    const Index dim = f.dim();
    if (dim % 2 != 0) {
        throw DimensionOdd("williamson: dimension must be even, got " + std::to_string(dim));
    }
    const Index n = dim / 2;

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(f.mat());
    const VectorXd& lam = es.eigenvalues();
    double floor = 1e-12 * f.mat().norm();
    if (lam.minCoeff() <= floor) {
        throw NotPositiveDefinite("williamson: matrix is not positive definite (min eigenvalue " +
                                  std::to_string(lam.minCoeff()) + "); use regularize() for semidefinite input");
    }
    MatrixXd r = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    MatrixXd rinv = es.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();

    MatrixXd j = symplectic_form(n);
    SkewSchur ss = skew_schur(r * j * r);

    // S = R^{-1} Q_split diag(D,D)^{1/2}. With Q^T (RJR) Q in canonical block
    // form, S is symplectic and S^T F S = diag(D, D).
    SymplecticSpectrum spec;
    spec.n = n;
    spec.d = ss.d;
    spec.U.resize(dim, n);
    spec.V.resize(dim, n);
    for (Index k = 0; k < n; ++k) {
        double s = std::sqrt(ss.d(k));
        spec.U.col(k) = s * (rinv * ss.Q.col(2 * k));
        spec.V.col(k) = s * (rinv * ss.Q.col(2 * k + 1));
    }

    // Sign convention: flip pairs jointly so the largest-magnitude component
    // of u_j is positive (joint flips preserve every pair identity).
    for (Index k = 0; k < n; ++k) {
        if (spec.U.col(k)(argmax_abs(spec.U.col(k))) < 0.0) {
            spec.U.col(k) = -spec.U.col(k);
            spec.V.col(k) = -spec.V.col(k);
        }
    }

    // Ties in d broken by the index of the largest-magnitude component of u.
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    double tie_tol = 1e-9 * (spec.d.size() > 0 ? spec.d(0) : 1.0);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (std::abs(spec.d(a) - spec.d(b)) <= tie_tol) {
            return argmax_abs(spec.U.col(a)) < argmax_abs(spec.U.col(b));
        }
        return spec.d(a) > spec.d(b);
    });
    SymplecticSpectrum sorted;
    sorted.n = n;
    sorted.d.resize(n);
    sorted.U.resize(dim, n);
    sorted.V.resize(dim, n);
    for (Index k = 0; k < n; ++k) {
        sorted.d(k) = spec.d(order[k]);
        sorted.U.col(k) = spec.U.col(order[k]);
        sorted.V.col(k) = spec.V.col(order[k]);
    }
    return sorted;
}

EigenSpectrum sym_eig(const SymMatrix& f) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(f.mat());
    const Index dim = f.dim();
    EigenSpectrum spec;
    spec.eigenvalues.resize(dim);
    spec.eigenvectors.resize(dim, dim);
    for (Index k = 0; k < dim; ++k) {
        // Eigen returns ascending order.
        Index src = dim - 1 - k;
        spec.eigenvalues(k) = es.eigenvalues()(src);
        VectorXd q = es.eigenvectors().col(src);
        if (q(argmax_abs(q)) < 0.0) q = -q;
        spec.eigenvectors.col(k) = q;
    }
    return spec;
}

double symplectic_check(const MatrixXd& s) {
    if (s.rows() != s.cols()) {
        throw DimensionMismatch("symplectic_check: matrix must be square");
    }
    if (s.rows() % 2 != 0) {
        throw DimensionOdd("symplectic_check: dimension must be even, got " + std::to_string(s.rows()));
    }
    MatrixXd j = symplectic_form(s.rows() / 2);
    return (s.transpose() * j * s - j).cwiseAbs().maxCoeff();
}

} // namespace symfi
