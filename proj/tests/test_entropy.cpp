#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "symfi/distributions.hpp"
#include "symfi/entropy.hpp"
#include "test_helpers.hpp"

using namespace symfi;
using symfi::testing::random_spd;

namespace {

std::vector<ParamLabel> anon_labels(int dim) {
    std::vector<ParamLabel> labels;
    for (int i = 0; i < dim; ++i) {
        ParamLabel l;
        l.variable = "p" + std::to_string(i);
        l.kind = ParamKind::other;
        l.nominal = 1.0;
        labels.push_back(l);
    }
    return labels;
}

// KL(N(mu0, s0^2) || N(mu1, s1^2)), closed form
double gaussian_kl(double mu0, double s0, double mu1, double s1) {
    return std::log(s1 / s0) + (s0 * s0 + (mu0 - mu1) * (mu0 - mu1)) / (2.0 * s1 * s1) - 0.5;
}

} // namespace

TEST_CASE("kl_quadratic anchor values") {
    FisherMatrix f(MatrixXd(Eigen::Vector4d(1.0, 2.0, 1.0, 2.0).asDiagonal()), anon_labels(4));
    CHECK(kl_quadratic(f, VectorXd::Zero(4)) == 0.0);
    CHECK(kl_quadratic(f, VectorXd::Ones(4)) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(kl_quadratic(f, VectorXd::Zero(3)), DimensionMismatch);
}

TEST_CASE("mean shift reproduces the exact Gaussian KL") {
    double mu = 1.5, sigma = 0.7;
    InputModel model({{"x", mu, sigma}});
    FisherMatrix f = analytic_fim(model);
    for (double dmu : {0.3, -0.05, 1.0}) {
        VectorXd db(2);
        db << dmu, 0.0;
        double quad = kl_quadratic(f, db);
        CHECK(quad == doctest::Approx(dmu * dmu / (2.0 * sigma * sigma)).epsilon(1e-12));
        // a pure mean shift has zero higher-order remainder
        CHECK(quad == doctest::Approx(gaussian_kl(mu, sigma, mu + dmu, sigma)).epsilon(1e-12));
    }
}

TEST_CASE("mixed shifts agree with the exact KL to third order") {
    double sigma = 1.3;
    InputModel model({{"x", 0.0, sigma}});
    FisherMatrix f = analytic_fim(model);
    std::vector<double> scales{1e-1, 1e-2, 1e-3};
    std::vector<double> remainders;
    for (double eps : scales) {
        VectorXd db(2);
        db << eps * sigma, eps * sigma;
        double quad = kl_quadratic(f, db);
        double exact = gaussian_kl(0.0, sigma, eps * sigma, sigma + eps * sigma);
        remainders.push_back(std::abs(exact - quad));
    }
    double slope = (std::log10(remainders[0]) - std::log10(remainders[2])) /
                   (std::log10(scales[0]) - std::log10(scales[2]));
    CHECK(slope >= 2.7);
}

TEST_CASE("decompose_perturbation along the leading eigenvector") {
    std::mt19937 rng(64);
    MatrixXd m = random_spd(6, rng);
    FisherMatrix f(m, anon_labels(6));
    EigenSpectrum eig = sym_eig(f.sym());
    SymplecticSpectrum sym = williamson(f.sym());

    VectorXd db = eig.eigenvectors.col(0);
    PerturbationResult r = decompose_perturbation(f, db, eig, sym);
    CHECK(r.xi(0) == doctest::Approx(1.0).epsilon(1e-10));
    for (int k = 1; k < 6; ++k) CHECK(std::abs(r.xi(k)) < 1e-10);
    CHECK(2.0 * r.delta_h == doctest::Approx(eig.eigenvalues(0)).epsilon(1e-10));

    PerturbationResult zero = decompose_perturbation(f, VectorXd::Zero(6), eig, sym);
    CHECK(zero.delta_h == 0.0);
    CHECK(zero.xi.cwiseAbs().maxCoeff() == 0.0);
    CHECK(zero.alpha.cwiseAbs().maxCoeff() == 0.0);
    CHECK(zero.beta.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("decompose_perturbation hand example in the canonical layout") {
    MatrixXd m = Eigen::Vector4d(1.0, 1.0, 2.0, 2.0).asDiagonal();
    FisherMatrix f(m, anon_labels(4));
    EigenSpectrum eig = sym_eig(f.sym());
    SymplecticSpectrum sym = williamson(f.sym());
    VectorXd db(4);
    db << 1.0, 0.0, 1.0, 0.0;
    PerturbationResult r = decompose_perturbation(f, db, eig, sym);
    CHECK(2.0 * r.delta_h == doctest::Approx(3.0).epsilon(1e-12));
    double sym_sum = (sym.d.array() * (r.alpha.array().square() + r.beta.array().square())).sum();
    CHECK(sym_sum == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("orthogonal and symplectic coordinates reproduce the same quadratic") {
    std::mt19937 rng(4096);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int rep = 0; rep < 25; ++rep) {
        Eigen::Index n = 1 + rep % 4;
        MatrixXd m = random_spd(2 * n, rng);
        FisherMatrix f(m, anon_labels(static_cast<int>(2 * n)));
        EigenSpectrum eig = sym_eig(f.sym());
        SymplecticSpectrum sym = williamson(f.sym());
        VectorXd db(2 * n);
        for (Eigen::Index i = 0; i < 2 * n; ++i) db(i) = gauss(rng);

        PerturbationResult r = decompose_perturbation(f, db, eig, sym);
        double direct = db.dot(m * db);
        double via_eig = (eig.eigenvalues.array() * r.xi.array().square()).sum();
        double via_sym = (sym.d.array() * (r.alpha.array().square() + r.beta.array().square())).sum();
        CHECK(via_eig == doctest::Approx(direct).epsilon(1e-9));
        CHECK(via_sym == doctest::Approx(direct).epsilon(1e-9));
        CHECK(2.0 * r.delta_h == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("ellipsoid radii") {
    VectorXd lam(2);
    lam << 4.0, 1.0;
    VectorXd r = ellipsoid_radii(lam);
    CHECK(r(0) == doctest::Approx(0.5));
    CHECK(r(1) == doctest::Approx(1.0));

    VectorXd d(1);
    d << std::sqrt(2.0);
    CHECK(ellipsoid_radii(d)(0) == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-12));

    VectorXd sphere = ellipsoid_radii(VectorXd::Ones(4));
    CHECK((sphere - VectorXd::Ones(4)).cwiseAbs().maxCoeff() == 0.0);

    VectorXd bad(2);
    bad << 1.0, 0.0;
    CHECK_THROWS_AS(ellipsoid_radii(bad), NonPositiveEigenvalue);
}

TEST_CASE("parameter contributions recover the diagonal") {
    FisherMatrix f(MatrixXd(Eigen::Vector4d(1.0, 2.0, 1.0, 2.0).asDiagonal()), anon_labels(4));
    EigenSpectrum eig = sym_eig(f.sym());
    ContributionReport report = parameter_contributions(f, eig, PairingSpec::natural(2));
    Eigen::Vector4d expect(1.0, 2.0, 1.0, 2.0);
    CHECK((report.per_parameter - expect).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(report.per_variable(0) == doctest::Approx(3.0));
    CHECK(report.per_variable(1) == doctest::Approx(3.0));
}

TEST_CASE("full-spectrum contributions equal diag(F) for random matrices") {
    std::mt19937 rng(2048);
    for (int rep = 0; rep < 20; ++rep) {
        MatrixXd m = random_spd(6, rng);
        FisherMatrix f(m, anon_labels(6));
        EigenSpectrum eig = sym_eig(f.sym());
        ContributionReport report = parameter_contributions(f, eig, PairingSpec({{0, 1}, {2, 3}, {4, 5}}));
        for (int k = 0; k < 6; ++k) {
            CHECK(report.per_parameter(k) == doctest::Approx(m(k, k)).epsilon(1e-9));
        }
    }
}

TEST_CASE("contributions are insensitive to the basis chosen for repeated eigenvalues") {
    // diag(2,2,1,1) has degenerate eigenspaces; the identity still holds.
    MatrixXd m = Eigen::Vector4d(2.0, 2.0, 1.0, 1.0).asDiagonal();
    FisherMatrix f(m, anon_labels(4));
    EigenSpectrum eig = sym_eig(f.sym());
    ContributionReport report = parameter_contributions(f, eig, PairingSpec::natural(2));
    CHECK((report.per_parameter - m.diagonal()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("truncated contributions keep only the leading eigenvector") {
    MatrixXd m(2, 2);
    m << 2.0, 1.0, 1.0, 2.0;
    FisherMatrix f(m, anon_labels(2));
    EigenSpectrum eig = sym_eig(f.sym());
    ContributionReport report = parameter_contributions(f, eig, PairingSpec({{0, 1}}), 1);
    // lambda_1 q_k1^2 with lambda_1 = 3, q_1 = (1,1)/sqrt(2)
    CHECK(report.per_parameter(0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(report.per_parameter(1) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(report.per_variable(0) == doctest::Approx(3.0).epsilon(1e-12));
}
