// Acceptance suite: one check per release criterion, one line per result.
// Exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "symfi/pipeline.hpp"
#include "test_helpers.hpp"

using namespace symfi;
using symfi::testing::random_spd;
using symfi::testing::spectrum_violation;
using symfi::testing::symplectic_eigs_oracle;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
};

int g_failures = 0;

void report(int id, const std::string& label, const Outcome& outcome) {
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << std::setw(2) << id << ": " << label
              << " -- " << outcome.detail.str() << std::endl;
    if (!outcome.pass) ++g_failures;
}

void expect(Outcome& o, bool ok, const std::string& what) {
    if (!ok) {
        o.pass = false;
        o.detail << "FAILED{" << what << "} ";
    }
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

InputModel motivating_model() {
    return InputModel({{"E", 69e9, 11.5e9}, {"L", 0.45, 0.045}});
}

// ---------------------------------------------------------------------------

void criterion_1() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();

    FisherMatrix raw = analytic_fim(motivating_model());
    double cond = condition_number(raw);
    expect(o, cond >= 1e20 && cond <= 1e24, "raw condition number within [1e20, 1e24]");

    FisherMatrix nor = normalize(raw, Normalization::stddev);
    MatrixXd target = Eigen::Vector4d(1.0, 2.0, 1.0, 2.0).asDiagonal();
    double err = (nor.mat() - target).cwiseAbs().maxCoeff();
    expect(o, err <= 1e-12, "normalized FIM equals diag(1,2,1,2) to 1e-12");

    double elapsed = seconds_since(t0);
    expect(o, elapsed < 1.0, "runtime < 1 s");
    o.detail << "raw cond " << cond << ", max deviation from diag(1,2,1,2) " << err << ", " << elapsed << " s";
    report(1, "analytic FIM golden path with stddev normalization", o);
}

// shared by criteria 2 and 3
struct WilliamsonSuite {
    double worst_violation = 0.0;
    double worst_oracle_rel = 0.0;
    double worst_det_gap = 0.0;
    double elapsed = 0.0;
    int count = 0;
};

WilliamsonSuite run_williamson_suite() {
    WilliamsonSuite suite;
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(424242);
    for (int rep = 0; rep < 200; ++rep) {
        Eigen::Index n = 1 + rep % 5;
        MatrixXd f = random_spd(2 * n, rng);
        SymplecticSpectrum spec = williamson(SymMatrix(f));
        suite.worst_violation = std::max(suite.worst_violation, spectrum_violation(f, spec));

        VectorXd oracle = symplectic_eigs_oracle(f);
        for (Eigen::Index k = 0; k < n; ++k) {
            suite.worst_oracle_rel =
                std::max(suite.worst_oracle_rel, std::abs(spec.d(k) - oracle(k)) / oracle(k));
        }

        EigenSpectrum eig = sym_eig(SymMatrix(f));
        double gap = std::abs(eig.eigenvalues.array().log().sum() - 2.0 * spec.d.array().log().sum());
        suite.worst_det_gap = std::max(suite.worst_det_gap, gap);
        ++suite.count;
    }
    suite.elapsed = seconds_since(t0);
    return suite;
}

void criterion_2(const WilliamsonSuite& suite) {
    Outcome o;
    expect(o, suite.count == 200, "200 matrices");
    expect(o, suite.worst_violation <= 1e-9, "all symplectic-spectrum identities within 1e-9");
    expect(o, suite.worst_oracle_rel <= 1e-9, "d multiset matches the J*F eigenvalue oracle within 1e-9");
    expect(o, suite.elapsed < 10.0, "runtime < 10 s");
    o.detail << suite.count << " random SPD (n=1..5), worst identity violation " << suite.worst_violation
             << ", worst oracle mismatch " << suite.worst_oracle_rel << ", " << suite.elapsed << " s";
    report(2, "Williamson correctness suite", o);
}

void criterion_3(const WilliamsonSuite& suite) {
    Outcome o;
    expect(o, suite.worst_det_gap <= 1e-8, "prod lambda = prod d^2 within 1e-8 on the suite");

    // every emitted report carries the same audit as a hard gate; check one
    RunConfig config;
    config.model = RunConfig::Model::identity;
    config.inputs = motivating_model();
    config.normalization = Normalization::stddev;
    fs::path dir = fs::temp_directory_path() / "symfi_acceptance_c3";
    fs::remove_all(dir);
    config.output_dir = dir.string();
    run(config);
    nlohmann::json j = nlohmann::json::parse(slurp(dir / "report.json"));
    double emitted_gap = j["determinant_audit"]["gap"].get<double>();
    expect(o, emitted_gap <= 1e-8, "emitted report passes the determinant audit");
    fs::remove_all(dir);

    o.detail << "worst suite gap " << suite.worst_det_gap << ", emitted-report gap " << emitted_gap
             << " (emit_report refuses reports past 1e-8)";
    report(3, "determinant conservation", o);
}

void criterion_4() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    InputModel model({{"x1", 0.0, 1.0}, {"x2", 0.0, 1.0}});
    MatrixXd target = Eigen::Vector4d(1.0, 2.0, 1.0, 2.0).asDiagonal();

    std::vector<int> counts{1000, 10000, 100000};
    std::vector<double> errs;
    for (int n : counts) {
        EstimatorConfig cfg;
        cfg.sample_count = n;
        cfg.seed = 42;
        FisherMatrix f = estimate_fim(model, OutputMap::identity(2), cfg);
        errs.push_back((f.mat() - target).cwiseAbs().maxCoeff());
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < errs.size(); ++i) {
        double x = std::log10(double(counts[i])), y = std::log10(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = double(errs.size());
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    expect(o, errs.back() <= 0.05, "max-entry error <= 0.05 at N = 1e5");
    expect(o, slope >= -0.65 && slope <= -0.35, "log-log slope within -0.5 +- 0.15");
    double elapsed = seconds_since(t0);
    expect(o, elapsed < 60.0, "runtime < 60 s");
    o.detail << "errors " << errs[0] << " / " << errs[1] << " / " << errs[2] << ", slope " << slope << ", "
             << elapsed << " s";
    report(4, "estimator convergence on the identity map", o);
}

void criterion_5() {
    Outcome o;
    double sigma = 0.7, mu = 1.5;
    InputModel model({{"x", mu, sigma}});
    FisherMatrix f = analytic_fim(model);

    auto exact_kl = [](double mu0, double s0, double mu1, double s1) {
        return std::log(s1 / s0) + (s0 * s0 + (mu0 - mu1) * (mu0 - mu1)) / (2.0 * s1 * s1) - 0.5;
    };

    double dmu = 0.3;
    VectorXd shift(2);
    shift << dmu, 0.0;
    double quad = kl_quadratic(f, shift);
    double closed = dmu * dmu / (2.0 * sigma * sigma);
    double mean_err = std::abs(quad - closed) / closed;
    expect(o, mean_err <= 1e-12, "mean shift reproduces dmu^2/(2 sigma^2) to 1e-12");
    double vs_exact = std::abs(quad - exact_kl(mu, sigma, mu + dmu, sigma)) / closed;
    expect(o, vs_exact <= 1e-12, "mean-shift quadratic equals the exact Gaussian KL");

    std::vector<double> scales{1e-1, 1e-2, 1e-3};
    std::vector<double> remainders;
    for (double eps : scales) {
        VectorXd db(2);
        db << eps * sigma, eps * sigma;
        double q = kl_quadratic(f, db);
        double e = exact_kl(mu, sigma, mu + db(0), sigma + db(1));
        remainders.push_back(std::abs(e - q));
    }
    double slope = (std::log10(remainders[0]) - std::log10(remainders[2])) /
                   (std::log10(scales[0]) - std::log10(scales[2]));
    expect(o, slope >= 2.7, "third-order remainder slope >= 2.7");
    o.detail << "mean-shift relative error " << mean_err << ", remainder slope " << slope;
    report(5, "KL quadratic exactness and remainder order", o);
}

void criterion_6() {
    Outcome o;
    std::mt19937 rng(777);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        Eigen::Index n = 1 + rep % 5;
        MatrixXd m = random_spd(2 * n, rng);
        std::vector<ParamLabel> labels;
        for (Eigen::Index i = 0; i < 2 * n; ++i) {
            ParamLabel l;
            l.variable = "p" + std::to_string(i);
            l.kind = ParamKind::other;
            labels.push_back(l);
        }
        FisherMatrix f(m, labels);
        EigenSpectrum eig = sym_eig(f.sym());
        ContributionReport rpt = parameter_contributions(f, eig, PairingSpec::natural(static_cast<int>(n)));
        for (Eigen::Index k = 0; k < 2 * n; ++k) {
            worst = std::max(worst, std::abs(rpt.per_parameter(k) - m(k, k)) / m(k, k));
        }
    }
    expect(o, worst <= 1e-9, "per-parameter contributions equal diag(F) within 1e-9");
    o.detail << "100 random SPD matrices, worst relative deviation " << worst;
    report(6, "per-parameter contribution identity", o);
}

void criterion_7(const std::string& data_dir) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();

    RunConfig config;
    config.model = RunConfig::Model::benchmark;
    config.benchmark_coefficients = data_dir + "/benchmark_coefficients.txt";
    config.samples = 20000;
    config.seed = 42;
    config.estimator.sample_count = config.samples;
    config.estimator.seed = config.seed;
    config.normalization = Normalization::raw; // unit-variance inputs need no normalization
    SensitivityReport report_run = run(config);

    double g1 = report_run.contributions.per_variable.segment(0, 5).sum();
    double g2 = report_run.contributions.per_variable.segment(5, 5).sum();
    double g3 = report_run.contributions.per_variable.segment(10, 5).sum();
    expect(o, g3 > g2 && g2 > g1, "strict group ordering x11-15 > x6-10 > x1-5");

    double share = report_run.eig.eigenvalues(0) / report_run.eig.eigenvalues.sum();
    expect(o, share >= 0.6 && share <= 0.9, "first-eigenvalue share within [0.6, 0.9]");

    double elapsed = seconds_since(t0);
    expect(o, elapsed < 120.0, "runtime < 120 s");
    o.detail << "group sums " << g1 << " < " << g2 << " < " << g3 << ", lambda1 share " << share << ", "
             << elapsed << " s";
    report(7, "benchmark-function group structure at N = 2e4", o);
}

void criterion_8(ReportMetadata* echo_out) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();

    RunConfig config;
    config.model = RunConfig::Model::beam;
    config.beam_case = "case1";
    config.samples = 20000;
    config.seed = 42;
    config.estimator.sample_count = config.samples;
    config.estimator.seed = config.seed;
    config.normalization = Normalization::stddev;
    SensitivityReport beam_report = run(config);
    if (echo_out) *echo_out = beam_report.metadata;

    expect(o, beam_report.condition_raw > 1e20, "raw condition number exceeds 1e20");
    expect(o, beam_report.condition_normalized < 1e4, "stddev-normalized condition number below 1e4");

    double gap = std::abs(beam_report.eig.eigenvalues.array().log().sum() -
                          2.0 * beam_report.sym.d.array().log().sum());
    expect(o, gap <= 1e-8, "determinant audit on the beam report");

    // natural (mu,sigma) pairs vs pairing L with t: (muL,mut) and (sigL,sigt)
    PairingSpec natural = PairingSpec::natural(5);
    PairingSpec lt({{0, 1}, {2, 3}, {4, 8}, {5, 9}, {6, 7}});
    PairingComparison cmp = compare_pairings_full(config, {natural, lt});
    double rel_diff =
        ((cmp.spectra[0].d - cmp.spectra[1].d).cwiseAbs().cwiseQuotient(cmp.spectra[0].d)).maxCoeff();
    expect(o, rel_diff > 1e-6, "natural and (L,t) pairings give different symplectic spectra");

    double elapsed = seconds_since(t0);
    expect(o, elapsed < 600.0, "runtime < 10 min");
    o.detail << "raw cond " << beam_report.condition_raw << ", normalized cond "
             << beam_report.condition_normalized << ", audit gap " << gap << ", pairing spectra differ by "
             << rel_diff << " (rel), " << elapsed << " s";
    report(8, "beam case-1 qualitative reproduction at N = 2e4", o);
}

void criterion_9() {
    Outcome o;
    // Interleaved (mu1, sigma1, mu2, sigma2) with variable 2 split across the
    // first and third eigenvalues; small same-kind cross couplings.
    MatrixXd f = Eigen::Vector4d(1.0, 2.0, 1.3, 2.6).asDiagonal();
    f(0, 2) = f(2, 0) = 0.05; // mu1 - mu2
    f(1, 3) = f(3, 1) = 0.05; // sigma1 - sigma2

    std::vector<ParamLabel> labels{ParamLabel::mean("v1", 0.0), ParamLabel::stddev("v1", 1.0),
                                   ParamLabel::mean("v2", 0.0), ParamLabel::stddev("v2", 1.0)};
    FisherMatrix fim(f, labels);
    EigenSpectrum eig = sym_eig(fim.sym());

    // identify the eigenvectors dominated by sigma2 (index 3) and mu2 (index 2)
    int idx_sigma2 = -1, idx_mu2 = -1;
    for (int k = 0; k < 4; ++k) {
        VectorXd q = eig.eigenvectors.col(k).cwiseAbs();
        int dominant = 0;
        q.maxCoeff(&dominant);
        if (dominant == 3) idx_sigma2 = k;
        if (dominant == 2) idx_mu2 = k;
    }
    expect(o, idx_sigma2 == 0 && idx_mu2 == 2, "split pair identification is unambiguous");

    SymplecticSpectrum sym = williamson(apply_pairing(fim, PairingSpec::natural(2)).sym());
    double d1_sq = sym.d(0) * sym.d(0);
    double split_product = eig.eigenvalues(idx_sigma2) * eig.eigenvalues(idx_mu2);
    double rel = std::abs(d1_sq - split_product) / split_product;
    expect(o, rel <= 0.05, "d1^2 matches the split eigenvalue product within 5%");
    o.detail << "d1^2 " << d1_sq << " vs lambda_" << (idx_sigma2 + 1) << " * lambda_" << (idx_mu2 + 1) << " "
             << split_product << " (relative gap " << rel << ")";
    report(9, "split-conservation spot check", o);
}

void criterion_10(const std::string& cli_path, const std::string& data_dir) {
    Outcome o;
    fs::path scratch = fs::temp_directory_path() / "symfi_acceptance_c10";
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    fs::path cfg_path = scratch / "run.ini";
    {
        std::ofstream cfg(cfg_path);
        cfg << "[run]\n"
               "model = benchmark\n"
               "samples = 2000\n"
               "seed = 4242\n"
               "normalization = raw\n"
               "[benchmark]\n"
               "coefficients = " << data_dir << "/benchmark_coefficients.txt\n";
    }

    auto invoke = [&](const std::string& out_dir) {
        std::string cmd = "\"" + cli_path + "\" run --config \"" + cfg_path.string() + "\" --out \"" +
                          out_dir + "\" > \"" + (scratch / "stdout.txt").string() + "\" 2>&1";
        return std::system(cmd.c_str());
    };
    int rc_a = invoke((scratch / "a").string());
    int rc_b = invoke((scratch / "b").string());
    expect(o, rc_a == 0 && rc_b == 0, "CLI runs exit 0");

    bool identical = true;
    for (const char* name : {"eigen.csv", "symplectic.csv", "fim.csv", "plotdata/eigen_spectrum.csv",
                             "plotdata/symplectic_spectrum.csv"}) {
        if (slurp(scratch / "a" / name) != slurp(scratch / "b" / name)) identical = false;
        if (slurp(scratch / "a" / name).empty()) identical = false;
    }
    expect(o, identical, "spectra CSVs are bitwise identical across reruns");
    o.detail << "two `symfi run` invocations, same config and seed, byte-compared CSV outputs";
    report(10, "end-to-end CLI determinism", o);
    fs::remove_all(scratch);
}

} // namespace

int main(int argc, char** argv) {
    std::string cli_path = SYMFI_CLI_PATH;
    std::string data_dir = SYMFI_DATA_DIR;
    if (argc > 1) cli_path = argv[1];
    if (argc > 2) data_dir = argv[2];

    std::cout << "symfi acceptance suite\n";
    criterion_1();
    WilliamsonSuite suite = run_williamson_suite();
    criterion_2(suite);
    criterion_3(suite);
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7(data_dir);
    criterion_8(nullptr);
    criterion_9();
    criterion_10(cli_path, data_dir);

    if (g_failures == 0) {
        std::cout << "all criteria passed\n";
        return 0;
    }
    std::cout << g_failures << " criteria failed\n";
    return 1;
}
