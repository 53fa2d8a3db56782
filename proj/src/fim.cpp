#include "symfi/fim.hpp"

#include <Eigen/Eigenvalues>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace symfi {

ParamLabel ParamLabel::mean(std::string variable, double nominal) {
    return {std::move(variable), ParamKind::mean, {}, nominal};
}

ParamLabel ParamLabel::stddev(std::string variable, double nominal) {
    return {std::move(variable), ParamKind::stddev, {}, nominal};
}

std::string ParamLabel::display() const {
    switch (kind) {
    case ParamKind::mean: return "mu_" + variable;
    case ParamKind::stddev: return "sigma_" + variable;
    case ParamKind::other: return other_name.empty() ? variable : other_name + "_" + variable;
    }
    return variable;
}

std::string to_string(Normalization n) {
    switch (n) {
    case Normalization::raw: return "raw";
    case Normalization::proportional: return "proportional";
    case Normalization::stddev: return "stddev";
    }
    return "raw";
}

Normalization normalization_from_string(const std::string& s) {
    if (s == "raw") return Normalization::raw;
    if (s == "proportional") return Normalization::proportional;
    if (s == "stddev") return Normalization::stddev;
    throw ParseError("unknown normalization '" + s + "' (expected raw, proportional or stddev)");
}

PairingSpec::PairingSpec(std::vector<std::pair<int, int>> pairs) : pairs_(std::move(pairs)) {
    if (pairs_.empty()) throw InvalidPairing("pairing must contain at least one pair");
    validate(dim());
}

PairingSpec PairingSpec::natural(int n_vars) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(n_vars);
    for (int k = 0; k < n_vars; ++k) pairs.emplace_back(2 * k, 2 * k + 1);
    return PairingSpec(std::move(pairs));
}

std::vector<int> PairingSpec::to_original() const {
    std::vector<int> map(dim());
    for (int k = 0; k < n(); ++k) {
        map[k] = pairs_[k].first;
        map[n() + k] = pairs_[k].second;
    }
    return map;
}

void PairingSpec::validate(Index dim) const {
    if (2 * static_cast<Index>(pairs_.size()) != dim) {
        throw InvalidPairing("pairing covers " + std::to_string(2 * pairs_.size()) +
                             " indices but the matrix has dimension " + std::to_string(dim));
    }
    std::unordered_set<int> seen;
    for (const auto& [a, b] : pairs_) {
        for (int idx : {a, b}) {
            if (idx < 0 || idx >= dim) {
                throw InvalidPairing("pairing index " + std::to_string(idx) + " out of range");
            }
            if (!seen.insert(idx).second) {
                throw InvalidPairing("pairing index " + std::to_string(idx) + " repeated");
            }
        }
    }
}

FisherMatrix::FisherMatrix(MatrixXd matrix, std::vector<ParamLabel> labels, Normalization normalization)
    : matrix_(std::move(matrix)), labels_(std::move(labels)), normalization_(normalization) {
    if (static_cast<Index>(labels_.size()) != matrix_.dim()) {
        throw DimensionMismatch("FisherMatrix: " + std::to_string(labels_.size()) + " labels for dimension " +
                                std::to_string(matrix_.dim()));
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(matrix_.mat(), Eigen::EigenvaluesOnly);
    double scale = matrix_.mat().norm();
    if (es.eigenvalues().minCoeff() < -1e-9 * scale) {
        throw NumericalError("FisherMatrix: matrix is indefinite (min eigenvalue " +
                             std::to_string(es.eigenvalues().minCoeff()) +
                             ", scale " + std::to_string(scale) + "); apply regularize() explicitly");
    }
}

FisherMatrix FisherMatrix::regularized(double epsilon) const {
    return FisherMatrix(regularize(matrix_, epsilon).mat(), labels_, normalization_);
}

FisherMatrix reparameterize(const FisherMatrix& f, const MatrixXd& jac, std::vector<ParamLabel> new_labels,
                            Normalization normalization) {
    if (jac.rows() != f.dim()) {
        throw DimensionMismatch("reparameterize: Jacobian has " + std::to_string(jac.rows()) +
                                " rows for FIM dimension " + std::to_string(f.dim()));
    }
    if (jac.cols() > jac.rows()) {
        throw DimensionMismatch("reparameterize: Jacobian must not add parameters");
    }
    MatrixXd out = jac.transpose() * f.mat() * jac;
    return FisherMatrix(std::move(out), std::move(new_labels), normalization);
}

FisherMatrix normalize(const FisherMatrix& f, Normalization mode) {
    const auto& labels = f.labels();
    VectorXd scale(f.dim());

    if (mode == Normalization::stddev) {
        // sigma nominal per variable, from that variable's stddev label
        std::unordered_map<std::string, double> sigma;
        for (const auto& label : labels) {
            if (label.kind == ParamKind::stddev) sigma[label.variable] = label.nominal;
        }
        for (Index j = 0; j < f.dim(); ++j) {
            auto it = sigma.find(labels[j].variable);
            if (it == sigma.end()) {
                throw MissingNominal("normalize: no stddev nominal for variable '" + labels[j].variable + "'");
            }
            if (it->second == 0.0) {
                throw ZeroNominal("normalize: zero stddev nominal for variable '" + labels[j].variable + "'");
            }
            scale(j) = it->second;
        }
    } else if (mode == Normalization::proportional) {
        for (Index j = 0; j < f.dim(); ++j) {
            if (labels[j].nominal == 0.0) {
                throw ZeroNominal("normalize: zero nominal for parameter '" + labels[j].display() + "'");
            }
            scale(j) = labels[j].nominal;
        }
    } else {
        throw ConfigError("normalize: mode must be proportional or stddev");
    }

    return reparameterize(f, MatrixXd(scale.asDiagonal()), labels, mode);
}

FisherMatrix apply_pairing(const FisherMatrix& f, const PairingSpec& pairing) {
    pairing.validate(f.dim());
    std::vector<int> to_orig = pairing.to_original();
    const Index dim = f.dim();
    MatrixXd out(dim, dim);
    std::vector<ParamLabel> labels(dim);
    for (Index i = 0; i < dim; ++i) {
        labels[i] = f.labels()[to_orig[i]];
        for (Index j = 0; j < dim; ++j) out(i, j) = f.mat()(to_orig[i], to_orig[j]);
    }
    return FisherMatrix(std::move(out), std::move(labels), f.normalization());
}

double condition_number(const FisherMatrix& f) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(f.mat(), Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string kind_token(const ParamLabel& label) {
    switch (label.kind) {
    case ParamKind::mean: return "mean";
    case ParamKind::stddev: return "stddev";
    case ParamKind::other: return label.other_name.empty() ? "other" : label.other_name;
    }
    return "other";
}

double parse_double(const std::string& tok, const std::string& context) {
    try {
        size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("cannot parse number '" + tok + "' in " + context);
    }
}

} // namespace

void save_fim(const FisherMatrix& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "dim " << f.dim() << "\n";
    for (Index i = 0; i < f.dim(); ++i) {
        for (Index j = 0; j < f.dim(); ++j) {
            if (j) out << ' ';
            out << format_double(f.mat()(i, j));
        }
        out << "\n";
    }
    for (const auto& label : f.labels()) {
        out << label.variable << ',' << kind_token(label) << ',' << format_double(label.nominal) << "\n";
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

FisherMatrix load_fim(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    std::string word;
    Index dim = 0;
    if (!(in >> word) || word != "dim" || !(in >> dim) || dim <= 0) {
        throw ParseError("FIM file '" + path + "' must start with 'dim n'");
    }
    MatrixXd m(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            if (!(in >> word)) throw ParseError("FIM file '" + path + "' ended inside the matrix");
            m(i, j) = parse_double(word, path);
        }
    }
    std::string line;
    std::getline(in, line); // consume end of last matrix row
    std::vector<ParamLabel> labels;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string variable, kind, nominal;
        if (!std::getline(ss, variable, ',') || !std::getline(ss, kind, ',') || !std::getline(ss, nominal)) {
            throw ParseError("bad label line '" + line + "' in " + path);
        }
        ParamLabel label;
        label.variable = variable;
        if (kind == "mean") {
            label.kind = ParamKind::mean;
        } else if (kind == "stddev") {
            label.kind = ParamKind::stddev;
        } else {
            label.kind = ParamKind::other;
            label.other_name = kind;
        }
        label.nominal = parse_double(nominal, path);
        labels.push_back(std::move(label));
    }
    if (static_cast<Index>(labels.size()) != dim) {
        throw ParseError("FIM file '" + path + "' has " + std::to_string(labels.size()) +
                         " labels for dimension " + std::to_string(dim));
    }
    return FisherMatrix(std::move(m), std::move(labels));
}

} // namespace symfi
