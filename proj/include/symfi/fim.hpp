#pragma once

#include <string>
#include <utility>
#include <vector>

#include "symfi/linalg.hpp"

namespace symfi {

enum class ParamKind { mean, stddev, other };

/// One distribution parameter: which variable it belongs to, what role it
/// plays for that variable, and its nominal value in the parameter's units.
struct ParamLabel {
    std::string variable;
    ParamKind kind = ParamKind::other;
    std::string other_name; // set when kind == other
    double nominal = 0.0;

    static ParamLabel mean(std::string variable, double nominal);
    static ParamLabel stddev(std::string variable, double nominal);

    std::string display() const; // e.g. "mu_E", "sigma_L", custom name
    bool operator==(const ParamLabel&) const = default;
};

enum class Normalization { raw, proportional, stddev };

std::string to_string(Normalization n);
Normalization normalization_from_string(const std::string& s);

/// Ordered list of parameter-index pairs defining the symplectic structure.
/// Indices refer to the FIM's current (user-facing, typically interleaved)
/// layout and must cover 0..2n-1 exactly once.
class PairingSpec {
public:
    explicit PairingSpec(std::vector<std::pair<int, int>> pairs);

    /// (mu_1, sigma_1), (mu_2, sigma_2), ... for n variables in an
    /// interleaved layout: pairs (0,1), (2,3), ...
    static PairingSpec natural(int n_vars);

    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
    int n() const { return static_cast<int>(pairs_.size()); }
    int dim() const { return 2 * n(); }

    /// Canonical-position -> original-index map: pair k's first member goes
    /// to position k, its second to position n + k.
    std::vector<int> to_original() const;

    /// Throws InvalidPairing unless the pairs form a permutation of 0..dim-1.
    void validate(Index dim) const;

    bool operator==(const PairingSpec&) const = default;

private:
    std::vector<std::pair<int, int>> pairs_;
};

/// Fisher information matrix with parameter labels riding along through
/// every transform. Symmetrized on construction; must be positive
/// semidefinite to within -1e-9 * ||F|| on the smallest eigenvalue.
/// Indefinite estimates are rejected, not repaired; callers fix them
/// explicitly through regularize().
class FisherMatrix {
public:
    FisherMatrix(MatrixXd matrix, std::vector<ParamLabel> labels,
                 Normalization normalization = Normalization::raw);

    const SymMatrix& sym() const { return matrix_; }
    const MatrixXd& mat() const { return matrix_.mat(); }
    Index dim() const { return matrix_.dim(); }
    const std::vector<ParamLabel>& labels() const { return labels_; }
    Normalization normalization() const { return normalization_; }

    FisherMatrix regularized(double epsilon) const;

private:
    SymMatrix matrix_;
    std::vector<ParamLabel> labels_;
    Normalization normalization_;
};

/// J^T F J for a Jacobian with dim(F) rows; labels for the new
/// parameterization are supplied by the caller.
FisherMatrix reparameterize(const FisherMatrix& f, const MatrixXd& jac,
                            std::vector<ParamLabel> new_labels,
                            Normalization normalization = Normalization::raw);

/// Diagonal re-parameterization making sensitivities unit-comparable.
/// stddev mode scales entry (j,k) by sigma_m sigma_n where sigma_m is the
/// standard deviation nominal of the variable owning parameter j;
/// proportional mode uses each parameter's own nominal value.
FisherMatrix normalize(const FisherMatrix& f, Normalization mode);

/// P^T F P moving each pair's first member to position k and second member
/// to position n+k (the split-half layout expected by williamson()).
FisherMatrix apply_pairing(const FisherMatrix& f, const PairingSpec& pairing);

/// lambda_max / lambda_min; +inf when the matrix is singular to working
/// precision or indefinite.
double condition_number(const FisherMatrix& f);

/// Plain-text matrix file: "dim n", n whitespace-separated rows, then one
/// label per line as "variable,kind,nominal". Values round-trip bit-exactly.
void save_fim(const FisherMatrix& f, const std::string& path);
FisherMatrix load_fim(const std::string& path);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

} // namespace symfi
