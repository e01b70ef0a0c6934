// Classical simple Lie algebras: root systems, a Chevalley basis with exact
// structure constants, the normalized invariant form, dual bases and Casimir data.
#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cyclogaudin/exact_num.hpp"
#include "cyclogaudin/sparse.hpp"

namespace cg {

enum class Series { A, B, C, D };

Series parse_series(const std::string& s);
std::string series_name(Series s);

// Weight in fundamental-weight coordinates: entry i is <lambda, alpha_i^vee>.
using WeightVec = std::vector<Rational>;
// Sparse rational combination of basis labels.
using RatCombo = std::vector<std::pair<int, Rational>>;

struct RootSystem {
    Series series;
    int rank;
    // cartan[i][j] = <alpha_i, alpha_j^vee>; row i is alpha_i in fundamental coordinates.
    std::vector<std::vector<int>> cartan;
    // Positive roots in simple-root coordinates, ascending by height then lexicographically.
    std::vector<std::vector<int>> positive_roots;
    std::vector<int> heights;
    std::vector<Rational> root_norm2;
    std::vector<std::vector<Rational>> simple_gram;       // <alpha_i, alpha_j>
    std::vector<std::vector<Rational>> coroot_gram;       // <alpha_i^vee, alpha_j^vee>
    std::vector<std::vector<Rational>> fundamental_gram;  // <omega_i, omega_j>
    int highest_root = -1;

    int num_positive() const { return static_cast<int>(positive_roots.size()); }
    int find_root(const std::vector<int>& coords) const;
    int simple_root_index(int node) const;
    WeightVec root_weight(int r) const;
    WeightVec simple_root(int node) const;
    WeightVec fundamental_weight(int node) const;
    WeightVec rho() const;
    Rational inner(const WeightVec& a, const WeightVec& b) const;
};

enum class BasisKind { E, F, H };

// Basis labels: E_r = r, F_r = n_pos + r, H_i = 2 n_pos + i.
struct StructureTable {
    int n_pos = 0;
    int rank = 0;
    int dim = 0;
    std::vector<std::vector<RatCombo>> brackets;  // [X_a, X_b]
    std::vector<RatCombo> duals;                  // I^a for I_a = X_a
    // Non-simple roots: E_alpha = [E_{alpha_i}, E_beta] / (p+1) with (node i, root beta).
    std::vector<std::pair<int, int>> recipe;
};

class LieAlgebra {
public:
    LieAlgebra(RootSystem roots, StructureTable table);

    const RootSystem& roots() const { return roots_; }
    const StructureTable& table() const { return table_; }
    int dim() const { return table_.dim; }
    int n_pos() const { return table_.n_pos; }
    int rank() const { return table_.rank; }

    int e(int r) const { return r; }
    int f(int r) const { return n_pos() + r; }
    int h(int i) const { return 2 * n_pos() + i; }
    BasisKind kind(int a) const;
    // Root index for E/F labels, node index for H labels.
    int index_of(int a) const;
    // Label of iota(X_a): E_r <-> F_r, H_i fixed.
    int iota(int a) const;
    std::string label(int a) const;
    // Weight of X_a in fundamental coordinates.
    const WeightVec& weight(int a) const { return weights_[a]; }

    const RatCombo& bracket_basis(int a, int b) const { return table_.brackets[a][b]; }
    const RatCombo& dual(int a) const { return table_.duals[a]; }
    Rational form(int a, int b) const;
    // tr(ad X_a ad X_b), computed from the structure constants.
    Rational killing(int a, int b) const;

    int dual_coxeter() const { return dual_coxeter_; }
    Rational casimir_delta(const WeightVec& lambda) const;
    Rational weyl_dimension(const WeightVec& lambda) const;
    bool is_dominant_integral(const WeightVec& lambda) const;

    // Copy whose single entry [X_a, X_b] has its sign flipped (mutation testing only).
    std::shared_ptr<const LieAlgebra> with_corrupted_entry(int a, int b) const;

private:
    RootSystem roots_;
    StructureTable table_;
    std::vector<WeightVec> weights_;
    int dual_coxeter_ = 0;
};

using LieAlgebraPtr = std::shared_ptr<const LieAlgebra>;

// Builds (A_n, n>=1), (B_n, n>=2), (C_n, n>=2), (D_n, n>=4); throws std::invalid_argument.
LieAlgebraPtr build_simple_lie_algebra(Series series, int rank);

template <class S>
using LieElement = SparseVec<int, S>;

template <class Field>
LieElement<typename Field::value_type> basis_element(const Field& F, int a) {
    LieElement<typename Field::value_type> x;
    x.add(a, F.one());
    return x;
}

template <class Field>
LieElement<typename Field::value_type> lift(const Field& F, const RatCombo& c) {
    LieElement<typename Field::value_type> x;
    for (const auto& [a, q] : c) x.add(a, F.from(q));
    return x;
}

template <class S>
LieElement<S> bracket(const LieAlgebra& g, const LieElement<S>& x, const LieElement<S>& y) {
    LieElement<S> out;
    for (const auto& [a, xa] : x)
        for (const auto& [b, yb] : y) {
            S ab = xa * yb;
            for (const auto& [c, q] : g.bracket_basis(a, b)) out.add(c, mul_q(ab, q));
        }
    return out;
}

template <class S>
S form(const LieAlgebra& g, const LieElement<S>& x, const LieElement<S>& y, S acc) {
    for (const auto& [a, xa] : x)
        for (const auto& [b, yb] : y) {
            Rational q = g.form(a, b);
            if (q != 0) acc += mul_q(xa * yb, q);
        }
    return acc;
}

// Weights with field-valued coordinates (fundamental basis), e.g. values of lambda(t).
template <class S>
S weight_inner(const RootSystem& R, const std::vector<S>& a, const std::vector<S>& b, S acc) {
    for (int i = 0; i < R.rank; ++i)
        for (int j = 0; j < R.rank; ++j)
            if (R.fundamental_gram[i][j] != 0) acc += mul_q(a[i] * b[j], R.fundamental_gram[i][j]);
    return acc;
}

}  // namespace cg
