// Finite-order automorphisms sigma of a simple Lie algebra that preserve the
// Cartan decomposition, given by a diagram permutation and simple-root phases.
#pragma once

#include <memory>
#include <vector>

#include "cyclogaudin/lie_core.hpp"

namespace cg {

struct AutoSpec {
    int T = 1;
    // permutation[i] = pi(i) on Dynkin nodes (0-based).
    std::vector<int> permutation;
    // tau_{alpha_i} = omega^{phases[i]}.
    std::vector<int> phases;

    static AutoSpec identity(int rank, int T);
};

// A root of unity of order dividing 2T, stored as sign * omega^exp.
struct Phase {
    int sign = 1;
    int exp = 0;
};

class AutoTable {
public:
    int order() const { return T_; }
    const AutoSpec& spec() const { return spec_; }
    const LieAlgebra& algebra() const { return *g_; }
    const LieAlgebraPtr& algebra_ptr() const { return g_; }

    // sigma^p(X_a) = phase(p, a) X_{perm(p, a)}, for p taken mod T.
    int perm(long p, int a) const { return perm_pow_[mod_T_bracket(p, T_)][a]; }
    const Phase& phase(long p, int a) const { return phase_pow_[mod_T_bracket(p, T_)][a]; }
    // Diagram permutation applied p times to node i.
    int node_perm(long p, int i) const;
    // tau_alpha for the positive root r.
    const Phase& tau(int r) const { return phase_pow_[1 % T_][r]; }
    bool is_inner() const;
    // Inner case only: tau_alpha = omega^{chi_alpha}; throws std::logic_error otherwise.
    int chi(int r) const;

    // (L_sigma^p lambda)_i = lambda_{pi^{-p}(i)} in fundamental coordinates.
    WeightVec l_sigma(const WeightVec& lambda, long p = 1) const;

    AutoTable(LieAlgebraPtr g, AutoSpec spec, std::vector<std::vector<int>> perm_pow,
              std::vector<std::vector<Phase>> phase_pow);

private:
    LieAlgebraPtr g_;
    AutoSpec spec_;
    int T_;
    std::vector<std::vector<int>> perm_pow_;
    std::vector<std::vector<Phase>> phase_pow_;
};

using AutoTablePtr = std::shared_ptr<const AutoTable>;

// Extends sigma from the Chevalley generators through the bracket recipe.  With
// verify set, checks that pi is a diagram symmetry, sigma preserves all brackets
// and the form, and sigma^T = id; throws std::invalid_argument on failure.
AutoTablePtr build_automorphism(LieAlgebraPtr g, const AutoSpec& spec, bool verify = true);

template <class Field>
typename Field::value_type phase_value(const Field& F, const Phase& ph) {
    auto w = F.omega(ph.exp);
    return ph.sign < 0 ? -w : w;
}

template <class Field>
LieElement<typename Field::value_type> apply_sigma(const Field& F, const AutoTable& A, long p,
                                                   const LieElement<typename Field::value_type>& x) {
    LieElement<typename Field::value_type> out;
    for (const auto& [a, c] : x) out.add(A.perm(p, a), c * phase_value(F, A.phase(p, a)));
    return out;
}

// Pi_k x = (1/T) sum_m omega^{-mk} sigma^m x.
template <class Field>
LieElement<typename Field::value_type> projector_pi(const Field& F, const AutoTable& A, long k,
                                                    const LieElement<typename Field::value_type>& x) {
    using S = typename Field::value_type;
    LieElement<S> out;
    int T = A.order();
    for (int m = 0; m < T; ++m) out.add_scaled(apply_sigma(F, A, m, x), F.omega(-m * k));
    out *= F.from(Rational(1, T));
    return out;
}

// The weight lambda_0 (fundamental coordinates); throws std::logic_error if not rational.
WeightVec lambda0(const AutoTable& A);

// sum_a <sigma^r I^a, I_a> = tr(sigma^r) on g, exact.
CycloNum trace_sigma_power(const AutoTable& A, long r);

}  // namespace cg
