// Verma modules in a PBW basis, their finite-dimensional irreducible quotients,
// the Cartan anti-involution and actions on tensor products.
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "cyclogaudin/lie_core.hpp"

namespace cg {

// Basis key of a module.  For a Verma module: the root indices of a PBW monomial
// F_{b1} F_{b2} ... v with b1 >= b2 >= ... (root indices follow the height-then-lex
// order).  For an irreducible module: a single basis index.
using Key = std::vector<int>;
using RatVec = SparseVec<Key, Rational>;

template <class S>
using ModState = SparseVec<Key, S>;
template <class S>
using TensorState = SparseVec<std::vector<Key>, S>;

class Module {
public:
    explicit Module(LieAlgebraPtr g, WeightVec lambda) : g_(std::move(g)), lambda_(std::move(lambda)) {}
    virtual ~Module() = default;

    const LieAlgebra& algebra() const { return *g_; }
    const LieAlgebraPtr& algebra_ptr() const { return g_; }
    const WeightVec& highest_weight() const { return lambda_; }

    virtual bool is_irrep() const = 0;
    virtual Key highest() const = 0;
    // X_a applied to the basis vector with key k; exact and rational.
    virtual const RatVec& act_basis(int a, const Key& k) const = 0;
    virtual WeightVec weight(const Key& k) const = 0;
    virtual std::string key_label(const Key& k) const = 0;

protected:
    LieAlgebraPtr g_;
    WeightVec lambda_;
};

using ModulePtr = std::shared_ptr<const Module>;

class VermaModule : public Module {
public:
    VermaModule(LieAlgebraPtr g, WeightVec lambda);

    bool is_irrep() const override { return false; }
    Key highest() const override { return {}; }
    const RatVec& act_basis(int a, const Key& k) const override;
    WeightVec weight(const Key& k) const override;
    std::string key_label(const Key& k) const override;

    // Contravariant pairing: coefficient of v in iota(m) m'.
    Rational shapovalov(const Key& m, const Key& mp) const;
    Rational shapovalov(const RatVec& u, const RatVec& v) const;
    RatVec act_vec(int a, const RatVec& v) const;

private:
    RatVec compute(int a, const Key& k) const;
    mutable std::recursive_mutex mu_;
    mutable std::map<std::pair<int, Key>, RatVec> cache_;
};

class IrrepModule : public Module {
public:
    // Throws std::invalid_argument if lambda is not dominant integral or the Weyl
    // dimension exceeds the cap.
    IrrepModule(LieAlgebraPtr g, WeightVec lambda, int dim_cap = 200);

    bool is_irrep() const override { return true; }
    Key highest() const override { return {0}; }
    const RatVec& act_basis(int a, const Key& k) const override { return matrices_[a][k.at(0)]; }
    WeightVec weight(const Key& k) const override { return weights_[k.at(0)]; }
    std::string key_label(const Key& k) const override;

    int dim() const { return static_cast<int>(weights_.size()); }
    // Basis vector i as a Verma-module state whose image spans the quotient.
    const RatVec& basis_vector(int i) const { return basis_[i]; }
    const VermaModule& verma() const { return *verma_; }
    // Image of a Verma state of a single weight under M_lambda -> L_lambda.
    RatVec project(const RatVec& u) const;
    const RatVec& project_monomial(const Key& m) const;

private:
    struct WeightSpace {
        std::vector<int> indices;
        std::vector<std::vector<Rational>> gram_inv;
    };
    std::shared_ptr<const VermaModule> verma_;
    std::vector<RatVec> basis_;
    std::vector<WeightVec> weights_;
    std::map<WeightVec, WeightSpace> spaces_;
    std::vector<std::vector<RatVec>> matrices_;
    mutable std::mutex mu_;
    mutable std::map<Key, RatVec> proj_cache_;
};

ModulePtr make_verma(LieAlgebraPtr g, WeightVec lambda);
std::shared_ptr<const IrrepModule> make_irrep(LieAlgebraPtr g, WeightVec lambda, int dim_cap = 200);

// x . s on a single module.
template <class S>
ModState<S> module_act(const Module& M, const LieElement<S>& x, const ModState<S>& s) {
    ModState<S> out;
    for (const auto& [a, xa] : x)
        for (const auto& [k, c] : s) {
            S f = xa * c;
            for (const auto& [k2, q] : M.act_basis(a, k)) out.add(k2, mul_q(f, q));
        }
    return out;
}

// X_a applied on tensor factor `site` (0-based), scaled by coef.
template <class S>
void tensor_act_basis_into(TensorState<S>& out, const std::vector<ModulePtr>& mods, int site, int a, const S& coef,
                           const TensorState<S>& s) {
    for (const auto& [keys, c] : s) {
        S f = coef * c;
        const RatVec& img = mods[site]->act_basis(a, keys[site]);
        for (const auto& [k2, q] : img) {
            auto nk = keys;
            nk[site] = k2;
            out.add(nk, mul_q(f, q));
        }
    }
}

// x^{(site)} s; throws std::out_of_range for a bad site.
template <class S>
TensorState<S> tensor_act(const std::vector<ModulePtr>& mods, const LieElement<S>& x, int site,
                          const TensorState<S>& s) {
    if (site < 0 || site >= static_cast<int>(mods.size())) throw std::out_of_range("tensor site out of range");
    TensorState<S> out;
    for (const auto& [a, xa] : x) tensor_act_basis_into(out, mods, site, a, xa, s);
    return out;
}

template <class Field>
TensorState<typename Field::value_type> highest_tensor(const Field& F, const std::vector<ModulePtr>& mods) {
    std::vector<Key> keys;
    for (const auto& m : mods) keys.push_back(m->highest());
    TensorState<typename Field::value_type> s;
    s.add(keys, F.one());
    return s;
}

// Cartan anti-involution on a word x_1 x_2 ... x_n: reversed, each factor mapped E <-> F.
template <class S>
std::vector<LieElement<S>> cartan_antiinvolution(const LieAlgebra& g, const std::vector<LieElement<S>>& word) {
    std::vector<LieElement<S>> out;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        LieElement<S> y;
        for (const auto& [a, c] : *it) y.add(g.iota(a), c);
        out.push_back(y);
    }
    return out;
}

// Image of a tensor of Verma states in the tensor product of irreducible quotients.
template <class S>
TensorState<S> project_to_irrep(const TensorState<S>& s, const std::vector<std::shared_ptr<const IrrepModule>>& irreps) {
    TensorState<S> out;
    for (const auto& [keys, c] : s) {
        TensorState<S> partial;
        partial.add({}, c);
        for (std::size_t i = 0; i < keys.size() && !partial.empty(); ++i) {
            const RatVec& img = irreps[i]->project_monomial(keys[i]);
            TensorState<S> next;
            for (const auto& [pk, pc] : partial)
                for (const auto& [k2, q] : img) {
                    auto nk = pk;
                    nk.push_back(k2);
                    next.add(nk, mul_q(pc, q));
                }
            partial = std::move(next);
        }
        out += partial;
    }
    return out;
}

template <class S>
std::string tensor_string(const std::vector<ModulePtr>& mods, const TensorState<S>& s) {
    std::string out;
    for (const auto& [keys, c] : s) {
        if (!out.empty()) out += " + ";
        out += "(" + scalar_string(c) + ")";
        for (std::size_t i = 0; i < keys.size(); ++i) out += (i ? " x " : " ") + mods[i]->key_label(keys[i]);
    }
    return out.empty() ? "0" : out;
}

}  // namespace cg
