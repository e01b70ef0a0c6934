// The cyclotomic weight function psi: the closed sum over ordered partitions and
// twist phases, the swapping recursion computing the same vector independently,
// the circle lemma, eigenpair verification and the singular-vector diagnostic.
#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclogaudin/hamiltonians.hpp"

namespace cg {

// blocks[i] = (n^i_1, ..., n^i_{p_i}), 0-based root labels; the concatenation is a permutation of 0..m-1.
struct OrderedPartition {
    std::vector<std::vector<int>> blocks;

    bool operator==(const OrderedPartition&) const = default;
};

// All ordered partitions of {0..m-1} into N blocks, in a deterministic order.
std::vector<OrderedPartition> enumerate_partitions(int m, int N);
// m! * C(m+N-1, N-1).
long partition_count(int m, int N);

// Phase sums larger than this are refused with std::length_error.
constexpr long kPhaseSumCap = 1000000;

// Verma modules M_{lambda_i} at every site (reusing the model's Verma sites).
std::vector<ModulePtr> verma_modules(const Model& M);

namespace detail {

template <class Field>
typename Field::value_type ipow(const Field& F, const typename Field::value_type& x, int n) {
    auto out = F.one();
    for (int k = 0; k < n; ++k) out = out * x;
    return out;
}

template <class S>
S checked_inverse(const S& d) {
    if (is_zero(d)) throw std::domain_error("denominator collision in the weight function");
    return reciprocal(d);
}

template <class Field>
LieElement<typename Field::value_type> simple_lowering(const Field& F, const LieAlgebra& g, int node) {
    return basis_element(F, g.f(g.roots().simple_root_index(node)));
}

// omega^k sigma^k(x).
template <class Field>
LieElement<typename Field::value_type> sigma_check(const Field& F, const AutoTable& A, long k,
                                                   const LieElement<typename Field::value_type>& x) {
    auto y = apply_sigma(F, A, k, x);
    y *= F.omega(k);
    return y;
}

template <class S>
TensorState<S> tensor_of(const std::vector<ModState<S>>& parts, const S& one) {
    TensorState<S> acc;
    acc.add({}, one);
    for (const auto& part : parts) {
        TensorState<S> next;
        for (const auto& [keys, c] : acc)
            for (const auto& [k, d] : part) {
                auto nk = keys;
                nk.push_back(k);
                next.add(nk, c * d);
            }
        acc = std::move(next);
    }
    return acc;
}

template <class Field>
void check_phase_budget(const Field& F, int m) {
    long total = 1;
    for (int j = 0; j < m; ++j) {
        total *= F.order();
        if (total > kPhaseSumCap) throw std::length_error("phase sum T^m exceeds the enumeration cap");
    }
}

template <class Field>
void check_roots(const Model& M, const std::vector<int>& colors, std::size_t nroots) {
    if (colors.size() != nroots) throw std::invalid_argument("number of colors differs from number of roots");
    for (int c : colors)
        if (c < 0 || c >= M.g->rank()) throw std::invalid_argument("root color out of range");
}

// sum over partitions and phases of prod_i [lower(k_1, c_1) ... lower(k_p, c_p) v_i] / [denominators], times sign.
template <class Field>
TensorState<typename Field::value_type> sv_sum(
    const Field& F, const std::vector<ModulePtr>& mods, const std::vector<int>& colors,
    const std::vector<typename Field::value_type>& w, const std::vector<typename Field::value_type>& z,
    const std::function<LieElement<typename Field::value_type>(int, int)>& lower, bool sign) {
    using S = typename Field::value_type;
    int m = static_cast<int>(colors.size()), N = static_cast<int>(mods.size()), T = F.order();
    check_phase_budget(F, m);
    TensorState<S> psi;
    for (const auto& part : enumerate_partitions(m, N)) {
        std::vector<ModState<S>> site_states;
        for (int i = 0; i < N; ++i) {
            const auto& blk = part.blocks[i];
            int p = static_cast<int>(blk.size());
            ModState<S> acc;
            if (p == 0) {
                acc.add(mods[i]->highest(), F.one());
                site_states.push_back(acc);
                continue;
            }
            std::vector<int> k(p, 0);
            while (true) {
                S denom = F.one();
                for (int t = 0; t + 1 < p; ++t) denom = denom * (F.omega(k[t]) * w[blk[t]] - F.omega(k[t + 1]) * w[blk[t + 1]]);
                denom = denom * (F.omega(k[p - 1]) * w[blk[p - 1]] - z[i]);
                ModState<S> st;
                st.add(mods[i]->highest(), checked_inverse(denom));
                for (int t = p - 1; t >= 0 && !st.empty(); --t) st = module_act(*mods[i], lower(k[t], colors[blk[t]]), st);
                acc += st;
                int q = 0;
                while (q < p && ++k[q] == T) k[q++] = 0;
                if (q == p) break;
            }
            site_states.push_back(acc);
        }
        psi += tensor_of(site_states, F.one());
    }
    if (sign && m % 2) psi = -psi;
    return psi;
}

}  // namespace detail

// (-1)^m sum over ordered partitions and phases k in Z_T^m, with
// sigma-check^k(F_c) = omega^k sigma^k(F_c), on the tensor product of Verma modules.
// Throws std::domain_error on a vanishing denominator.
template <class Field>
TensorState<typename Field::value_type> build_psi(const Field& F, const Model& M, const std::vector<int>& colors,
                                                  const std::vector<typename Field::value_type>& w) {
    using S = typename Field::value_type;
    detail::check_roots<Field>(M, colors, w.size());
    const LieAlgebra& g = *M.g;
    const AutoTable& A = *M.A;
    int T = M.T();
    std::vector<std::vector<LieElement<S>>> table(g.rank());
    for (int c = 0; c < g.rank(); ++c)
        for (int k = 0; k < T; ++k) table[c].push_back(detail::sigma_check(F, A, k, detail::simple_lowering(F, g, c)));
    auto lower = [&](int k, int c) { return table[c][k]; };
    return detail::sv_sum(F, verma_modules(M), colors, w, site_values(F, M), lower, true);
}

namespace detail {

template <class Field>
TensorState<typename Field::value_type> swap_recurse(const Field& F, const Model& M, const std::vector<ModulePtr>& mods,
                                                     const std::vector<typename Field::value_type>& w,
                                                     const std::vector<typename Field::value_type>& z,
                                                     const TensorState<typename Field::value_type>& X,
                                                     const std::vector<LieElement<typename Field::value_type>>& ys, int s) {
    using S = typename Field::value_type;
    if (s == 0) return X;
    const AutoTable& A = *M.A;
    int T = M.T(), N = static_cast<int>(mods.size());
    const auto& y = ys[s - 1];
    TensorState<S> out;
    for (int j = 0; j < T; ++j) {
        auto sy = apply_sigma(F, A, j, y);
        for (int i = 0; i < N; ++i) {
            S c = checked_inverse(S(w[s - 1] - F.omega(-j) * z[i]));
            auto moved = tensor_act(mods, sy, i, X);
            if (moved.empty()) continue;
            out.add_scaled(swap_recurse(F, M, mods, w, z, moved, ys, s - 1), c);
        }
        for (int i = 0; i + 1 < s; ++i) {
            S c = checked_inverse(S(w[s - 1] - F.omega(-j) * w[i]));
            auto br = bracket(*M.g, sy, ys[i]);
            if (br.empty()) continue;
            auto ys2 = ys;
            ys2[i] = br;
            out.add_scaled(swap_recurse(F, M, mods, w, z, X, ys2, s - 1), c);
        }
    }
    return out;
}

}  // namespace detail

// The same vector as build_psi, by repeatedly removing the last lowering operator y_s:
// sigma^j(y_s) moves onto site i with weight 1/(w_s - omega^{-j} z_i), or onto an
// earlier y_i as [sigma^j(y_s), y_i] with weight 1/(w_s - omega^{-j} w_i).
template <class Field>
TensorState<typename Field::value_type> swapping_oracle(const Field& F, const Model& M, const std::vector<int>& colors,
                                                        const std::vector<typename Field::value_type>& w) {
    using S = typename Field::value_type;
    detail::check_roots<Field>(M, colors, w.size());
    auto mods = verma_modules(M);
    std::vector<LieElement<S>> ys;
    for (int c : colors) ys.push_back(detail::simple_lowering(F, *M.g, c));
    auto out = detail::swap_recurse(F, M, mods, w, site_values(F, M), highest_tensor(F, mods), ys, static_cast<int>(ys.size()));
    if (colors.size() % 2) out = -out;
    return out;
}

// The classical (T = 1) weight function at roots w~ and sites z~, with the same (-1)^m sign.
template <class Field>
TensorState<typename Field::value_type> classical_weight_function(const Field& F, const Model& M, const std::vector<int>& colors,
                                                                  const std::vector<typename Field::value_type>& w_tilde,
                                                                  const std::vector<typename Field::value_type>& z_tilde) {
    using S = typename Field::value_type;
    if (F.order() != 1) throw std::invalid_argument("the classical weight function needs a T = 1 field");
    detail::check_roots<Field>(M, colors, w_tilde.size());
    const LieAlgebra& g = *M.g;
    auto lower = [&](int, int c) { return detail::simple_lowering(F, g, c); };
    return detail::sv_sum(F, verma_modules(M), colors, w_tilde, z_tilde, std::function<LieElement<S>(int, int)>(lower), true);
}

// Inner sigma only: the phase sums done in closed form,
// psi = (-1)^m T^m sum_n prod_i f(w_block, z_i; chi) F...F v / (tilde denominators).
template <class Field>
TensorState<typename Field::value_type> psi_inner_resummed(const Field& F, const Model& M, const std::vector<int>& colors,
                                                           const std::vector<typename Field::value_type>& w) {
    using S = typename Field::value_type;
    detail::check_roots<Field>(M, colors, w.size());
    const AutoTable& A = *M.A;
    const LieAlgebra& g = *M.g;
    if (!A.is_inner()) throw std::invalid_argument("the resummed weight function needs an inner automorphism");
    int T = M.T(), m = static_cast<int>(colors.size()), N = M.N();
    auto mods = verma_modules(M);
    auto z = site_values(F, M);
    std::vector<S> wt, zt;
    for (const auto& x : w) wt.push_back(detail::ipow(F, x, T));
    for (const auto& x : z) zt.push_back(detail::ipow(F, x, T));
    auto br = [T](long k) { return mod_T_bracket(k, T); };
    TensorState<S> psi;
    for (const auto& part : enumerate_partitions(m, N)) {
        std::vector<ModState<S>> site_states;
        for (int i = 0; i < N; ++i) {
            const auto& blk = part.blocks[i];
            int p = static_cast<int>(blk.size());
            ModState<S> st;
            if (p == 0) {
                st.add(mods[i]->highest(), F.one());
                site_states.push_back(st);
                continue;
            }
            S coef = F.from(Rational(1));
            long chi_sum = 0;
            for (int s = 0; s < p; ++s) {
                long chi = A.chi(g.roots().simple_root_index(colors[blk[s]]));
                long prev = chi_sum;
                chi_sum += chi;
                int e = s == 0 ? br(chi - 1) : T - 1 - br(prev - 1) + br(chi_sum - 1);
                coef = coef * detail::ipow(F, w[blk[s]], e);
            }
            coef = coef * detail::ipow(F, z[i], T - 1 - br(chi_sum - 1));
            S denom = F.one();
            for (int t = 0; t + 1 < p; ++t) denom = denom * (wt[blk[t]] - wt[blk[t + 1]]);
            denom = denom * (wt[blk[p - 1]] - zt[i]);
            st.add(mods[i]->highest(), coef * detail::checked_inverse(denom));
            for (int t = p - 1; t >= 0; --t) st = module_act(*mods[i], detail::simple_lowering(F, g, colors[blk[t]]), st);
            site_states.push_back(st);
        }
        psi += detail::tensor_of(site_states, F.one());
    }
    psi *= F.from(Rational(m % 2 ? -1 : 1));
    for (int j = 0; j < m; ++j) psi *= F.from(Rational(T));
    return psi;
}

// sum_{i in Z_n} prod_{j != i} 1/(x_j - x_{j+1}), indices mod n; exact for exact scalars.
template <class Field>
typename Field::value_type circle_lemma_check(const Field& F, const std::vector<typename Field::value_type>& x) {
    using S = typename Field::value_type;
    int n = static_cast<int>(x.size());
    if (n < 2) throw std::invalid_argument("the circle lemma needs at least two points");
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (is_zero(S(x[a] - x[b]))) throw std::domain_error("coincident points in the circle lemma");
    S total = F.zero();
    for (int i = 0; i < n; ++i) {
        S term = F.one();
        for (int j = 0; j < n; ++j)
            if (j != i) term = term * reciprocal(S(x[j] - x[(j + 1) % n]));
        total += term;
    }
    return total;
}

// Verma tensor state mapped into the model's site modules (irreducible sites are projected).
template <class S>
TensorState<S> to_model_modules(const Model& M, const TensorState<S>& s) {
    TensorState<S> out;
    for (const auto& [keys, c] : s) {
        TensorState<S> partial;
        partial.add({}, c);
        for (int i = 0; i < M.N() && !partial.empty(); ++i) {
            TensorState<S> next;
            if (M.irreps[i]) {
                const RatVec& img = M.irreps[i]->project_monomial(keys[i]);
                for (const auto& [pk, pc] : partial)
                    for (const auto& [k2, q] : img) {
                        auto nk = pk;
                        nk.push_back(k2);
                        next.add(nk, mul_q(pc, q));
                    }
            } else {
                for (const auto& [pk, pc] : partial) {
                    auto nk = pk;
                    nk.push_back(keys[i]);
                    next.add(nk, pc);
                }
            }
            partial = std::move(next);
        }
        out += partial;
    }
    return out;
}

struct EigenpairReport {
    int site = 0;
    Complex eigenvalue;
    double psi_norm = 0;
    // ||H_i psi - E_i psi|| / ||psi||
    double residual_H = 0;
    // ||iota(H_i) psi - E_i psi|| / ||psi||
    double residual_iota_H = 0;
    // Exact arithmetic only: whether H_i psi - E_i psi vanishes identically.
    bool exact = false;
    bool exact_H_zero = false;
    bool exact_iota_H_zero = false;
};

// psi in the model's modules, H_i and iota(H_i) applied, compared with E_i.
// Throws std::domain_error when psi vanishes.
template <class Field>
EigenpairReport verify_eigenpair(const Field& F, const Model& M, const std::vector<int>& colors,
                                 const std::vector<typename Field::value_type>& w, int i) {
    using S = typename Field::value_type;
    auto psi = to_model_modules(M, build_psi(F, M, colors, w));
    if (psi.empty()) throw std::domain_error("the weight function vanishes for this configuration");
    auto H = build_H(F, M, i);
    S E = eigenvalue_E(F, M, colors, w, i);
    auto Hpsi = apply_operator(M, H, psi);
    auto IHpsi = apply_operator(M, iota_operator(F, *M.g, H), psi);
    auto d1 = Hpsi - psi * E;
    auto d2 = IHpsi - psi * E;
    EigenpairReport r;
    r.site = i;
    r.eigenvalue = to_complex(E);
    r.psi_norm = norm2(psi);
    r.residual_H = norm2(d1) / r.psi_norm;
    r.residual_iota_H = norm2(d2) / r.psi_norm;
    r.exact = Field::exact;
    r.exact_H_zero = Field::exact && d1.empty();
    r.exact_iota_H_zero = Field::exact && d2.empty();
    return r;
}

struct SingularReport {
    // (positive root index, ||sum_j (Pi_0 E_alpha)^{(j)} psi|| / ||psi||), for roots with Pi_0 E_alpha != 0.
    std::vector<std::pair<int, double>> norms;
    double max_norm = 0;
};

// Diagonal action of the raising part Pi_0 n^+ of the stabilized subalgebra on psi.
template <class Field>
SingularReport singular_diagnostic(const Field& F, const Model& M, const std::vector<ModulePtr>& mods,
                                   const TensorState<typename Field::value_type>& psi) {
    using S = typename Field::value_type;
    const LieAlgebra& g = *M.g;
    SingularReport rep;
    double n0 = norm2(psi);
    if (n0 == 0) return rep;
    for (int r = 0; r < g.n_pos(); ++r) {
        auto x = projector_pi(F, *M.A, 0, basis_element(F, g.e(r)));
        if (x.empty()) continue;
        TensorState<S> acc;
        for (int j = 0; j < static_cast<int>(mods.size()); ++j) acc += tensor_act(mods, x, j, psi);
        double v = norm2(acc) / n0;
        rep.norms.push_back({r, v});
        rep.max_norm = std::max(rep.max_norm, v);
    }
    return rep;
}

nlohmann::json psi_to_json(const std::vector<ModulePtr>& mods, const TensorState<CycloNum>& s);
nlohmann::json psi_to_json(const std::vector<ModulePtr>& mods, const TensorState<Complex>& s);
nlohmann::json to_json(const EigenpairReport& r);
nlohmann::json to_json(const SingularReport& r);

// Modules matching the output of to_model_modules.
std::vector<ModulePtr> model_modules(const Model& M);

}  // namespace cg
