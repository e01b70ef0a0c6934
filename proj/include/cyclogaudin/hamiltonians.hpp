// The cyclotomic Gaudin model: model validation, the quadratic Hamiltonians H_i,
// the generating operator S(u), the master weight lambda(t), eigenvalue formulas
// and exact identity certificates.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclogaudin/automorphism.hpp"
#include "cyclogaudin/ratfun.hpp"
#include "cyclogaudin/repn.hpp"
#include "json.hpp"

namespace cg {

enum class ModuleKind { Verma, Irrep };

struct SiteSpec {
    // Exact value when the site is rational; z always holds the complex value.
    std::optional<Rational> z_exact;
    Complex z;
    WeightVec weight;
    ModuleKind kind = ModuleKind::Irrep;

    static SiteSpec rational(const Rational& q, WeightVec w, ModuleKind k = ModuleKind::Irrep) {
        return {q, Complex(q.get_d(), 0.0), std::move(w), k};
    }
    static SiteSpec complex(Complex z, WeightVec w, ModuleKind k = ModuleKind::Irrep) {
        return {std::nullopt, z, std::move(w), k};
    }
};

struct ModelSpec {
    Series series = Series::A;
    int rank = 1;
    AutoSpec automorphism;
    std::vector<SiteSpec> sites;
    int irrep_cap = 200;
};

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Model {
    ModelSpec spec;
    LieAlgebraPtr g;
    AutoTablePtr A;
    std::vector<ModulePtr> modules;
    // Non-null exactly for irrep sites.
    std::vector<std::shared_ptr<const IrrepModule>> irreps;
    // Verma module M_{lambda_i} at every site (the site module itself for Verma sites).
    std::vector<ModulePtr> vermas;

    int T() const { return A->order(); }
    int N() const { return static_cast<int>(spec.sites.size()); }
    bool exact() const;
    bool all_irrep() const;
    int dense_dim() const;
};

using ModelPtr = std::shared_ptr<const Model>;

// Checks z_i != 0 and that Gamma-orbits of sites are pairwise disjoint, builds sigma
// and the site modules.  Throws ValidationError naming the offending data.
ModelPtr validate_model(const ModelSpec& spec);
// Same, with a prebuilt automorphism (whose algebra is used).
ModelPtr validate_model(const ModelSpec& spec, AutoTablePtr A);

// The (sl3, diagram flip, T = 2) model with L_{omega_1} at both sites.
ModelSpec sl3_flip_example(const Rational& z1, const Rational& z2);

std::vector<CycloNum> site_values(const CycloField& F, const Model& m);
std::vector<Complex> site_values(const ComplexField& F, const Model& m);

inline CycloNum field_cast(const CycloField&, const CycloNum& x) { return x; }
inline Complex field_cast(const ComplexField&, const CycloNum& x) { return x.to_complex(); }
inline Complex field_cast(const ComplexField&, const Complex& x) { return x; }

// If b = omega^p a for some p in Z_T, returns p.
std::optional<int> orbit_relation(const CycloField& F, const CycloNum& a, const CycloNum& b, double tol = 0);
std::optional<int> orbit_relation(const ComplexField& F, const Complex& a, const Complex& b, double tol = 1e-10);

// Sum of terms coef * X_{al}^{(sl)} X_{ar}^{(sr)} (X_{ar} applied first) plus a scalar.
// sl < 0 marks a term linear in X_{ar}^{(sr)}.  Terms on distinct sites are stored
// with sl < sr since they commute.
template <class S>
class Operator {
public:
    using TermKey = std::array<int, 4>;

    template <class Field>
    explicit Operator(const Field& F) : zero_(F.zero()), one_(F.one()), scalar_(F.zero()) {}

    const S& zero() const { return zero_; }
    const S& one() const { return one_; }
    const S& scalar() const { return scalar_; }
    const std::map<TermKey, S>& terms() const { return terms_; }

    void add(const S& coef, int sl, int al, int sr, int ar) {
        if (is_zero(coef)) return;
        if (sl >= 0 && sl != sr && sl > sr) {
            std::swap(sl, sr);
            std::swap(al, ar);
        }
        TermKey k{sl, al, sr, ar};
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, coef);
            return;
        }
        it->second += coef;
        if (is_zero(it->second)) terms_.erase(it);
    }
    void add_scalar(const S& c) { scalar_ += c; }

    Operator& add_scaled(const Operator& o, const S& f) {
        for (const auto& [k, c] : o.terms_) add(c * f, k[0], k[1], k[2], k[3]);
        scalar_ += o.scalar_ * f;
        return *this;
    }
    Operator& operator+=(const Operator& o) { return add_scaled(o, one_); }
    Operator& operator-=(const Operator& o) { return add_scaled(o, -one_); }

    bool is_zero_op() const { return terms_.empty() && is_zero(scalar_); }
    bool operator==(const Operator& o) const { return terms_ == o.terms_ && scalar_ == o.scalar_; }

private:
    S zero_, one_, scalar_;
    std::map<TermKey, S> terms_;
};

template <class S>
class Matrix {
public:
    Matrix(int rows, int cols, const S& zero) : r_(rows), c_(cols), zero_(zero), d_(static_cast<std::size_t>(rows) * cols, zero) {}

    int rows() const { return r_; }
    int cols() const { return c_; }
    S& operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * c_ + j]; }
    const S& operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * c_ + j]; }

    Matrix operator*(const Matrix& o) const {
        Matrix out(r_, o.c_, zero_);
        for (int i = 0; i < r_; ++i)
            for (int k = 0; k < c_; ++k) {
                const S& a = (*this)(i, k);
                if (is_zero(a)) continue;
                for (int j = 0; j < o.c_; ++j)
                    if (!is_zero(o(k, j))) out(i, j) += a * o(k, j);
            }
        return out;
    }
    Matrix operator-(const Matrix& o) const {
        Matrix out = *this;
        for (std::size_t i = 0; i < d_.size(); ++i) out.d_[i] -= o.d_[i];
        return out;
    }
    Matrix operator+(const Matrix& o) const {
        Matrix out = *this;
        for (std::size_t i = 0; i < d_.size(); ++i) out.d_[i] += o.d_[i];
        return out;
    }
    bool is_zero_matrix() const {
        for (const auto& x : d_)
            if (!is_zero(x)) return false;
        return true;
    }
    // First nonzero entry in row-major order.
    std::optional<std::pair<int, int>> first_nonzero() const {
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j)
                if (!is_zero((*this)(i, j))) return std::make_pair(i, j);
        return std::nullopt;
    }
    bool operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && d_ == o.d_; }

private:
    int r_, c_;
    S zero_;
    std::vector<S> d_;
};

namespace detail {

template <class Field>
typename Field::value_type trace_sigma_in(const Field& F, const AutoTable& A, long r) {
    const LieAlgebra& g = A.algebra();
    auto acc = F.zero();
    for (int a = 0; a < g.dim(); ++a) {
        auto dual = apply_sigma(F, A, r, lift(F, g.dual(a)));
        acc = form(g, dual, basis_element(F, a), acc);
    }
    return acc;
}

template <class S>
S weight_pair(const RootSystem& R, const std::vector<S>& a, const std::vector<S>& b, const S& zero) {
    S acc = zero;
    int n = R.rank;
    for (int i = 0; i < n; ++i) {
        if (is_zero(a[i])) continue;
        for (int j = 0; j < n; ++j)
            if (!is_zero(b[j]) && R.fundamental_gram[i][j] != 0) acc += mul_q(a[i] * b[j], R.fundamental_gram[i][j]);
    }
    return acc;
}

template <class S>
S weight_pair_q(const RootSystem& R, const std::vector<S>& a, const WeightVec& b, const S& zero) {
    S acc = zero;
    int n = R.rank;
    for (int i = 0; i < n; ++i) {
        if (is_zero(a[i])) continue;
        Rational c = 0;
        for (int j = 0; j < n; ++j) c += R.fundamental_gram[i][j] * b[j];
        if (c != 0) acc += mul_q(a[i], c);
    }
    return acc;
}

}  // namespace detail

// Quadratic Casimir sum_a I^{a(i)} I_a^{(i)} at one site.
template <class Field>
Operator<typename Field::value_type> casimir_operator(const Field& F, const Model& M, int i) {
    Operator<typename Field::value_type> C(F);
    const LieAlgebra& g = *M.g;
    for (int a = 0; a < g.dim(); ++a)
        for (const auto& [b, q] : g.dual(a)) C.add(F.from(q), i, b, i, a);
    return C;
}

// H_i with the (1 - omega^{-p}) self-interaction normalization.
template <class Field>
Operator<typename Field::value_type> build_H(const Field& F, const Model& M, int i) {
    using S = typename Field::value_type;
    const LieAlgebra& g = *M.g;
    const AutoTable& A = *M.A;
    int T = A.order();
    if (i < 0 || i >= M.N()) throw std::out_of_range("site index out of range");
    auto z = site_values(F, M);
    Operator<S> H(F);
    for (int p = 0; p < T; ++p)
        for (int j = 0; j < M.N(); ++j) {
            if (j == i) continue;
            S c = reciprocal(S(z[i] - F.omega(-p) * z[j]));
            for (int a = 0; a < g.dim(); ++a) {
                S ca = c * phase_value(F, A.phase(p, a));
                for (const auto& [b, q] : g.dual(a)) H.add(mul_q(ca, q), i, b, j, A.perm(p, a));
            }
        }
    for (int p = 1; p < T; ++p) {
        S c = reciprocal(S((F.one() - F.omega(-p)) * z[i]));
        for (int a = 0; a < g.dim(); ++a)
            for (const auto& [b, q] : g.dual(a)) H.add(mul_q(c * phase_value(F, A.phase(p, b)), q), i, A.perm(p, b), i, a);
    }
    return H;
}

// sigma^p applied to every generator of every term.
template <class Field>
Operator<typename Field::value_type> sigma_operator(const Field& F, const AutoTable& A, const Operator<typename Field::value_type>& op,
                                                    long p) {
    Operator<typename Field::value_type> out(F);
    out.add_scalar(op.scalar());
    for (const auto& [k, c] : op.terms()) {
        auto ph = c * phase_value(F, A.phase(p, k[3]));
        if (k[0] >= 0) ph = ph * phase_value(F, A.phase(p, k[1]));
        out.add(ph, k[0], k[0] >= 0 ? A.perm(p, k[1]) : k[1], k[2], A.perm(p, k[3]));
    }
    return out;
}

// iota applied to a quadratic word: X^{(l)} Y^{(r)} -> iota(Y)^{(r)} iota(X)^{(l)}.
template <class Field>
Operator<typename Field::value_type> iota_operator(const Field& F, const LieAlgebra& g, const Operator<typename Field::value_type>& op) {
    Operator<typename Field::value_type> out(F);
    out.add_scalar(op.scalar());
    for (const auto& [k, c] : op.terms()) {
        if (k[0] < 0)
            out.add(c, -1, 0, k[2], g.iota(k[3]));
        else
            out.add(c, k[2], g.iota(k[3]), k[0], g.iota(k[1]));
    }
    return out;
}

template <class S>
TensorState<S> apply_operator(const Model& M, const Operator<S>& op, const TensorState<S>& s) {
    TensorState<S> out;
    if (!is_zero(op.scalar())) out.add_scaled(s, op.scalar());
    for (const auto& [k, c] : op.terms()) {
        if (k[0] < 0) {
            tensor_act_basis_into(out, M.modules, k[2], k[3], c, s);
            continue;
        }
        TensorState<S> tmp;
        tensor_act_basis_into(tmp, M.modules, k[2], k[3], c, s);
        tensor_act_basis_into(out, M.modules, k[0], k[1], op.one(), tmp);
    }
    return out;
}

// Dense index of a tensor of irrep basis keys: mixed radix with site 0 most significant.
int dense_index(const Model& M, const std::vector<Key>& keys);
std::vector<Key> dense_keys(const Model& M, int index);

template <class S>
Matrix<S> operator_matrix(const Model& M, const Operator<S>& op) {
    if (!M.all_irrep()) throw std::invalid_argument("dense matrices need irreducible modules at every site");
    int D = M.dense_dim(), N = M.N();
    std::vector<int> dims(N), stride(N);
    for (int i = 0; i < N; ++i) dims[i] = M.irreps[i]->dim();
    int st = 1;
    for (int i = N - 1; i >= 0; --i) {
        stride[i] = st;
        st *= dims[i];
    }
    Matrix<S> m(D, D, op.zero());
    std::vector<int> d(N);
    for (int c = 0; c < D; ++c) {
        int rem = c;
        for (int i = 0; i < N; ++i) {
            d[i] = rem / stride[i];
            rem %= stride[i];
        }
        if (!is_zero(op.scalar())) m(c, c) += op.scalar();
        for (const auto& [k, coef] : op.terms()) {
            int sr = k[2];
            for (const auto& [kr, qr] : M.irreps[sr]->act_basis(k[3], {d[sr]})) {
                int c1 = c + (kr[0] - d[sr]) * stride[sr];
                if (k[0] < 0) {
                    m(c1, c) += mul_q(coef, qr);
                    continue;
                }
                int sl = k[0];
                int cur = sl == sr ? kr[0] : d[sl];
                for (const auto& [kl, ql] : M.irreps[sl]->act_basis(k[1], {cur})) {
                    int c2 = c1 + (kl[0] - cur) * stride[sl];
                    m(c2, c) += mul_q(coef, qr * ql);
                }
            }
        }
    }
    return m;
}

template <class Field>
typename Field::value_type s_u_origin_coefficient(const Field& F, const Model& M) {
    using S = typename Field::value_type;
    int T = M.T();
    S acc = F.zero();
    int k = -M.g->dual_coxeter();
    for (int p = 1; p < T; ++p) {
        S d = F.omega(p) - F.one();
        acc += F.omega(p) * detail::trace_sigma_in(F, *M.A, p) * reciprocal(S(d * d));
    }
    return mul_q(acc, frac(k, 2));
}

// S(u) as an operator at a point u away from 0 and the site orbits.
template <class Field>
Operator<typename Field::value_type> assemble_S_u(const Field& F, const Model& M, const typename Field::value_type& u) {
    using S = typename Field::value_type;
    if (is_zero(u)) throw std::invalid_argument("S(u) is singular at u = 0");
    auto z = site_values(F, M);
    int T = M.T();
    for (int i = 0; i < M.N(); ++i)
        if (orbit_relation(F, z[i], u)) throw std::invalid_argument("u lies in the orbit of site " + std::to_string(i + 1));
    Operator<S> out(F);
    for (int i = 0; i < M.N(); ++i) {
        Operator<S> C = casimir_operator(F, M, i), H = build_H(F, M, i);
        for (int p = 0; p < T; ++p) {
            S d = reciprocal(S(u - F.omega(-p) * z[i]));
            out.add_scaled(C, d * d);
            out.add_scaled(sigma_operator(F, *M.A, H, p), F.omega(p) * d);
        }
    }
    out.add_scalar(s_u_origin_coefficient(F, M) * reciprocal(S(u * u)));
    return out;
}

// lambda(t) = sum_r (sum_i L^r lambda_i/(t - omega^r z_i) - sum_j L^r alpha_{c(j)}/(t - omega^r w_j)) + lambda_0/t.
template <class S>
struct MasterWeight {
    const RootSystem* roots = nullptr;
    std::vector<std::pair<S, WeightVec>> poles;
    WeightVec lambda0;
    S zero;

    explicit MasterWeight(S z) : zero(std::move(z)) {}

    // n-th derivative of lambda at t in fundamental coordinates.
    std::vector<S> derivative(const S& t, int n = 0) const {
        std::vector<S> out(lambda0.size(), zero);
        Rational fact = 1;
        for (int k = 2; k <= n; ++k) fact *= k;
        if (n % 2) fact = -fact;
        auto add_pole = [&](const S& p, const WeightVec& c) {
            S r = reciprocal(S(t - p));
            S pw = r;
            for (int k = 0; k < n; ++k) pw = pw * r;
            pw = mul_q(pw, fact);
            for (std::size_t i = 0; i < c.size(); ++i)
                if (c[i] != 0) out[i] += mul_q(pw, c[i]);
        };
        for (const auto& [p, c] : poles) add_pole(p, c);
        add_pole(zero, lambda0);
        return out;
    }
    std::vector<S> operator()(const S& t) const { return derivative(t, 0); }
};

// Roots w_j with colors c(j) (0-based nodes).  Throws ValidationError on a zero root
// or an orbit collision.
template <class Field>
MasterWeight<typename Field::value_type> master_weight(const Field& F, const Model& M, const std::vector<int>& colors,
                                                       const std::vector<typename Field::value_type>& w) {
    using S = typename Field::value_type;
    const RootSystem& R = M.g->roots();
    const AutoTable& A = *M.A;
    int T = M.T();
    if (colors.size() != w.size()) throw ValidationError("number of colors differs from number of roots");
    auto z = site_values(F, M);
    double tol = Field::exact ? 0.0 : 1e-9;
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (colors[j] < 0 || colors[j] >= R.rank) throw ValidationError("root color out of range");
        if (magnitude(w[j]) <= tol) throw ValidationError("Bethe root at the origin");
        for (const auto& zi : z)
            if (orbit_relation(F, zi, w[j], tol)) throw ValidationError("Bethe root in a site orbit");
        for (std::size_t k = 0; k < j; ++k)
            if (orbit_relation(F, w[k], w[j], tol)) throw ValidationError("Bethe root orbits collide");
    }
    MasterWeight<S> mw(F.zero());
    mw.roots = &R;
    mw.lambda0 = lambda0(A);
    for (int r = 0; r < T; ++r) {
        for (int i = 0; i < M.N(); ++i) mw.poles.push_back({F.omega(r) * z[i], A.l_sigma(M.spec.sites[i].weight, r)});
        for (std::size_t j = 0; j < w.size(); ++j) {
            WeightVec a = A.l_sigma(R.simple_root(colors[j]), r);
            for (auto& x : a) x = -x;
            mw.poles.push_back({F.omega(r) * w[j], a});
        }
    }
    return mw;
}

// 1/2 <lambda(u), lambda(u)> - <lambda'(u), rho>.
template <class S>
S eigenvalue_S(const MasterWeight<S>& mw, const S& u) {
    const RootSystem& R = *mw.roots;
    auto l = mw.derivative(u, 0), dl = mw.derivative(u, 1);
    S half = mul_q(detail::weight_pair(R, l, l, mw.zero), Rational(1, 2));
    return half - detail::weight_pair_q(R, dl, R.rho(), mw.zero);
}

// The eigenvalue of H_i on the Bethe vector.
template <class Field>
typename Field::value_type eigenvalue_E(const Field& F, const Model& M, const std::vector<int>& colors,
                                        const std::vector<typename Field::value_type>& w, int i) {
    using S = typename Field::value_type;
    const RootSystem& R = M.g->roots();
    const AutoTable& A = *M.A;
    int T = M.T();
    auto z = site_values(F, M);
    const WeightVec& li = M.spec.sites[i].weight;
    S acc = F.zero();
    for (int s = 0; s < T; ++s) {
        for (int j = 0; j < M.N(); ++j) {
            if (j == i) continue;
            Rational q = R.inner(li, A.l_sigma(M.spec.sites[j].weight, s));
            if (q != 0) acc += mul_q(reciprocal(S(z[i] - F.omega(s) * z[j])), q);
        }
        for (std::size_t j = 0; j < w.size(); ++j) {
            Rational q = R.inner(li, A.l_sigma(R.simple_root(colors[j]), s));
            if (q != 0) acc -= mul_q(reciprocal(S(z[i] - F.omega(s) * w[j])), q);
        }
    }
    Rational self = R.inner(li, lambda0(A));
    for (int s = 1; s < T; ++s) self += R.inner(li, A.l_sigma(li, s)) / 2;
    acc += mul_q(reciprocal(z[i]), self);
    return acc;
}

// prod_k (1/(n_k - 1)!) (d/du)^{n_k - 1} lambda(u)(H_{s_k}).
template <class S>
S r_gamma_eval(const MasterWeight<S>& mw, const std::vector<std::pair<int, int>>& monomial, const S& u, const S& one) {
    S acc = one;
    for (const auto& [s, n] : monomial) {
        if (n < 1) throw std::invalid_argument("derivative order must be at least 1");
        Rational fact = 1;
        for (int k = 2; k < n; ++k) fact *= k;
        acc = acc * mul_q(mw.derivative(u, n - 1)[s], Rational(1) / fact);
    }
    return acc;
}

struct Certificate {
    std::string name;
    bool pass = false;
    nlohmann::json data;
};

// -(h^v/2) sum_{r>=1} omega^r <sigma^r I^a, I_a>/(omega^r - 1)^2 = 1/2 <lambda_0, lambda_0> + <lambda_0, rho>.
Certificate double_pole_identity(const AutoTable& A);
// sigma^k [sigma^p I^a, I_a] = [sigma^p I^a, I_a] for all k, p.
Certificate sigma_bracket_identity(const AutoTable& A);
// Resummed form of H_i for sigma = id, exact at the model's rational sites.
Certificate resummed_H_check(const Model& M);
// [H_i, H_j] = 0 exactly at `trials` random rational site configurations.
Certificate commutator_check(const ModelSpec& spec, int i, int j, int trials, std::uint64_t seed);
// [H_i, sum_j (Pi_0 X_a)^{(j)}] = 0 for every basis element X_a, exact.
Certificate gsigma_commutation_check(const Model& M, int i);

struct Eigencluster {
    Complex value;
    int multiplicity;
};
// Eigenvalues of H_i on the tensor product of irreps, clustered within tol.
std::vector<Eigencluster> spectrum(const Model& M, int i, double tol = 1e-8, int dim_cap = 4096);
std::vector<Eigencluster> cluster_eigenvalues(std::vector<Complex> ev, double tol);

// Laurent coefficient of (u - x)^{-n} of the matrix S(u) by contour integration.
Matrix<Complex> s_u_laurent_coefficient(const Model& M, Complex x, int n, double radius, int nodes = 256);

}  // namespace cg
