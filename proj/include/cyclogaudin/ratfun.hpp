// Gamma-equivariant rational functions in partial-fraction form with values in a
// finite-dimensional coefficient space, their Laurent expansions, residues and the
// equivariant strong residue theorem.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclogaudin/automorphism.hpp"

namespace cg {

// Coefficient space with a Gamma action and an invariant non-degenerate pairing.
template <class S>
struct CoeffSpace {
    explicit CoeffSpace(S z) : zero(std::move(z)) {}
    std::string tag;
    int T = 1;
    int dim = 0;
    S zero;
    // sigma[b][a] is the b-th coordinate of omega . e_a.
    std::vector<std::vector<S>> sigma;
    // pairing[a][b] = <e_a, e_b>.
    std::vector<std::vector<S>> pairing;

    std::vector<S> zeros() const { return std::vector<S>(dim, zero); }

    std::vector<S> act(std::vector<S> v, long p) const {
        int steps = mod_T_bracket(p, T);
        for (int s = 0; s < steps; ++s) {
            std::vector<S> w = zeros();
            for (int a = 0; a < dim; ++a) {
                if (is_zero(v[a])) continue;
                for (int b = 0; b < dim; ++b)
                    if (!is_zero(sigma[b][a])) w[b] += sigma[b][a] * v[a];
            }
            v = std::move(w);
        }
        return v;
    }

    S pair(const std::vector<S>& u, const std::vector<S>& v) const {
        S acc = zero;
        for (int a = 0; a < dim; ++a) {
            if (is_zero(u[a])) continue;
            for (int b = 0; b < dim; ++b)
                if (!is_zero(v[b]) && !is_zero(pairing[a][b])) acc += u[a] * pairing[a][b] * v[b];
        }
        return acc;
    }
};

template <class S>
using CoeffSpacePtr = std::shared_ptr<const CoeffSpace<S>>;

template <class Field>
CoeffSpacePtr<typename Field::value_type> scalar_space(const Field& F) {
    auto s = std::make_shared<CoeffSpace<typename Field::value_type>>(F.zero());
    s->tag = "scalar";
    s->T = F.order();
    s->dim = 1;
    s->sigma = {{F.one()}};
    s->pairing = {{F.one()}};
    return s;
}

// g with sigma acting on coefficients and the normalized invariant form.
template <class Field>
CoeffSpacePtr<typename Field::value_type> lie_space(const Field& F, const AutoTable& A) {
    const LieAlgebra& g = A.algebra();
    auto s = std::make_shared<CoeffSpace<typename Field::value_type>>(F.zero());
    s->tag = "lie";
    s->T = F.order();
    s->dim = g.dim();
    s->sigma.assign(g.dim(), std::vector<typename Field::value_type>(g.dim(), F.zero()));
    s->pairing = s->sigma;
    for (int a = 0; a < g.dim(); ++a) {
        s->sigma[A.perm(1, a)][a] = phase_value(F, A.phase(1, a));
        for (int b = 0; b < g.dim(); ++b) s->pairing[a][b] = F.from(g.form(a, b));
    }
    return s;
}

// h* in fundamental coordinates with omega acting by L_sigma and the inner product.
template <class Field>
CoeffSpacePtr<typename Field::value_type> weight_space(const Field& F, const AutoTable& A) {
    const RootSystem& R = A.algebra().roots();
    int n = R.rank;
    auto s = std::make_shared<CoeffSpace<typename Field::value_type>>(F.zero());
    s->tag = "weight";
    s->T = F.order();
    s->dim = n;
    s->sigma.assign(n, std::vector<typename Field::value_type>(n, F.zero()));
    s->pairing = s->sigma;
    for (int i = 0; i < n; ++i) {
        s->sigma[A.node_perm(1, i)][i] = F.one();
        for (int j = 0; j < n; ++j) s->pairing[i][j] = F.from(R.fundamental_gram[i][j]);
    }
    return s;
}

inline bool points_coincide(const CycloNum& a, const CycloNum& b) { return (a - b).is_zero(); }
inline bool points_coincide(const Complex& a, const Complex& b) {
    return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a));
}

template <class S>
struct PoleTerm {
    S point;
    int order;
    std::vector<S> coef;  // coef / (t - point)^order
};

// Laurent data at one point: coefs[j - low] multiplies (t - point)^j.
template <class S>
struct LaurentSeries {
    explicit LaurentSeries(S p) : point(std::move(p)) {}
    S point;
    int low = 0;
    std::vector<std::vector<S>> coefs;

    int high() const { return low + static_cast<int>(coefs.size()) - 1; }
    // Coefficient of (t - point)^j, or nullptr when outside the stored range.
    const std::vector<S>* at(int j) const {
        if (j < low || j > high()) return nullptr;
        return &coefs[j - low];
    }
};

template <class S>
class EquivRatFunc {
public:
    EquivRatFunc(CoeffSpacePtr<S> space, int k, bool allow_origin = false)
        : space_(std::move(space)), k_(mod_T_bracket(k, space_->T)), allow_origin_(allow_origin) {}

    const CoeffSpace<S>& space() const { return *space_; }
    const CoeffSpacePtr<S>& space_ptr() const { return space_; }
    int index() const { return k_; }
    bool allow_origin() const { return allow_origin_; }
    const std::vector<PoleTerm<S>>& terms() const { return terms_; }

    void add_term(PoleTerm<S> t) {
        if (is_zero(t.point) && !allow_origin_) throw std::invalid_argument("pole at the origin is not allowed");
        for (auto& u : terms_)
            if (u.order == t.order && points_coincide(u.point, t.point)) {
                for (int a = 0; a < space_->dim; ++a) u.coef[a] += t.coef[a];
                return;
            }
        terms_.push_back(std::move(t));
    }

    EquivRatFunc& operator+=(const EquivRatFunc& o) {
        if (o.k_ != k_) throw std::invalid_argument("adding functions of different equivariance index");
        if (o.allow_origin_) allow_origin_ = true;
        for (const auto& t : o.terms_) add_term(t);
        return *this;
    }

private:
    CoeffSpacePtr<S> space_;
    int k_;
    bool allow_origin_;
    std::vector<PoleTerm<S>> terms_;
};

template <class S>
S reciprocal(const S& x);
template <>
inline CycloNum reciprocal(const CycloNum& x) {
    return x.inverse();
}
template <>
inline Complex reciprocal(const Complex& x) {
    return 1.0 / x;
}

// Evaluation of an EquivRatFunc at a point away from its poles.
template <class S>
std::vector<S> evaluate(const EquivRatFunc<S>& f, const S& t) {
    const auto& sp = f.space();
    std::vector<S> out = sp.zeros();
    for (const auto& term : f.terms()) {
        S d = t - term.point;
        S p = d;
        for (int j = 1; j < term.order; ++j) p = p * d;
        S inv = reciprocal(p);
        for (int a = 0; a < sp.dim; ++a) out[a] += term.coef[a] * inv;
    }
    return out;
}

// sum_{j in Z_T} omega^{j(k+n)} (sigma^j A) / (t - omega^j x)^n, which satisfies
// f(omega t) = omega^k (omega . f)(t).  At x = 0 (origin flag required) this is
// T Pi(A) / t^n for the matching isotypic projection.
template <class Field>
EquivRatFunc<typename Field::value_type> gamma_orbit_sum(const Field& F, const CoeffSpacePtr<typename Field::value_type>& sp,
                                                        const std::vector<typename Field::value_type>& A,
                                                        const typename Field::value_type& x, int n, int k,
                                                        bool allow_origin = false) {
    using S = typename Field::value_type;
    if (n < 1) throw std::invalid_argument("pole order must be positive");
    if (static_cast<int>(A.size()) != sp->dim) throw std::invalid_argument("coefficient has the wrong dimension");
    if (is_zero(x) && !allow_origin) throw std::invalid_argument("orbit sum at the origin requires the origin flag");
    EquivRatFunc<S> f(sp, k, allow_origin);
    int T = F.order();
    for (int j = 0; j < T; ++j) {
        S ph = F.omega(static_cast<long>(j) * (k + n));
        std::vector<S> c = sp->act(A, j);
        for (auto& ci : c) ci = ci * ph;
        f.add_term({x * F.omega(j), n, std::move(c)});
    }
    return f;
}

namespace detail {
inline Rational binomial(long n, long k) {
    Rational r = 1;
    for (long i = 1; i <= k; ++i) r = r * Rational(n - k + i) / Rational(i);
    return r;
}
}  // namespace detail

// Laurent coefficients of f at x, from the pole order at x up to (t - x)^order.
template <class S>
LaurentSeries<S> expand_at(const EquivRatFunc<S>& f, const S& x, int order) {
    const auto& sp = f.space();
    int low = 0;
    for (const auto& term : f.terms())
        if (points_coincide(term.point, x)) low = std::min(low, -term.order);
    LaurentSeries<S> out(x);
    out.low = low;
    if (order < low) return out;
    out.coefs.assign(order - low + 1, sp.zeros());
    for (const auto& term : f.terms()) {
        if (points_coincide(term.point, x)) {
            if (-term.order <= order)
                for (int a = 0; a < sp.dim; ++a) out.coefs[-term.order - low][a] += term.coef[a];
            continue;
        }
        // 1/(t-p)^n = sum_j (-1)^j C(n+j-1, j) (x-p)^{-n-j} (t-x)^j.
        S r = reciprocal(S(x - term.point));
        S pw = r;
        for (int j = 1; j < term.order; ++j) pw = pw * r;
        for (int j = 0; j <= order; ++j) {
            Rational c = detail::binomial(term.order + j - 1, j);
            if (j % 2) c = -c;
            S s = mul_q(pw, c);
            for (int a = 0; a < sp.dim; ++a) out.coefs[j - low][a] += term.coef[a] * s;
            pw = pw * r;
        }
    }
    return out;
}

template <class S>
std::vector<S> residue_at(const EquivRatFunc<S>& f, const S& x) {
    LaurentSeries<S> e = expand_at(f, x, -1);
    const std::vector<S>* c = e.at(-1);
    return c ? *c : f.space().zeros();
}

// res_{t - x} <f, g> for Laurent data at the same point, truncated where f is stored.
template <class S>
S residue_pairing(const CoeffSpace<S>& sp, const LaurentSeries<S>& f, const LaurentSeries<S>& g) {
    S acc = sp.zero;
    for (int a = f.low; a <= f.high(); ++a) {
        const std::vector<S>* gb = g.at(-1 - a);
        if (gb) acc += sp.pair(*f.at(a), *gb);
    }
    return acc;
}

// sum_i res_{t - x_i} <f_i, iota g> (+ (1/T) res_t <f_0, iota_t g> when origin data is given).
template <class Field>
typename Field::value_type residue_theorem_check(const Field& F, const std::vector<LaurentSeries<typename Field::value_type>>& local,
                                                 const EquivRatFunc<typename Field::value_type>& g,
                                                 const std::optional<LaurentSeries<typename Field::value_type>>& origin = std::nullopt) {
    using S = typename Field::value_type;
    const auto& sp = g.space();
    S acc = F.zero();
    for (const auto& fi : local) acc += residue_pairing(sp, fi, expand_at(g, fi.point, -1 - fi.low));
    if (origin) {
        S o = residue_pairing(sp, *origin, expand_at(g, origin->point, -1 - origin->low));
        acc += o * F.from(Rational(1, F.order()));
    }
    return acc;
}

// Splits local data (one Laurent series per orbit representative) into the global
// equivariant function built from the pole parts and the Taylor remainders.
template <class Field>
std::pair<EquivRatFunc<typename Field::value_type>, std::vector<LaurentSeries<typename Field::value_type>>> split_local_data(
    const Field& F, const CoeffSpacePtr<typename Field::value_type>& sp,
    const std::vector<LaurentSeries<typename Field::value_type>>& local, int k) {
    using S = typename Field::value_type;
    EquivRatFunc<S> f(sp, k);
    for (const auto& fi : local)
        for (int j = fi.low; j < 0 && j <= fi.high(); ++j) {
            const auto& c = *fi.at(j);
            bool nz = false;
            for (const auto& x : c) nz = nz || !is_zero(x);
            if (nz) f += gamma_orbit_sum(F, sp, c, fi.point, -j, k);
        }
    std::vector<LaurentSeries<S>> rem;
    for (const auto& fi : local) {
        LaurentSeries<S> e = expand_at(f, fi.point, fi.high());
        LaurentSeries<S> r(fi.point);
        r.low = 0;
        for (int j = 0; j <= fi.high(); ++j) {
            std::vector<S> c = *fi.at(j);
            const std::vector<S>* ej = e.at(j);
            if (ej)
                for (int a = 0; a < sp->dim; ++a) c[a] -= (*ej)[a];
            r.coefs.push_back(std::move(c));
        }
        rem.push_back(std::move(r));
    }
    return {std::move(f), std::move(rem)};
}

// When the local data does not globalize (within the stored Taylor range), returns a
// test function g of index -k-1 with a nonzero residue pairing.
template <class Field>
std::optional<EquivRatFunc<typename Field::value_type>> globalization_witness(
    const Field& F, const CoeffSpacePtr<typename Field::value_type>& sp,
    const std::vector<LaurentSeries<typename Field::value_type>>& local, int k) {
    using S = typename Field::value_type;
    auto [f, rem] = split_local_data(F, sp, local, k);
    for (const auto& r : rem)
        for (int j = 0; j <= r.high(); ++j) {
            const auto& c = *r.at(j);
            bool nz = false;
            for (const auto& x : c) nz = nz || !is_zero(x);
            if (!nz) continue;
            for (int b = 0; b < sp->dim; ++b) {
                std::vector<S> e = sp->zeros();
                e[b] = F.one();
                auto g = gamma_orbit_sum(F, sp, e, r.point, j + 1, -k - 1);
                if (!is_zero(residue_theorem_check(F, local, g))) return g;
            }
        }
    return std::nullopt;
}

}  // namespace cg
