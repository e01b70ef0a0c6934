#include "cyclogaudin/automorphism.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cg {

AutoSpec AutoSpec::identity(int rank, int T) {
    AutoSpec s;
    s.T = T;
    s.permutation.resize(rank);
    for (int i = 0; i < rank; ++i) s.permutation[i] = i;
    s.phases.assign(rank, 0);
    return s;
}

AutoTable::AutoTable(LieAlgebraPtr g, AutoSpec spec, std::vector<std::vector<int>> perm_pow,
                     std::vector<std::vector<Phase>> phase_pow)
    : g_(std::move(g)), spec_(std::move(spec)), T_(spec_.T), perm_pow_(std::move(perm_pow)),
      phase_pow_(std::move(phase_pow)) {}

int AutoTable::node_perm(long p, int i) const {
    int steps = mod_T_bracket(p, T_);
    for (int s = 0; s < steps; ++s) i = spec_.permutation[i];
    return i;
}

bool AutoTable::is_inner() const {
    for (std::size_t i = 0; i < spec_.permutation.size(); ++i)
        if (spec_.permutation[i] != static_cast<int>(i)) return false;
    return true;
}

int AutoTable::chi(int r) const {
    if (!is_inner()) throw std::logic_error("chi is defined only for inner automorphisms");
    const Phase& t = tau(r);
    if (t.sign != 1) throw std::logic_error("phase of an inner automorphism is not a power of omega");
    return t.exp;
}

WeightVec AutoTable::l_sigma(const WeightVec& lambda, long p) const {
    WeightVec out(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) out[node_perm(p, static_cast<int>(i))] = lambda[i];
    return out;
}

namespace {

Phase normalize(Phase ph, int T) {
    ph.exp = mod_T_bracket(ph.exp, T);
    if (ph.sign < 0 && T % 2 == 0) {
        ph.sign = 1;
        ph.exp = mod_T_bracket(ph.exp + T / 2, T);
    }
    return ph;
}

Phase multiply(const Phase& a, const Phase& b, int T) { return normalize({a.sign * b.sign, a.exp + b.exp}, T); }

// Single coefficient of a bracket that lands on one basis vector.
std::pair<int, Rational> single_term(const RatCombo& c) {
    if (c.size() != 1) throw std::logic_error("expected a single root vector in bracket");
    return {c[0].first, c[0].second};
}

}  // namespace

AutoTablePtr build_automorphism(LieAlgebraPtr gp, const AutoSpec& spec, bool verify) {
    const LieAlgebra& g = *gp;
    const RootSystem& R = g.roots();
    int n = g.rank(), T = spec.T;
    if (T < 1) throw std::invalid_argument("automorphism order T must be positive");
    if (static_cast<int>(spec.permutation.size()) != n || static_cast<int>(spec.phases.size()) != n)
        throw std::invalid_argument("automorphism data must list one permutation entry and one phase per node");
    std::vector<int> seen(n, 0);
    for (int x : spec.permutation) {
        if (x < 0 || x >= n || seen[x]++) throw std::invalid_argument("diagram permutation is not a permutation of the nodes");
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (R.cartan[spec.permutation[i]][spec.permutation[j]] != R.cartan[i][j])
                throw std::invalid_argument("permutation is not a Dynkin diagram symmetry");

    int npos = g.n_pos(), dim = g.dim();
    // Action of pi on positive roots.
    std::vector<int> root_perm(npos);
    for (int r = 0; r < npos; ++r) {
        std::vector<int> c(n, 0);
        for (int i = 0; i < n; ++i) c[spec.permutation[i]] = R.positive_roots[r][i];
        root_perm[r] = R.find_root(c);
        if (root_perm[r] < 0) throw std::invalid_argument("permutation does not map roots to roots");
    }

    std::vector<int> perm1(dim);
    std::vector<Phase> phase1(dim);
    for (int r = 0; r < npos; ++r) {
        perm1[g.e(r)] = g.e(root_perm[r]);
        perm1[g.f(r)] = g.f(root_perm[r]);
    }
    for (int i = 0; i < n; ++i) perm1[g.h(i)] = g.h(spec.permutation[i]);
    for (int r = 0; r < npos; ++r) {
        Phase tau;
        if (R.heights[r] == 1) {
            int node = static_cast<int>(std::find(R.positive_roots[r].begin(), R.positive_roots[r].end(), 1) -
                                        R.positive_roots[r].begin());
            tau = normalize({1, spec.phases[node]}, T);
        } else {
            auto [node, b] = g.table().recipe[r];
            int si = R.simple_root_index(node);
            auto [lab0, q0] = single_term(g.bracket_basis(g.e(si), g.e(b)));
            auto [lab1, q1] = single_term(g.bracket_basis(g.e(root_perm[si]), g.e(root_perm[b])));
            if (lab0 != g.e(r) || lab1 != g.e(root_perm[r])) throw std::logic_error("bracket recipe mismatch");
            Rational ratio = q1 / q0;
            int sign;
            if (ratio == 1)
                sign = 1;
            else if (ratio == -1)
                sign = -1;
            else
                throw std::logic_error("structure constants are not related by a sign");
            tau = multiply(multiply(phase1[g.e(si)], phase1[g.e(b)], T), {sign, 0}, T);
        }
        phase1[g.e(r)] = tau;
        phase1[g.f(r)] = normalize({tau.sign, -tau.exp}, T);
    }
    for (int i = 0; i < n; ++i) phase1[g.h(i)] = {1, 0};

    std::vector<std::vector<int>> perm_pow(T, std::vector<int>(dim));
    std::vector<std::vector<Phase>> phase_pow(T, std::vector<Phase>(dim));
    for (int a = 0; a < dim; ++a) perm_pow[0][a] = a;
    for (int p = 0; p + 1 <= T; ++p) {
        std::vector<int> np(dim);
        std::vector<Phase> nph(dim);
        for (int a = 0; a < dim; ++a) {
            int b = perm_pow[p][a];
            np[a] = perm1[b];
            nph[a] = multiply(phase_pow[p][a], phase1[b], T);
        }
        if (p + 1 < T) {
            perm_pow[p + 1] = np;
            phase_pow[p + 1] = nph;
        } else {
            // sigma^T must be the identity.
            for (int a = 0; a < dim; ++a)
                if (np[a] != a || nph[a].sign != 1 || nph[a].exp != 0) {
                    std::ostringstream os;
                    os << "automorphism order does not divide T=" << T << " (sigma^T moves " << g.label(a) << ")";
                    throw std::invalid_argument(os.str());
                }
        }
    }

    auto table = std::make_shared<const AutoTable>(gp, spec, std::move(perm_pow), std::move(phase_pow));
    if (!verify) return table;

    CycloField F(T);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            auto xa = basis_element(F, a), xb = basis_element(F, b);
            auto lhs = apply_sigma(F, *table, 1, bracket(g, xa, xb));
            auto rhs = bracket(g, apply_sigma(F, *table, 1, xa), apply_sigma(F, *table, 1, xb));
            if (lhs != rhs)
                throw std::invalid_argument("sigma does not preserve the bracket [" + g.label(a) + ", " + g.label(b) + "]");
            auto fl = form(g, apply_sigma(F, *table, 1, xa), apply_sigma(F, *table, 1, xb), F.zero());
            if (fl != F.from(g.form(a, b))) throw std::invalid_argument("sigma does not preserve the invariant form");
        }
    return table;
}

WeightVec lambda0(const AutoTable& A) {
    const LieAlgebra& g = A.algebra();
    int T = A.order(), n = g.rank();
    CycloField F(T);
    std::vector<CycloNum> acc(n, F.zero());
    for (int r = 1; r < T; ++r) {
        CycloNum c = (F.one() - F.omega(r)).inverse();
        for (int a = 0; a < g.n_pos(); ++a) {
            if (A.perm(r, g.e(a)) != g.e(a)) continue;
            CycloNum coef = c / phase_value(F, A.phase(r, g.e(a)));
            WeightVec w = g.roots().root_weight(a);
            for (int i = 0; i < n; ++i) acc[i] += coef * w[i];
        }
    }
    WeightVec out(n);
    for (int i = 0; i < n; ++i) {
        if (!acc[i].is_rational()) throw std::logic_error("lambda_0 is not rational: " + acc[i].to_string());
        out[i] = acc[i].rational_value();
    }
    return out;
}

CycloNum trace_sigma_power(const AutoTable& A, long r) {
    const LieAlgebra& g = A.algebra();
    CycloField F(A.order());
    CycloNum acc = F.zero();
    for (int a = 0; a < g.dim(); ++a) {
        auto dual = apply_sigma(F, A, r, lift(F, g.dual(a)));
        acc = form(g, dual, basis_element(F, a), acc);
    }
    return acc;
}

}  // namespace cg
