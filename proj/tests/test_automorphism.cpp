#include <random>

#include "cyclogaudin/automorphism.hpp"
#include "doctest.h"

using namespace cg;

namespace {

struct AutoCase {
    Series s;
    int rank;
    AutoSpec spec;
};

AutoSpec make_spec(int T, std::vector<int> perm, std::vector<int> phases) {
    AutoSpec s;
    s.T = T;
    s.permutation = std::move(perm);
    s.phases = std::move(phases);
    return s;
}

std::vector<AutoCase> test_matrix() {
    return {
        {Series::A, 1, make_spec(1, {0}, {0})},
        {Series::A, 1, make_spec(2, {0}, {1})},
        {Series::A, 2, make_spec(2, {1, 0}, {0, 0})},
        {Series::A, 2, make_spec(3, {0, 1}, {1, 0})},
        {Series::A, 2, make_spec(4, {1, 0}, {1, 1})},
        {Series::A, 3, make_spec(2, {2, 1, 0}, {0, 0, 0})},
        {Series::B, 2, make_spec(3, {0, 1}, {1, 1})},
        {Series::C, 3, make_spec(2, {0, 1, 2}, {1, 0, 1})},
        {Series::D, 4, make_spec(2, {0, 1, 3, 2}, {0, 0, 0, 0})},
        {Series::D, 4, make_spec(3, {2, 1, 3, 0}, {0, 0, 0, 0})},
    };
}

CycloNum random_cyclo(std::mt19937_64& rng, const CycloField& F) {
    std::uniform_int_distribution<int> c(-4, 4);
    CycloNum x = F.zero();
    for (int k = 0; k < F.order(); ++k) x += F.omega(k) * Rational(c(rng));
    return x;
}

LieElement<CycloNum> random_element(std::mt19937_64& rng, const CycloField& F, int dim) {
    LieElement<CycloNum> x;
    for (int a = 0; a < dim; ++a) x.add(a, random_cyclo(rng, F));
    return x;
}

}  // namespace

TEST_CASE("identity spec gives trivial phases") {
    auto g = build_simple_lie_algebra(Series::A, 3);
    for (int T : {1, 2, 5}) {
        auto A = build_automorphism(g, AutoSpec::identity(3, T));
        for (int r = 0; r < g->n_pos(); ++r) {
            CHECK(A->tau(r).sign == 1);
            CHECK(A->tau(r).exp == 0);
            CHECK(A->chi(r) == 0);
        }
    }
}

TEST_CASE("sl3 diagram flip has tau = -1 on the highest root") {
    auto g = build_simple_lie_algebra(Series::A, 2);
    auto A = build_automorphism(g, make_spec(2, {1, 0}, {0, 0}));
    CycloField F(2);
    int s1 = g->roots().simple_root_index(0), s2 = g->roots().simple_root_index(1);
    int th = g->roots().highest_root;
    CHECK(phase_value(F, A->tau(s1)) == F.one());
    CHECK(phase_value(F, A->tau(s2)) == F.one());
    CHECK(phase_value(F, A->tau(th)) == F.from(-1));
    CHECK(apply_sigma(F, *A, 1, basis_element(F, g->e(th))) == basis_element(F, g->e(th)) * F.from(-1));
    CHECK(A->perm(1, g->e(s1)) == g->e(s2));
}

TEST_CASE("sl2 inner automorphism of order 2") {
    auto g = build_simple_lie_algebra(Series::A, 1);
    auto A = build_automorphism(g, make_spec(2, {0}, {1}));
    CycloField F(2);
    CHECK(apply_sigma(F, *A, 1, basis_element(F, g->e(0))) == basis_element(F, g->e(0)) * F.from(-1));
    CHECK(apply_sigma(F, *A, 1, basis_element(F, g->f(0))) == basis_element(F, g->f(0)) * F.from(-1));
    CHECK(apply_sigma(F, *A, 1, basis_element(F, g->h(0))) == basis_element(F, g->h(0)));
}

TEST_CASE("invalid specs are rejected") {
    auto a2 = build_simple_lie_algebra(Series::A, 2);
    CHECK_THROWS_AS(build_automorphism(a2, make_spec(3, {1, 0}, {0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(build_automorphism(a2, make_spec(4, {1, 0}, {1, 0})), std::invalid_argument);
    CHECK_THROWS_AS(build_automorphism(a2, make_spec(2, {0, 0}, {0, 0})), std::invalid_argument);
    auto b2 = build_simple_lie_algebra(Series::B, 2);
    CHECK_THROWS_AS(build_automorphism(b2, make_spec(2, {1, 0}, {0, 0})), std::invalid_argument);
    auto a1 = build_simple_lie_algebra(Series::A, 1);
    CHECK_THROWS_AS(build_automorphism(a1, make_spec(2, {0}, {0, 1})), std::invalid_argument);
}

TEST_CASE("automorphism invariants over the test matrix") {
    std::mt19937_64 rng(17);
    for (const auto& c : test_matrix()) {
        auto g = build_simple_lie_algebra(c.s, c.rank);
        auto A = build_automorphism(g, c.spec);
        int T = c.spec.T;
        CycloField F(T);
        // sigma^T = id and sigma preserves brackets, checked independently of construction.
        for (int a = 0; a < g->dim(); ++a) {
            auto x = basis_element(F, a);
            auto y = x;
            for (int p = 0; p < T; ++p) y = apply_sigma(F, *A, 1, y);
            CHECK(y == x);
        }
        for (int trial = 0; trial < 5; ++trial) {
            auto x = random_element(rng, F, g->dim()), y = random_element(rng, F, g->dim());
            CHECK(apply_sigma(F, *A, 1, bracket(*g, x, y)) ==
                  bracket(*g, apply_sigma(F, *A, 1, x), apply_sigma(F, *A, 1, y)));
            CHECK(form(*g, apply_sigma(F, *A, 1, x), apply_sigma(F, *A, 1, y), F.zero()) == form(*g, x, y, F.zero()));
            // Projectors: completeness, orthogonality, eigenspaces.
            LieElement<CycloNum> sum;
            for (int k = 0; k < T; ++k) sum += projector_pi(F, *A, k, x);
            CHECK(sum == x);
            for (int k = 0; k < T; ++k) {
                auto pk = projector_pi(F, *A, k, x);
                CHECK(apply_sigma(F, *A, 1, pk) == pk * F.omega(k));
                for (int l = 0; l < T; ++l) {
                    auto pkl = projector_pi(F, *A, l, pk);
                    CHECK(pkl == (k == l ? pk : LieElement<CycloNum>()));
                }
            }
        }
        // L_sigma alpha_i = alpha_{pi(i)} and L_sigma is an isometry.
        for (int i = 0; i < c.rank; ++i)
            CHECK(A->l_sigma(g->roots().simple_root(i)) == g->roots().simple_root(c.spec.permutation[i]));
        std::uniform_int_distribution<int> d(-5, 5);
        for (int trial = 0; trial < 10; ++trial) {
            WeightVec l(c.rank), m(c.rank);
            for (int i = 0; i < c.rank; ++i) {
                l[i] = d(rng);
                m[i] = frac(d(rng), 3);
            }
            CHECK(g->roots().inner(A->l_sigma(l), A->l_sigma(m)) == g->roots().inner(l, m));
            if (A->is_inner()) CHECK(A->l_sigma(l) == l);
            CHECK(A->l_sigma(A->l_sigma(l, 1), -1) == l);
        }
        // lambda_0 = lambda_0 o Pi_0 on coroot generators.
        WeightVec l0 = lambda0(*A);
        for (int i = 0; i < c.rank; ++i) {
            Rational avg = 0;
            for (int m = 0; m < T; ++m) avg += l0[A->node_perm(m, i)];
            CHECK(avg / T == l0[i]);
        }
        // Inner case: chi is additive along root addition.
        if (A->is_inner()) {
            const auto& R = g->roots();
            for (int a = 0; a < g->n_pos(); ++a)
                for (int b = 0; b < g->n_pos(); ++b) {
                    std::vector<int> s(c.rank);
                    for (int i = 0; i < c.rank; ++i) s[i] = R.positive_roots[a][i] + R.positive_roots[b][i];
                    int r = R.find_root(s);
                    if (r >= 0) CHECK(A->chi(r) == mod_T_bracket(A->chi(a) + A->chi(b), T));
                }
        }
    }
}

TEST_CASE("lambda_0 examples") {
    auto a2 = build_simple_lie_algebra(Series::A, 2);
    auto flip = build_automorphism(a2, make_spec(2, {1, 0}, {0, 0}));
    WeightVec l0 = lambda0(*flip);
    WeightVec expect = a2->roots().root_weight(a2->roots().highest_root);
    for (auto& x : expect) x *= Rational(-1, 2);
    CHECK(l0 == expect);
    CHECK(a2->roots().inner(a2->roots().simple_root(0), l0) == Rational(-1, 2));
    for (int T = 1; T <= 5; ++T) {
        auto g = build_simple_lie_algebra(Series::B, 3);
        auto id = build_automorphism(g, AutoSpec::identity(3, T));
        WeightVec rho = g->roots().rho();
        for (auto& x : rho) x *= T - 1;
        CHECK(lambda0(*id) == rho);
    }
    auto a1 = build_simple_lie_algebra(Series::A, 1);
    CHECK(lambda0(*build_automorphism(a1, AutoSpec::identity(1, 1))) == WeightVec{Rational(0)});
}

TEST_CASE("trace of sigma on the sl3 flip") {
    auto a2 = build_simple_lie_algebra(Series::A, 2);
    auto flip = build_automorphism(a2, make_spec(2, {1, 0}, {0, 0}));
    CHECK(trace_sigma_power(*flip, 1) == CycloNum(CycloContext::get(2), Rational(-2)));
    CHECK(trace_sigma_power(*flip, 0) == CycloNum(CycloContext::get(2), Rational(8)));
}
