#include <random>

#include "cyclogaudin/lie_core.hpp"
#include "doctest.h"

using namespace cg;

namespace {

struct AlgCase {
    Series s;
    int rank;
    int n_pos;
    int hv;
};

const std::vector<AlgCase>& classical_cases() {
    static const std::vector<AlgCase> cases = {
        {Series::A, 1, 1, 2},  {Series::A, 2, 3, 3},   {Series::A, 3, 6, 4},   {Series::A, 4, 10, 5},
        {Series::B, 2, 4, 3},  {Series::B, 3, 9, 5},   {Series::B, 4, 16, 7},  {Series::C, 2, 4, 3},
        {Series::C, 3, 9, 4},  {Series::C, 4, 16, 5},  {Series::D, 4, 12, 6},
    };
    return cases;
}

using Q = LieElement<Rational>;

Q basis_q(int a) {
    Q x;
    x.add(a, Rational(1));
    return x;
}

Q random_element(std::mt19937_64& rng, int dim) {
    std::uniform_int_distribution<int> c(-5, 5);
    Q x;
    for (int a = 0; a < dim; ++a) x.add(a, Rational(c(rng)));
    return x;
}

}  // namespace

TEST_CASE("root counts, heights and Cartan entries") {
    for (const auto& c : classical_cases()) {
        auto g = build_simple_lie_algebra(c.s, c.rank);
        CHECK(g->n_pos() == c.n_pos);
        CHECK(g->dim() == 2 * c.n_pos + c.rank);
        for (const auto& row : g->roots().cartan)
            for (int x : row) CHECK((x == 2 || x == 0 || x == -1 || x == -2 || x == -3));
        for (int i = 0; i < c.rank; ++i) CHECK(g->roots().cartan[i][i] == 2);
    }
    auto a2 = build_simple_lie_algebra(Series::A, 2);
    CHECK(a2->roots().heights == std::vector<int>{1, 1, 2});
}

TEST_CASE("unsupported algebras are rejected") {
    CHECK_THROWS_AS(build_simple_lie_algebra(Series::B, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_simple_lie_algebra(Series::D, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_simple_lie_algebra(Series::A, 0), std::invalid_argument);
    CHECK_THROWS_AS(parse_series("E"), std::invalid_argument);
}

TEST_CASE("root lengths follow the long-root normalization") {
    auto b2 = build_simple_lie_algebra(Series::B, 2);
    int n_long = 0, n_short = 0;
    for (const auto& l : b2->roots().root_norm2) {
        if (l == 2) ++n_long;
        if (l == 1) ++n_short;
    }
    CHECK(n_long == 2);
    CHECK(n_short == 2);
    auto a1 = build_simple_lie_algebra(Series::A, 1);
    CHECK(a1->roots().root_norm2[0] == 2);
    for (const auto& c : classical_cases()) {
        auto g = build_simple_lie_algebra(c.s, c.rank);
        CHECK(g->roots().root_norm2[g->roots().highest_root] == 2);
        // rho is the half-sum of positive roots.
        WeightVec sum(c.rank, Rational(0));
        for (int r = 0; r < g->n_pos(); ++r) {
            auto w = g->roots().root_weight(r);
            for (int i = 0; i < c.rank; ++i) sum[i] += w[i] / 2;
        }
        CHECK(sum == g->roots().rho());
    }
}

TEST_CASE("Chevalley relations [E,F] = H with alpha(H) = 2") {
    for (const auto& c : classical_cases()) {
        auto g = build_simple_lie_algebra(c.s, c.rank);
        for (int r = 0; r < g->n_pos(); ++r) {
            Q h = bracket(*g, basis_q(g->e(r)), basis_q(g->f(r)));
            Q he = bracket(*g, h, basis_q(g->e(r)));
            CHECK(he == basis_q(g->e(r)) * Rational(2));
            for (const auto& [a, q] : h) CHECK(g->kind(a) == BasisKind::H);
        }
        for (int i = 0; i < c.rank; ++i) {
            int s = g->roots().simple_root_index(i);
            CHECK(bracket(*g, basis_q(g->e(s)), basis_q(g->f(s))) == basis_q(g->h(i)));
            // [H, E_alpha] = alpha(H) E_alpha.
            for (int r = 0; r < g->n_pos(); ++r) {
                Q he = bracket(*g, basis_q(g->h(i)), basis_q(g->e(r)));
                CHECK(he == basis_q(g->e(r)) * g->weight(g->e(r))[i]);
            }
        }
    }
}

TEST_CASE("Jacobi identity on every basis triple") {
    for (const auto& c : classical_cases()) {
        auto g = build_simple_lie_algebra(c.s, c.rank);
        int d = g->dim();
        long failures = 0;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                for (int e = 0; e < d; ++e) {
                    Q x = basis_q(a), y = basis_q(b), z = basis_q(e);
                    Q j = bracket(*g, x, bracket(*g, y, z)) + bracket(*g, y, bracket(*g, z, x)) +
                          bracket(*g, z, bracket(*g, x, y));
                    if (!j.empty()) ++failures;
                }
        CHECK(failures == 0);
        // Antisymmetry.
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                CHECK(bracket(*g, basis_q(a), basis_q(b)) == -bracket(*g, basis_q(b), basis_q(a)));
    }
}

TEST_CASE("form invariance and Killing normalization") {
    std::mt19937_64 rng(5);
    for (const auto& c : classical_cases()) {
        auto g = build_simple_lie_algebra(c.s, c.rank);
        CHECK(g->dual_coxeter() == c.hv);
        int d = g->dim();
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                for (int e = 0; e < d; ++e) {
                    Q x = basis_q(a), y = basis_q(b), z = basis_q(e);
                    Rational lhs = form(*g, bracket(*g, x, y), z, Rational(0));
                    Rational rhs = -form(*g, y, bracket(*g, x, z), Rational(0));
                    if (lhs != rhs) FAIL("form not invariant");
                }
        for (int trial = 0; trial < 20; ++trial) {
            Q x = random_element(rng, d), y = random_element(rng, d);
            Rational k = 0;
            for (const auto& [a, xa] : x)
                for (const auto& [b, yb] : y) k += xa * yb * g->killing(a, b);
            CHECK(form(*g, x, y, Rational(0)) == k / (2 * g->dual_coxeter()));
        }
    }
}

TEST_CASE("dual bases") {
    std::mt19937_64 rng(9);
    for (const auto& c : classical_cases()) {
        auto g = build_simple_lie_algebra(c.s, c.rank);
        int d = g->dim();
        for (int a = 0; a < d; ++a) {
            Q dual;
            for (const auto& [b, q] : g->dual(a)) dual.add(b, q);
            for (int b = 0; b < d; ++b) CHECK(form(*g, dual, basis_q(b), Rational(0)) == (a == b ? 1 : 0));
        }
        for (int trial = 0; trial < 20; ++trial) {
            Q x = random_element(rng, d), rec;
            for (int a = 0; a < d; ++a) {
                Q dual;
                for (const auto& [b, q] : g->dual(a)) dual.add(b, q);
                rec.add(a, form(*g, x, dual, Rational(0)));
            }
            CHECK(rec == x);
        }
    }
    auto a1 = build_simple_lie_algebra(Series::A, 1);
    CHECK(a1->dual(a1->e(0)) == RatCombo{{a1->f(0), Rational(1)}});
}

TEST_CASE("dual Coxeter examples and casimir_delta") {
    for (int n = 1; n <= 4; ++n) CHECK(build_simple_lie_algebra(Series::A, n)->dual_coxeter() == n + 1);
    CHECK(build_simple_lie_algebra(Series::D, 4)->dual_coxeter() == 6);
    auto a1 = build_simple_lie_algebra(Series::A, 1);
    CHECK(a1->casimir_delta({Rational(0)}) == 0);
    CHECK(a1->casimir_delta({Rational(1)}) == Rational(3, 4));
    auto a2 = build_simple_lie_algebra(Series::A, 2);
    CHECK(a2->casimir_delta({Rational(1), Rational(0)}) == Rational(4, 3));
    // Hand computation on 2x2 matrices: C = (EF + FE + H^2/2)/2 acts as 3/4 on C^2.
    Rational e_f_on_top = 1, f_e_on_top = 0, h2 = 1;
    CHECK((e_f_on_top + f_e_on_top + h2 / 2) / 2 == a1->casimir_delta({Rational(1)}));
}

TEST_CASE("Weyl dimension formula on small weights") {
    auto a2 = build_simple_lie_algebra(Series::A, 2);
    CHECK(a2->weyl_dimension({Rational(1), Rational(0)}) == 3);
    CHECK(a2->weyl_dimension({Rational(1), Rational(1)}) == 8);
    auto b2 = build_simple_lie_algebra(Series::B, 2);
    CHECK(b2->weyl_dimension({Rational(1), Rational(0)}) == 5);
    CHECK(b2->weyl_dimension({Rational(0), Rational(1)}) == 4);
    auto d4 = build_simple_lie_algebra(Series::D, 4);
    CHECK(d4->weyl_dimension({Rational(1), Rational(0), Rational(0), Rational(0)}) == 8);
    CHECK(d4->weyl_dimension({Rational(0), Rational(1), Rational(0), Rational(0)}) == 28);
}
