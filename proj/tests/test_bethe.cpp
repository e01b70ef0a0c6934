#include <numbers>
#include <random>

#include "cyclogaudin/bethe.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cg;
using namespace cgtest;

namespace {

ModelPtr sl3_model(long z1, long z2) { return validate_model(sl3_flip_example(Rational(z1), Rational(z2))); }

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

SolverOptions quick(int starts = 24) {
    SolverOptions o;
    o.starts = starts;
    o.threads = 1;
    return o;
}

}  // namespace

TEST_CASE("sl3 flip example: m = 1 residual vanishes exactly at the midpoint") {
    for (auto [a, b] : std::vector<std::pair<long, long>>{{1, 2}, {3, 5}, {-2, 7}}) {
        auto M = sl3_model(a, b);
        BetheProblem P{M, {0}};
        auto C = bethe_coefficients(P);
        CHECK(C.origin[0] == 0);
        CHECK(C.root[0][0][1] == -1);
        CycloField F(2);
        CycloNum mid = F.from(frac(a + b, 2));
        CHECK(residual(F, P, C, {mid}, 0).is_zero());
        CHECK_FALSE(residual(F, P, C, {F.from(Rational(a + b))}, 0).is_zero());
    }
}

TEST_CASE("classical sl2 with one root: linear equation solved by hand") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(1, 4), zz(-9, 9);
    for (int trial = 0; trial < 6; ++trial) {
        int l1 = d(rng), l2 = d(rng);
        long z1 = zz(rng), z2 = zz(rng);
        if (z1 == 0 || z2 == 0 || z1 == z2) continue;
        auto M = validate_model(make_model(Series::A, 1, AutoSpec::identity(1, 1), {Rational(z1), Rational(z2)},
                                           {wv({l1}), wv({l2})}));
        BetheProblem P{M, {0}};
        CycloField F(1);
        Rational w = frac(l1 * z2 + l2 * z1, l1 + l2);
        CHECK(residual_vector(F, P, {F.from(w)})[0].is_zero());
        auto sols = solve(P, quick());
        REQUIRE(sols.solutions.size() == 1);
        CHECK(std::abs(sols.solutions[0].roots[0] - Complex(w.get_d(), 0)) < 1e-10);
    }
}

TEST_CASE("m = 0 is vacuous") {
    BetheProblem P{sl3_model(1, 2), {}};
    CHECK(residual_vector(ComplexField(2), P, {}).empty());
    auto s = solve(P);
    REQUIRE(s.solutions.size() == 1);
    CHECK(s.solutions[0].roots.empty());
}

TEST_CASE("coincident points and bad colors are rejected") {
    auto M = sl3_model(1, 2);
    ComplexField F(2);
    CHECK_THROWS_AS(residual_vector(F, BetheProblem{M, {0}}, {Complex(1, 0)}), std::domain_error);
    CHECK_THROWS_AS(residual_vector(F, BetheProblem{M, {0}}, {Complex(2, 0)}), std::domain_error);
    CHECK_THROWS_AS(bethe_coefficients(BetheProblem{M, {2}}), ValidationError);
}

TEST_CASE("Jacobian agrees with central finite differences") {
    std::vector<std::pair<ModelSpec, std::vector<int>>> cases;
    cases.push_back({sl3_flip_example(1, 2), {0, 1}});
    cases.push_back({make_model(Series::A, 2, make_auto(3, {0, 1}, {1, 0}), {1, 2}, {wv({1, 0}), wv({0, 1})}), {0, 1, 0}});
    cases.push_back({make_model(Series::A, 1, AutoSpec::identity(1, 3), {1, 3}, {wv({2}), wv({1})}), {0, 0}});
    cases.push_back({make_model(Series::C, 2, AutoSpec::identity(2, 2), {2, 5}, {wv({1, 0}), wv({0, 1})}), {1, 0, 1}});
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0, 1);
    for (const auto& [spec, colors] : cases) {
        auto M = validate_model(spec);
        BetheProblem P{M, colors};
        ComplexField F(M->T());
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<Complex> w;
            for (std::size_t j = 0; j < colors.size(); ++j) w.emplace_back(2 * g(rng), 2 * g(rng));
            auto J = jacobian(P, w);
            double h = 1e-6;
            for (int k = 0; k < P.m(); ++k) {
                auto wp = w, wm = w;
                wp[k] += h;
                wm[k] -= h;
                auto rp = residual_vector(F, P, wp), rm = residual_vector(F, P, wm);
                for (int j = 0; j < P.m(); ++j) {
                    Complex fd = (rp[j] - rm[j]) / (2 * h);
                    CHECK(std::abs(fd - J(j, k)) <= 1e-6 * std::max(1.0, std::abs(J(j, k))));
                }
            }
        }
    }
}

TEST_CASE("Jacobian: m = 1 diagonal by term-wise differentiation, symmetric T = 1 off-diagonal") {
    auto M = sl3_model(1, 2);
    BetheProblem P{M, {0}};
    Complex w(0.3, 0.7);
    auto J = jacobian(P, {w});
    Complex expect = -1.0 / ((w - 1.0) * (w - 1.0)) - 1.0 / ((w - 2.0) * (w - 2.0));
    CHECK(std::abs(J(0, 0) - expect) < 1e-13);

    auto M1 = validate_model(make_model(Series::A, 2, AutoSpec::identity(2, 1), {1, 3}, {wv({1, 1}), wv({2, 0})}));
    BetheProblem P1{M1, {0, 1}};
    auto J1 = jacobian(P1, {Complex(0.4, 0.2), Complex(-1.1, 0.5)});
    CHECK(std::abs(J1(0, 1) - J1(1, 0)) < 1e-13);
}

TEST_CASE("solver: sl3 example, m = 1 gives the midpoint and merges the twist image") {
    for (auto [a, b] : std::vector<std::pair<long, long>>{{1, 2}, {3, 5}}) {
        auto M = sl3_model(a, b);
        auto s1 = solve(BetheProblem{M, {0}}, quick());
        REQUIRE(s1.solutions.size() == 1);
        CHECK(std::abs(s1.solutions[0].roots[0] - Complex((a + b) / 2.0, 0)) < 1e-10);
        CHECK(s1.solutions[0].residual < 1e-12);
        auto s2 = solve(BetheProblem{M, {1}}, quick());
        REQUIRE(s2.solutions.size() == 1);
        CHECK(std::abs(s2.solutions[0].roots[0] + Complex((a + b) / 2.0, 0)) < 1e-10);
        CHECK(same_canonical(s1.solutions[0].canonical, s2.solutions[0].canonical, 1e-9));
        CHECK(s2.solutions[0].canonical.colors == std::vector<int>{0});
        auto all = solve_all_colorings(M, 1, quick());
        CHECK(all.solutions.size() == 1);
    }
}

TEST_CASE("solver: sl3 example, m = 2 gives the square-root pair") {
    for (auto [a, b] : std::vector<std::pair<long, long>>{{1, 2}, {3, 5}, {1, 7}}) {
        auto M = sl3_model(a, b);
        BetheProblem P{M, {0, 1}};
        auto s = solve(P, quick(48));
        // The two branches are twist images of each other and canonicalize to one solution.
        REQUIRE(s.solutions.size() == 1);
        const auto& sol = s.solutions[0];
        double best = 1e9;
        for (int br = 0; br < 2; ++br) best = std::min(best, max_diff(sol.roots, sl3_m2_roots(a, b, br)));
        CHECK(best < 1e-10);
        ComplexField F(2);
        auto c0 = canonicalize(*M->A, P.colors, sl3_m2_roots(a, b, 0));
        auto c1 = canonicalize(*M->A, P.colors, sl3_m2_roots(a, b, 1));
        CHECK(same_canonical(c0, c1, 1e-12));
        CHECK(same_canonical(c0, sol.canonical, 1e-9));
        for (int br = 0; br < 2; ++br)
            for (const auto& x : residual_vector(F, P, sl3_m2_roots(a, b, br))) CHECK(std::abs(x) < 1e-12);
        CHECK(solve_all_colorings(M, 2, quick(24)).solutions.size() == 1);
    }
}

TEST_CASE("twist symmetry maps solutions to solutions") {
    auto M = validate_model(make_model(Series::A, 2, make_auto(3, {0, 1}, {1, 0}), {1, 2}, {wv({1, 0}), wv({1, 0})}));
    auto Mf = sl3_model(1, 3);
    for (const auto& [model, colors] : std::vector<std::pair<ModelPtr, std::vector<int>>>{{M, {0}}, {Mf, {0}}, {Mf, {0, 1}}}) {
        auto s = solve(BetheProblem{model, colors}, quick());
        REQUIRE(!s.solutions.empty());
        ComplexField F(model->T());
        for (const auto& sol : s.solutions)
            for (int j = 0; j < static_cast<int>(colors.size()); ++j) {
                auto w = sol.roots;
                auto c = sol.colors;
                w[j] *= F.omega(1);
                c[j] = model->A->node_perm(1, c[j]);
                auto r = residual_vector(F, BetheProblem{model, c}, w);
                for (const auto& x : r) CHECK(std::abs(x) < 1e-10);
            }
    }
}

TEST_CASE("canonicalize: T = 1 sorts only, idempotent, twist images agree") {
    auto M1 = validate_model(make_model(Series::A, 2, AutoSpec::identity(2, 1), {1, 3}, {wv({1, 0}), wv({1, 0})}));
    auto c1 = canonicalize(*M1->A, {1, 0, 1}, {Complex(2, 1), Complex(-1, -1), Complex(-3, 0)});
    CHECK(c1.colors == std::vector<int>{0, 1, 1});
    CHECK(c1.roots[0] == Complex(-1, -1));
    CHECK(c1.roots[1] == Complex(-3, 0));
    auto M = sl3_model(1, 2);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0, 1);
    for (int t = 0; t < 20; ++t) {
        std::vector<Complex> w{{g(rng), g(rng)}, {g(rng), g(rng)}};
        std::vector<int> c{0, 1};
        auto a = canonicalize(*M->A, c, w);
        auto b = canonicalize(*M->A, a.colors, a.roots);
        CHECK(same_canonical(a, b, 1e-14));
        auto w2 = w;
        auto c2 = c;
        w2[1] = -w2[1];
        c2[1] = 1 - c2[1];
        std::swap(w2[0], w2[1]);
        std::swap(c2[0], c2[1]);
        CHECK(same_canonical(a, canonicalize(*M->A, c2, w2), 1e-12));
        for (const auto& x : a.roots) {
            double th = std::arg(x);
            CHECK(th >= -1e-12);
            CHECK(th < std::numbers::pi);
        }
    }
    auto e = canonicalize(*M->A, {1}, {Complex(-1.5, 0)});
    CHECK(e.colors == std::vector<int>{0});
    CHECK(std::abs(e.roots[0] - Complex(1.5, 0)) < 1e-15);
}

TEST_CASE("untwisted reduction") {
    auto sl2 = [](int T) {
        return validate_model(make_model(Series::A, 1, AutoSpec::identity(1, T), {1, frac(5, 2)}, {wv({1}), wv({2})}));
    };
    auto c1 = untwisted_reduction_check(BetheProblem{sl2(1), {0, 0}}, 10, 1);
    CHECK(c1.pass);
    auto c3 = untwisted_reduction_check(BetheProblem{sl2(3), {0, 0}}, 20, 2);
    CHECK(c3.pass);
    CHECK(c3.data["tilde_origin_coefficients"][0] == "0");
    auto sl3 = validate_model(make_model(Series::A, 2, AutoSpec::identity(2, 4), {1, 2}, {wv({1, 0}), wv({0, 1})}));
    CHECK(untwisted_reduction_check(BetheProblem{sl3, {0, 1, 1}}, 20, 3).pass);
    auto B2 = validate_model(make_model(Series::B, 2, AutoSpec::identity(2, 2), {1, 2}, {wv({1, 0}), wv({0, 1})}));
    CHECK(untwisted_reduction_check(BetheProblem{B2, {0, 1}}, 20, 4).pass);
    auto inner = validate_model(make_model(Series::A, 2, make_auto(3, {0, 1}, {1, 0}), {1, 2}, {wv({1, 0}), wv({0, 1})}));
    auto ci = untwisted_reduction_check(BetheProblem{inner, {0, 1}}, 20, 5);
    CHECK(ci.pass);
    CHECK_FALSE(ci.data["sigma_identity"].get<bool>());
    CHECK(ci.data["tilde_origin_coefficients"][0] != "0");
    CHECK_THROWS_AS(untwisted_reduction_check(BetheProblem{sl3_model(1, 2), {0}}, 5, 1), std::invalid_argument);
}

TEST_CASE("inner sigma without admissible roots: none reported") {
    // sum_r 1/(w - omega^r) - 3/w = 3/(w (w^3 - 1)) never vanishes; for color 2 the
    // only zero is the excluded origin.
    auto M = validate_model(make_model(Series::A, 2, make_auto(3, {0, 1}, {1, 0}), {1, 2}, {wv({1, 0}), wv({0, 1})}));
    CHECK(solve(BetheProblem{M, {0}}, quick()).solutions.empty());
    CHECK(solve(BetheProblem{M, {1}}, quick()).solutions.empty());
    // A color-2 root with no color-2 weight anywhere gives an identically vanishing equation.
    auto M2 = validate_model(make_model(Series::A, 2, make_auto(3, {0, 1}, {1, 0}), {1, 2}, {wv({1, 0}), wv({1, 0})}));
    auto s = solve(BetheProblem{M2, {1}}, quick());
    CHECK(s.solutions.empty());
    CHECK(!s.note.empty());
}

TEST_CASE("inner sigma: solutions in w solve the classical system with the extra 1/w~ term") {
    auto inner = validate_model(make_model(Series::A, 2, make_auto(3, {0, 1}, {1, 0}), {1, 2}, {wv({1, 0}), wv({1, 0})}));
    BetheProblem P{inner, {0}};
    auto s = solve(P, quick());
    REQUIRE(!s.solutions.empty());
    auto C = bethe_coefficients(P);
    for (const auto& sol : s.solutions) {
        Complex wt = std::pow(sol.roots[0], 3);
        Complex cl = 1.0 / (wt - 1.0) + 1.0 / (wt - 8.0) + Rational(C.origin[0] / 3).get_d() / wt;
        CHECK(std::abs(cl) < 1e-9);
    }
}

TEST_CASE("solver results do not depend on the thread count and survive JSON") {
    auto M = sl3_model(1, 2);
    auto o1 = quick(24);
    auto o3 = o1;
    o3.threads = 3;
    auto a = solve(BetheProblem{M, {0, 1}}, o1);
    auto b = solve(BetheProblem{M, {0, 1}}, o3);
    CHECK(to_json(a).dump() == to_json(b).dump());
    auto back = solutions_from_json(to_json(a));
    CHECK(to_json(back).dump() == to_json(a).dump());
    for (const auto& sol : a.solutions) CHECK(sol.residual < 1e-12);
}
