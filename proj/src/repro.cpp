#include <iomanip>
#include <sstream>

#include "cyclogaudin/cli.hpp"

namespace cg::cli {

namespace {

std::string num(double x) {
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

std::string num(Complex z) {
    if (std::abs(z.imag()) <= 1e-13 * (1 + std::abs(z.real()))) return num(z.real());
    return num(z.real()) + (z.imag() < 0 ? "-" : "+") + num(std::abs(z.imag())) + "i";
}

// F_{c_1} ... F_{c_p} v at each site (last color applied first), as a tensor in the model's modules.
TensorState<Complex> lowered(const ComplexField& F, const Model& M, const std::vector<std::vector<int>>& per_site) {
    std::vector<ModState<Complex>> parts;
    for (int i = 0; i < M.N(); ++i) {
        ModState<Complex> st;
        st.add(M.modules[i]->highest(), F.one());
        const auto& cs = per_site[i];
        for (auto it = cs.rbegin(); it != cs.rend(); ++it)
            st = module_act(*M.modules[i], basis_element(F, M.g->f(M.g->roots().simple_root_index(*it))), st);
        parts.push_back(st);
    }
    return detail::tensor_of(parts, F.one());
}

double rel_diff(const TensorState<Complex>& a, const TensorState<Complex>& b) {
    double n = std::max(norm2(a), norm2(b));
    return n == 0 ? 0 : norm2(a - b) / n;
}

}  // namespace

std::vector<ReproLine> repro_sl3(const Rational& z1, const Rational& z2, int threads) {
    auto M = validate_model(sl3_flip_example(z1, z2));
    std::vector<ReproLine> lines;
    auto add = [&](std::string q, std::string c, std::string e, bool m) { lines.push_back({std::move(q), std::move(c), std::move(e), m}); };

    // Closed forms of the three eigenvalues of H_1 and their multiplicities.
    Rational den = Rational(3) * z1 * z1 * z1 - Rational(3) * z1 * z2 * z2;
    std::vector<Rational> closed = {Rational((z2 * z2 + z1 * z2 + Rational(2) * z1 * z1) / den),
                                    Rational((z2 * z2 - Rational(5) * z1 * z2 - Rational(4) * z1 * z1) / den),
                                    Rational((z2 * z2 + Rational(10) * z1 * z2 - Rational(7) * z1 * z1) / den)};
    std::vector<int> mult = {5, 3, 1};
    auto sp = spectrum(*M, 0);
    add("H_1 eigenvalue clusters", std::to_string(sp.size()), "3", sp.size() == 3);
    for (int k = 0; k < 3; ++k) {
        double e = closed[k].get_d();
        const Eigencluster* hit = nullptr;
        for (const auto& c : sp)
            if (std::abs(c.value - Complex(e, 0)) < 1e-9) hit = &c;
        std::string comp = hit ? num(hit->value) + " (x" + std::to_string(hit->multiplicity) + ")" : "absent";
        add("H_1 eigenvalue " + std::to_string(k + 1), comp, to_string(closed[k]) + " (x" + std::to_string(mult[k]) + ")",
            hit && hit->multiplicity == mult[k]);
    }

    SolverOptions opt;
    opt.threads = threads;
    double a = z1.get_d(), b = z2.get_d();
    auto s1 = solve(BetheProblem{M, {0}}, opt);
    add("m=1 canonical solutions", std::to_string(s1.solutions.size()), "1", s1.solutions.size() == 1);
    Rational mid = (z1 + z2) / 2;
    bool m1_ok = s1.solutions.size() == 1 && std::abs(s1.solutions[0].roots[0] - Complex(mid.get_d(), 0)) < 1e-10;
    add("m=1 root w", s1.solutions.empty() ? "none" : num(s1.solutions[0].roots[0]), to_string(mid) + " = (z1+z2)/2", m1_ok);

    auto s2 = solve(BetheProblem{M, {0, 1}}, opt);
    add("m=2 canonical solutions", std::to_string(s2.solutions.size()), "1", s2.solutions.size() == 1);
    Complex disc = std::sqrt(Complex((b - 5 * a) * (5 * b - a), 0));
    std::vector<std::vector<Complex>> branches;
    for (int br = 0; br < 2; ++br) {
        Complex s = br ? -disc : disc;
        branches.push_back({(a + b - s) / 6.0, -(a + b + s) / 6.0});
    }
    bool m2_ok = false;
    std::string m2_comp = "none";
    if (s2.solutions.size() == 1) {
        const auto& r = s2.solutions[0].roots;
        m2_comp = num(r[0]) + ", " + num(r[1]);
        for (const auto& br : branches) m2_ok = m2_ok || (std::abs(r[0] - br[0]) < 1e-10 && std::abs(r[1] - br[1]) < 1e-10);
    }
    add("m=2 roots (w1, w2)", m2_comp, num(branches[0][0]) + ", " + num(branches[0][1]) + " or the other sign", m2_ok);
    bool merged = same_canonical(canonicalize(*M->A, {0, 1}, branches[0]), canonicalize(*M->A, {0, 1}, branches[1]), 1e-10);
    add("m=2 square-root branches are twist images", merged ? "yes" : "no", "yes", merged);

    ComplexField F(2);
    auto psi0 = to_model_modules(*M, build_psi(F, *M, {}, {}));
    add("psi (m=0) = v(x)v", psi0 == highest_tensor(F, M->modules) ? "yes" : "no", "yes", psi0 == highest_tensor(F, M->modules));
    if (m1_ok) {
        auto psi1 = to_model_modules(*M, build_psi(F, *M, {0}, s1.solutions[0].roots));
        auto display = lowered(F, *M, {{0}, {}}) - lowered(F, *M, {{}, {0}});
        display *= Complex(2.0 / (b - a), 0);
        // The general formula carries (-1)^m; the displayed m = 1 vector omits it.
        double d = rel_diff(psi1, -display);
        add("psi (m=1), relative difference", num(d), "-(2/(z2-z1))(F1v(x)v - v(x)F1v), < 1e-9", d < 1e-9);
    } else {
        add("psi (m=1), relative difference", "no root", "< 1e-9", false);
    }
    if (m2_ok) {
        auto psi2 = to_model_modules(*M, build_psi(F, *M, {0, 1}, s2.solutions[0].roots));
        auto display = lowered(F, *M, {{1, 0}, {}}) + lowered(F, *M, {{}, {1, 0}}) - lowered(F, *M, {{0}, {0}});
        display *= Complex(9.0 / ((a + b) * (a + b)), 0);
        double d = rel_diff(psi2, display);
        add("psi (m=2), relative difference", num(d), "(9/(z1+z2)^2)(F2F1v(x)v + v(x)F2F1v - F1v(x)F1v), < 1e-9", d < 1e-9);
    } else {
        add("psi (m=2), relative difference", "no roots", "< 1e-9", false);
    }

    struct Case {
        std::vector<int> colors;
        std::vector<Complex> roots;
        int closed_index;
        bool ok;
    };
    std::vector<Case> cases = {{{}, {}, 0, true},
                               {{0}, m1_ok ? s1.solutions[0].roots : std::vector<Complex>{}, 1, m1_ok},
                               {{0, 1}, m2_ok ? s2.solutions[0].roots : std::vector<Complex>{}, 2, m2_ok}};
    for (const auto& c : cases) {
        std::string m = std::to_string(c.colors.size());
        if (!c.ok) {
            add("E_1 (m=" + m + ")", "no roots", to_string(closed[c.closed_index]), false);
            continue;
        }
        for (int i = 0; i < 2; ++i) {
            auto rep = verify_eigenpair(F, *M, c.colors, c.roots, i);
            std::string site = std::to_string(i + 1);
            if (i == 0)
                add("E_1 (m=" + m + ")", num(rep.eigenvalue), to_string(closed[c.closed_index]),
                    std::abs(rep.eigenvalue - Complex(closed[c.closed_index].get_d(), 0)) < 1e-9);
            add("|H_" + site + " psi - E_" + site + " psi|/|psi| (m=" + m + ")", num(rep.residual_H), "< 1e-8", rep.residual_H < 1e-8);
        }
    }

    const RootSystem& R = M->g->roots();
    WeightVec l0 = lambda0(*M->A);
    WeightVec expect = R.root_weight(R.highest_root);
    for (auto& x : expect) x *= frac(-1, 2);
    auto wstr = [](const WeightVec& w) { return "(" + to_string(w[0]) + ", " + to_string(w[1]) + ")"; };
    add("lambda_0 (fundamental coordinates)", wstr(l0), wstr(expect) + " = -(alpha1+alpha2)/2", l0 == expect);
    Rational pair = R.inner(R.simple_root(0), l0);
    add("<alpha1, lambda_0>", to_string(pair), "-1/2", pair == frac(-1, 2));
    auto C = bethe_coefficients(BetheProblem{M, {0}});
    add("1/w coefficient of the m=1 equation", to_string(C.origin[0]), "0", C.origin[0] == 0);
    auto dp = double_pole_identity(*M->A);
    add("double-pole sum", dp.data["lhs"].get<std::string>(), "-3/4", dp.pass && dp.data["lhs"] == "-3/4");
    add("Delta(lambda_0)", dp.data["rhs"].get<std::string>(), "-3/4", dp.data["rhs"] == "-3/4");
    return lines;
}

}  // namespace cg::cli
