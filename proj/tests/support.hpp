// Small model builders and closed forms shared by the test programs.
#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include "cyclogaudin/hamiltonians.hpp"

namespace cgtest {

using namespace cg;

inline WeightVec wv(std::initializer_list<int> xs) {
    WeightVec w;
    for (int x : xs) w.push_back(Rational(x));
    return w;
}

inline AutoSpec make_auto(int T, std::vector<int> perm, std::vector<int> phases) {
    AutoSpec s;
    s.T = T;
    s.permutation = std::move(perm);
    s.phases = std::move(phases);
    return s;
}

inline ModelSpec make_model(Series s, int rank, AutoSpec a, std::vector<Rational> z, std::vector<WeightVec> w,
                            ModuleKind kind = ModuleKind::Irrep) {
    ModelSpec m;
    m.series = s;
    m.rank = rank;
    m.automorphism = std::move(a);
    for (std::size_t i = 0; i < z.size(); ++i) m.sites.push_back(SiteSpec::rational(z[i], w[i], kind));
    return m;
}

// The three eigenvalues of H_1 on the (sl3, flip, T = 2) example with multiplicities 5, 3, 1.
inline double sl3_eigenvalue(int which, double z1, double z2) {
    double den = 3 * z1 * z1 * z1 - 3 * z1 * z2 * z2;
    if (which == 0) return (z2 * z2 + z1 * z2 + 2 * z1 * z1) / den;
    if (which == 1) return (z2 * z2 - 5 * z1 * z2 - 4 * z1 * z1) / den;
    return (z2 * z2 + 10 * z1 * z2 - 7 * z1 * z1) / den;
}

// Closed-form roots (w1, w2) of the m = 2, c = (1, 2) system; branch selects the square root sign.
inline std::vector<Complex> sl3_m2_roots(double z1, double z2, int branch) {
    Complex s = std::sqrt(Complex((z2 - 5 * z1) * (5 * z2 - z1), 0.0));
    if (branch) s = -s;
    return {(z1 + z2 - s) / 6.0, -(z1 + z2 + s) / 6.0};
}

}  // namespace cgtest
