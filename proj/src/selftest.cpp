#include <random>

#include "cyclogaudin/cli.hpp"
#include "cyclogaudin/ratfun.hpp"

namespace cg::cli {

namespace {

struct AutoCase {
    Series series;
    int rank;
    AutoSpec spec;
};

AutoSpec spec_of(int T, std::vector<int> perm, std::vector<int> phases) {
    AutoSpec s;
    s.T = T;
    s.permutation = std::move(perm);
    s.phases = std::move(phases);
    return s;
}

std::vector<AutoCase> automorphism_matrix(bool classical_only) {
    std::vector<AutoCase> all = {
        {Series::A, 1, spec_of(1, {0}, {0})},
        {Series::A, 1, spec_of(2, {0}, {1})},
        {Series::A, 2, spec_of(1, {0, 1}, {0, 0})},
        {Series::A, 2, spec_of(2, {1, 0}, {0, 0})},
        {Series::A, 2, spec_of(3, {0, 1}, {1, 0})},
        {Series::A, 2, spec_of(4, {1, 0}, {1, 1})},
        {Series::A, 3, spec_of(2, {2, 1, 0}, {0, 0, 0})},
        {Series::B, 2, spec_of(3, {0, 1}, {1, 1})},
        {Series::C, 3, spec_of(2, {0, 1, 2}, {1, 0, 1})},
        {Series::D, 4, spec_of(2, {0, 1, 3, 2}, {0, 0, 0, 0})},
        {Series::D, 4, spec_of(3, {2, 1, 3, 0}, {0, 0, 0, 0})},
    };
    if (!classical_only) return all;
    std::vector<AutoCase> out;
    for (const auto& c : all)
        if (c.spec.T == 1) out.push_back(c);
    return out;
}

std::string case_name(const AutoCase& c) {
    std::string s = series_name(c.series) + std::to_string(c.rank) + " T=" + std::to_string(c.spec.T) + " perm=";
    for (int p : c.spec.permutation) s += std::to_string(p + 1);
    s += " phases=";
    for (int p : c.spec.phases) s += std::to_string(p);
    return s;
}

std::vector<int> orders(bool classical_only, std::vector<int> full) { return classical_only ? std::vector<int>{1} : full; }

CycloNum pow_int(const CycloNum& x, int n) {
    CycloNum out(x.context(), Rational(1));
    for (int k = 0; k < n; ++k) out *= x;
    return out;
}

Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n(-12, 12), d(1, 6);
    return frac(n(rng), d(rng));
}

std::vector<CycloNum> random_vec(std::mt19937_64& rng, const CycloField& F, int dim) {
    std::uniform_int_distribution<int> d(-3, 3);
    std::vector<CycloNum> v;
    for (int a = 0; a < dim; ++a) {
        CycloNum x = F.zero();
        for (int k = 0; k < F.order(); ++k) x += F.omega(k) * Rational(d(rng));
        v.push_back(x);
    }
    return v;
}

Certificate cyclotomic_sums(const SelftestOptions& opt) {
    Certificate c{"cyclotomic_sum_identities", true, {}};
    std::mt19937_64 rng(opt.seed);
    int checks = 0;
    nlohmann::json failures = nlohmann::json::array();
    for (int T : orders(opt.classical_only, {1, 2, 3, 4, 5, 6, 7, 8})) {
        CycloField F(T);
        CycloNum s = F.zero();
        for (int r = 1; r < T; ++r) s += reciprocal(F.one() - F.omega(r));
        ++checks;
        if (s != F.from(frac(T - 1, 2))) failures.push_back({{"T", T}, {"identity", "sum 1/(1-omega^r)"}});
        for (int trial = 0; trial < 6; ++trial) {
            Rational wq = random_rational(rng), zq = random_rational(rng);
            if (wq == 0 || zq == 0 || wq == zq || wq == -zq) continue;
            CycloNum w = F.from(wq), z = F.from(zq);
            CycloNum lhs = F.zero();
            for (int r = 0; r < T; ++r) lhs += reciprocal(CycloNum(w - F.omega(r) * z));
            CycloNum rhs = F.from(Rational(T)) * pow_int(w, T - 1) * reciprocal(CycloNum(pow_int(w, T) - pow_int(z, T)));
            ++checks;
            if (lhs != rhs) failures.push_back({{"T", T}, {"identity", "orbit sum"}, {"w", to_string(wq)}, {"z", to_string(zq)}});
            for (int r = 0; r < T; ++r) {
                CycloNum l2 = F.zero();
                for (int k = 0; k < T; ++k) l2 += F.omega(-r * k) * reciprocal(CycloNum(F.omega(k) * w - z));
                CycloNum r2 = F.from(Rational(T)) * pow_int(z, T - 1 - r) * pow_int(w, r) *
                              reciprocal(CycloNum(pow_int(w, T) - pow_int(z, T)));
                ++checks;
                if (l2 != r2) failures.push_back({{"T", T}, {"identity", "twisted orbit sum"}, {"r", r}});
            }
        }
    }
    c.pass = failures.empty();
    c.data = {{"checks", checks}, {"failures", failures}};
    return c;
}

Certificate circle_lemma(const SelftestOptions& opt) {
    Certificate c{"circle_lemma", true, {}};
    std::mt19937_64 rng(opt.seed + 1);
    int checks = 0;
    for (int T : orders(opt.classical_only, {1, 3, 4}))
        for (int n = 2; n <= 8; ++n) {
            CycloField F(T);
            std::vector<CycloNum> x;
            for (int j = 0; j < n; ++j) x.push_back(F.from(random_rational(rng) + Rational(30 * j)) + F.omega(j));
            ++checks;
            if (!circle_lemma_check(F, x).is_zero()) c.pass = false;
        }
    c.data = {{"checks", checks}, {"max_points", 8}};
    return c;
}

struct RatSetup {
    CycloField F;
    CoeffSpacePtr<CycloNum> sp;
    std::string name;
};

std::vector<RatSetup> rat_setups(bool classical_only) {
    std::vector<RatSetup> out;
    CycloField F1(1);
    out.push_back({F1, scalar_space(F1), "scalar T=1"});
    if (!classical_only) {
        CycloField F3(3);
        out.push_back({F3, scalar_space(F3), "scalar T=3"});
    }
    for (const auto& ac : automorphism_matrix(classical_only)) {
        CycloField F(ac.spec.T);
        auto A = build_automorphism(build_simple_lie_algebra(ac.series, ac.rank), ac.spec);
        out.push_back({F, lie_space(F, *A), case_name(ac)});
        bool permutes = false;
        for (int i = 0; i < ac.rank; ++i) permutes = permutes || ac.spec.permutation[i] != i;
        if (permutes) out.push_back({F, weight_space(F, *A), case_name(ac) + " weights"});
    }
    return out;
}

Certificate residue_theorem(const SelftestOptions& opt) {
    Certificate c{"residue_theorem", true, {}};
    std::mt19937_64 rng(opt.seed + 2);
    int pairings = 0, witnesses = 0;
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& [F, sp, name] : rat_setups(opt.classical_only)) {
        int T = F.order();
        std::vector<CycloNum> pts{F.from(Rational(2)), F.from(frac(-1, 3))};
        for (int k = 0; k < T; ++k) {
            EquivRatFunc<CycloNum> h(sp, k);
            for (const auto& x : pts)
                for (int n = 1; n <= 2; ++n) h += gamma_orbit_sum(F, sp, random_vec(rng, F, sp->dim), x, n, k);
            std::vector<LaurentSeries<CycloNum>> local;
            for (const auto& x : pts) local.push_back(expand_at(h, x, 3));
            for (int trial = 0; trial < 2; ++trial) {
                EquivRatFunc<CycloNum> g(sp, -k - 1);
                for (const auto& x : pts)
                    g += gamma_orbit_sum(F, sp, random_vec(rng, F, sp->dim), x, 1 + static_cast<int>(rng() % 4), -k - 1);
                ++pairings;
                if (!is_zero(residue_theorem_check(F, local, g))) failures.push_back({{"setup", name}, {"k", k}, {"kind", "pairing"}});
            }
            // Only-if direction: globalizable data admits no witness, perturbed data does.
            ++witnesses;
            if (globalization_witness(F, sp, local, k).has_value())
                failures.push_back({{"setup", name}, {"k", k}, {"kind", "spurious witness"}});
            auto bad = local;
            bad[1].coefs[bad[1].coefs.size() - 2][0] += F.one();
            auto w = globalization_witness(F, sp, bad, k);
            ++witnesses;
            if (!w || is_zero(residue_theorem_check(F, bad, *w)))
                failures.push_back({{"setup", name}, {"k", k}, {"kind", "missed obstruction"}});
        }
    }
    c.pass = failures.empty();
    c.data = {{"setups", rat_setups(opt.classical_only).size()}, {"pairings", pairings}, {"witness_checks", witnesses}, {"failures", failures}};
    return c;
}

Certificate reconstruction(const SelftestOptions& opt) {
    Certificate c{"reconstruction_round_trip", true, {}};
    std::mt19937_64 rng(opt.seed + 3);
    int checks = 0;
    for (const auto& [F, sp, name] : rat_setups(opt.classical_only)) {
        int T = F.order();
        std::vector<CycloNum> pts{F.from(frac(5, 2)), F.from(Rational(-1))};
        for (int k = 0; k < T; ++k) {
            EquivRatFunc<CycloNum> h(sp, k);
            for (const auto& x : pts) h += gamma_orbit_sum(F, sp, random_vec(rng, F, sp->dim), x, 2, k);
            std::vector<LaurentSeries<CycloNum>> local, taylor;
            for (const auto& x : pts) {
                auto e = expand_at(h, x, 2);
                LaurentSeries<CycloNum> t(x);
                for (int j = 0; j <= 2; ++j) {
                    t.coefs.push_back(random_vec(rng, F, sp->dim));
                    for (int a = 0; a < sp->dim; ++a) e.coefs[j - e.low][a] += t.coefs[j][a];
                }
                local.push_back(e);
                taylor.push_back(t);
            }
            auto [g, rem] = split_local_data(F, sp, local, k);
            CycloNum t0 = F.from(frac(1, 11));
            ++checks;
            if (evaluate(g, t0) != evaluate(h, t0)) c.pass = false;
            for (std::size_t i = 0; i < pts.size(); ++i)
                if (rem[i].coefs != taylor[i].coefs) c.pass = false;
        }
    }
    c.data = {{"setups", rat_setups(opt.classical_only).size()}, {"checks", checks}};
    return c;
}

Certificate lambda0_invariance(const SelftestOptions& opt) {
    Certificate c{"lambda0_pi0_invariance", true, {}};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& ac : automorphism_matrix(opt.classical_only)) {
        auto A = build_automorphism(build_simple_lie_algebra(ac.series, ac.rank), ac.spec);
        WeightVec l0 = lambda0(*A);
        bool ok = true;
        for (int i = 0; i < ac.rank; ++i) {
            Rational avg = 0;
            for (int m = 0; m < ac.spec.T; ++m) avg += l0[A->node_perm(m, i)];
            if (avg / ac.spec.T != l0[i]) ok = false;
        }
        nlohmann::json l0s = nlohmann::json::array();
        for (const auto& x : l0) l0s.push_back(to_string(x));
        rows.push_back({{"automorphism", case_name(ac)}, {"lambda0", l0s}, {"pass", ok}});
        c.pass = c.pass && ok;
    }
    c.data = {{"cases", rows}};
    return c;
}

Certificate double_pole(const SelftestOptions& opt) {
    Certificate c{"double_pole_identity", true, {}};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& ac : automorphism_matrix(opt.classical_only)) {
        auto g = build_simple_lie_algebra(ac.series, ac.rank);
        bool corrupted = false;
        if (opt.corrupt && ac.rank >= 2) {
            const auto& R = g->roots();
            g = g->with_corrupted_entry(g->e(R.simple_root_index(1)), g->e(R.simple_root_index(0)));
            corrupted = true;
        }
        Certificate cert;
        try {
            cert = double_pole_identity(*build_automorphism(g, ac.spec, !corrupted));
        } catch (const std::invalid_argument& e) {
            cert.pass = false;
            cert.data = {{"error", e.what()}};
        }
        rows.push_back({{"automorphism", case_name(ac)}, {"corrupted", corrupted}, {"pass", cert.pass}, {"data", cert.data}});
        c.pass = c.pass && cert.pass;
    }
    c.data = {{"cases", rows}};
    return c;
}

ModelSpec model_of(Series s, int rank, AutoSpec a, std::vector<Rational> z, std::vector<WeightVec> w) {
    ModelSpec m;
    m.series = s;
    m.rank = rank;
    m.automorphism = std::move(a);
    for (std::size_t i = 0; i < z.size(); ++i) m.sites.push_back(SiteSpec::rational(z[i], w[i]));
    return m;
}

WeightVec fundamental(int rank, int node) {
    WeightVec w(rank, Rational(0));
    w[node] = 1;
    return w;
}

Certificate commutativity(const SelftestOptions& opt) {
    Certificate c{"commutativity_matrix", true, {}};
    std::vector<std::pair<std::string, ModelSpec>> models;
    models.push_back({"sl2 id T=1 N=3", model_of(Series::A, 1, AutoSpec::identity(1, 1), {1, 2, 3}, {fundamental(1, 0), fundamental(1, 0), fundamental(1, 0)})});
    if (!opt.classical_only) {
        models.push_back({"sl3 flip T=2 N=2", model_of(Series::A, 2, spec_of(2, {1, 0}, {0, 0}), {1, 2}, {fundamental(2, 0), fundamental(2, 0)})});
        models.push_back({"sl3 inner k=(1,0) T=3 N=2", model_of(Series::A, 2, spec_of(3, {0, 1}, {1, 0}), {1, 2}, {fundamental(2, 0), fundamental(2, 0)})});
        models.push_back({"sl4 flip T=2 N=2", model_of(Series::A, 3, spec_of(2, {2, 1, 0}, {0, 0, 0}), {1, 2}, {fundamental(3, 0), fundamental(3, 0)})});
    }
    nlohmann::json rows = nlohmann::json::array();
    std::uint64_t seed = opt.seed;
    for (const auto& [name, spec] : models) {
        int N = static_cast<int>(spec.sites.size());
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j) {
                auto cert = commutator_check(spec, i, j, 3, seed++);
                rows.push_back({{"model", name}, {"i", i + 1}, {"j", j + 1}, {"pass", cert.pass}});
                c.pass = c.pass && cert.pass;
            }
    }
    c.data = {{"pairs", rows}};
    return c;
}

Certificate resummation(const SelftestOptions& opt) {
    Certificate c{"resummation_checks", true, {}};
    nlohmann::json rows = nlohmann::json::array();
    auto note = [&](const std::string& what, bool ok) {
        rows.push_back({{"check", what}, {"pass", ok}});
        c.pass = c.pass && ok;
    };
    std::vector<int> Ts = orders(opt.classical_only, {1, 2, 3});
    for (int T : Ts) {
        auto M = validate_model(model_of(Series::A, 2, AutoSpec::identity(2, T), {1, 3}, {fundamental(2, 0), fundamental(2, 1)}));
        note("resummed H, sl3 id T=" + std::to_string(T), resummed_H_check(*M).pass);
        // Weight function for sigma = id against the classical one in w^T, z^T.
        CycloField F(T), F1(1);
        std::vector<int> colors = {0, 1};
        std::vector<Rational> wq = {Rational(5), frac(7, 2)};
        std::vector<CycloNum> w, wt, zt = {F1.from(Rational(1)), F1.from(Rational(1))};
        Rational z3(1);
        for (int t = 0; t < T; ++t) z3 *= 3;
        zt[1] = F1.from(z3);
        Rational prod(1);
        for (const auto& q : wq) {
            w.push_back(F.from(q));
            Rational p(1);
            for (int t = 0; t < T; ++t) p *= q;
            wt.push_back(F1.from(p));
            for (int t = 0; t + 1 < T; ++t) prod *= q;
            prod *= T;
        }
        auto psi = build_psi(F, *M, colors, w);
        auto cl = classical_weight_function(F1, *M, colors, wt, zt);
        bool ok = psi.size() == cl.size();
        for (const auto& [keys, v] : cl) {
            const CycloNum* d = psi.find(keys);
            ok = ok && d && *d == F.from(v.rational_value() * prod);
        }
        note("weight function, sl3 id T=" + std::to_string(T), ok);
    }
    if (!opt.classical_only) {
        for (const auto& a : {spec_of(3, {0, 1}, {1, 0}), spec_of(4, {0, 1}, {1, 3})}) {
            auto M = validate_model(model_of(Series::A, 2, a, {1, 2}, {fundamental(2, 0), WeightVec{Rational(1), Rational(1)}}));
            CycloField F(a.T);
            std::vector<CycloNum> w = {F.from(frac(7, 3)) + F.omega(1), F.from(frac(11, 3)) + F.omega(1)};
            bool ok = psi_inner_resummed(F, *M, {0, 1}, w) == build_psi(F, *M, {0, 1}, w);
            note("inner resummed weight function, T=" + std::to_string(a.T), ok);
        }
    }
    c.data = {{"checks", rows}};
    return c;
}

}  // namespace

std::vector<Certificate> selftest_suite(const SelftestOptions& opt) {
    return {cyclotomic_sums(opt), circle_lemma(opt),       residue_theorem(opt), reconstruction(opt),
            lambda0_invariance(opt), double_pole(opt), commutativity(opt), resummation(opt)};
}

}  // namespace cg::cli
