#include "cyclogaudin/bethe.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

namespace cg {

BetheCoefficients bethe_coefficients(const BetheProblem& P) {
    if (!P.model) throw std::invalid_argument("Bethe problem without a model");
    const Model& M = *P.model;
    const RootSystem& R = M.g->roots();
    const AutoTable& A = *M.A;
    int T = M.T(), m = P.m();
    for (int c : P.colors)
        if (c < 0 || c >= R.rank) throw ValidationError("root color " + std::to_string(c + 1) + " is not a Dynkin node");
    WeightVec l0 = lambda0(A);
    BetheCoefficients C;
    C.site.assign(m, std::vector<std::vector<Rational>>(T, std::vector<Rational>(M.N())));
    C.root.assign(m, std::vector<std::vector<Rational>>(m, std::vector<Rational>(T)));
    C.origin.assign(m, Rational(0));
    for (int j = 0; j < m; ++j) {
        WeightVec aj = R.simple_root(P.colors[j]);
        for (int r = 0; r < T; ++r) {
            for (int i = 0; i < M.N(); ++i) C.site[j][r][i] = R.inner(aj, A.l_sigma(M.spec.sites[i].weight, r));
            for (int k = 0; k < m; ++k) C.root[j][k][r] = R.inner(aj, A.l_sigma(R.simple_root(P.colors[k]), r));
        }
        Rational o = R.inner(aj, l0);
        for (int r = 1; r < T; ++r) o -= C.root[j][j][r] / 2;
        C.origin[j] = o;
    }
    return C;
}

Eigen::MatrixXcd jacobian(const BetheProblem& P, const BetheCoefficients& C, const std::vector<Complex>& w) {
    const Model& M = *P.model;
    ComplexField F(M.T());
    auto z = site_values(F, M);
    int m = P.m(), T = M.T();
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        Complex diag = 0;
        for (int r = 0; r < T; ++r) {
            for (int i = 0; i < M.N(); ++i) {
                if (C.site[j][r][i] == 0) continue;
                Complex d = w[j] - F.omega(r) * z[i];
                diag -= C.site[j][r][i].get_d() / (d * d);
            }
            for (int k = 0; k < m; ++k) {
                if (k == j || C.root[j][k][r] == 0) continue;
                Complex d = w[j] - F.omega(r) * w[k];
                double b = C.root[j][k][r].get_d();
                diag += b / (d * d);
                J(j, k) -= b * F.omega(r) / (d * d);
            }
        }
        diag -= C.origin[j].get_d() / (w[j] * w[j]);
        J(j, j) += diag;
    }
    return J;
}

Eigen::MatrixXcd jacobian(const BetheProblem& P, const std::vector<Complex>& w) {
    return jacobian(P, bethe_coefficients(P), w);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool root_less(int ca, const Complex& a, int cb, const Complex& b) {
    if (ca != cb) return ca < cb;
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

}  // namespace

CanonicalRoots canonicalize(const AutoTable& A, const std::vector<int>& colors, const std::vector<Complex>& w) {
    int T = A.order();
    ComplexField F(T);
    int m = static_cast<int>(w.size());
    std::vector<int> col(m), shift(m);
    std::vector<Complex> rw(m);
    for (int j = 0; j < m; ++j) {
        double th = std::arg(w[j]);
        if (th < 0) th += kTwoPi;
        int k = static_cast<int>(std::floor(th / (kTwoPi / T) + 1e-9));
        k %= T;
        shift[j] = mod_T_bracket(-k, T);
        rw[j] = F.omega(shift[j]) * w[j];
        col[j] = A.node_perm(shift[j], colors[j]);
    }
    std::vector<int> order(m);
    for (int j = 0; j < m; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return root_less(col[a], rw[a], col[b], rw[b]); });
    CanonicalRoots out;
    for (int j : order) {
        out.colors.push_back(col[j]);
        out.roots.push_back(rw[j]);
    }
    out.shifts = shift;
    return out;
}

bool same_canonical(const CanonicalRoots& a, const CanonicalRoots& b, double tol) {
    if (a.colors != b.colors) return false;
    for (std::size_t j = 0; j < a.roots.size(); ++j)
        if (std::abs(a.roots[j] - b.roots[j]) > tol * (1.0 + std::abs(a.roots[j]))) return false;
    return true;
}

int default_thread_count() {
    if (const char* env = std::getenv("CYCLOGAUDIN_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : static_cast<int>(h);
}

namespace {

using CVec = std::vector<Complex>;

struct StartResult {
    bool converged = false;
    CVec w;
    double residual = 0;
    int iterations = 0;
};

std::optional<CVec> eval_residuals(const ComplexField& F, const BetheProblem& P, const BetheCoefficients& C, const CVec& w) {
    CVec out(w.size());
    try {
        for (int j = 0; j < P.m(); ++j) out[j] = residual(F, P, C, w, j);
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
    for (const auto& x : out)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return std::nullopt;
    return out;
}

double max_abs(const CVec& v) {
    double m = 0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm_l2(const CVec& v) {
    double s = 0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

// Deflation operator prod_p (1/|w - p|^2 + 1) and its logarithmic derivative along d.
struct Deflation {
    const std::vector<CVec>* points = nullptr;

    double factor(const CVec& w) const {
        double f = 1.0;
        for (const auto& p : *points) {
            double d2 = 0;
            for (std::size_t j = 0; j < w.size(); ++j) d2 += std::norm(w[j] - p[j]);
            f *= 1.0 / std::max(d2, 1e-300) + 1.0;
        }
        return f;
    }
    double log_derivative(const CVec& w, const CVec& d) const {
        double acc = 0;
        for (const auto& p : *points) {
            double d2 = 0, dir = 0;
            for (std::size_t j = 0; j < w.size(); ++j) {
                Complex e = w[j] - p[j];
                d2 += std::norm(e);
                dir += (std::conj(e) * d[j]).real();
            }
            d2 = std::max(d2, 1e-300);
            double mp = 1.0 / d2 + 1.0;
            acc += (-2.0 * dir / (d2 * d2)) / mp;
        }
        return acc;
    }
};

bool admissible(const ComplexField& F, const Model& M, const CVec& w, const SolverOptions& opt) {
    auto z = site_values(F, M);
    double scale = 1.0;
    for (const auto& x : z) scale = std::max(scale, std::abs(x));
    double dtol = std::max(opt.coincidence_tol, opt.degeneracy_tol);
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (!std::isfinite(w[j].real()) || !std::isfinite(w[j].imag())) return false;
        if (std::abs(w[j]) <= dtol * scale) return false;
        for (const auto& zi : z)
            if (orbit_relation(F, zi, w[j], opt.coincidence_tol)) return false;
        for (std::size_t k = 0; k < j; ++k)
            if (orbit_relation(F, w[k], w[j], dtol * scale / (1.0 + std::abs(w[k])))) return false;
    }
    return true;
}

// Each equation multiplied by its pole factors (w_j - p)/scale.  The cleared system has
// the same admissible zeros but, unlike the residuals, does not vanish at infinity.
struct Cleared {
    CVec f;
    CVec g;
    Eigen::MatrixXcd jg;
};

std::optional<Cleared> cleared_system(const ComplexField& F, const BetheProblem& P, const BetheCoefficients& C,
                                      const CVec& z, const CVec& w, double scale) {
    int m = P.m(), T = F.order();
    auto f = eval_residuals(F, P, C, w);
    if (!f) return std::nullopt;
    Eigen::MatrixXcd jf = jacobian(P, C, w);
    Cleared out;
    out.f = *f;
    out.g.resize(m);
    out.jg = Eigen::MatrixXcd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        Complex D = 1.0;
        CVec dlog(m, Complex(0.0, 0.0));
        auto factor = [&](const Complex& d) {
            D *= d / scale;
            return 1.0 / d;
        };
        for (int r = 0; r < T; ++r) {
            for (std::size_t i = 0; i < z.size(); ++i)
                if (C.site[j][r][i] != 0) dlog[j] += factor(w[j] - F.omega(r) * z[i]);
            for (int k = 0; k < m; ++k)
                if (k != j && C.root[j][k][r] != 0) {
                    Complex inv = factor(w[j] - F.omega(r) * w[k]);
                    dlog[j] += inv;
                    dlog[k] -= F.omega(r) * inv;
                }
        }
        if (C.origin[j] != 0) dlog[j] += factor(w[j]);
        out.g[j] = (*f)[j] * D;
        for (int k = 0; k < m; ++k) out.jg(j, k) = D * (jf(j, k) + (*f)[j] * dlog[k]);
    }
    for (const auto& x : out.g)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return std::nullopt;
    return out;
}

StartResult run_start(const BetheProblem& P, const BetheCoefficients& C, const SolverOptions& opt, int start,
                      const std::vector<CVec>& deflate) {
    const Model& M = *P.model;
    int T = M.T(), m = P.m(), N = M.N();
    ComplexField F(T);
    auto z = site_values(F, M);
    double scale = 0;
    for (const auto& x : z) scale = std::max(scale, std::abs(x));
    if (scale == 0) scale = 1;

    std::mt19937_64 rng(opt.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(start));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> rT(0, T - 1);
    CVec w(m);
    for (int j = 0; j < m; ++j) {
        Complex center = 0;
        for (int i = 0; i < N; ++i) center += F.omega(rT(rng)) * z[i];
        center /= static_cast<double>(N);
        Complex pert(gauss(rng), gauss(rng));
        Complex jitter(gauss(rng), gauss(rng));
        w[j] = F.omega(rT(rng)) * (center * (1.0 + 0.3 * pert) + 0.5 * scale * jitter);
    }

    Deflation D{&deflate};
    StartResult res;
    auto cur = cleared_system(F, P, C, z, w, scale);
    if (!cur) return res;
    auto merit = [&](const CVec& x, const Cleared& s) { return D.factor(x) * norm_l2(s.g); };
    for (int it = 0; it <= opt.max_iter; ++it) {
        double nf = max_abs(cur->f);
        if (nf < opt.tol) {
            res.converged = true;
            res.w = w;
            res.residual = nf;
            res.iterations = it;
            return res;
        }
        if (it == opt.max_iter) break;
        Eigen::VectorXcd rhs(m);
        for (int j = 0; j < m; ++j) rhs(j) = -cur->g[j];
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(cur->jg);
        if (!lu.isInvertible()) return res;
        Eigen::VectorXcd dv = lu.solve(rhs);
        CVec d(m);
        for (int j = 0; j < m; ++j) d[j] = dv(j);
        // Near convergence the deflation has no effect on an isolated new root.
        double tau = 1.0;
        if (!deflate.empty() && nf > 1e-8) {
            double eta = D.log_derivative(w, d);
            if (std::abs(1.0 - eta) > 1e-12) tau = 1.0 / (1.0 - eta);
        }
        double phi = merit(w, *cur);
        double lam = tau;
        CVec best_w;
        std::optional<Cleared> best;
        for (int h = 0; h < 16; ++h, lam *= 0.5) {
            CVec cand(m);
            for (int j = 0; j < m; ++j) cand[j] = w[j] + lam * d[j];
            auto sc = cleared_system(F, P, C, z, cand, scale);
            if (!sc) continue;
            best_w = cand;
            best = std::move(sc);
            if (merit(cand, *best) < phi) break;
        }
        if (!best) return res;
        w = best_w;
        cur = std::move(best);
        for (const auto& x : w)
            if (std::abs(x) > 1e8 * scale) return res;
    }
    return res;
}

// Images of a solution under twists that fix colors and permutations of equally colored roots.
std::vector<CVec> symmetry_images(const AutoTable& A, const std::vector<int>& colors, const CVec& w) {
    int m = static_cast<int>(w.size()), T = A.order();
    ComplexField F(T);
    std::vector<std::vector<int>> allowed(m);
    long total = 1;
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < T; ++k)
            if (A.node_perm(k, colors[j]) == colors[j]) allowed[j].push_back(k);
        total *= static_cast<long>(allowed[j].size());
    }
    std::vector<int> perm(m);
    for (int j = 0; j < m; ++j) perm[j] = j;
    long perms = 1;
    for (int j = 2; j <= m; ++j) perms *= j;
    if (total * perms > 512) return {w};
    std::vector<CVec> out;
    do {
        bool ok = true;
        for (int j = 0; j < m && ok; ++j) ok = colors[perm[j]] == colors[j];
        if (!ok) continue;
        std::vector<std::size_t> idx(m, 0);
        while (true) {
            CVec v(m);
            for (int j = 0; j < m; ++j) v[j] = F.omega(allowed[j][idx[j]]) * w[perm[j]];
            out.push_back(v);
            int p = 0;
            while (p < m && ++idx[p] == allowed[p].size()) idx[p++] = 0;
            if (p == m) break;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

constexpr int kRoundSize = 8;
constexpr double kMergeTol = 1e-7;

}  // namespace

SolutionSet solve(const BetheProblem& P, const SolverOptions& opt) {
    const Model& M = *P.model;
    auto C = bethe_coefficients(P);
    SolutionSet out;
    ComplexField F(M.T());
    if (P.m() == 0) {
        BetheSolution s;
        out.solutions.push_back(s);
        return out;
    }
    for (int j = 0; j < P.m(); ++j) {
        bool empty = C.origin[j] == 0;
        for (const auto& row : C.site[j])
            for (const auto& q : row) empty = empty && q == 0;
        for (int k = 0; k < P.m(); ++k)
            for (const auto& q : C.root[j][k]) empty = empty && (k == j || q == 0);
        if (empty) {
            out.note = "equation " + std::to_string(j + 1) + " vanishes identically; the system is underdetermined";
            return out;
        }
    }
    int threads = opt.threads > 0 ? opt.threads : default_thread_count();
    threads = std::max(1, std::min(threads, kRoundSize));
    std::vector<CVec> deflate;
    for (int base = 0; base < opt.starts; base += kRoundSize) {
        int count = std::min(kRoundSize, opt.starts - base);
        std::vector<StartResult> results(count);
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (int s; (s = next.fetch_add(1)) < count;) results[s] = run_start(P, C, opt, base + s, deflate);
        };
        if (threads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        for (auto& r : results) {
            ++out.starts;
            if (!r.converged || !admissible(F, M, r.w, opt)) {
                ++out.failed;
                continue;
            }
            BetheSolution s;
            s.colors = P.colors;
            s.roots = r.w;
            s.residual = r.residual;
            s.iterations = r.iterations;
            s.canonical = canonicalize(*M.A, P.colors, r.w);
            bool dup = false;
            for (const auto& o : out.solutions)
                if (same_canonical(o.canonical, s.canonical, kMergeTol)) dup = true;
            if (dup) {
                ++out.merged;
                continue;
            }
            for (auto& img : symmetry_images(*M.A, P.colors, r.w)) deflate.push_back(std::move(img));
            out.solutions.push_back(std::move(s));
        }
    }
    return out;
}

SolutionSet solve_all_colorings(const ModelPtr& M, int m, const SolverOptions& opt) {
    int n = M->g->rank();
    SolutionSet out;
    std::vector<int> c(m, 0);
    while (true) {
        SolutionSet part = solve(BetheProblem{M, c}, opt);
        out.starts += part.starts;
        out.failed += part.failed;
        out.merged += part.merged;
        for (auto& s : part.solutions) {
            bool dup = false;
            for (const auto& o : out.solutions)
                if (same_canonical(o.canonical, s.canonical, kMergeTol)) dup = true;
            if (dup)
                ++out.merged;
            else
                out.solutions.push_back(std::move(s));
        }
        int p = m - 1;
        while (p >= 0 && c[p] == n - 1) --p;
        if (p < 0) break;
        ++c[p];
        for (int q = p + 1; q < m; ++q) c[q] = c[p];
    }
    return out;
}

Certificate untwisted_reduction_check(const BetheProblem& P, int trials, std::uint64_t seed) {
    const Model& M = *P.model;
    const AutoTable& A = *M.A;
    const RootSystem& R = M.g->roots();
    int T = M.T(), m = P.m();
    for (int i = 0; i < R.rank; ++i)
        if (A.node_perm(1, i) != i) throw std::invalid_argument("the reduction needs a trivial diagram permutation");
    bool identity = true;
    for (int i = 0; i < R.rank; ++i)
        if (mod_T_bracket(A.spec().phases[i], T) != 0) identity = false;
    auto C = bethe_coefficients(P);
    Certificate cert;
    cert.name = "untwisted_reduction_check";
    cert.data["sigma_identity"] = identity;
    std::vector<Rational> tilde_origin;
    bool coef_ok = true;
    for (int j = 0; j < m; ++j) {
        tilde_origin.push_back(C.origin[j] / T);
        cert.data["tilde_origin_coefficients"].push_back(to_string(tilde_origin.back()));
        if (identity && tilde_origin.back() != 0) coef_ok = false;
    }
    // The vanishing rests on sum over positive roots of <alpha, alpha_c> = <alpha_c, alpha_c>.
    bool root_sum_ok = true;
    for (int c : P.colors) {
        Rational acc = 0;
        for (int r = 0; r < R.num_positive(); ++r) acc += R.inner(R.root_weight(r), R.simple_root(c));
        if (acc != R.inner(R.simple_root(c), R.simple_root(c))) root_sum_ok = false;
    }
    ComplexField F(T);
    auto z = site_values(F, M);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0;
    int evaluated = 0;
    for (int t = 0; t < trials; ++t) {
        CVec w(m);
        for (auto& x : w) x = Complex(gauss(rng), gauss(rng)) * 2.0;
        std::optional<CVec> lhs = eval_residuals(F, P, C, w);
        if (!lhs) continue;
        for (int j = 0; j < m; ++j) {
            Complex wt = std::pow(w[j], T);
            Complex cl = 0;
            for (int i = 0; i < M.N(); ++i) cl += C.site[j][0][i].get_d() / (wt - std::pow(z[i], T));
            for (int k = 0; k < m; ++k)
                if (k != j) cl -= C.root[j][k][0].get_d() / (wt - std::pow(w[k], T));
            cl += tilde_origin[j].get_d() / wt;
            Complex rhs = static_cast<double>(T) * std::pow(w[j], T - 1) * cl;
            worst = std::max(worst, std::abs((*lhs)[j] - rhs) / std::max(1.0, std::abs(rhs)));
        }
        ++evaluated;
    }
    cert.data["trials"] = evaluated;
    cert.data["max_relative_difference"] = worst;
    cert.data["root_sum_identity"] = root_sum_ok;
    cert.pass = coef_ok && root_sum_ok && evaluated > 0 && worst < 1e-10;
    return cert;
}

nlohmann::json to_json(const SolutionSet& s) {
    using nlohmann::json;
    auto roots_json = [](const CVec& w) {
        json a = json::array();
        for (const auto& x : w) a.push_back({x.real(), x.imag()});
        return a;
    };
    auto colors_json = [](const std::vector<int>& c) {
        json a = json::array();
        for (int x : c) a.push_back(x + 1);
        return a;
    };
    json out;
    out["starts"] = s.starts;
    out["failed"] = s.failed;
    out["merged"] = s.merged;
    if (!s.note.empty()) out["note"] = s.note;
    out["solutions"] = json::array();
    for (const auto& sol : s.solutions) {
        json e;
        e["colors"] = colors_json(sol.colors);
        e["roots"] = roots_json(sol.roots);
        e["residual_norm"] = sol.residual;
        e["iterations"] = sol.iterations;
        e["canonical"] = {{"colors", colors_json(sol.canonical.colors)},
                          {"roots", roots_json(sol.canonical.roots)},
                          {"shifts", sol.canonical.shifts}};
        out["solutions"].push_back(e);
    }
    return out;
}

SolutionSet solutions_from_json(const nlohmann::json& j) {
    SolutionSet s;
    s.starts = j.value("starts", 0);
    s.failed = j.value("failed", 0);
    s.merged = j.value("merged", 0);
    s.note = j.value("note", std::string());
    auto colors = [](const nlohmann::json& a) {
        std::vector<int> c;
        for (const auto& x : a) c.push_back(x.get<int>() - 1);
        return c;
    };
    auto roots = [](const nlohmann::json& a) {
        CVec w;
        for (const auto& x : a) w.emplace_back(x.at(0).get<double>(), x.at(1).get<double>());
        return w;
    };
    for (const auto& e : j.at("solutions")) {
        BetheSolution sol;
        sol.colors = colors(e.at("colors"));
        sol.roots = roots(e.at("roots"));
        sol.residual = e.value("residual_norm", 0.0);
        sol.iterations = e.value("iterations", 0);
        if (e.contains("canonical")) {
            sol.canonical.colors = colors(e["canonical"].at("colors"));
            sol.canonical.roots = roots(e["canonical"].at("roots"));
            sol.canonical.shifts = e["canonical"].value("shifts", std::vector<int>{});
        }
        s.solutions.push_back(std::move(sol));
    }
    return s;
}

}  // namespace cg
