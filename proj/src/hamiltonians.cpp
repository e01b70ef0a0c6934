#include "cyclogaudin/hamiltonians.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace cg {

bool Model::exact() const {
    for (const auto& s : spec.sites)
        if (!s.z_exact) return false;
    return true;
}

bool Model::all_irrep() const {
    for (const auto& p : irreps)
        if (!p) return false;
    return true;
}

int Model::dense_dim() const {
    if (!all_irrep()) throw std::invalid_argument("dense dimension needs irreducible modules at every site");
    long d = 1;
    for (const auto& p : irreps) {
        d *= p->dim();
        if (d > (1L << 30)) throw std::invalid_argument("tensor product dimension overflows");
    }
    return static_cast<int>(d);
}

std::optional<int> orbit_relation(const CycloField& F, const CycloNum& a, const CycloNum& b, double) {
    for (int p = 0; p < F.order(); ++p)
        if ((b - F.omega(p) * a).is_zero()) return p;
    return std::nullopt;
}

std::optional<int> orbit_relation(const ComplexField& F, const Complex& a, const Complex& b, double tol) {
    for (int p = 0; p < F.order(); ++p)
        if (std::abs(b - F.omega(p) * a) <= tol * (1.0 + std::abs(a))) return p;
    return std::nullopt;
}

ModelPtr validate_model(const ModelSpec& spec) {
    LieAlgebraPtr g;
    AutoTablePtr A;
    try {
        g = build_simple_lie_algebra(spec.series, spec.rank);
        A = build_automorphism(g, spec.automorphism);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    return validate_model(spec, A);
}

ModelPtr validate_model(const ModelSpec& spec, AutoTablePtr A) {
    auto M = std::make_shared<Model>();
    M->spec = spec;
    M->A = A;
    M->g = A->algebra_ptr();
    const LieAlgebra& g = *M->g;
    int N = static_cast<int>(spec.sites.size()), T = A->order();
    if (N < 1) throw ValidationError("model has no sites");
    for (int i = 0; i < N; ++i) {
        const auto& s = spec.sites[i];
        if (static_cast<int>(s.weight.size()) != g.rank())
            throw ValidationError("site " + std::to_string(i + 1) + " has a weight of the wrong rank");
        bool zero = s.z_exact ? *s.z_exact == 0 : std::abs(s.z) <= 1e-10;
        if (zero) throw ValidationError("site " + std::to_string(i + 1) + " has z = 0");
    }
    CycloField Fq(T);
    ComplexField Fc(T);
    bool exact = M->exact();
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            std::optional<int> p;
            if (exact)
                p = orbit_relation(Fq, Fq.from(*spec.sites[i].z_exact), Fq.from(*spec.sites[j].z_exact));
            else
                p = orbit_relation(Fc, spec.sites[i].z, spec.sites[j].z, 1e-10);
            if (p) {
                std::ostringstream os;
                os << "sites " << i + 1 << " and " << j + 1 << " have colliding orbits: z_" << j + 1 << " = omega^" << *p
                   << " z_" << i + 1;
                throw ValidationError(os.str());
            }
        }
    std::map<std::pair<int, WeightVec>, ModulePtr> cache;
    std::map<WeightVec, std::shared_ptr<const IrrepModule>> irr_cache;
    M->modules.resize(N);
    M->irreps.resize(N);
    M->vermas.resize(N);
    for (int i = 0; i < N; ++i) {
        const auto& s = spec.sites[i];
        if (s.kind == ModuleKind::Irrep) {
            auto it = irr_cache.find(s.weight);
            if (it == irr_cache.end()) {
                try {
                    it = irr_cache.emplace(s.weight, make_irrep(M->g, s.weight, spec.irrep_cap)).first;
                } catch (const std::invalid_argument& e) {
                    throw ValidationError("site " + std::to_string(i + 1) + ": " + e.what());
                }
            }
            M->irreps[i] = it->second;
            M->modules[i] = it->second;
            auto key = std::make_pair(0, s.weight);
            auto vt = cache.find(key);
            if (vt == cache.end()) vt = cache.emplace(key, make_verma(M->g, s.weight)).first;
            M->vermas[i] = vt->second;
        } else {
            auto key = std::make_pair(0, s.weight);
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(key, make_verma(M->g, s.weight)).first;
            M->modules[i] = it->second;
            M->vermas[i] = it->second;
        }
    }
    return M;
}

ModelSpec sl3_flip_example(const Rational& z1, const Rational& z2) {
    ModelSpec s;
    s.series = Series::A;
    s.rank = 2;
    s.automorphism.T = 2;
    s.automorphism.permutation = {1, 0};
    s.automorphism.phases = {0, 0};
    WeightVec w1{Rational(1), Rational(0)};
    s.sites = {SiteSpec::rational(z1, w1), SiteSpec::rational(z2, w1)};
    return s;
}

std::vector<CycloNum> site_values(const CycloField& F, const Model& m) {
    std::vector<CycloNum> out;
    for (const auto& s : m.spec.sites) {
        if (!s.z_exact) throw std::invalid_argument("exact arithmetic needs rational sites");
        out.push_back(F.from(*s.z_exact));
    }
    return out;
}

std::vector<Complex> site_values(const ComplexField&, const Model& m) {
    std::vector<Complex> out;
    for (const auto& s : m.spec.sites) out.push_back(s.z);
    return out;
}

int dense_index(const Model& M, const std::vector<Key>& keys) {
    int idx = 0;
    for (int i = 0; i < M.N(); ++i) idx = idx * M.irreps[i]->dim() + keys[i].at(0);
    return idx;
}

std::vector<Key> dense_keys(const Model& M, int index) {
    std::vector<Key> keys(M.N());
    for (int i = M.N() - 1; i >= 0; --i) {
        int d = M.irreps[i]->dim();
        keys[i] = {index % d};
        index /= d;
    }
    return keys;
}

Certificate double_pole_identity(const AutoTable& A) {
    const LieAlgebra& g = A.algebra();
    int T = A.order();
    CycloField F(T);
    CycloNum lhs = F.zero();
    for (int r = 1; r < T; ++r) {
        CycloNum d = F.omega(r) - F.one();
        lhs += F.omega(r) * trace_sigma_power(A, r) / (d * d);
    }
    lhs = lhs * frac(-g.dual_coxeter(), 2);
    WeightVec l0 = lambda0(A);
    Rational rhs = g.casimir_delta(l0);
    Certificate c;
    c.name = "double_pole_identity";
    c.pass = lhs == F.from(rhs);
    c.data = {{"lhs", lhs.to_string()}, {"rhs", rhs.get_str()}, {"T", T}};
    return c;
}

Certificate sigma_bracket_identity(const AutoTable& A) {
    const LieAlgebra& g = A.algebra();
    int T = A.order();
    CycloField F(T);
    Certificate c;
    c.name = "sigma_bracket_identity";
    c.pass = true;
    for (int p = 0; p < T; ++p) {
        LieElement<CycloNum> x;
        for (int a = 0; a < g.dim(); ++a)
            x += bracket(g, apply_sigma(F, A, p, lift(F, g.dual(a))), basis_element(F, a));
        for (int k = 0; k < T; ++k)
            if (apply_sigma(F, A, k, x) != x) {
                c.pass = false;
                c.data["failure"] = {{"p", p}, {"k", k}};
                return c;
            }
    }
    c.data["T"] = T;
    return c;
}

namespace {

// All tensor basis states with total lowering depth at most `depth`.
void test_vectors_for(const CycloField& F, const Model& M, int depth, std::vector<TensorState<CycloNum>>& out) {
    auto v = highest_tensor(F, M.modules);
    std::vector<TensorState<CycloNum>> layer{v};
    out.push_back(v);
    const LieAlgebra& g = *M.g;
    for (int d = 0; d < depth; ++d) {
        std::vector<TensorState<CycloNum>> next;
        for (const auto& s : layer)
            for (int i = 0; i < M.N(); ++i)
                for (int r = 0; r < g.n_pos(); ++r) {
                    TensorState<CycloNum> t;
                    tensor_act_basis_into(t, M.modules, i, g.f(r), F.one(), s);
                    if (!t.empty()) next.push_back(t);
                }
        for (const auto& t : next) out.push_back(t);
        layer = std::move(next);
    }
}

// Whether two operators commute on the model: densely for irreps, else on test vectors.
std::optional<std::string> commutator_failure(const CycloField& F, const Model& M, const Operator<CycloNum>& X,
                                              const Operator<CycloNum>& Y) {
    if (M.all_irrep()) {
        auto mx = operator_matrix(M, X), my = operator_matrix(M, Y);
        auto c = mx * my - my * mx;
        auto nz = c.first_nonzero();
        if (!nz) return std::nullopt;
        std::ostringstream os;
        os << "entry (" << nz->first << ", " << nz->second << ") = " << c(nz->first, nz->second).to_string();
        return os.str();
    }
    std::vector<TensorState<CycloNum>> vs;
    test_vectors_for(F, M, 2, vs);
    for (const auto& v : vs) {
        auto d = apply_operator(M, X, apply_operator(M, Y, v)) - apply_operator(M, Y, apply_operator(M, X, v));
        if (!d.empty()) return "nonzero on test vector " + tensor_string(M.modules, v);
    }
    return std::nullopt;
}

bool is_identity_automorphism(const AutoTable& A) {
    if (!A.is_inner()) return false;
    for (int x : A.spec().phases)
        if (mod_T_bracket(x, A.order()) != 0) return false;
    return true;
}

}  // namespace

Certificate resummed_H_check(const Model& M) {
    if (!is_identity_automorphism(*M.A)) throw std::invalid_argument("resummed Hamiltonians need sigma = id");
    int T = M.T();
    CycloField F(T);
    auto z = site_values(F, M);
    const LieAlgebra& g = *M.g;
    Certificate c;
    c.name = "resummed_H_check";
    c.pass = true;
    for (int i = 0; i < M.N(); ++i) {
        Operator<CycloNum> R(F);
        CycloNum zi_pow = F.one();
        for (int k = 1; k < T; ++k) zi_pow = zi_pow * z[i];
        CycloNum pref = zi_pow * Rational(T);
        CycloNum zti = zi_pow * z[i];
        for (int j = 0; j < M.N(); ++j) {
            if (j == i) continue;
            CycloNum ztj = z[j];
            for (int k = 1; k < T; ++k) ztj = ztj * z[j];
            CycloNum coef = pref / (zti - ztj);
            for (int a = 0; a < g.dim(); ++a)
                for (const auto& [b, q] : g.dual(a)) R.add(coef * q, i, b, j, a);
        }
        R.add_scaled(casimir_operator(F, M, i), z[i].inverse() * frac(T - 1, 2));
        Operator<CycloNum> H = build_H(F, M, i);
        bool ok = H == R;
        if (ok && M.all_irrep()) ok = operator_matrix(M, H) == operator_matrix(M, R);
        c.data["sites"].push_back({{"site", i + 1}, {"pass", ok}});
        c.pass = c.pass && ok;
    }
    return c;
}

Certificate commutator_check(const ModelSpec& spec0, int i, int j, int trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-20, 20), den(1, 7);
    Certificate c;
    c.name = "commutator_check";
    c.pass = true;
    int T = spec0.automorphism.T, N = static_cast<int>(spec0.sites.size());
    // Entries of H_i are ratios with denominator z_i prod_{j,p} (z_i - omega^{-p} z_j).
    c.data["numerator_degree_bound"] = 2 * (T * (N - 1) + 1);
    c.data["pair"] = {i + 1, j + 1};
    for (int t = 0; t < trials; ++t) {
        ModelPtr M;
        for (int attempt = 0; attempt < 200 && !M; ++attempt) {
            ModelSpec s = spec0;
            for (auto& site : s.sites) {
                int n = num(rng);
                site = SiteSpec::rational(frac(n == 0 ? 1 : n, den(rng)), site.weight, site.kind);
            }
            try {
                M = validate_model(s);
            } catch (const ValidationError&) {
            }
        }
        if (!M) throw std::runtime_error("could not draw a valid site configuration");
        CycloField F(T);
        nlohmann::json zs = nlohmann::json::array();
        for (const auto& s : M->spec.sites) zs.push_back(s.z_exact->get_str());
        auto fail = commutator_failure(F, *M, build_H(F, *M, i), build_H(F, *M, j));
        c.data["trials"].push_back({{"z", zs}, {"zero", !fail}});
        if (fail) {
            c.pass = false;
            c.data["first_nonzero"] = *fail;
            return c;
        }
    }
    return c;
}

Certificate gsigma_commutation_check(const Model& M, int i) {
    CycloField F(M.T());
    const LieAlgebra& g = *M.g;
    Operator<CycloNum> H = build_H(F, M, i);
    Certificate c;
    c.name = "gsigma_commutation_check";
    c.pass = true;
    for (int a = 0; a < g.dim(); ++a) {
        auto x = projector_pi(F, *M.A, 0, basis_element(F, a));
        if (x.empty()) continue;
        Operator<CycloNum> D(F);
        for (int j = 0; j < M.N(); ++j)
            for (const auto& [b, xb] : x) D.add(xb, -1, 0, j, b);
        auto fail = commutator_failure(F, M, H, D);
        if (fail) {
            c.pass = false;
            c.data["generator"] = g.label(a);
            c.data["first_nonzero"] = *fail;
            return c;
        }
    }
    return c;
}

std::vector<Eigencluster> cluster_eigenvalues(std::vector<Complex> ev, double tol) {
    std::sort(ev.begin(), ev.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    std::vector<Eigencluster> out;
    std::vector<Complex> sums;
    for (const auto& v : ev) {
        bool placed = false;
        for (std::size_t k = 0; k < out.size(); ++k)
            if (std::abs(v - out[k].value) <= tol * (1.0 + std::abs(v))) {
                sums[k] += v;
                ++out[k].multiplicity;
                out[k].value = sums[k] / static_cast<double>(out[k].multiplicity);
                placed = true;
                break;
            }
        if (!placed) {
            out.push_back({v, 1});
            sums.push_back(v);
        }
    }
    return out;
}

std::vector<Eigencluster> spectrum(const Model& M, int i, double tol, int dim_cap) {
    if (!M.all_irrep()) throw std::invalid_argument("spectrum needs irreducible modules at every site");
    int D = M.dense_dim();
    if (D > dim_cap) throw std::invalid_argument("tensor product dimension " + std::to_string(D) + " exceeds the cap");
    ComplexField F(M.T());
    auto m = operator_matrix(M, build_H(F, M, i));
    Eigen::MatrixXcd em(D, D);
    for (int r = 0; r < D; ++r)
        for (int c = 0; c < D; ++c) em(r, c) = m(r, c);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(em, false);
    std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + D);
    return cluster_eigenvalues(ev, tol);
}

Matrix<Complex> s_u_laurent_coefficient(const Model& M, Complex x, int n, double radius, int nodes) {
    ComplexField F(M.T());
    Operator<Complex> acc(F);
    const double pi = std::acos(-1.0);
    for (int k = 0; k < nodes; ++k) {
        Complex d = std::polar(radius, 2 * pi * k / nodes);
        acc.add_scaled(assemble_S_u(F, M, x + d), std::pow(d, n) / static_cast<double>(nodes));
    }
    return operator_matrix(M, acc);
}

}  // namespace cg
