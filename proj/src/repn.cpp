#include "cyclogaudin/repn.hpp"

#include <sstream>
#include <stdexcept>

namespace cg {

namespace {

using QMat = std::vector<std::vector<Rational>>;

int rank_of(QMat a) {
    int rows = static_cast<int>(a.size());
    if (rows == 0) return 0;
    int cols = static_cast<int>(a[0].size()), rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (a[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[piv], a[rank]);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || a[r][c] == 0) continue;
            Rational f = a[r][c] / a[rank][c];
            for (int k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

QMat inverse(QMat a) {
    int n = static_cast<int>(a.size());
    QMat inv(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i) inv[i][i] = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (a[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::logic_error("singular Shapovalov block");
        std::swap(a[piv], a[c]);
        std::swap(inv[piv], inv[c]);
        Rational d = a[c][c];
        for (int k = 0; k < n; ++k) {
            a[c][k] /= d;
            inv[c][k] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rational f = a[r][c];
            for (int k = 0; k < n; ++k) {
                a[r][k] -= f * a[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

}  // namespace

VermaModule::VermaModule(LieAlgebraPtr g, WeightVec lambda) : Module(std::move(g), std::move(lambda)) {
    if (static_cast<int>(lambda_.size()) != g_->rank()) throw std::invalid_argument("highest weight has wrong rank");
}

WeightVec VermaModule::weight(const Key& k) const {
    WeightVec w = lambda_;
    for (int r : k) {
        const WeightVec& rw = g_->weight(g_->e(r));
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= rw[i];
    }
    return w;
}

std::string VermaModule::key_label(const Key& k) const {
    std::string s;
    for (int r : k) s += g_->label(g_->f(r));
    return s + "v";
}

const RatVec& VermaModule::act_basis(int a, const Key& k) const {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto key = std::make_pair(a, k);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    RatVec v = compute(a, k);
    return cache_.emplace(key, std::move(v)).first->second;
}

RatVec VermaModule::compute(int a, const Key& k) const {
    const LieAlgebra& g = *g_;
    RatVec out;
    BasisKind kind = g.kind(a);
    if (kind == BasisKind::H) {
        out.add(k, weight(k)[g.index_of(a)]);
        return out;
    }
    if (k.empty()) {
        if (kind == BasisKind::F) out.add(Key{g.index_of(a)}, Rational(1));
        return out;
    }
    if (kind == BasisKind::F && g.index_of(a) >= k[0]) {
        Key nk;
        nk.reserve(k.size() + 1);
        nk.push_back(g.index_of(a));
        nk.insert(nk.end(), k.begin(), k.end());
        out.add(nk, Rational(1));
        return out;
    }
    // X F_b m' = F_b (X m') + [X, F_b] m'.
    int b = k[0];
    Key rest(k.begin() + 1, k.end());
    RatVec inner = act_basis(a, rest);
    for (const auto& [n, q] : inner)
        for (const auto& [n2, q2] : act_basis(g.f(b), n)) out.add(n2, q * q2);
    for (const auto& [c, q] : g.bracket_basis(a, g.f(b)))
        for (const auto& [n2, q2] : act_basis(c, rest)) out.add(n2, q * q2);
    return out;
}

RatVec VermaModule::act_vec(int a, const RatVec& v) const {
    RatVec out;
    for (const auto& [k, q] : v)
        for (const auto& [k2, q2] : act_basis(a, k)) out.add(k2, q * q2);
    return out;
}

Rational VermaModule::shapovalov(const Key& m, const Key& mp) const {
    if (m.size() == 0 && mp.size() == 0) return 1;
    if (weight(m) != weight(mp)) return 0;
    RatVec s;
    s.add(mp, Rational(1));
    // iota(F_{b1} ... F_{bk}) = E_{bk} ... E_{b1}; E_{b1} acts first.
    for (int r : m) s = act_vec(g_->e(r), s);
    const Rational* c = s.find(Key{});
    return c ? *c : Rational(0);
}

Rational VermaModule::shapovalov(const RatVec& u, const RatVec& v) const {
    Rational acc = 0;
    for (const auto& [k1, q1] : u)
        for (const auto& [k2, q2] : v) {
            Rational s = shapovalov(k1, k2);
            if (s != 0) acc += q1 * q2 * s;
        }
    return acc;
}

IrrepModule::IrrepModule(LieAlgebraPtr g, WeightVec lambda, int dim_cap) : Module(std::move(g), std::move(lambda)) {
    const LieAlgebra& alg = *g_;
    if (!alg.is_dominant_integral(lambda_)) throw std::invalid_argument("highest weight is not dominant integral");
    Rational wd = alg.weyl_dimension(lambda_);
    if (wd > dim_cap) {
        std::ostringstream os;
        os << "irreducible module dimension " << wd.get_str() << " exceeds the cap " << dim_cap;
        throw std::invalid_argument(os.str());
    }
    verma_ = std::make_shared<const VermaModule>(g_, lambda_);

    RatVec top;
    top.add(Key{}, Rational(1));
    basis_.push_back(top);
    weights_.push_back(lambda_);
    spaces_[lambda_] = WeightSpace{{0}, {{Rational(1)}}};
    std::vector<WeightVec> frontier{lambda_};
    int rank = alg.rank();
    while (!frontier.empty()) {
        std::map<WeightVec, std::vector<RatVec>> cands;
        for (const auto& nu : frontier) {
            for (int i = 0; i < rank; ++i) {
                WeightVec mu = nu;
                int si = alg.roots().simple_root_index(i);
                const WeightVec& ai = alg.weight(alg.e(si));
                for (int j = 0; j < rank; ++j) mu[j] -= ai[j];
                int fi = alg.f(si);
                for (int idx : spaces_[nu].indices) {
                    RatVec c = verma_->act_vec(fi, basis_[idx]);
                    if (!c.empty()) cands[mu].push_back(std::move(c));
                }
            }
        }
        std::vector<WeightVec> next;
        for (auto& [mu, list] : cands) {
            std::vector<RatVec> chosen;
            QMat gram;
            for (auto& c : list) {
                QMat trial = gram;
                std::vector<Rational> row;
                for (std::size_t j = 0; j < chosen.size(); ++j) {
                    Rational s = verma_->shapovalov(chosen[j], c);
                    trial[j].push_back(s);
                    row.push_back(s);
                }
                row.push_back(verma_->shapovalov(c, c));
                trial.push_back(row);
                if (rank_of(trial) == static_cast<int>(trial.size())) {
                    gram = std::move(trial);
                    chosen.push_back(c);
                }
            }
            if (chosen.empty()) continue;
            WeightSpace ws;
            for (auto& c : chosen) {
                ws.indices.push_back(static_cast<int>(basis_.size()));
                basis_.push_back(c);
                weights_.push_back(mu);
            }
            ws.gram_inv = inverse(gram);
            spaces_[mu] = std::move(ws);
            next.push_back(mu);
        }
        frontier = std::move(next);
    }
    if (Rational(dim()) != wd) throw std::logic_error("irreducible module dimension disagrees with the Weyl formula");

    matrices_.assign(alg.dim(), std::vector<RatVec>(dim()));
    for (int a = 0; a < alg.dim(); ++a)
        for (int i = 0; i < dim(); ++i) matrices_[a][i] = project(verma_->act_vec(a, basis_[i]));
}

RatVec IrrepModule::project(const RatVec& u) const {
    RatVec out;
    if (u.empty()) return out;
    WeightVec mu = verma_->weight(u.begin()->first);
    auto it = spaces_.find(mu);
    if (it == spaces_.end()) return out;
    const WeightSpace& ws = it->second;
    std::size_t n = ws.indices.size();
    std::vector<Rational> s(n);
    for (std::size_t j = 0; j < n; ++j) s[j] = verma_->shapovalov(basis_[ws.indices[j]], u);
    for (std::size_t i = 0; i < n; ++i) {
        Rational c = 0;
        for (std::size_t j = 0; j < n; ++j) c += ws.gram_inv[i][j] * s[j];
        out.add(Key{ws.indices[i]}, c);
    }
    return out;
}

const RatVec& IrrepModule::project_monomial(const Key& m) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = proj_cache_.find(m);
    if (it != proj_cache_.end()) return it->second;
    RatVec u;
    u.add(m, Rational(1));
    return proj_cache_.emplace(m, project(u)).first->second;
}

std::string IrrepModule::key_label(const Key& k) const {
    const RatVec& b = basis_[k.at(0)];
    if (b.size() == 1 && b.begin()->second == 1) return verma_->key_label(b.begin()->first);
    return "b" + std::to_string(k.at(0));
}

ModulePtr make_verma(LieAlgebraPtr g, WeightVec lambda) {
    return std::make_shared<const VermaModule>(std::move(g), std::move(lambda));
}

std::shared_ptr<const IrrepModule> make_irrep(LieAlgebraPtr g, WeightVec lambda, int dim_cap) {
    return std::make_shared<const IrrepModule>(std::move(g), std::move(lambda), dim_cap);
}

}  // namespace cg
