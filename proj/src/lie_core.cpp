#include "cyclogaudin/lie_core.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cg {

Series parse_series(const std::string& s) {
    if (s == "A" || s == "a") return Series::A;
    if (s == "B" || s == "b") return Series::B;
    if (s == "C" || s == "c") return Series::C;
    if (s == "D" || s == "d") return Series::D;
    throw std::invalid_argument("unknown Lie algebra series '" + s + "'");
}

std::string series_name(Series s) {
    switch (s) {
        case Series::A: return "A";
        case Series::B: return "B";
        case Series::C: return "C";
        case Series::D: return "D";
    }
    return "?";
}

namespace {

// Dense rational matrices of the defining representation, used only while building.
using Mat = std::vector<std::vector<Rational>>;

Mat zero_mat(int n) { return Mat(n, std::vector<Rational>(n, Rational(0))); }

Mat unit(int n, int i, int j) {
    Mat m = zero_mat(n);
    m[i][j] = 1;
    return m;
}

Mat operator*(const Mat& a, const Mat& b) {
    int n = static_cast<int>(a.size());
    Mat c = zero_mat(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (int j = 0; j < n; ++j)
                if (b[k][j] != 0) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

Mat operator-(const Mat& a, const Mat& b) {
    Mat c = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) c[i][j] -= b[i][j];
    return c;
}

Mat operator+(const Mat& a, const Mat& b) {
    Mat c = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) c[i][j] += b[i][j];
    return c;
}

Mat scaled(Mat a, const Rational& q) {
    for (auto& row : a)
        for (auto& x : row) x *= q;
    return a;
}

Mat transpose(const Mat& a) {
    int n = static_cast<int>(a.size());
    Mat t = zero_mat(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t[j][i] = a[i][j];
    return t;
}

Mat comm(const Mat& a, const Mat& b) { return a * b - b * a; }

bool is_zero_mat(const Mat& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (x != 0) return false;
    return true;
}

// Returns c with m = c * base, or throws if m is not a multiple of base.
Rational ratio(const Mat& m, const Mat& base) {
    int n = static_cast<int>(m.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (base[i][j] != 0) {
                Rational c = m[i][j] / base[i][j];
                if (!is_zero_mat(m - scaled(base, c))) throw std::logic_error("matrix not proportional to root vector");
                return c;
            }
    throw std::logic_error("zero root vector");
}

struct Realization {
    int n = 0;
    std::vector<Mat> e;
};

// Simple root vectors in the defining representation. Orthogonal and symplectic
// algebras use an antidiagonal invariant form so that the Cartan subalgebra is diagonal.
Realization defining_realization(Series s, int rank) {
    Realization R;
    auto so_like = [&](int n, int i, int j) {
        // Root vector for e_i - e_j (0-based, i<j<rank) in so/sp with antidiagonal form.
        return unit(n, i, j) - unit(n, n - 1 - j, n - 1 - i);
    };
    switch (s) {
        case Series::A:
            R.n = rank + 1;
            for (int i = 0; i < rank; ++i) R.e.push_back(unit(R.n, i, i + 1));
            break;
        case Series::B:
            R.n = 2 * rank + 1;
            for (int i = 0; i + 1 < rank; ++i) R.e.push_back(so_like(R.n, i, i + 1));
            R.e.push_back(unit(R.n, rank - 1, rank) - unit(R.n, rank, rank + 1));
            break;
        case Series::C:
            R.n = 2 * rank;
            for (int i = 0; i + 1 < rank; ++i) R.e.push_back(so_like(R.n, i, i + 1));
            R.e.push_back(unit(R.n, rank - 1, rank));
            break;
        case Series::D:
            R.n = 2 * rank;
            for (int i = 0; i + 1 < rank; ++i) R.e.push_back(so_like(R.n, i, i + 1));
            R.e.push_back(unit(R.n, rank - 2, rank) - unit(R.n, rank - 1, rank + 1));
            break;
    }
    return R;
}

// Eigenvalue c with [h, x] = c x.
Rational ad_eigenvalue(const Mat& h, const Mat& x) { return ratio(comm(h, x), x); }

std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> a) {
    int n = static_cast<int>(a.size());
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i) inv[i][i] = 1;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw std::logic_error("singular Gram matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Rational d = a[col][col];
        for (int j = 0; j < n; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational f = a[r][col];
            for (int j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

// Solves sum_i c_i diag(H_i) = diag(m) exactly.
std::vector<Rational> cartan_coords(const Mat& m, const std::vector<Mat>& hs) {
    int n = static_cast<int>(m.size());
    int r = static_cast<int>(hs.size());
    // Augmented system with n equations and r unknowns.
    std::vector<std::vector<Rational>> sys(n, std::vector<Rational>(r + 1, Rational(0)));
    for (int p = 0; p < n; ++p) {
        for (int i = 0; i < r; ++i) sys[p][i] = hs[i][p][p];
        sys[p][r] = m[p][p];
    }
    std::vector<int> pivcol;
    int row = 0;
    for (int col = 0; col < r && row < n; ++col) {
        int piv = row;
        while (piv < n && sys[piv][col] == 0) ++piv;
        if (piv == n) continue;
        std::swap(sys[piv], sys[row]);
        Rational d = sys[row][col];
        for (auto& x : sys[row]) x /= d;
        for (int q = 0; q < n; ++q) {
            if (q == row || sys[q][col] == 0) continue;
            Rational f = sys[q][col];
            for (int j = 0; j <= r; ++j) sys[q][j] -= f * sys[row][j];
        }
        pivcol.push_back(col);
        ++row;
    }
    for (int q = row; q < n; ++q)
        if (sys[q][r] != 0) throw std::logic_error("bracket leaves the Cartan subalgebra");
    std::vector<Rational> c(r, Rational(0));
    for (int k = 0; k < static_cast<int>(pivcol.size()); ++k) c[pivcol[k]] = sys[k][r];
    Mat check = zero_mat(n);
    for (int i = 0; i < r; ++i) check = check + scaled(hs[i], c[i]);
    if (!is_zero_mat(check - m)) throw std::logic_error("bracket not in the Cartan subalgebra");
    return c;
}

}  // namespace

int RootSystem::find_root(const std::vector<int>& coords) const {
    auto it = std::lower_bound(positive_roots.begin(), positive_roots.end(), coords,
                               [](const std::vector<int>& a, const std::vector<int>& b) {
                                   int ha = 0, hb = 0;
                                   for (int x : a) ha += x;
                                   for (int x : b) hb += x;
                                   if (ha != hb) return ha < hb;
                                   return a < b;
                               });
    if (it != positive_roots.end() && *it == coords) return static_cast<int>(it - positive_roots.begin());
    return -1;
}

int RootSystem::simple_root_index(int node) const {
    std::vector<int> c(rank, 0);
    c[node] = 1;
    return find_root(c);
}

WeightVec RootSystem::root_weight(int r) const {
    WeightVec w(rank, Rational(0));
    for (int k = 0; k < rank; ++k)
        if (positive_roots[r][k] != 0)
            for (int j = 0; j < rank; ++j) w[j] += positive_roots[r][k] * cartan[k][j];
    return w;
}

WeightVec RootSystem::simple_root(int node) const {
    WeightVec w(rank, Rational(0));
    for (int j = 0; j < rank; ++j) w[j] = cartan[node][j];
    return w;
}

WeightVec RootSystem::fundamental_weight(int node) const {
    WeightVec w(rank, Rational(0));
    w[node] = 1;
    return w;
}

WeightVec RootSystem::rho() const { return WeightVec(rank, Rational(1)); }

Rational RootSystem::inner(const WeightVec& a, const WeightVec& b) const {
    Rational acc = 0;
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) acc += a[i] * b[j] * fundamental_gram[i][j];
    return acc;
}

LieAlgebra::LieAlgebra(RootSystem roots, StructureTable table) : roots_(std::move(roots)), table_(std::move(table)) {
    weights_.resize(table_.dim);
    for (int r = 0; r < n_pos(); ++r) {
        weights_[e(r)] = roots_.root_weight(r);
        WeightVec neg = weights_[e(r)];
        for (auto& x : neg) x = -x;
        weights_[f(r)] = neg;
    }
    for (int i = 0; i < rank(); ++i) weights_[h(i)] = WeightVec(rank(), Rational(0));
    // h^vee = 1 + sum of the coroot coordinates of the highest root.
    const auto& theta = roots_.positive_roots[roots_.highest_root];
    Rational hv = 1;
    for (int i = 0; i < rank(); ++i) {
        Rational len = roots_.simple_gram[i][i];
        hv += theta[i] * len / 2;
    }
    if (hv.get_den() != 1) throw std::logic_error("non-integral dual Coxeter number");
    dual_coxeter_ = static_cast<int>(hv.get_num().get_si());
}

BasisKind LieAlgebra::kind(int a) const {
    if (a < n_pos()) return BasisKind::E;
    if (a < 2 * n_pos()) return BasisKind::F;
    return BasisKind::H;
}

int LieAlgebra::index_of(int a) const {
    switch (kind(a)) {
        case BasisKind::E: return a;
        case BasisKind::F: return a - n_pos();
        case BasisKind::H: return a - 2 * n_pos();
    }
    return -1;
}

int LieAlgebra::iota(int a) const {
    switch (kind(a)) {
        case BasisKind::E: return f(a);
        case BasisKind::F: return e(a - n_pos());
        case BasisKind::H: return a;
    }
    return a;
}

std::string LieAlgebra::label(int a) const {
    auto coords = [&](int r) {
        std::string s;
        for (int x : roots_.positive_roots[r]) s += std::to_string(x);
        return s;
    };
    switch (kind(a)) {
        case BasisKind::E: return "E[" + coords(index_of(a)) + "]";
        case BasisKind::F: return "F[" + coords(index_of(a)) + "]";
        case BasisKind::H: return "H" + std::to_string(index_of(a) + 1);
    }
    return "?";
}

Rational LieAlgebra::form(int a, int b) const {
    BasisKind ka = kind(a), kb = kind(b);
    if (ka == BasisKind::H && kb == BasisKind::H) return roots_.coroot_gram[index_of(a)][index_of(b)];
    if ((ka == BasisKind::E && kb == BasisKind::F) || (ka == BasisKind::F && kb == BasisKind::E)) {
        if (index_of(a) != index_of(b)) return 0;
        return Rational(2) / roots_.root_norm2[index_of(a)];
    }
    return 0;
}

Rational LieAlgebra::killing(int a, int b) const {
    Rational tr = 0;
    for (int c = 0; c < dim(); ++c)
        for (const auto& [d, q1] : bracket_basis(b, c))
            for (const auto& [e2, q2] : bracket_basis(a, d))
                if (e2 == c) tr += q1 * q2;
    return tr;
}

Rational LieAlgebra::casimir_delta(const WeightVec& lambda) const {
    return roots_.inner(lambda, lambda) / 2 + roots_.inner(lambda, roots_.rho());
}

Rational LieAlgebra::weyl_dimension(const WeightVec& lambda) const {
    WeightVec lr = lambda;
    WeightVec rho = roots_.rho();
    for (int i = 0; i < rank(); ++i) lr[i] += rho[i];
    Rational d = 1;
    for (int r = 0; r < n_pos(); ++r) {
        WeightVec a = roots_.root_weight(r);
        d *= roots_.inner(lr, a) / roots_.inner(rho, a);
    }
    return d;
}

bool LieAlgebra::is_dominant_integral(const WeightVec& lambda) const {
    if (static_cast<int>(lambda.size()) != rank()) return false;
    for (const auto& x : lambda)
        if (x < 0 || x.get_den() != 1) return false;
    return true;
}

std::shared_ptr<const LieAlgebra> LieAlgebra::with_corrupted_entry(int a, int b) const {
    StructureTable t = table_;
    for (auto& [c, q] : t.brackets[a][b]) q = -q;
    return std::make_shared<const LieAlgebra>(roots_, std::move(t));
}

LieAlgebraPtr build_simple_lie_algebra(Series series, int rank) {
    bool ok = rank >= 1;
    if (series == Series::B || series == Series::C) ok = rank >= 2;
    if (series == Series::D) ok = rank >= 4;
    if (!ok) throw std::invalid_argument("unsupported algebra " + series_name(series) + std::to_string(rank));

    Realization real = defining_realization(series, rank);
    std::vector<Mat> E = real.e, F(rank), H(rank);
    for (int i = 0; i < rank; ++i) {
        Mat et = transpose(E[i]);
        Rational a = ad_eigenvalue(comm(E[i], et), E[i]);
        F[i] = scaled(et, Rational(2) / a);
        H[i] = comm(E[i], F[i]);
    }

    RootSystem R;
    R.series = series;
    R.rank = rank;
    R.cartan.assign(rank, std::vector<int>(rank, 0));
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) {
            Rational c = ad_eigenvalue(H[j], E[i]);
            R.cartan[i][j] = static_cast<int>(c.get_num().get_si());
        }

    // Closure of the simple roots under alpha-strings.
    std::vector<std::vector<int>> roots;
    std::map<std::vector<int>, int> seen;
    for (int i = 0; i < rank; ++i) {
        std::vector<int> c(rank, 0);
        c[i] = 1;
        seen[c] = 1;
        roots.push_back(c);
    }
    auto pairing = [&](const std::vector<int>& beta, int i) {
        int s = 0;
        for (int k = 0; k < rank; ++k) s += beta[k] * R.cartan[k][i];
        return s;
    };
    auto string_down = [&](const std::vector<int>& beta, int i) {
        int p = 0;
        std::vector<int> c = beta;
        while (true) {
            c[i] -= 1;
            if (!seen.count(c)) break;
            ++p;
        }
        return p;
    };
    for (std::size_t idx = 0; idx < roots.size(); ++idx) {
        std::vector<int> beta = roots[idx];
        for (int i = 0; i < rank; ++i) {
            int q = string_down(beta, i) - pairing(beta, i);
            if (q <= 0) continue;
            std::vector<int> nb = beta;
            nb[i] += 1;
            if (!seen.count(nb)) {
                seen[nb] = 1;
                roots.push_back(nb);
            }
        }
    }
    auto height = [](const std::vector<int>& c) {
        int h = 0;
        for (int x : c) h += x;
        return h;
    };
    std::sort(roots.begin(), roots.end(), [&](const auto& a, const auto& b) {
        if (height(a) != height(b)) return height(a) < height(b);
        return a < b;
    });
    R.positive_roots = roots;
    int npos = static_cast<int>(roots.size());
    for (const auto& c : roots) R.heights.push_back(height(c));
    R.highest_root = npos - 1;

    // Squared lengths of simple roots, propagated along the Dynkin diagram.
    std::vector<Rational> len(rank, Rational(0));
    len[0] = 1;
    for (bool changed = true; changed;) {
        changed = false;
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j)
                if (len[i] != 0 && len[j] == 0 && R.cartan[i][j] != 0) {
                    len[j] = len[i] * R.cartan[j][i] / R.cartan[i][j];
                    changed = true;
                }
    }
    Rational mx = *std::max_element(len.begin(), len.end());
    for (auto& x : len) x = x * 2 / mx;
    R.simple_gram.assign(rank, std::vector<Rational>(rank, Rational(0)));
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) R.simple_gram[i][j] = Rational(R.cartan[i][j]) * len[j] / 2;
    R.coroot_gram.assign(rank, std::vector<Rational>(rank, Rational(0)));
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) R.coroot_gram[i][j] = R.simple_gram[i][j] * 4 / (len[i] * len[j]);
    R.fundamental_gram = invert(R.coroot_gram);
    for (const auto& c : roots) {
        Rational s = 0;
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) s += Rational(c[i] * c[j]) * R.simple_gram[i][j];
        R.root_norm2.push_back(s);
    }

    // Root vectors for all positive roots.
    StructureTable T;
    T.n_pos = npos;
    T.rank = rank;
    T.dim = 2 * npos + rank;
    T.recipe.assign(npos, {-1, -1});
    std::vector<Mat> Eroot(npos), Froot(npos);
    for (int r = 0; r < npos; ++r) {
        const auto& c = roots[r];
        if (height(c) == 1) {
            int i = static_cast<int>(std::find(c.begin(), c.end(), 1) - c.begin());
            Eroot[r] = E[i];
            Froot[r] = F[i];
            continue;
        }
        for (int i = 0; i < rank; ++i) {
            if (c[i] == 0) continue;
            std::vector<int> beta = c;
            beta[i] -= 1;
            int b = R.find_root(beta);
            if (b < 0) continue;
            int p = string_down(beta, i);
            Eroot[r] = scaled(comm(E[i], Eroot[b]), Rational(1, p + 1));
            Mat fraw = comm(Froot[b], F[i]);
            Rational a = ad_eigenvalue(comm(Eroot[r], fraw), Eroot[r]);
            Froot[r] = scaled(fraw, Rational(2) / a);
            T.recipe[r] = {i, b};
            break;
        }
    }

    std::vector<Mat> X(T.dim);
    for (int r = 0; r < npos; ++r) {
        X[r] = Eroot[r];
        X[npos + r] = Froot[r];
    }
    for (int i = 0; i < rank; ++i) X[2 * npos + i] = H[i];

    auto root_coords_of = [&](int a) {
        std::vector<int> c(rank, 0);
        if (a < npos) return roots[a];
        if (a < 2 * npos) {
            for (int k = 0; k < rank; ++k) c[k] = -roots[a - npos][k];
        }
        return c;
    };
    T.brackets.assign(T.dim, std::vector<RatCombo>(T.dim));
    for (int a = 0; a < T.dim; ++a)
        for (int b = 0; b < T.dim; ++b) {
            Mat m = comm(X[a], X[b]);
            if (is_zero_mat(m)) continue;
            std::vector<int> wa = root_coords_of(a), wb = root_coords_of(b), w(rank);
            bool zero_weight = true, positive = true, negative = true;
            for (int k = 0; k < rank; ++k) {
                w[k] = wa[k] + wb[k];
                if (w[k] != 0) zero_weight = false;
                if (w[k] < 0) positive = false;
                if (w[k] > 0) negative = false;
            }
            RatCombo out;
            if (zero_weight) {
                auto c = cartan_coords(m, H);
                for (int i = 0; i < rank; ++i)
                    if (c[i] != 0) out.push_back({2 * npos + i, c[i]});
            } else if (positive || negative) {
                std::vector<int> absw = w;
                for (auto& x : absw) x = std::abs(x);
                int r = R.find_root(absw);
                if (r < 0) throw std::logic_error("bracket lands outside the root system");
                int label = positive ? r : npos + r;
                out.push_back({label, ratio(m, X[label])});
            } else {
                throw std::logic_error("bracket of mixed weight");
            }
            T.brackets[a][b] = out;
        }

    // Dual basis with respect to the normalized form.
    T.duals.assign(T.dim, {});
    for (int r = 0; r < npos; ++r) {
        T.duals[r] = {{npos + r, R.root_norm2[r] / 2}};
        T.duals[npos + r] = {{r, R.root_norm2[r] / 2}};
    }
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
            if (R.fundamental_gram[i][j] != 0) T.duals[2 * npos + i].push_back({2 * npos + j, R.fundamental_gram[i][j]});

    return std::make_shared<const LieAlgebra>(std::move(R), std::move(T));
}

}  // namespace cg
