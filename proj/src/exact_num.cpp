#include "cyclogaudin/exact_num.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace cg {

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    auto digits_ok = [](const std::string& part, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && i < part.size() && (part[i] == '-' || part[i] == '+')) ++i;
        if (i == part.size()) return false;
        for (; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
        return true;
    };
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false))
        throw std::invalid_argument("malformed rational literal '" + text + "'");
    if (num[0] == '+') num = num.substr(1);
    mpz_class d(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    Rational q(mpz_class(num), d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

int mod_T_bracket(long k, int T) {
    long r = k % T;
    if (r < 0) r += T;
    return static_cast<int>(r);
}

namespace {

using Poly = std::vector<Rational>;

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Integer polynomial division a = q*b + r with b monic; returns q.
std::vector<mpz_class> divide_monic(std::vector<mpz_class> a, const std::vector<mpz_class>& b) {
    std::size_t db = b.size() - 1;
    if (a.size() < b.size()) return {};
    std::vector<mpz_class> q(a.size() - db, 0);
    for (std::size_t i = a.size(); i-- > db;) {
        mpz_class c = a[i];
        if (c == 0) continue;
        q[i - db] = c;
        for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
    }
    return q;
}

std::vector<mpz_class> cyclotomic(int T, std::map<int, std::vector<mpz_class>>& memo) {
    auto it = memo.find(T);
    if (it != memo.end()) return it->second;
    std::vector<mpz_class> p(T + 1, 0);
    p[0] = -1;
    p[T] = 1;
    for (int d = 1; d < T; ++d)
        if (T % d == 0) p = divide_monic(p, cyclotomic(d, memo));
    memo[T] = p;
    return p;
}

// Polynomial remainder and quotient over Q (b nonzero).
void poly_divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    r = a;
    trim(r);
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, Rational(0));
    while (!r.empty() && r.size() >= b.size()) {
        std::size_t shift = r.size() - b.size();
        Rational c = r.back() / b.back();
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) r[shift + j] -= c * b[j];
        trim(r);
    }
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

Poly poly_sub(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    trim(out);
    return out;
}

}  // namespace

CycloContext::CycloContext(int T) : T_(T) {
    if (T < 1) throw std::invalid_argument("cyclotomic order must be positive");
    std::map<int, std::vector<mpz_class>> memo;
    phi_ = cyclotomic(T, memo);
    degree_ = static_cast<int>(phi_.size()) - 1;
    powers_.resize(T);
    for (int j = 0; j < T; ++j) {
        Poly p(j + 1, Rational(0));
        p[j] = 1;
        reduce(p);
        powers_[j] = p;
    }
}

void CycloContext::reduce(std::vector<Rational>& p) const {
    std::size_t d = static_cast<std::size_t>(degree_);
    for (std::size_t i = p.size(); i-- > d;) {
        if (p[i] == 0) continue;
        Rational c = p[i];
        for (std::size_t j = 0; j <= d; ++j) p[i - d + j] -= c * phi_[j];
    }
    p.resize(d, Rational(0));
}

std::shared_ptr<const CycloContext> CycloContext::get(int T) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const CycloContext>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(T);
    if (it != cache.end()) return it->second;
    auto ctx = std::make_shared<const CycloContext>(T);
    cache[T] = ctx;
    return ctx;
}

CycloNum::CycloNum(CycloContextPtr ctx) : ctx_(std::move(ctx)), c_(ctx_->degree(), Rational(0)) {}

CycloNum::CycloNum(CycloContextPtr ctx, const Rational& q) : CycloNum(std::move(ctx)) {
    c_[0] = q;
    c_[0].canonicalize();
}

CycloNum::CycloNum(CycloContextPtr ctx, std::vector<Rational> coeffs) : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    for (auto& x : c_) x.canonicalize();
    ctx_->reduce(c_);
}

CycloNum CycloNum::omega_pow(CycloContextPtr ctx, long k) {
    int j = mod_T_bracket(k, ctx->order());
    CycloNum out(ctx);
    out.c_ = ctx->power(j);
    return out;
}

bool CycloNum::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool CycloNum::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Rational CycloNum::rational_value() const {
    if (!is_rational()) throw std::domain_error("cyclotomic number " + to_string() + " is not rational");
    return c_[0];
}

void CycloNum::check_same(const CycloNum& o) const {
    if (ctx_ != o.ctx_) throw std::invalid_argument("cyclotomic context mismatch");
}

CycloNum& CycloNum::operator+=(const CycloNum& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

CycloNum& CycloNum::operator-=(const CycloNum& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

CycloNum& CycloNum::operator*=(const CycloNum& o) {
    check_same(o);
    if (c_.size() == 1) {
        c_[0] *= o.c_[0];
        return *this;
    }
    Poly prod(2 * c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j)
            if (o.c_[j] != 0) prod[i + j] += c_[i] * o.c_[j];
    }
    ctx_->reduce(prod);
    c_ = std::move(prod);
    return *this;
}

CycloNum& CycloNum::operator*=(const Rational& q) {
    for (auto& x : c_) x *= q;
    return *this;
}

CycloNum CycloNum::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero in Q(omega)");
    if (c_.size() == 1) return CycloNum(ctx_, Rational(1) / c_[0]);
    // Extended Euclid: track s with s*a = r (mod Phi).
    Poly phi(ctx_->phi().begin(), ctx_->phi().end());
    Poly r0 = phi, r1 = c_;
    trim(r1);
    Poly s0, s1{Rational(1)};
    while (!r1.empty() && r1.size() > 1) {
        Poly q, r;
        poly_divmod(r0, r1, q, r);
        Poly s = poly_sub(s0, poly_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    // r1 is now a nonzero constant because Phi_T is irreducible.
    Rational inv = Rational(1) / r1[0];
    for (auto& x : s1) x *= inv;
    return CycloNum(ctx_, s1);
}

CycloNum& CycloNum::operator/=(const CycloNum& o) {
    check_same(o);
    return *this *= o.inverse();
}

CycloNum CycloNum::operator-() const {
    CycloNum out(*this);
    for (auto& x : out.c_) x = -x;
    return out;
}

bool CycloNum::operator==(const CycloNum& o) const {
    check_same(o);
    return c_ == o.c_;
}

Complex CycloNum::to_complex() const {
    const double two_pi = 2.0 * std::acos(-1.0);
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (c_[j] == 0) continue;
        double ang = two_pi * static_cast<double>(j) / ctx_->order();
        acc += c_[j].get_d() * Complex(std::cos(ang), std::sin(ang));
    }
    return acc;
}

std::string CycloNum::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (c_[j] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (j == 0)
            os << c_[j].get_str();
        else
            os << "(" << c_[j].get_str() << ")w^" << j;
    }
    if (first) os << "0";
    return os.str();
}

std::string scalar_string(const CycloNum& a) { return a.to_string(); }

std::string scalar_string(const Complex& a) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << a.real() << "," << a.imag() << ")";
    return os.str();
}

ComplexField::ComplexField(int T) : T_(T) {
    if (T < 1) throw std::invalid_argument("cyclotomic order must be positive");
    const double two_pi = 2.0 * std::acos(-1.0);
    roots_.resize(T);
    for (int k = 0; k < T; ++k) {
        // Use exact values on the axes so that T in {1,2,4} stays exact.
        if (4 * k % T == 0) {
            int q = 4 * k / T;
            static const Complex axis[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            roots_[k] = axis[q];
        } else {
            double ang = two_pi * k / T;
            roots_[k] = Complex(std::cos(ang), std::sin(ang));
        }
    }
}

}  // namespace cg
