// Exact arithmetic in Q and in the cyclotomic field Q(omega), omega a primitive
// T-th root of unity, together with a double-precision complex embedding.
#pragma once

#include <gmpxx.h>

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace cg {

using Rational = mpq_class;
using Complex = std::complex<double>;

// Canonical n/d; the two-argument mpq_class constructor does not reduce.
inline Rational frac(long n, long d) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

// Parses "p", "p/q" or "-p/q" into a canonical rational; throws std::invalid_argument.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

// Representative of k mod T in {0, ..., T-1}.
int mod_T_bracket(long k, int T);

// Data of the T-th cyclotomic polynomial and the reduction rule Phi_T(omega) = 0.
class CycloContext {
public:
    // Contexts are interned per T so that they can be compared by pointer.
    static std::shared_ptr<const CycloContext> get(int T);

    int order() const { return T_; }
    int degree() const { return degree_; }
    // Coefficients of Phi_T, constant term first; monic.
    const std::vector<mpz_class>& phi() const { return phi_; }
    // Power-basis coordinates of omega^j for j in [0, T).
    const std::vector<Rational>& power(int j) const { return powers_[j]; }
    // Reduces a polynomial in omega (constant term first) modulo Phi_T in place.
    void reduce(std::vector<Rational>& poly) const;

    explicit CycloContext(int T);

private:
    int T_;
    int degree_;
    std::vector<mpz_class> phi_;
    std::vector<std::vector<Rational>> powers_;
};

using CycloContextPtr = std::shared_ptr<const CycloContext>;

// Element of Q(omega) in the power basis 1, omega, ..., omega^{phi(T)-1}.
class CycloNum {
public:
    explicit CycloNum(CycloContextPtr ctx);
    CycloNum(CycloContextPtr ctx, const Rational& q);
    CycloNum(CycloContextPtr ctx, std::vector<Rational> coeffs);

    static CycloNum omega_pow(CycloContextPtr ctx, long k);

    const CycloContextPtr& context() const { return ctx_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_rational() const;
    // Requires is_rational(); throws std::domain_error otherwise.
    Rational rational_value() const;
    CycloNum inverse() const;
    Complex to_complex() const;
    std::string to_string() const;

    CycloNum& operator+=(const CycloNum& o);
    CycloNum& operator-=(const CycloNum& o);
    CycloNum& operator*=(const CycloNum& o);
    CycloNum& operator/=(const CycloNum& o);
    CycloNum& operator*=(const Rational& q);
    CycloNum operator-() const;

    friend CycloNum operator+(CycloNum a, const CycloNum& b) { return a += b; }
    friend CycloNum operator-(CycloNum a, const CycloNum& b) { return a -= b; }
    friend CycloNum operator*(CycloNum a, const CycloNum& b) { return a *= b; }
    friend CycloNum operator/(CycloNum a, const CycloNum& b) { return a /= b; }
    friend CycloNum operator*(CycloNum a, const Rational& q) { return a *= q; }
    friend CycloNum operator*(const Rational& q, CycloNum a) { return a *= q; }
    bool operator==(const CycloNum& o) const;
    bool operator!=(const CycloNum& o) const { return !(*this == o); }

private:
    void check_same(const CycloNum& o) const;
    CycloContextPtr ctx_;
    std::vector<Rational> c_;
};

// Free-function layer used by code templated over the scalar type.
inline bool is_zero(const CycloNum& a) { return a.is_zero(); }
inline bool is_zero(const Complex& a) { return a == Complex(0.0, 0.0); }
inline CycloNum mul_q(const CycloNum& a, const Rational& q) { return a * q; }
inline Complex mul_q(const Complex& a, const Rational& q) { return a * q.get_d(); }
inline Complex to_complex(const CycloNum& a) { return a.to_complex(); }
inline Complex to_complex(const Complex& a) { return a; }
inline double magnitude(const CycloNum& a) { return std::abs(a.to_complex()); }
inline double magnitude(const Complex& a) { return std::abs(a); }
std::string scalar_string(const CycloNum& a);
std::string scalar_string(const Complex& a);

// Scalar fields: produce constants and powers of omega for one fixed T.
class CycloField {
public:
    using value_type = CycloNum;
    static constexpr bool exact = true;
    explicit CycloField(int T) : ctx_(CycloContext::get(T)) {}
    int order() const { return ctx_->order(); }
    const CycloContextPtr& context() const { return ctx_; }
    CycloNum zero() const { return CycloNum(ctx_); }
    CycloNum one() const { return CycloNum(ctx_, Rational(1)); }
    CycloNum from(const Rational& q) const { return CycloNum(ctx_, q); }
    CycloNum omega(long k) const { return CycloNum::omega_pow(ctx_, k); }

private:
    CycloContextPtr ctx_;
};

class ComplexField {
public:
    using value_type = Complex;
    static constexpr bool exact = false;
    explicit ComplexField(int T);
    int order() const { return T_; }
    Complex zero() const { return {0.0, 0.0}; }
    Complex one() const { return {1.0, 0.0}; }
    Complex from(const Rational& q) const { return {q.get_d(), 0.0}; }
    Complex from(const Complex& z) const { return z; }
    Complex omega(long k) const { return roots_[mod_T_bracket(k, T_)]; }

private:
    int T_;
    std::vector<Complex> roots_;
};

}  // namespace cg
