// Sparse vectors keyed by an ordered label, with no stored zero coefficients.
#pragma once

#include <cmath>
#include <map>
#include <string>

#include "cyclogaudin/exact_num.hpp"

namespace cg {

inline bool is_zero(const Rational& q) { return q == 0; }
inline Rational mul_q(const Rational& a, const Rational& q) { return a * q; }
inline std::string scalar_string(const Rational& q) { return q.get_str(); }

template <class K, class S>
class SparseVec {
public:
    using map_type = std::map<K, S>;
    using const_iterator = typename map_type::const_iterator;

    SparseVec() = default;

    void add(const K& key, const S& value) {
        if (is_zero(value)) return;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, value);
            return;
        }
        it->second += value;
        if (is_zero(it->second)) terms_.erase(it);
    }

    void add_scaled(const SparseVec& other, const S& factor) {
        if (is_zero(factor)) return;
        for (const auto& [k, v] : other.terms_) add(k, v * factor);
    }

    const S* find(const K& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? nullptr : &it->second;
    }

    SparseVec& operator+=(const SparseVec& o) {
        for (const auto& [k, v] : o.terms_) add(k, v);
        return *this;
    }
    SparseVec& operator-=(const SparseVec& o) {
        for (const auto& [k, v] : o.terms_) add(k, -v);
        return *this;
    }
    SparseVec& operator*=(const S& s) {
        if (is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, v] : terms_) v *= s;
        return *this;
    }
    friend SparseVec operator+(SparseVec a, const SparseVec& b) { return a += b; }
    friend SparseVec operator-(SparseVec a, const SparseVec& b) { return a -= b; }
    friend SparseVec operator*(SparseVec a, const S& s) { return a *= s; }
    SparseVec operator-() const {
        SparseVec out;
        for (const auto& [k, v] : terms_) out.terms_.emplace(k, -v);
        return out;
    }
    bool operator==(const SparseVec& o) const { return terms_ == o.terms_; }
    bool operator!=(const SparseVec& o) const { return !(terms_ == o.terms_); }

    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const_iterator begin() const { return terms_.begin(); }
    const_iterator end() const { return terms_.end(); }
    const map_type& terms() const { return terms_; }

private:
    map_type terms_;
};

// Lifts a rational sparse vector into field coefficients scaled by `factor`.
template <class K, class S>
void add_rational_scaled(SparseVec<K, S>& out, const SparseVec<K, Rational>& v, const S& factor) {
    for (const auto& [k, q] : v) out.add(k, mul_q(factor, q));
}

template <class K, class S>
double norm2(const SparseVec<K, S>& v) {
    double acc = 0.0;
    for (const auto& [k, c] : v) {
        double m = magnitude(c);
        acc += m * m;
    }
    return std::sqrt(acc);
}

}  // namespace cg
