#pragma once

#include <climits>
#include <map>
#include <string>
#include <vector>

#include "mpqg/errors.hpp"
#include "mpqg/rational.hpp"

namespace mpqg {

// Laurent polynomial in hbar with rational coefficients, known up to hbar^order.
// Values built from exact data carry order == kExact and are never truncated.
class TruncLaurent {
public:
    static constexpr int kExact = INT_MAX / 4;
    static constexpr int kDefaultVmax = 2;

    TruncLaurent() = default;
    TruncLaurent(const Rational& c, int order = kExact, int vmax = kDefaultVmax);  // NOLINT
    TruncLaurent(long c) : TruncLaurent(Rational(c)) {}  // NOLINT
    TruncLaurent(int c) : TruncLaurent(Rational(c)) {}   // NOLINT

    static TruncLaurent hbar(int order = kExact, int vmax = kDefaultVmax);
    static TruncLaurent monomial(const Rational& c, int e, int order = kExact, int vmax = kDefaultVmax);
    static TruncLaurent zero(int order, int vmax = kDefaultVmax);
    static TruncLaurent from_terms(const std::map<int, Rational>& terms, int order,
                                   int vmax = kDefaultVmax);

    int order() const { return order_; }
    int vmax() const { return vmax_; }
    bool exact() const { return order_ >= kExact; }
    // Lowest exponent with a nonzero coefficient; kExact for zero.
    int valuation() const;
    // Highest stored exponent; -kExact for zero.
    int degree() const;
    Rational coeff(int e) const;
    std::map<int, Rational> terms() const;
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.empty() || (lo_ == 0 && c_.size() == 1); }
    Rational constant_term() const { return coeff(0); }
    // Nonzero constant term and no negative powers.
    bool is_unit() const;

    TruncLaurent truncated(int order) const;
    TruncLaurent with_vmax(int vmax) const;

    TruncLaurent& operator+=(const TruncLaurent& o);
    TruncLaurent& operator-=(const TruncLaurent& o);
    TruncLaurent& operator*=(const TruncLaurent& o);
    TruncLaurent& operator*=(const Rational& r);
    TruncLaurent operator-() const;
    friend TruncLaurent operator+(TruncLaurent a, const TruncLaurent& b) { return a += b; }
    friend TruncLaurent operator-(TruncLaurent a, const TruncLaurent& b) { return a -= b; }
    friend TruncLaurent operator*(const TruncLaurent& a, const TruncLaurent& b);
    friend TruncLaurent operator*(TruncLaurent a, const Rational& r) { return a *= r; }
    friend TruncLaurent operator*(const Rational& r, TruncLaurent a) { return a *= r; }
    // Division by a unit series (inverse computed to the available order).
    friend TruncLaurent operator/(const TruncLaurent& a, const TruncLaurent& b);

    // Equal as far as both are known.
    friend bool operator==(const TruncLaurent& a, const TruncLaurent& b);
    // Equal through hbar^n; false if either side is not known that far.
    bool equals_to(const TruncLaurent& o, int n) const;
    bool is_zero_to(int n) const;

    std::string str() const;
    std::size_t hash() const;

private:
    void normalize();
    void check_vmax() const;

    int lo_ = 0;                 // exponent of c_[0]
    std::vector<Rational> c_;    // dense from lo_; first and last entries nonzero
    int order_ = kExact;
    int vmax_ = kDefaultVmax;
};

std::ostream& operator<<(std::ostream& os, const TruncLaurent& t);

// exp(f) for valuation(f) >= 1, truncated at order n (defaults to f's order).
TruncLaurent ts_exp(const TruncLaurent& f, int n = -1);
// Multiplicative inverse of a series whose lowest term has a rational unit coefficient.
TruncLaurent ts_inv(const TruncLaurent& f, int n = -1);
// f / hbar^k; the result is known k orders less far.
TruncLaurent ts_div_h(const TruncLaurent& f, int k);

// Laurent polynomial in q with integer coefficients.
using QPoly = std::map<int, Rational>;
QPoly qpoly_int(int n);             // [n]_q
QPoly qpoly_gauss_int(int n);       // (n)_q
QPoly qpoly_binom(int n, int k);    // [n choose k]_q by Pascal recursion
QPoly qpoly_gauss_binom(int n, int k);
QPoly qpoly_mul(const QPoly& a, const QPoly& b);
// Substitute q = exp(hbar * d) and expand to order n.
TruncLaurent qpoly_eval(const QPoly& p, const Rational& d, int n);

// q-numbers in q_d = exp(hbar d), expanded to order n.
TruncLaurent qint(int n, int d, int order);
TruncLaurent qbinom(int n, int k, int d, int order);
// exp(hbar * x) for a rational or series exponent.
TruncLaurent qpow(const TruncLaurent& x, int order);

}  // namespace mpqg

template <>
struct std::hash<mpqg::TruncLaurent> {
    std::size_t operator()(const mpqg::TruncLaurent& t) const noexcept { return t.hash(); }
};
