#include "mpqg/rational.hpp"

#include <ostream>
#include <stdexcept>

#include "mpqg/errors.hpp"

namespace mpqg {

Rational::Rational(long num, long den) {
    if (den == 0) throw NotInvertible("zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational Rational::parse(const std::string& s) {
    if (s.empty()) throw SyntaxError("empty rational");
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw SyntaxError("bad rational '" + s + "'");
    if (q.get_den() == 0) throw NotInvertible("zero denominator in '" + s + "'");
    q.canonicalize();
    return Rational(q);
}

std::string Rational::str() const { return q_.get_str(); }

long Rational::to_long() const {
    if (!is_integer() || !q_.get_num().fits_slong_p())
        throw UnsupportedArgument("not a machine integer: " + str());
    return q_.get_num().get_si();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw NotInvertible("division by zero");
    q_ /= o.q_;
    return *this;
}

std::size_t Rational::hash() const {
    std::size_t h = std::hash<std::string>{}(q_.get_num().get_str(16));
    return h ^ (std::hash<std::string>{}(q_.get_den().get_str(16)) * 0x9e3779b97f4a7c15ULL);
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Rational factorial(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(mpq_class(f));
}

Rational binomial(int n, int k) {
    if (k < 0 || k > n) return Rational(0);
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(mpq_class(b));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace mpqg
