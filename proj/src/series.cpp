#include "mpqg/series.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace mpqg {

namespace {

constexpr int kInf = TruncLaurent::kExact;

int sat_add(int a, int b) {
    if (a >= kInf || b >= kInf) return kInf;
    long s = static_cast<long>(a) + b;
    return s >= kInf ? kInf : static_cast<int>(s);
}

}  // namespace

TruncLaurent::TruncLaurent(const Rational& c, int order, int vmax) : order_(order), vmax_(vmax) {
    if (!c.is_zero()) c_.push_back(c);
    normalize();
}

TruncLaurent TruncLaurent::hbar(int order, int vmax) { return monomial(Rational(1), 1, order, vmax); }

TruncLaurent TruncLaurent::monomial(const Rational& c, int e, int order, int vmax) {
    TruncLaurent t;
    t.order_ = order;
    t.vmax_ = vmax;
    t.lo_ = e;
    if (!c.is_zero()) t.c_.push_back(c);
    t.normalize();
    return t;
}

TruncLaurent TruncLaurent::zero(int order, int vmax) { return TruncLaurent(Rational(0), order, vmax); }

TruncLaurent TruncLaurent::from_terms(const std::map<int, Rational>& terms, int order, int vmax) {
    TruncLaurent t;
    t.order_ = order;
    t.vmax_ = vmax;
    if (!terms.empty()) {
        t.lo_ = terms.begin()->first;
        t.c_.assign(static_cast<std::size_t>(terms.rbegin()->first - t.lo_ + 1), Rational(0));
        for (const auto& [e, c] : terms) t.c_[static_cast<std::size_t>(e - t.lo_)] = c;
    }
    t.normalize();
    return t;
}

void TruncLaurent::normalize() {
    if (!exact()) {
        long keep = static_cast<long>(order_) - lo_ + 1;
        if (keep <= 0) c_.clear();
        else if (static_cast<long>(c_.size()) > keep) c_.resize(static_cast<std::size_t>(keep));
    }
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    std::size_t z = 0;
    while (z < c_.size() && c_[z].is_zero()) ++z;
    if (z) {
        c_.erase(c_.begin(), c_.begin() + static_cast<long>(z));
        lo_ += static_cast<int>(z);
    }
    if (c_.empty()) lo_ = 0;
    check_vmax();
}

void TruncLaurent::check_vmax() const {
    if (!c_.empty() && lo_ < -vmax_)
        throw ValuationUnderflow("exponent " + std::to_string(lo_) + " below -" + std::to_string(vmax_));
}

int TruncLaurent::valuation() const { return c_.empty() ? kInf : lo_; }

int TruncLaurent::degree() const { return c_.empty() ? -kInf : lo_ + static_cast<int>(c_.size()) - 1; }

Rational TruncLaurent::coeff(int e) const {
    long i = static_cast<long>(e) - lo_;
    if (i < 0 || i >= static_cast<long>(c_.size())) return Rational(0);
    return c_[static_cast<std::size_t>(i)];
}

std::map<int, Rational> TruncLaurent::terms() const {
    std::map<int, Rational> m;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].is_zero()) m.emplace(lo_ + static_cast<int>(i), c_[i]);
    return m;
}

bool TruncLaurent::is_unit() const { return !c_.empty() && lo_ == 0; }

TruncLaurent TruncLaurent::truncated(int order) const {
    TruncLaurent t = *this;
    t.order_ = std::min(order_, order);
    t.normalize();
    return t;
}

TruncLaurent TruncLaurent::with_vmax(int vmax) const {
    TruncLaurent t = *this;
    t.vmax_ = vmax;
    t.check_vmax();
    return t;
}

TruncLaurent& TruncLaurent::operator+=(const TruncLaurent& o) {
    order_ = std::min(order_, o.order_);
    vmax_ = std::max(vmax_, o.vmax_);
    if (o.c_.empty()) {
        normalize();
        return *this;
    }
    if (c_.empty()) {
        lo_ = o.lo_;
        c_ = o.c_;
        normalize();
        return *this;
    }
    int lo = std::min(lo_, o.lo_);
    int hi = std::max(degree(), o.degree());
    if (lo < lo_) {
        c_.insert(c_.begin(), static_cast<std::size_t>(lo_ - lo), Rational(0));
        lo_ = lo;
    }
    if (static_cast<int>(c_.size()) < hi - lo_ + 1) c_.resize(static_cast<std::size_t>(hi - lo_ + 1));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[static_cast<std::size_t>(o.lo_ - lo_) + i] += o.c_[i];
    normalize();
    return *this;
}

TruncLaurent& TruncLaurent::operator-=(const TruncLaurent& o) { return *this += -o; }

TruncLaurent TruncLaurent::operator-() const {
    TruncLaurent t = *this;
    for (auto& c : t.c_) c = -c;
    return t;
}

TruncLaurent& TruncLaurent::operator*=(const Rational& r) {
    if (r.is_zero()) {
        c_.clear();
        lo_ = 0;
        return *this;
    }
    for (auto& c : c_) c *= r;
    return *this;
}

TruncLaurent& TruncLaurent::operator*=(const TruncLaurent& o) { return *this = *this * o; }

TruncLaurent operator*(const TruncLaurent& a, const TruncLaurent& b) {
    int order = std::min(sat_add(a.order_, b.valuation()), sat_add(b.order_, a.valuation()));
    if (!a.exact() && !b.exact()) order = std::min(order, sat_add(sat_add(a.order_, b.order_), 1));
    TruncLaurent r;
    r.order_ = order;
    r.vmax_ = std::max(a.vmax_, b.vmax_);
    if (a.c_.empty() || b.c_.empty()) return r;
    r.lo_ = a.lo_ + b.lo_;
    long hi = static_cast<long>(a.degree()) + b.degree();
    if (order < kInf) hi = std::min(hi, static_cast<long>(order));
    if (hi < r.lo_) return r;
    if (r.lo_ < -r.vmax_)
        throw ValuationUnderflow("product exponent " + std::to_string(r.lo_) + " below -" +
                                 std::to_string(r.vmax_));
    r.c_.assign(static_cast<std::size_t>(hi - r.lo_ + 1), Rational(0));
    mpq_class tmp;
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.c_.size() && static_cast<long>(i + j) <= hi - r.lo_; ++j) {
            if (b.c_[j].is_zero()) continue;
            r.c_[i + j] += a.c_[i] * b.c_[j];
        }
    }
    r.normalize();
    return r;
}

TruncLaurent operator/(const TruncLaurent& a, const TruncLaurent& b) {
    if (b.is_zero()) throw NotInvertible("division by zero series");
    if (b.c_.size() == 1) {
        TruncLaurent inv = TruncLaurent::monomial(Rational(1) / b.c_[0], -b.lo_, TruncLaurent::kExact,
                                                  std::max(a.vmax_, b.vmax_));
        if (!b.exact()) inv = ts_inv(b, b.order_ - 2 * b.lo_);
        return a * inv;
    }
    if (a.exact() && b.exact()) throw UnsupportedArgument("exact division by a non-monomial series");
    int v = b.valuation();
    int base = std::min(a.order_, b.order_);
    int av = a.is_zero() ? 0 : std::abs(a.valuation());
    return a * ts_inv(b, base + 2 * std::abs(v) + av);
}

bool operator==(const TruncLaurent& a, const TruncLaurent& b) {
    int n = std::min(a.order_, b.order_);
    int lo = std::min(a.is_zero() ? 0 : a.lo_, b.is_zero() ? 0 : b.lo_);
    int hi = std::max(a.degree(), b.degree());
    if (n < kInf) hi = std::min(hi, n);
    for (int e = lo; e <= hi; ++e)
        if (a.coeff(e) != b.coeff(e)) return false;
    return true;
}

bool TruncLaurent::equals_to(const TruncLaurent& o, int n) const {
    if (order_ < n || o.order_ < n) return false;
    int lo = std::min(is_zero() ? 0 : lo_, o.is_zero() ? 0 : o.lo_);
    int hi = std::min(n, std::max(degree(), o.degree()));
    for (int e = lo; e <= hi; ++e)
        if (coeff(e) != o.coeff(e)) return false;
    return true;
}

bool TruncLaurent::is_zero_to(int n) const { return equals_to(TruncLaurent(0), n); }

std::string TruncLaurent::str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        int e = lo_ + static_cast<int>(i);
        Rational c = c_[i];
        if (!first) {
            os << (c.sign() < 0 ? " - " : " + ");
            c = abs(c);
        }
        first = false;
        if (e == 0) {
            os << c;
        } else {
            if (c == Rational(-1)) os << "-";
            else if (c != Rational(1)) os << c << "*";
            os << "h";
            if (e != 1) os << "^" << e;
        }
    }
    if (first) os << "0";
    if (!exact()) os << " + O(h^" << order_ + 1 << ")";
    return os.str();
}

std::size_t TruncLaurent::hash() const {
    std::size_t h = std::hash<int>{}(lo_);
    for (const auto& c : c_) h = h * 1000003u ^ c.hash();
    return h;
}

std::ostream& operator<<(std::ostream& os, const TruncLaurent& t) { return os << t.str(); }

TruncLaurent ts_exp(const TruncLaurent& f, int n) {
    if (!f.is_zero() && f.valuation() < 1)
        throw NonPositiveValuation("exp argument has valuation " + std::to_string(f.valuation()));
    if (n < 0) {
        if (f.is_zero()) return TruncLaurent(Rational(1), f.order(), f.vmax());
        if (f.exact()) throw UnsupportedArgument("exp of an exact series needs an explicit order");
        n = f.order();
    }
    n = std::min(n, f.order());
    // m e_m = sum_{j=1}^m j f_j e_{m-j}
    std::vector<Rational> e(static_cast<std::size_t>(n + 1), Rational(0));
    e[0] = Rational(1);
    for (int m = 1; m <= n; ++m) {
        Rational s(0);
        for (int j = 1; j <= m; ++j) {
            Rational fj = f.coeff(j);
            if (!fj.is_zero() && !e[static_cast<std::size_t>(m - j)].is_zero())
                s += Rational(j) * fj * e[static_cast<std::size_t>(m - j)];
        }
        e[static_cast<std::size_t>(m)] = s / Rational(m);
    }
    std::map<int, Rational> terms;
    for (int m = 0; m <= n; ++m)
        if (!e[static_cast<std::size_t>(m)].is_zero()) terms.emplace(m, e[static_cast<std::size_t>(m)]);
    return TruncLaurent::from_terms(terms, n, f.vmax());
}

TruncLaurent ts_inv(const TruncLaurent& f, int n) {
    if (f.is_zero()) throw NotInvertible("zero series");
    int v = f.valuation();
    Rational c = f.coeff(v);
    auto terms = f.terms();
    if (terms.size() == 1 && (f.exact() || n < 0)) {
        int order = f.exact() ? TruncLaurent::kExact : f.order() - 2 * v;
        return TruncLaurent::monomial(Rational(1) / c, -v, order, f.vmax());
    }
    if (n < 0) {
        if (f.exact()) throw UnsupportedArgument("inverse of an exact series needs an explicit order");
        n = f.order() - 2 * v;
    }
    int rel = n + v;  // relative precision of the unit part
    if (!f.exact()) rel = std::min(rel, f.order() - v);
    if (rel < 0) return TruncLaurent::zero(n, f.vmax());
    std::vector<Rational> g(static_cast<std::size_t>(rel + 1), Rational(0));
    for (const auto& [e, a] : terms)
        if (e - v <= rel) g[static_cast<std::size_t>(e - v)] = a / c;
    std::vector<Rational> b(static_cast<std::size_t>(rel + 1), Rational(0));
    b[0] = Rational(1);
    for (int m = 1; m <= rel; ++m) {
        Rational s(0);
        for (int j = 1; j <= m; ++j)
            if (!g[static_cast<std::size_t>(j)].is_zero()) s += g[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(m - j)];
        b[static_cast<std::size_t>(m)] = -s;
    }
    std::map<int, Rational> out;
    Rational ci = Rational(1) / c;
    for (int m = 0; m <= rel; ++m)
        if (!b[static_cast<std::size_t>(m)].is_zero()) out.emplace(m - v, b[static_cast<std::size_t>(m)] * ci);
    return TruncLaurent::from_terms(out, rel - v, std::max(f.vmax(), v));
}

TruncLaurent ts_div_h(const TruncLaurent& f, int k) {
    std::map<int, Rational> out;
    for (const auto& [e, c] : f.terms()) out.emplace(e - k, c);
    int order = f.exact() ? TruncLaurent::kExact : f.order() - k;
    return TruncLaurent::from_terms(out, order, f.vmax());
}

QPoly qpoly_int(int n) {
    QPoly p;
    if (n == 0) {
        p[0] = Rational(1);
        return p;
    }
    for (int s = 0; s < n; ++s) p[2 * s - n + 1] += Rational(1);
    return p;
}

QPoly qpoly_gauss_int(int n) {
    QPoly p;
    if (n == 0) {
        p[0] = Rational(1);
        return p;
    }
    for (int s = 0; s < n; ++s) p[s] += Rational(1);
    return p;
}

namespace {

QPoly shift(const QPoly& p, int k) {
    QPoly r;
    for (const auto& [e, c] : p) r[e + k] = c;
    return r;
}

QPoly add(QPoly a, const QPoly& b) {
    for (const auto& [e, c] : b) {
        a[e] += c;
        if (a[e].is_zero()) a.erase(e);
    }
    return a;
}

}  // namespace

QPoly qpoly_binom(int n, int k) {
    if (k < 0 || k > n) throw IndexOutOfRange("qbinom(" + std::to_string(n) + "," + std::to_string(k) + ")");
    if (k == 0 || k == n) return QPoly{{0, Rational(1)}};
    return add(shift(qpoly_binom(n - 1, k), k), shift(qpoly_binom(n - 1, k - 1), -(n - k)));
}

QPoly qpoly_gauss_binom(int n, int k) {
    if (k < 0 || k > n) throw IndexOutOfRange("binom(" + std::to_string(n) + "," + std::to_string(k) + ")");
    if (k == 0 || k == n) return QPoly{{0, Rational(1)}};
    return add(qpoly_gauss_binom(n - 1, k - 1), shift(qpoly_gauss_binom(n - 1, k), k));
}

QPoly qpoly_mul(const QPoly& a, const QPoly& b) {
    QPoly r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) r[ea + eb] += ca * cb;
    std::erase_if(r, [](const auto& kv) { return kv.second.is_zero(); });
    return r;
}

TruncLaurent qpoly_eval(const QPoly& p, const Rational& d, int n) {
    std::map<int, Rational> out;
    for (int m = 0; m <= n; ++m) {
        Rational s(0);
        for (const auto& [e, c] : p) {
            Rational x = d * Rational(e);
            Rational pw(1);
            for (int i = 0; i < m; ++i) pw *= x;
            s += c * pw;
        }
        if (!s.is_zero()) out.emplace(m, s / factorial(m));
    }
    return TruncLaurent::from_terms(out, n);
}

TruncLaurent qint(int n, int d, int order) {
    if (n < 0) throw IndexOutOfRange("qint of negative integer");
    return qpoly_eval(qpoly_int(n), Rational(d), order);
}

TruncLaurent qbinom(int n, int k, int d, int order) { return qpoly_eval(qpoly_binom(n, k), Rational(d), order); }

TruncLaurent qpow(const TruncLaurent& x, int order) {
    if (!x.is_zero() && x.valuation() < 0) throw NonPositiveValuation("q-power of a Laurent exponent");
    return ts_exp(TruncLaurent::hbar() * x, order);
}

}  // namespace mpqg
