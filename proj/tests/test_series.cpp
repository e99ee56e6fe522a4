#include <doctest.h>

#include <map>
#include <random>

#include "mpqg/series.hpp"

using namespace mpqg;

namespace {

// Independent dense power-series oracle: exponent -> mpq.
using Poly = std::map<int, mpq_class>;

Poly poly_mul(const Poly& a, const Poly& b, int n) {
    Poly r;
    for (auto& [ea, ca] : a)
        for (auto& [eb, cb] : b)
            if (ea + eb <= n) r[ea + eb] += ca * cb;
    return r;
}

bool same(const TruncLaurent& t, const Poly& p, int n) {
    for (int e = -4; e <= n; ++e) {
        mpq_class want = p.count(e) ? p.at(e) : mpq_class(0);
        if (t.coeff(e).raw() != want) return false;
    }
    return true;
}

TruncLaurent random_series(std::mt19937& rng, int n, int lo) {
    std::uniform_int_distribution<int> c(-5, 5);
    std::map<int, Rational> m;
    for (int e = lo; e <= n; ++e) {
        int num = c(rng);
        if (num) m.emplace(e, Rational(num, 1 + (rng() % 3)));
    }
    return TruncLaurent::from_terms(m, n);
}

}  // namespace

TEST_CASE("exp examples") {
    CHECK(ts_exp(TruncLaurent(0)) == TruncLaurent(1));
    auto e = ts_exp(TruncLaurent::hbar(), 3);
    CHECK(e.order() == 3);
    CHECK(e.coeff(0) == Rational(1));
    CHECK(e.coeff(1) == Rational(1));
    CHECK(e.coeff(2) == Rational(1, 2));
    CHECK(e.coeff(3) == Rational(1, 6));

    auto prod = ts_exp(TruncLaurent::hbar(), 4) * ts_exp(-TruncLaurent::hbar(), 4);
    Poly a, b;
    mpq_class f(1);
    for (int k = 0; k <= 4; ++k) {
        if (k) f /= k;
        a[k] = f;
        b[k] = (k % 2 ? -f : f);
    }
    CHECK(same(prod, poly_mul(a, b, 4), 4));
    CHECK(prod.equals_to(TruncLaurent(1), 4));
    CHECK_THROWS_AS(ts_exp(TruncLaurent(1), 3), NonPositiveValuation);
    CHECK_THROWS_AS(ts_exp(TruncLaurent::monomial(1, -1), 3), NonPositiveValuation);
}

TEST_CASE("division by hbar") {
    auto h = TruncLaurent::hbar(6);
    CHECK(ts_div_h(h * h, 1) == h);
    auto f = TruncLaurent::from_terms({{1, 2}, {3, 1}}, 6);
    auto g = ts_div_h(f, 1);
    CHECK(g.coeff(0) == Rational(2));
    CHECK(g.coeff(2) == Rational(1));
    CHECK(g.order() == 5);
    auto inv = ts_div_h(TruncLaurent(1), 1);
    CHECK(inv.valuation() == -1);
    CHECK_THROWS_AS(ts_div_h(TruncLaurent(1), 3), ValuationUnderflow);
    CHECK(ts_div_h(TruncLaurent(1, 6, 3), 3).valuation() == -3);
}

TEST_CASE("precision tracking") {
    auto a = TruncLaurent::from_terms({{0, 1}, {2, 3}}, 4);
    auto b = TruncLaurent::from_terms({{1, 1}}, 3);
    CHECK((a + b).order() == 3);
    CHECK((a * b).order() == 3);  // min(4 + 1, 3 + 0)
    auto m = TruncLaurent::monomial(1, -1);
    CHECK((a * m).order() == 3);
    CHECK((a * m).coeff(-1) == Rational(1));
    CHECK_FALSE(a.equals_to(TruncLaurent(1), 5));
    CHECK(TruncLaurent(7).exact());
    CHECK((TruncLaurent(2) * TruncLaurent(3)).exact());
}

TEST_CASE("inverse") {
    std::mt19937 rng(11);
    for (int it = 0; it < 30; ++it) {
        auto f = random_series(rng, 6, 0);
        if (f.coeff(0).is_zero()) f += TruncLaurent(1, 6);
        auto g = ts_inv(f);
        CHECK((f * g).equals_to(TruncLaurent(1), 6));
    }
    auto f = TruncLaurent::from_terms({{1, 2}, {2, 1}}, 6);
    auto g = ts_inv(f);
    CHECK(g.valuation() == -1);
    CHECK((f * g).equals_to(TruncLaurent(1), 4));
    CHECK_THROWS_AS(ts_inv(TruncLaurent::zero(4)), NotInvertible);
}

TEST_CASE("ring axioms on random triples") {
    std::mt19937 rng(2024);
    for (int it = 0; it < 120; ++it) {
        auto f = random_series(rng, 6, -1);
        auto g = random_series(rng, 6, -1);
        auto h = random_series(rng, 6, 0);
        CHECK((f + g) * h == f * h + g * h);
        CHECK(f * g == g * f);
        CHECK((f * h) * g == f * (h * g));
        CHECK(f + g == g + f);
    }
}

TEST_CASE("exp is additive") {
    std::mt19937 rng(7);
    for (int it = 0; it < 50; ++it) {
        auto f = random_series(rng, 6, 1);
        auto g = random_series(rng, 6, 1);
        CHECK((ts_exp(f) * ts_exp(g)).equals_to(ts_exp(f + g), 6));
    }
}

TEST_CASE("q-integers") {
    CHECK(qint(1, 3, 5) == TruncLaurent(1));
    CHECK(qint(0, 2, 5) == TruncLaurent(1));
    auto q2 = qint(2, 1, 2);
    CHECK(q2.coeff(0) == Rational(2));
    CHECK(q2.coeff(1) == Rational(0));
    CHECK(q2.coeff(2) == Rational(1));  // e^h + e^-h = 2 + h^2 + ...
    for (int n = 0; n <= 8; ++n)
        for (int d = 1; d <= 3; ++d)
            CHECK(qint(n, d, 4).constant_term() == Rational(n == 0 ? 1 : n));
}

TEST_CASE("q-binomials") {
    CHECK(qbinom(5, 0, 2, 4) == TruncLaurent(1));
    CHECK(qpoly_binom(2, 1) == qpoly_int(2));
    for (int n = 0; n <= 8; ++n)
        for (int k = 0; k <= n; ++k) CHECK(qbinom(n, k, 1, 3).constant_term() == binomial(n, k));
    CHECK_THROWS_AS(qbinom(2, 3, 1, 2), IndexOutOfRange);
    // factorial formula oracle
    for (int n = 1; n <= 6; ++n) {
        QPoly fn = {{0, 1}};
        std::vector<QPoly> fact{fn};
        for (int s = 1; s <= n; ++s) fact.push_back(qpoly_mul(fact.back(), qpoly_int(s)));
        for (int k = 0; k <= n; ++k) {
            QPoly lhs = qpoly_mul(qpoly_binom(n, k), qpoly_mul(fact[static_cast<std::size_t>(k)], fact[static_cast<std::size_t>(n - k)]));
            CHECK(lhs == fact[static_cast<std::size_t>(n)]);
        }
    }
}

TEST_CASE("q identities") {
    auto square = [](const QPoly& p) {
        QPoly r;
        for (auto& [e, c] : p) r[2 * e] = c;
        return r;
    };
    for (int n = 1; n <= 5; ++n) {
        CHECK(square(qpoly_gauss_int(n)) == qpoly_mul(QPoly{{n - 1, 1}}, qpoly_int(n)));
        for (int k = 0; k <= n; ++k)
            CHECK(square(qpoly_gauss_binom(n, k)) == qpoly_mul(QPoly{{k * (n - k), 1}}, qpoly_binom(n, k)));
    }
    // the factorial analogue holds with [n]_q! on the right
    QPoly lf{{0, 1}}, rf{{0, 1}};
    for (int n = 1; n <= 5; ++n) {
        lf = qpoly_mul(lf, square(qpoly_gauss_int(n)));
        rf = qpoly_mul(rf, qpoly_int(n));
        CHECK(lf == qpoly_mul(QPoly{{n * (n - 1) / 2, 1}}, rf));
    }
}

TEST_CASE("rational parsing") {
    CHECK(Rational::parse("-3/6") == Rational(-1, 2));
    CHECK(Rational::parse("4").str() == "4");
    CHECK_THROWS_AS(Rational::parse("x"), SyntaxError);
}
