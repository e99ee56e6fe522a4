#include <doctest.h>

#include <functional>

#include "mpqg/deform.hpp"
#include "mpqg/random.hpp"

using namespace mpqg;

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

Realization standard(Rng& rng, const std::string& name) {
    return make_standard_realization(random_cartan_type(rng, cartan_by_name(name), true, true));
}

UElem random_monomial(QContext& ctx, Rng& rng, int len) {
    return ctx.normalize(random_genword(rng, ctx.n(), ctx.t(), len));
}

// Polynomial in s_1..s_t, r_1..r_t with series coefficients, exponents packed as one vector.
using Poly = std::map<std::vector<int>, TruncLaurent>;

Poly pmul(const Poly& a, const Poly& b, const std::vector<int>& cap) {
    Poly r;
    for (const auto& [x, c] : a)
        for (const auto& [y, d] : b) {
            std::vector<int> z(x.size());
            bool ok = true;
            for (std::size_t i = 0; i < x.size(); ++i) ok = ok && (z[i] = x[i] + y[i]) <= cap[i];
            if (!ok) continue;
            auto it = r.find(z);
            if (it == r.end()) r.emplace(z, c * d);
            else it->second += c * d;
        }
    return r;
}

// sigma(H^u e^{hbar A}, H^v e^{hbar B}) as the Taylor coefficient of
// exp(chi(sH + hbar A, rH + hbar B) / (2 hbar)) at s^u r^v, times u! v!.
TruncLaurent sigma_oracle(const CocycleForm& chi, const HExp& u, const LMat& A, const HExp& v, const LMat& B, int N) {
    const int t = static_cast<int>(u.size());
    std::vector<int> cap(u);
    cap.insert(cap.end(), v.begin(), v.end());
    const TruncLaurent inv2h = TruncLaurent::monomial(Rational(1, 2), -1, TruncLaurent::kExact, 64);
    const TruncLaurent half(Rational(1, 2));
    Poly q;  // the exponent minus its constant chi(A, B) hbar / 2
    for (int g = 0; g < t; ++g)
        for (int k = 0; k < t; ++k) {
            std::vector<int> e(sz(2 * t), 0);
            e[sz(g)] = 1;
            e[sz(t + k)] = 1;
            q[e] = chi.X(g, k) * inv2h;
        }
    for (int g = 0; g < t; ++g) {
        LMat Hg = zeros<TruncLaurent>(1, t);
        Hg(0, g) = TruncLaurent(1);
        std::vector<int> e(sz(2 * t), 0);
        e[sz(g)] = 1;
        q[e] = chi.eval(Hg, B) * half;
        e[sz(g)] = 0;
        e[sz(t + g)] = 1;
        q[e] = chi.eval(A, Hg) * half;
    }
    int deg = 0;
    for (int x : cap) deg += x;
    Poly total{{std::vector<int>(sz(2 * t), 0), TruncLaurent(1)}}, term = total;
    for (int m = 1; m <= deg; ++m) {
        term = pmul(term, q, cap);
        for (auto& [k, c] : term) c *= Rational(1, m);
        for (const auto& [k, c] : term) {
            auto it = total.find(k);
            if (it == total.end()) total.emplace(k, c);
            else it->second += c;
        }
    }
    TruncLaurent c = total.count(cap) ? total[cap] : TruncLaurent(0);
    for (int x : cap) c *= factorial(x);
    TruncLaurent e = ts_exp(TruncLaurent::hbar() * chi.eval(A, B) * Rational(1, 2), N);
    return c * e;
}

}  // namespace

TEST_CASE("zero twist is trivial") {
    Rng rng(1);
    auto R = standard(rng, "A2");
    QContext ctx(R, 3);
    TwistMatrix zero{zeros<TruncLaurent>(R.t, R.t)};
    CHECK(twist_element(ctx, zero).equals_to(tensor(ctx.one(), ctx.one()), 3));
    for (int i = 0; i < R.n(); ++i) {
        CHECK(twisted_coproduct(ctx, ctx.E(i), zero).equals_to(ctx.coproduct(ctx.E(i)), 3));
        CHECK(twisted_antipode(ctx, ctx.F(i), zero).equals_to(ctx.antipode(ctx.F(i)), 3));
    }
}

TEST_CASE("twist conjugation agrees with direct multiplication") {
    Rng rng(2);
    for (const char* name : {"A1", "A2"}) {
        auto R = standard(rng, name);
        const int N = 3;
        QContext ctx(R, N);
        TwistMatrix Phi = random_twist(rng, R.t, true);
        Tensor F = twist_element(ctx, Phi);
        Tensor Finv = twist_element(ctx, TwistMatrix{LMat(-Phi.Phi)});
        for (int k = 0; k < 4; ++k) {
            UElem x = random_monomial(ctx, rng, 2);
            Tensor direct = ctx.tmul(ctx.tmul(F, ctx.coproduct(x)), Finv);
            CHECK_MESSAGE(twisted_coproduct(ctx, x, Phi).equals_to(direct, N), name);
        }
    }
}

TEST_CASE("twisted antipode satisfies the antipode axiom") {
    Rng rng(3);
    auto R = standard(rng, "A1xA1");
    const int N = 3;
    QContext ctx(R, N);
    TwistMatrix Phi = random_twist(rng, R.t, false);
    for (int i = 0; i < R.n(); ++i)
        for (const UElem& x : {ctx.E(i), ctx.F(i), ctx.H(i)}) {
            Tensor d = twisted_coproduct(ctx, x, Phi);
            Tensor left;
            left.legs = 2;
            for (const auto& [k, c] : d.terms) {
                UElem s = twisted_antipode(ctx, ctx.from_mono(k[0]), Phi);
                left += tensor(s, ctx.from_mono(k[1])).scaled(c);
            }
            UElem want = ctx.one().scaled(ctx.counit(x));
            CHECK(ctx.multiply_legs(left).equals_to(want, N));
        }
}

TEST_CASE("twist theorem") {
    Rng rng(4);
    for (const char* name : {"A1", "A2"}) {
        auto R = standard(rng, name);
        TwistMatrix Phi = random_twist(rng, R.t, true), Phi2 = random_twist(rng, R.t, false);
        for (const auto& r : verify_twist_theorem(R, Phi, Phi2, 3))
            CHECK_MESSAGE(r.ok, name << " " << r.name << " " << r.witness);
    }
}

TEST_CASE("sigma matches the generating-function oracle") {
    Rng rng(5);
    auto R = standard(rng, "A2");
    CocycleForm chi = random_alt_s(rng, R, true);
    const int t = R.t;
    for (int trial = 0; trial < 30; ++trial) {
        HExp u(sz(t), 0), v(sz(t), 0);
        for (int k = 0; k < 3; ++k) {
            if (rng() % 2) ++u[rng() % sz(t)];
            if (rng() % 2) ++v[rng() % sz(t)];
        }
        LMat A = zeros<TruncLaurent>(1, t), B = zeros<TruncLaurent>(1, t);
        for (int l = 0; l < R.n(); ++l) {
            if (rng() % 2) A += R.Tp.row(l);
            if (rng() % 2) B -= R.Tm.row(l);
        }
        TruncLaurent got = sigma_eval(chi, u, A, v, B, 1, 8);
        CHECK(got.equals_to(sigma_oracle(chi, u, A, v, B, 8), 4));
        CocycleForm neg{LMat(-chi.X)};
        CHECK(sigma_eval(chi, u, A, v, B, -1, 8).equals_to(sigma_oracle(neg, u, A, v, B, 8), 4));
    }
}

TEST_CASE("convolution powers of chi tilde") {
    Rng rng(6);
    auto R = standard(rng, "A2");
    CocycleForm chi = random_alt_s(rng, R, false);
    LMat a = R.Tp.row(0), b = R.Tm.row(1);
    TruncLaurent c = chi.eval(a, b);
    CHECK(tilde_chi_power(chi, a, 2, b, 2, 2) == c * c * Rational(4));
    CHECK(tilde_chi_power(chi, a, 3, b, 3, 3) == c * c * c * Rational(36));
    CHECK(tilde_chi_power(chi, a, 2, b, 1, 2).is_zero());
    CHECK(tilde_chi_power(chi, a, 3, b, 3, 2).is_zero());
    CHECK(tilde_chi_power(chi, a, 0, b, 0, 0) == TruncLaurent(1));
}

TEST_CASE("zero cocycle is the undeformed product") {
    Rng rng(7);
    auto R = standard(rng, "A2");
    QContext ctx(R, 3);
    CocycleProduct cp(ctx, CocycleForm{zeros<TruncLaurent>(R.t, R.t)});
    for (int k = 0; k < 6; ++k) {
        UElem x = random_monomial(ctx, rng, 2), y = random_monomial(ctx, rng, 2);
        CHECK(cp.mul(x, y).equals_to(ctx.mul(x, y), 3));
    }
}

TEST_CASE("deformed product is associative and unital") {
    Rng rng(8);
    auto R = standard(rng, "A1xA1");
    const int N = 2;
    QContext ctx(R, N + 2);
    CocycleProduct cp(ctx, random_alt_s(rng, R, true));
    for (int k = 0; k < 6; ++k) {
        UElem x = random_monomial(ctx, rng, 2), y = random_monomial(ctx, rng, 2), z = random_monomial(ctx, rng, 1);
        CHECK(cp.mul(cp.mul(x, y), z).equals_to(cp.mul(x, cp.mul(y, z)), N));
        CHECK(cp.mul(ctx.one(), x).equals_to(x, N));
        CHECK(cp.mul(x, ctx.one()).equals_to(x, N));
    }
}

TEST_CASE("cocycle theorem") {
    Rng rng(9);
    for (const char* name : {"A1", "A2"}) {
        auto R = standard(rng, name);
        CocycleForm chi = random_alt_s(rng, R, true);
        for (const auto& r : verify_cocycle_theorem(R, chi, 3))
            CHECK_MESSAGE(r.ok, name << " " << r.name << " " << r.witness);
    }
}
