#include <doctest.h>

#include <set>

#include "mpqg/liebialg.hpp"
#include "mpqg/random.hpp"

using namespace mpqg;

namespace {

const char* kData[] = {"A1", "A1xA1", "A2", "B2"};

// Positive roots by root strings: beta + alpha_i is a root iff q > 0, where the alpha_i-string
// through beta runs from beta - p alpha_i to beta + q alpha_i and p - q = <beta, alpha_i^vee>.
std::vector<std::vector<int>> positive_roots(const CartanDatum& c) {
    const int n = c.n();
    std::set<std::vector<int>> roots;
    std::vector<std::vector<int>> layer;
    for (int i = 0; i < n; ++i) {
        std::vector<int> e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(i)] = 1;
        roots.insert(e);
        layer.push_back(e);
    }
    while (!layer.empty()) {
        std::vector<std::vector<int>> next;
        for (const auto& b : layer)
            for (int i = 0; i < n; ++i) {
                int p = 0;
                auto down = b;
                while (true) {
                    --down[static_cast<std::size_t>(i)];
                    if (!roots.count(down)) break;
                    ++p;
                }
                int pair = 0;
                for (int j = 0; j < n; ++j) pair += b[static_cast<std::size_t>(j)] * c.A(i, j);
                if (p - pair > 0) {
                    auto up = b;
                    ++up[static_cast<std::size_t>(i)];
                    if (roots.insert(up).second) next.push_back(up);
                }
            }
        layer = next;
    }
    return {roots.begin(), roots.end()};
}

Realization standard(Rng& rng, const std::string& name) {
    auto c = cartan_by_name(name);
    return make_standard_realization(random_cartan_type(rng, c, true, false));
}

QMat random_q_antisym(Rng& rng, int t) { return const_part(random_antisymmetric(rng, t, true, false)); }

QMat ten(const MpLbA& g, int a, int b) {
    QMat m = zeros<Rational>(g.dim(), g.dim());
    m(a, b) = Rational(1);
    return m;
}

}  // namespace

TEST_CASE("nilpotent part dimensions") {
    for (const char* name : kData) {
        auto c = cartan_by_name(name);
        auto roots = positive_roots(c);
        int bound = default_bound(c);
        auto nil = build_nilpotent(c, bound);
        CAPTURE(name);
        CHECK_FALSE(nil.truncated);
        CHECK(nil.dim() == static_cast<int>(roots.size()));
        std::set<std::vector<int>> got(nil.roots.begin(), nil.roots.end());
        CHECK(got == std::set<std::vector<int>>(roots.begin(), roots.end()));
    }
    CHECK(build_nilpotent(cartan_by_name("A1"), 3).dim() == 1);
    CHECK(build_nilpotent(cartan_by_name("A2"), 3).dim() == 3);
    CHECK(build_nilpotent(cartan_by_name("B2"), 4).dim() == 4);
    CHECK(build_nilpotent(cartan_by_name("A3"), 3).dim() == 6);
    CHECK(default_bound(cartan_by_name("A1")) == 1);
    CHECK(default_bound(cartan_by_name("A2")) == 2);
    CHECK(default_bound(cartan_by_name("B2")) == 3);
    CHECK(default_bound(cartan_by_name("A1xA1")) == 1);
    auto a2 = build_nilpotent(cartan_by_name("A2"), 1);
    CHECK(a2.truncated);
    IMat aff(2, 2);
    aff << 2, -2, -2, 2;
    CHECK_THROWS_AS(default_bound(symmetrize(aff)), UnsupportedArgument);
    CHECK(build_nilpotent(symmetrize(aff), 3).truncated);
}

TEST_CASE("nilpotent structure constants") {
    auto nil = build_nilpotent(cartan_by_name("A2"), 2);
    int e1 = nil.find({0}), e2 = nil.find({1}), e12 = nil.find({0, 1});
    REQUIRE(e12 >= 0);
    CHECK(nil.bracket[e1][e2](e12) == Rational(1));
    CHECK(nil.bracket[e2][e1](e12) == Rational(-1));
    // [E1,[E1,E2]] is a Serre element
    CHECK(nil.bracket[e1][e12](e12) == Rational(0));
    auto b2 = build_nilpotent(cartan_by_name("B2"), 3);
    CHECK(b2.find({0, 1, 0}) >= 0);
    CHECK(b2.find({0, 1, 1}) < 0);
}

TEST_CASE("MpLbA on generators") {
    Rng rng(11);
    SUBCASE("sl2 standard") {
        auto c = cartan_by_name("A1");
        auto R = make_standard_realization(check_cartan_type(c.DA_series(), c));
        auto g = build_mplba(R, 1);
        const auto& B = g.basis;
        REQUIRE(g.dim() == 4);
        // delta(E) = T+ (x) E - E (x) T+
        QMat want = ten(g, B.h(0), B.E(0)) - ten(g, B.E(0), B.h(0));
        CHECK(mat_equal(g.cobracket[B.E(0)], want));
        QMat wantF = ten(g, B.h(1), B.F(0)) - ten(g, B.F(0), B.h(1));
        CHECK(mat_equal(g.cobracket[B.F(0)], wantF));
        CHECK(mat_equal(g.cobracket[B.h(0)], zeros<Rational>(4, 4)));
        // [E, F] = (T+ + T-) / 2
        QVec ef = g.bracket[B.E(0)][B.F(0)];
        CHECK(ef(B.h(0)) == Rational(1, 2));
        CHECK(ef(B.h(1)) == Rational(1, 2));
    }
    SUBCASE("root action") {
        for (const char* name : kData) {
            auto R = standard(rng, name);
            auto g = build_mplba(R, default_bound(R.P.cartan));
            const auto& B = g.basis;
            QMat A = const_part(R.Amat);
            for (int j = 0; j < R.n(); ++j)
                for (int k = 0; k < R.t; ++k) {
                    CHECK(g.bracket[B.h(k)][B.E(j)] == A(j, k) * g.unit(B.E(j)));
                    CHECK(g.bracket[B.h(k)][B.F(j)] == -A(j, k) * g.unit(B.F(j)));
                }
        }
    }
    SUBCASE("A2 cocycle rule on [E1,E2]") {
        auto R = standard(rng, "A2");
        auto g = build_mplba(R, 2);
        const auto& B = g.basis;
        int e12 = B.pos(B.nil.find({0, 1}));
        QMat P = const_part(R.P.P);
        // delta([E1,E2]) = T (x) E12 - E12 (x) T - (p12 + p21)(E1 (x) E2 - E2 (x) E1), T = T1+ + T2+
        QMat want = zeros<Rational>(g.dim(), g.dim());
        for (int i = 0; i < 2; ++i) {
            want += ten(g, B.h(i), e12) - ten(g, e12, B.h(i));
        }
        want -= (P(0, 1) + P(1, 0)) * (ten(g, B.E(0), B.E(1)) - ten(g, B.E(1), B.E(0)));
        CHECK(mat_equal(g.cobracket[e12], want));
    }
}

TEST_CASE("bialgebra axioms") {
    Rng rng(5);
    for (const char* name : kData) {
        CAPTURE(name);
        auto c = cartan_by_name(name);
        int bound = default_bound(c);
        auto std_R = standard(rng, name);
        CHECK(check_bialgebra(build_mplba(std_R, bound)).empty());
        auto P = random_cartan_type(rng, c, true, false);
        CHECK(check_bialgebra(build_mplba(make_split_realization(P, 2 * c.n() + 1), bound)).empty());
        CHECK_THROWS_AS(build_mplba(std_R, bound - 1 > 0 ? bound - 1 : 0), Error);
    }
}

TEST_CASE("fault injection") {
    Rng rng(8);
    auto g = build_mplba(standard(rng, "A2"), 2);
    const auto& B = g.basis;
    auto bad = g;
    bad.bracket[B.E(0)][B.E(1)](B.pos(B.nil.find({0, 1}))) += Rational(1);
    auto v = check_bialgebra(bad);
    REQUIRE_FALSE(v.empty());
    bool named = false;
    for (const auto& s : v) named = named || s.find("[E1,E2]") != std::string::npos;
    CHECK(named);
    auto badc = g;
    badc.cobracket[B.E(1)] = -badc.cobracket[B.E(1)];
    auto w = check_bialgebra(badc);
    REQUIRE_FALSE(w.empty());
    bool namedc = false;
    for (const auto& s : w) namedc = namedc || s.find("E2") != std::string::npos;
    CHECK(namedc);
}

TEST_CASE("twist deformation matches the twisted realization") {
    Rng rng(21);
    for (const char* name : kData) {
        CAPTURE(name);
        auto c = cartan_by_name(name);
        int bound = default_bound(c);
        for (int trial = 0; trial < 5; ++trial) {
            auto R = trial % 2 ? standard(rng, name)
                               : make_split_realization(random_cartan_type(rng, c, true, false), 2 * c.n() + 1);
            auto g = build_mplba(R, bound);
            QMat Theta = random_q_antisym(rng, R.t);
            auto tw = lie_twist_deform(g, LieTwist{Theta});
            auto [PT, RT] = twist_realization(R, TwistMatrix{lift(Theta)});
            auto gT = build_mplba(RT, bound);
            CHECK(compare_brackets(tw, gT).empty());
            CHECK(compare_cobrackets(tw, gT).empty());
            CHECK(check_bialgebra(tw).empty());
            const auto& B = g.basis;
            QMat Tp = const_part(RT.Tp);
            for (int l = 0; l < R.n(); ++l) {
                QMat want = zeros<Rational>(g.dim(), g.dim());
                for (int k = 0; k < R.t; ++k)
                    want += Tp(l, k) * (ten(g, B.h(k), B.E(l)) - ten(g, B.E(l), B.h(k)));
                CHECK(mat_equal(tw.cobracket[B.E(l)], want));
            }
            for (int k = 0; k < R.t; ++k) CHECK(mat_equal(tw.cobracket[B.h(k)], zeros<Rational>(g.dim(), g.dim())));
        }
        auto g = build_mplba(standard(rng, name), bound);
        auto same = lie_twist_deform(g, LieTwist{zeros<Rational>(g.basis.t, g.basis.t)});
        CHECK(compare_cobrackets(same, g).empty());
    }
    auto g = build_mplba(standard(rng, "A2"), 2);
    QMat bad = zeros<Rational>(g.basis.t, g.basis.t);
    bad(0, 1) = Rational(1);
    CHECK_THROWS_AS(lie_twist_deform(g, LieTwist{bad}), NotAntisymmetric);
}

TEST_CASE("cocycle deformation matches the deformed realization") {
    Rng rng(34);
    for (const char* name : kData) {
        CAPTURE(name);
        auto c = cartan_by_name(name);
        int bound = default_bound(c);
        for (int trial = 0; trial < 5; ++trial) {
            auto P = random_cartan_type(rng, c, true, false);
            auto R = make_split_realization(P, 2 * c.n() + (trial % 2));
            auto g = build_mplba(R, bound);
            auto chi = random_alt_s(rng, R);
            QMat X = const_part(chi.X);
            auto def = lie_cocycle_deform(g, LieCocycle{X});
            auto [Pc, Rc] = cocycle_realization(R, chi);
            auto gc = build_mplba(Rc, bound);
            CHECK(compare_brackets(def, gc).empty());
            CHECK(compare_cobrackets(def, gc).empty());
            CHECK(check_bialgebra(def).empty());
            const auto& B = g.basis;
            QMat Ac = const_part(cocycle_roots(R, chi));
            for (int i = 0; i < R.n(); ++i) {
                for (int k = 0; k < R.t; ++k) CHECK(def.bracket[B.h(k)][B.E(i)] == Ac(i, k) * g.unit(B.E(i)));
                for (int j = 0; j < R.n(); ++j) CHECK(def.bracket[B.E(i)][B.F(j)] == g.bracket[B.E(i)][B.F(j)]);
            }
            for (int a = 0; a < R.t; ++a)
                for (int b = 0; b < R.t; ++b) CHECK(def.bracket[B.h(a)][B.h(b)] == QVec::Constant(g.dim(), Rational(0)));
        }
    }
    Rng r2(2);
    auto R = make_split_realization(random_cartan_type(r2, cartan_by_name("A2"), true, false), 5);
    auto g = build_mplba(R, 2);
    QMat X = zeros<Rational>(5, 5);
    X(0, 4) = Rational(1);
    X(4, 0) = Rational(-1);
    QMat S = const_part(R.S());
    bool touches = false;
    for (int i = 0; i < 2; ++i) touches = touches || !(S.row(i) * X).isZero();
    if (touches) CHECK_THROWS_AS(lie_cocycle_deform(g, LieCocycle{X}), AltSViolated);
}

TEST_CASE("Borel pairing") {
    Rng rng(3);
    SUBCASE("generators") {
        auto c = cartan_by_name("B2");
        QMat P = const_part(random_cartan_type(rng, c, true, false).P);
        BorelPairing bp(P, c.d);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                CHECK(bp.pair(tree_leaf(2 + i), tree_leaf(2 + j)) == P(i, j));
                CHECK(bp.pair(tree_leaf(2 + i), tree_leaf(j)) == Rational(0));
                CHECK(bp.pair(tree_leaf(i), tree_leaf(2 + j)) == Rational(0));
                CHECK(bp.pair(tree_leaf(i), tree_leaf(j)) == (i == j ? Rational(1, 2 * c.d[i]) : Rational(0)));
            }
    }
    SUBCASE("A2 degree two") {
        auto c = cartan_by_name("A2");
        for (int trial = 0; trial < 5; ++trial) {
            QMat P = const_part(random_cartan_type(rng, c, true, false).P);
            BorelPairing bp(P, c.d);
            auto x = tree_bracket(tree_leaf(0), tree_leaf(1));
            auto y = tree_bracket(tree_leaf(1), tree_leaf(0));
            // -(p12 + p21) / 4 with p12 + p21 = 2 a12 = -2
            CHECK(bp.pair(x, y, true) == Rational(1, 2));
            CHECK(bp.pair(x, y, false) == Rational(1, 2));
        }
    }
    SUBCASE("both recursions agree") {
        for (const char* name : kData) {
            auto c = cartan_by_name(name);
            QMat P = const_part(random_cartan_type(rng, c, true, false).P);
            BorelPairing bp(P, c.d);
            std::vector<Word> words;
            std::function<void(Word)> gen = [&](Word w) {
                if (!w.empty()) words.push_back(w);
                if (w.size() == 3) return;
                for (int i = 0; i < c.n(); ++i) {
                    w.push_back(i);
                    gen(w);
                    w.pop_back();
                }
            };
            gen({});
            for (const auto& u : words)
                for (const auto& v : words) {
                    if (u.size() != v.size()) continue;
                    auto x = tree_from_word(u), y = tree_from_word(v);
                    CHECK(bp.pair(x, y, true) == bp.pair(x, y, false));
                }
        }
    }
    SUBCASE("Serre elements lie in the radical") {
        for (const char* name : kData) {
            auto c = cartan_by_name(name);
            QMat P = const_part(random_cartan_type(rng, c, true, false).P);
            BorelPairing bp(P, c.d);
            for (int i = 0; i < c.n(); ++i)
                for (int j = 0; j < c.n(); ++j) {
                    if (i == j) continue;
                    int k = 1 - c.A(i, j);
                    auto s = tree_serre(i, j, k);
                    Word w(static_cast<std::size_t>(k), i);
                    w.push_back(j);
                    std::sort(w.begin(), w.end());
                    do {
                        auto y = tree_from_word(w);
                        CHECK(bp.pair(s, y) == Rational(0));
                        CHECK(bp.pair(y, s, false) == Rational(0));
                    } while (std::next_permutation(w.begin(), w.end()));
                }
            // toral relation [T_i^+, E_j] - alpha_j(T_i^+) E_j
            for (int i = 0; i < c.n(); ++i)
                for (int j = 0; j < c.n(); ++j) {
                    BorelElem rel{{Rational(1), tree_bracket(tree_leaf(c.n() + i), tree_leaf(j))},
                                  {-P(i, j), tree_leaf(j)}};
                    for (int l = 0; l < c.n(); ++l) CHECK(bp.pair(rel, BorelElem{{Rational(1), tree_leaf(l)}}) == Rational(0));
                }
        }
    }
}
