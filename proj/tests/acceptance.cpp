#include <chrono>
#include <functional>
#include <iostream>
#include <string>

#include "mpqg/deform.hpp"
#include "mpqg/errors.hpp"
#include "mpqg/pairing.hpp"
#include "mpqg/random.hpp"
#include "mpqg/semiclassical.hpp"
#include "mpqg/tensor_rep.hpp"

using namespace mpqg;

namespace {

const char* kData[] = {"A1", "A1xA1", "A2", "B2"};

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& what) {
        if (ok) detail = what;
        ok = false;
    }
    void require(bool cond, const std::string& what) {
        if (!cond) fail(what);
    }
    void require(const std::vector<CheckResult>& res, const std::string& what) {
        for (const auto& r : res)
            if (!r.ok) fail(what + " " + r.name + (r.witness.empty() ? "" : ": " + r.witness));
    }
};

Realization standard(Rng& rng, const std::string& name, bool hbar = true) {
    return make_standard_realization(random_cartan_type(rng, cartan_by_name(name), true, hbar));
}

bool axioms_hold(const Realization& R) {
    for (int i = 0; i < R.n(); ++i)
        for (int j = 0; j < R.n(); ++j)
            if (!(R.alpha(j, R.Tp.row(i)) == R.P.P(i, j)) || !(R.alpha(j, R.Tm.row(i)) == R.P.P(j, i))) return false;
    return rank_mod_h(R.S()) == R.n();
}

Outcome realization_axioms() {
    Outcome o;
    Rng rng(101);
    for (const char* name : kData) {
        auto c = cartan_by_name(name);
        for (int k = 0; k < 5; ++k) {
            auto P = random_cartan_type(rng, c);
            int r = rank_mod_h(P.sym());
            o.require(axioms_hold(make_standard_realization(P)), std::string(name) + " standard");
            o.require(axioms_hold(make_split_realization(P, 3 * c.n() - r)), std::string(name) + " split");
            o.require(axioms_hold(make_small_realization(P, c.n())), std::string(name) + " small");
        }
    }
    return o;
}

Outcome equivalence_solvers() {
    Outcome o;
    Rng rng(102);
    for (const char* name : kData) {
        auto c = cartan_by_name(name);
        for (int k = 0; k < 20; ++k) {
            auto P = random_cartan_type(rng, c);
            auto Pp = random_cartan_type(rng, c);
            auto Rp = make_split_realization(P, 3 * c.n() - rank_mod_h(P.sym()));
            o.require(mat_equal(twist_realization(Rp, solve_twist_equiv(P, Pp, Rp)).first.P, Pp.P),
                      std::string(name) + " twist pair " + std::to_string(k));
            auto Rs = make_standard_realization(P);
            o.require(mat_equal(cocycle_realization(Rs, solve_cocycle_equiv(P, Pp, Rs)).first.P, Pp.P),
                      std::string(name) + " cocycle pair " + std::to_string(k));
        }
    }
    return o;
}

Outcome split_stability_examples() {
    Outcome o;
    Rng rng(103);
    for (const char* name : kData) {
        auto c = cartan_by_name(name);
        const int n = c.n();
        auto P = random_cartan_type(rng, c);
        auto R = make_standard_realization(P);
        auto [M0, ok0] = split_stability(R, TwistMatrix{zeros<TruncLaurent>(2 * n, 2 * n)});
        o.require(ok0 && mat_equal(M0, identity<TruncLaurent>(n)), std::string(name) + " zero twist");
        LMat phi = random_antisymmetric(rng, n);
        LMat F = zeros<TruncLaurent>(2 * n, 2 * n);
        F.topRightCorner(n, n) = phi;
        F.bottomLeftCorner(n, n) = -phi.transpose();
        auto [M, ok] = split_stability(R, TwistMatrix{F});
        LMat expect = identity<TruncLaurent>(n) - P.antisym() * phi * Rational(2);
        o.require(mat_equal(M, expect), std::string(name) + " antisymmetric family");
        auto Rda = make_standard_realization(check_cartan_type(c.DA_series(), c));
        auto [Mda, okda] = split_stability(Rda, TwistMatrix{F});
        o.require(okda && mat_equal(Mda, identity<TruncLaurent>(n)), std::string(name) + " P = DA");
    }
    return o;
}

Outcome lie_bialgebra_axioms() {
    Outcome o;
    Rng rng(104);
    const int dims[] = {1, 2, 3, 4};
    int k = 0;
    for (const char* name : kData) {
        auto R = standard(rng, name);
        auto g = build_mplba(R, default_bound(R.P.cartan));
        o.require(g.basis.m() == dims[k++], std::string(name) + " dim n+");
        auto bad = check_bialgebra(g);
        o.require(bad.empty(), std::string(name) + " " + (bad.empty() ? "" : bad.front()));
    }
    return o;
}

Outcome lie_deformation_tables() {
    Outcome o;
    Rng rng(105);
    for (const char* name : kData) {
        auto c = cartan_by_name(name);
        const int bound = default_bound(c);
        for (int k = 0; k < 5; ++k) {
            auto R = make_split_realization(random_cartan_type(rng, c, true, false), 2 * c.n() + k % 2);
            auto g = build_mplba(R, bound);
            auto Theta = random_twist(rng, R.t);
            auto tw = lie_twist_deform(g, LieTwist{const_part(Theta.Phi)});
            auto gT = build_mplba(twist_realization(R, Theta).second, bound);
            o.require(compare_brackets(tw, gT).empty() && compare_cobrackets(tw, gT).empty(),
                      std::string(name) + " twist " + std::to_string(k));
            auto chi = random_alt_s(rng, R);
            auto cc = lie_cocycle_deform(g, LieCocycle{const_part(chi.X)});
            auto gc = build_mplba(cocycle_realization(R, chi).second, bound);
            o.require(compare_brackets(cc, gc).empty() && compare_cobrackets(cc, gc).empty(),
                      std::string(name) + " cocycle " + std::to_string(k));
        }
    }
    return o;
}

Outcome hopf_axioms() {
    Outcome o;
    Rng rng(106);
    for (const char* name : kData) {
        auto R = standard(rng, name);
        const int N = R.n() == 2 && std::string(name) != "A1xA1" ? 3 : 4;
        QContext ctx(R, N);
        o.require(hopf_suite(ctx), name);
        QContext pre(R, N, false);
        for (int i = 0; i < R.n(); ++i)
            for (int j = 0; j < R.n(); ++j)
                if (i != j) o.require(serre_skewprimitive_check(pre, i, j), name);
    }
    return o;
}

Outcome twist_theorem() {
    Outcome o;
    Rng rng(107);
    for (const char* name : kData) {
        auto R = standard(rng, name);
        for (int k = 0; k < 3; ++k) {
            auto Phi = random_twist(rng, R.t, k == 2);
            auto Phi2 = random_twist(rng, R.t);
            auto res = verify_twist_theorem(R, Phi, Phi2, 3);
            bool cocycle_seen = false;
            for (const auto& r : res) cocycle_seen = cocycle_seen || r.name == "twist_cocycle";
            o.require(cocycle_seen, "twist cocycle identity not checked");
            o.require(res, name);
        }
    }
    return o;
}

Outcome cocycle_theorem() {
    Outcome o;
    Rng rng(108);
    for (const char* name : kData) {
        auto R = standard(rng, name);
        for (int k = 0; k < 3; ++k) {
            auto chi = random_alt_s(rng, R, k == 2);
            auto res = verify_cocycle_theorem(R, chi, 3);
            for (const char* need : {"serre", "convolution_power", "chi_U_closed_forms"}) {
                if (R.n() == 1 && std::string(need) == "serre") continue;
                bool seen = false;
                for (const auto& r : res) seen = seen || r.name == need;
                o.require(seen, std::string(need) + " not checked");
            }
            o.require(res, name);
        }
    }
    return o;
}

Outcome pairing() {
    Outcome o;
    Rng rng(109);
    for (const char* name : kData) {
        auto R = standard(rng, name);
        SkewPairing pi(R, 3);
        QContext ctx(R, 3);
        o.require(pairing_generator_table(pi), name);
        o.require(pairing_radical_check(pi, ctx, 3), name);
        o.require(double_relations_check(R, 3), name);
    }
    return o;
}

Outcome representations() {
    Outcome o;
    Rng rng(110);
    auto R = standard(rng, "A2");
    QContext ctx(R, 3, false);
    LMat lambda = zeros<TruncLaurent>(1, R.t);
    for (int g = 0; g < R.t; ++g) lambda(0, g) = TruncLaurent(random_rational(rng));
    auto res = representation_check(ctx, lambda, 4);
    o.require(res.size() == 2, "both representations");
    o.require(res, "A2");
    return o;
}

Outcome semiclassical_limit() {
    Outcome o;
    Rng rng(111);
    for (const char* name : kData) {
        auto c = cartan_by_name(name);
        LimitContext plain(make_standard_realization(check_cartan_type(c.DA_series(), c)), 3);
        o.require(check_limit(plain), std::string(name) + " DA");
        LimitContext pert(standard(rng, name), 3);
        o.require(check_limit(pert), std::string(name) + " perturbed");
    }
    return o;
}

Outcome commuting_squares() {
    Outcome o;
    Rng rng(112);
    for (const char* name : kData) {
        auto R = standard(rng, name);
        for (int k = 0; k < 3; ++k) {
            o.require(check_square_twist(R, random_twist(rng, R.t, k == 2), 3), name);
            o.require(check_square_cocycle(R, random_alt_s(rng, R, k == 2), 3), name);
        }
    }
    return o;
}

Outcome confluence() {
    Outcome o;
    Rng rng(113);
    std::uniform_int_distribution<int> len(1, 5);
    for (const char* name : kData) {
        auto R = standard(rng, name);
        const int N = 3;
        QContext ctx(R, N);
        Rewriter rw(ctx);
        for (int k = 0; k < 200; ++k) {
            GenPoly p{{random_genword(rng, R.n(), R.t, len(rng)), TruncLaurent(1)}};
            UElem a = rw.to_element(rw.rewrite(p, Rewriter::Strategy::Leftmost));
            UElem b = rw.to_element(rw.rewrite(p, Rewriter::Strategy::Random, &rng));
            o.require(a.equals_to(b, N), std::string(name) + " word " + std::to_string(k));
        }
        for (int k = 0; k < 100; ++k) {
            UElem x = ctx.normalize(random_genword(rng, R.n(), R.t, 2));
            UElem y = ctx.normalize(random_genword(rng, R.n(), R.t, 2));
            UElem z = ctx.normalize(random_genword(rng, R.n(), R.t, 2));
            o.require(ctx.mul(ctx.mul(x, y), z).equals_to(ctx.mul(x, ctx.mul(y, z)), N),
                      std::string(name) + " triple " + std::to_string(k));
        }
    }
    return o;
}

struct Criterion {
    int id;
    const char* title;
    double limit;  // seconds, 0 for none
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "realization axioms", 1, realization_axioms},
        {2, "equivalence solvers", 1, equivalence_solvers},
        {3, "split-stability examples", 0, split_stability_examples},
        {4, "Lie bialgebra axioms", 5, lie_bialgebra_axioms},
        {5, "Lie twist and cocycle tables", 0, lie_deformation_tables},
        {6, "Hopf axioms and Serre skew-primitivity", 60, hopf_axioms},
        {7, "twist deformation theorem", 120, twist_theorem},
        {8, "2-cocycle deformation theorem", 60, cocycle_theorem},
        {9, "skew-Hopf pairing and double relations", 30, pairing},
        {10, "tensor representation oracle", 60, representations},
        {11, "semiclassical limit", 0, semiclassical_limit},
        {12, "deformation and specialization commute", 120, commuting_squares},
        {13, "confluence and associativity", 60, confluence},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit > 0 && secs >= c.limit) o.fail("over the time limit");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f s", secs);
        std::cout << "criterion " << c.id << ": " << (o.ok ? "PASS" : "FAIL") << "  " << c.title << " (" << buf;
        if (c.limit > 0) std::cout << ", limit " << c.limit << " s";
        std::cout << ")";
        if (!o.ok) std::cout << "  " << o.detail;
        std::cout << std::endl;
        failed += !o.ok;
    }
    return failed == 0 ? 0 : 1;
}
