#include "mpqg/semiclassical.hpp"

#include "mpqg/errors.hpp"

namespace mpqg {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

UElem left_normed(const Word& w, const std::vector<UElem>& gens, const LieImage::Commutator& commutator) {
    UElem x = gens[sz(w.front())];
    for (std::size_t k = 1; k < w.size(); ++k) x = commutator(x, gens[sz(w[k])]);
    return x;
}

std::vector<UElem> generators(const MpLbA& g, QContext& ctx, const std::vector<UElem>& E,
                              const std::vector<UElem>& F) {
    std::vector<UElem> out(sz(g.dim()));
    for (int i = 0; i < g.R.n(); ++i) {
        out[sz(g.basis.E(i))] = E[sz(i)];
        out[sz(g.basis.F(i))] = F[sz(i)];
    }
    for (int k = 0; k < g.basis.t; ++k) out[sz(g.basis.h(k))] = ctx.H(k);
    return out;
}

std::vector<int> generator_indices(const MpLbA& g) {
    std::vector<int> out;
    for (int i = 0; i < g.R.n(); ++i) out.push_back(g.basis.E(i));
    for (int i = 0; i < g.R.n(); ++i) out.push_back(g.basis.F(i));
    for (int k = 0; k < g.basis.t; ++k) out.push_back(g.basis.h(k));
    return out;
}

std::string vec_str(const QVec& v, const MpLbA& g) {
    std::string s;
    for (int b = 0; b < g.dim(); ++b) {
        if (v(b).is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += v(b).str() + "*" + g.basis.labels[sz(b)];
    }
    return s.empty() ? "0" : s;
}

struct Report {
    CheckResult res;
    explicit Report(std::string name) : res{std::move(name), true, ""} {}
    void fail(const std::string& w) {
        if (res.ok) res.witness = w;
        res.ok = false;
    }
};

// Generator brackets and cobrackets of an algebra against the tables of an MpLbA.
void compare_tables(const MpLbA& g, const std::vector<UElem>& gens, const LieImage& image,
                    const LieImage::Commutator& commutator, const std::function<Tensor(const UElem&)>& coproduct,
                    Report& brackets, Report& cobrackets) {
    const auto idx = generator_indices(g);
    for (int a : idx) {
        QMat c = semiclassical_cobracket(coproduct(gens[sz(a)]), image);
        if (!mat_equal(c, g.cobracket[sz(a)])) cobrackets.fail("delta(" + g.basis.labels[sz(a)] + ")");
    }
    for (int a : idx)
        for (int b : idx) {
            QVec v = image(commutator(gens[sz(a)], gens[sz(b)]));
            QVec w = g.bracket[sz(a)][sz(b)];
            if (v != w)
                brackets.fail("[" + g.basis.labels[sz(a)] + "," + g.basis.labels[sz(b)] + "] = " + vec_str(v, g) +
                              ", expected " + vec_str(w, g));
        }
}

}  // namespace

LieImage::LieImage(const MpLbA& g, const std::vector<UElem>& E, const std::vector<UElem>& F, int t,
                   const Commutator& commutator)
    : dim_(g.dim()) {
    std::vector<UElem> imgs(sz(dim_));
    for (int a = 0; a < g.basis.m(); ++a) {
        const Word& w = g.basis.nil.words[sz(a)];
        imgs[sz(g.basis.pos(a))] = left_normed(w, E, commutator);
        imgs[sz(g.basis.neg(a))] = left_normed(w, F, commutator);
    }
    for (int k = 0; k < t; ++k) {
        Mono m{{}, HExp(sz(t), 0), {}};
        m.h[sz(k)] = 1;
        imgs[sz(g.basis.h(k))].add(m, TruncLaurent(1));
    }
    for (const auto& x : imgs)
        for (const auto& [m, c] : x.terms)
            if (!c.coeff(0).is_zero()) column_.emplace(m, 0);
    int col = 0;
    for (auto& [m, k] : column_) k = col++;
    images_ = zeros<Rational>(dim_, col);
    for (int b = 0; b < dim_; ++b) {
        auto r = row(imgs[sz(b)]);
        for (int k = 0; k < col; ++k) images_(b, k) = r[sz(k)];
    }
}

std::vector<Rational> LieImage::row(const UElem& x) const {
    std::vector<Rational> r(column_.size(), Rational(0));
    for (const auto& [m, c] : x.terms) {
        if (c.valuation() < 0) throw NotLiftable("negative hbar power");
        Rational v = c.coeff(0);
        if (v.is_zero()) continue;
        auto it = column_.find(m);
        if (it == column_.end()) throw NotLiftable("monomial outside the Lie part");
        r[sz(it->second)] = v;
    }
    return r;
}

QVec LieImage::operator()(const UElem& x) const {
    auto r = row(x);
    QMat b(1, static_cast<Eigen::Index>(r.size()));
    for (std::size_t k = 0; k < r.size(); ++k) b(0, static_cast<Eigen::Index>(k)) = r[k];
    QMat sol;
    if (!solve_left(images_, b, sol)) throw NotLiftable("not in the span of the Lie basis");
    return sol.row(0).transpose();
}

QMat LieImage::operator()(const Tensor& x) const {
    const auto M = static_cast<Eigen::Index>(column_.size());
    QMat T = zeros<Rational>(M, M);
    for (const auto& [legs, c] : x.terms) {
        if (c.valuation() < 0) throw NotLiftable("negative hbar power");
        Rational v = c.coeff(0);
        if (v.is_zero()) continue;
        auto a = column_.find(legs[0]), b = column_.find(legs[1]);
        if (a == column_.end() || b == column_.end()) throw NotLiftable("tensor leg outside the Lie part");
        T(a->second, b->second) = v;
    }
    // T = images^T C images: solve on rows, then on columns.
    QMat Y, Ct;
    if (!solve_left(images_, T, Y)) throw NotLiftable("tensor outside g (x) g");
    QMat Yt = Y.transpose();
    if (!solve_left(images_, Yt, Ct)) throw NotLiftable("tensor outside g (x) g");
    return Ct.transpose();
}

LimitContext::LimitContext(const Realization& R, int N)
    : ctx(R, N), g(build_mplba(R, default_bound(R.P.cartan))), image([&] {
          std::vector<UElem> E, F;
          for (int i = 0; i < R.n(); ++i) {
              E.push_back(ctx.E(i));
              F.push_back(ctx.F(i));
          }
          return LieImage(g, E, F, R.t, [this](const UElem& a, const UElem& b) { return ctx.commutator(a, b); });
      }()) {
    if (N < 2) throw UnsupportedArgument("semiclassical checks need order >= 2");
}

QMat semiclassical_cobracket(const Tensor& coproduct, const LieImage& image) {
    Tensor d = coproduct - flip(coproduct);
    Tensor one;
    for (const auto& [legs, c] : d.terms) {
        if (c.valuation() < 1 && !c.is_zero_to(0)) throw NotLiftable("not cocommutative mod hbar");
        one.add(legs, TruncLaurent(c.coeff(1)));
    }
    return image(one);
}

QMat semiclassical_cobracket(LimitContext& lc, const UElem& x) {
    lc.image(x);
    return semiclassical_cobracket(lc.ctx.coproduct(x), lc.image);
}

std::vector<CheckResult> check_limit(LimitContext& lc) {
    QContext& ctx = lc.ctx;
    const MpLbA& g = lc.g;
    const int n = g.R.n();
    std::vector<UElem> E, F;
    for (int i = 0; i < n; ++i) {
        E.push_back(ctx.E(i));
        F.push_back(ctx.F(i));
    }
    auto gens = generators(g, ctx, E, F);
    auto comm = [&](const UElem& a, const UElem& b) { return ctx.commutator(a, b); };
    Report brackets("generator_brackets"), cobrackets("generator_cobrackets");
    compare_tables(g, gens, lc.image, comm, [&](const UElem& x) { return ctx.coproduct(x); }, brackets,
                   cobrackets);

    Report ef("ef_limit");
    for (int i = 0; i < n; ++i) {
        QMat row = (g.R.Tp.row(i) + g.R.Tm.row(i)) * Rational(1, 2 * g.R.cartan.d[sz(i)]);
        if (lc.image(ctx.ef_rhs(i)) != g.h_vector(row)) ef.fail("E" + std::to_string(i + 1));
    }

    Report serre("serre_limit");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int m = 1 - g.R.cartan.A(i, j);
            NCPoly classical = serre_poly(i, j, m);
            for (bool positive : {true, false}) {
                NCPoly reduced;
                for (const auto& [w, c] : ctx.words(positive).serre_element(i, j))
                    if (!c.coeff(0).is_zero()) reduced[w] += c.coeff(0);
                if (reduced != classical)
                    serre.fail(std::string(positive ? "E" : "F") + std::to_string(i + 1) + std::to_string(j + 1));
            }
            QVec x = g.unit(g.basis.E(j)), y = g.unit(g.basis.F(j));
            for (int k = 0; k < m; ++k) {
                x = g.br(g.unit(g.basis.E(i)), x);
                y = g.br(g.unit(g.basis.F(i)), y);
            }
            bool zero = true;
            for (int b = 0; b < g.dim(); ++b) zero = zero && x(b).is_zero() && y(b).is_zero();
            if (!zero) serre.fail("Lie Serre element " + std::to_string(i + 1) + std::to_string(j + 1));
        }
    return {brackets.res, cobrackets.res, ef.res, serre.res};
}

std::vector<CheckResult> check_square_twist(const Realization& R, const TwistMatrix& Phi, int N) {
    QContext ctx(R, N);
    const int bound = default_bound(R.P.cartan);
    MpLbA g = build_mplba(R, bound);
    MpLbA lie = lie_twist_deform(g, LieTwist{const_part(Phi.Phi)});
    auto [PPhi, RPhi] = twist_realization(R, Phi);
    MpLbA quant = build_mplba(RPhi, bound);
    auto tw = twisted_generators(ctx, Phi);
    auto comm = [&](const UElem& a, const UElem& b) { return ctx.commutator(a, b); };
    LieImage image(g, tw.E, tw.F, R.t, comm);
    auto gens = generators(g, ctx, tw.E, tw.F);
    auto cop = [&](const UElem& x) { return twisted_coproduct(ctx, x, Phi); };

    std::vector<CheckResult> out;
    for (const auto& [target, tag] : {std::pair{&lie, "lie_twist"}, std::pair{&quant, "twisted_realization"}}) {
        Report b(std::string("brackets_vs_") + tag), c(std::string("cobrackets_vs_") + tag);
        compare_tables(*target, gens, image, comm, cop, b, c);
        out.push_back(b.res);
        out.push_back(c.res);
    }
    Report coroots("twisted_coroots");
    if (!mat_equal(const_part(tw.Tp), quant.R.Tp) || !mat_equal(const_part(tw.Tm), quant.R.Tm)) coroots.fail("T^+-");
    out.push_back(coroots.res);
    Report tables("lie_tables");
    for (const auto& s : compare_cobrackets(lie, quant)) tables.fail(s);
    for (const auto& s : compare_brackets(lie, quant)) tables.fail(s);
    out.push_back(tables.res);
    return out;
}

std::vector<CheckResult> check_square_cocycle(const Realization& R, const CocycleForm& chi, int N) {
    QContext ctx(R, N + 2);
    CocycleProduct cp(ctx, chi);
    const int bound = default_bound(R.P.cartan);
    MpLbA g = build_mplba(R, bound);
    MpLbA lie = lie_cocycle_deform(g, LieCocycle{const_part(chi.X)});
    auto [Pc, Rc] = cocycle_realization(R, chi);
    MpLbA quant = build_mplba(Rc, bound);
    std::vector<UElem> E, F;
    for (int i = 0; i < R.n(); ++i) {
        E.push_back(ctx.E(i));
        F.push_back(ctx.F(i));
    }
    auto comm = [&](const UElem& a, const UElem& b) { return cp.commutator(a, b); };
    LieImage image(g, E, F, R.t, comm);
    auto gens = generators(g, ctx, E, F);
    auto cop = [&](const UElem& x) { return ctx.coproduct(x); };

    std::vector<CheckResult> out;
    for (const auto& [target, tag] : {std::pair{&lie, "lie_cocycle"}, std::pair{&quant, "cocycle_realization"}}) {
        Report b(std::string("brackets_vs_") + tag), c(std::string("cobrackets_vs_") + tag);
        compare_tables(*target, gens, image, comm, cop, b, c);
        out.push_back(b.res);
        out.push_back(c.res);
    }
    Report tables("lie_tables");
    for (const auto& s : compare_cobrackets(lie, quant)) tables.fail(s);
    for (const auto& s : compare_brackets(lie, quant)) tables.fail(s);
    out.push_back(tables.res);
    return out;
}

}  // namespace mpqg
