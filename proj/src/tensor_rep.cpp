#include "mpqg/tensor_rep.hpp"

namespace mpqg {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

std::string idx(int i) { return std::to_string(i + 1); }

std::string word_str(const Word& J) {
    std::string s = "v(";
    for (std::size_t k = 0; k < J.size(); ++k) s += (k ? "," : "") + idx(J[k]);
    return s + ")";
}

}  // namespace

void RepVector::add(const Word& J, const TruncLaurent& c) {
    if (c.is_zero()) return;
    auto it = terms.find(J);
    if (it == terms.end()) {
        terms.emplace(J, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
}

RepVector& RepVector::operator+=(const RepVector& o) {
    for (const auto& [J, c] : o.terms) add(J, c);
    return *this;
}

RepVector& RepVector::operator-=(const RepVector& o) {
    for (const auto& [J, c] : o.terms) add(J, -c);
    return *this;
}

RepVector RepVector::scaled(const TruncLaurent& c) const {
    RepVector r;
    for (const auto& [J, d] : terms) r.add(J, c * d);
    return r;
}

bool RepVector::is_zero_to(int n) const {
    for (const auto& [J, c] : terms)
        if (!c.is_zero_to(n)) return false;
    return true;
}

TensorRep::TensorRep(QContext& ctx, const LMat& lambda, Kind kind) : ctx_(ctx), lambda_(lambda), kind_(kind) {}

TruncLaurent TensorRep::weight(const Word& J, int g) const {
    TruncLaurent w = lambda_(0, g);
    for (int j : J) {
        if (kind_ == Kind::Lowering) w -= ctx_.alpha(j, g);
        else w += ctx_.alpha(j, g);
    }
    return w;
}

TruncLaurent TensorRep::removal(int i, const Word& tail) {
    auto key = std::make_pair(i, tail);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const auto& R = ctx_.realization();
    const int N = ctx_.order();
    // lambda(T) -+ alpha_tail(T) for T = T_i^+ and T_i^-.
    TruncLaurent lp(0), lm(0), ap(0), am(0);
    for (int g = 0; g < R.t; ++g) {
        lp += lambda_(0, g) * R.Tp(i, g);
        lm += lambda_(0, g) * R.Tm(i, g);
        for (int j : tail) {
            ap += ctx_.alpha(j, g) * R.Tp(i, g);
            am += ctx_.alpha(j, g) * R.Tm(i, g);
        }
    }
    // Lowering: q^{lambda(T+) - a(T+)} - q^{-lambda(T-) + a(T-)}.
    // Raising:  q^{-lambda(T-) - a(T-)} - q^{lambda(T+) + a(T+)}.
    TruncLaurent num = kind_ == Kind::Lowering ? qpow(lp - ap, N + 1) - qpow(am - lm, N + 1)
                                               : qpow(-lm - am, N + 1) - qpow(lp + ap, N + 1);
    int d = R.P.cartan.d[sz(i)];
    TruncLaurent den = qpow(TruncLaurent(d), N + 1) - qpow(TruncLaurent(-d), N + 1);
    TruncLaurent c = (ts_div_h(num, 1) * ts_inv(ts_div_h(den, 1), N)).truncated(N);
    return memo_.emplace(key, c).first->second;
}

RepVector TensorRep::remove(int i, const RepVector& v) {
    RepVector r;
    for (const auto& [J, c] : v.terms)
        for (std::size_t l = 0; l < J.size(); ++l) {
            if (J[l] != i) continue;
            Word hat = J;
            hat.erase(hat.begin() + static_cast<long>(l));
            Word tail(J.begin() + static_cast<long>(l) + 1, J.end());
            r.add(hat, ctx_.cut(c * removal(i, tail)));
        }
    return r;
}

RepVector TensorRep::apply(const Sym& g, const RepVector& v) {
    RepVector r;
    switch (g.kind) {
        case 'H':
            for (const auto& [J, c] : v.terms) r.add(J, ctx_.cut(c * weight(J, g.index)));
            return r;
        case 'E':
        case 'F': {
            bool prepend = (g.kind == 'F') == (kind_ == Kind::Lowering);
            if (!prepend) return remove(g.index, v);
            for (const auto& [J, c] : v.terms) {
                Word K{g.index};
                K.insert(K.end(), J.begin(), J.end());
                r.add(K, c);
            }
            return r;
        }
        default:
            throw UnsupportedArgument(std::string("generator kind ") + g.kind);
    }
}

RepVector TensorRep::apply(const UElem& x, const RepVector& v) {
    RepVector out;
    for (const auto& [m, c] : x.terms) {
        RepVector w = v;
        for (auto it = m.e.rbegin(); it != m.e.rend(); ++it) w = apply(Sym{'E', *it}, w);
        for (std::size_t g = 0; g < m.h.size(); ++g)
            for (int k = 0; k < m.h[g]; ++k) w = apply(Sym{'H', static_cast<int>(g)}, w);
        for (auto it = m.f.rbegin(); it != m.f.rend(); ++it) w = apply(Sym{'F', *it}, w);
        out += w.scaled(c);
    }
    for (auto& [J, c] : out.terms) c = ctx_.cut(c);
    return out;
}

std::vector<CheckResult> representation_check(QContext& ctx, const LMat& lambda, int max_len) {
    const int n = ctx.n(), t = ctx.t(), N = ctx.order();
    std::vector<Word> basis{Word{}}, layer{Word{}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const auto& w : layer)
            for (int i = 0; i < n; ++i) {
                Word v = w;
                v.push_back(i);
                next.push_back(v);
            }
        basis.insert(basis.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    std::vector<CheckResult> out;
    for (auto kind : {TensorRep::Kind::Lowering, TensorRep::Kind::Raising}) {
        TensorRep rep(ctx, lambda, kind);
        CheckResult res{kind == TensorRep::Kind::Lowering ? "lowering_representation" : "raising_representation",
                        true, ""};
        auto expect_zero = [&](const RepVector& v, const std::string& what, const Word& J) {
            if (res.ok && !v.is_zero_to(N)) {
                res.ok = false;
                res.witness = what + " on " + word_str(J);
            }
        };
        for (const Word& J : basis) {
            RepVector v;
            v.add(J, TruncLaurent(1));
            auto act = [&](const Sym& s, const RepVector& w) { return rep.apply(s, w); };
            for (int g = 0; g < t; ++g) {
                Sym H{'H', g};
                for (int k = 0; k < t; ++k) {
                    Sym H2{'H', k};
                    expect_zero(act(H, act(H2, v)) - act(H2, act(H, v)), "[H" + idx(g) + ",H" + idx(k) + "]", J);
                }
                for (int j = 0; j < n; ++j) {
                    Sym E{'E', j}, F{'F', j};
                    RepVector c = act(H, act(E, v)) - act(E, act(H, v));
                    expect_zero(c - act(E, v).scaled(ctx.alpha(j, g)), "[H" + idx(g) + ",E" + idx(j) + "]", J);
                    c = act(H, act(F, v)) - act(F, act(H, v));
                    expect_zero(c + act(F, v).scaled(ctx.alpha(j, g)), "[H" + idx(g) + ",F" + idx(j) + "]", J);
                }
            }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Sym E{'E', i}, F{'F', j};
                    RepVector c = act(E, act(F, v)) - act(F, act(E, v));
                    if (i == j) c -= rep.apply(ctx.ef_rhs(i), v);
                    expect_zero(c, "[E" + idx(i) + ",F" + idx(j) + "]", J);
                }
        }
        out.push_back(res);
    }
    return out;
}

}  // namespace mpqg
