#include "mpqg/pairing.hpp"

#include <functional>

namespace mpqg {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

void add_to(DPoly& p, const DWord& w, const TruncLaurent& c) {
    if (c.is_zero()) return;
    auto it = p.find(w);
    if (it == p.end()) {
        p.emplace(w, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
}

DWord cat(const DWord& a, const DWord& b) {
    DWord r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

DPoly pmul(const DPoly& a, const DPoly& b, int N) {
    DPoly r;
    for (const auto& [x, c] : a)
        for (const auto& [y, d] : b) add_to(r, cat(x, y), (c * d).truncated(N));
    return r;
}

int count_kind(const DWord& w, DLetter::Kind k) {
    return static_cast<int>(std::count_if(w.begin(), w.end(), [k](const DLetter& l) { return l.kind == k; }));
}

std::string idx(int i) { return std::to_string(i + 1); }

}  // namespace

std::string dword_str(const DWord& w) {
    if (w.empty()) return "1";
    std::string s;
    for (const auto& l : w) {
        if (!s.empty()) s += "*";
        switch (l.kind) {
            case DLetter::Tp: s += "T+" + idx(l.index); break;
            case DLetter::E: s += "E" + idx(l.index); break;
            case DLetter::Tb: s += "Tb" + idx(l.index); break;
            case DLetter::Fb: s += "Fb" + idx(l.index); break;
        }
    }
    return s;
}

SkewPairing::SkewPairing(const Realization& R, int order) : R_(R), N_(order) {
    for (int i = 0; i < R.n(); ++i) {
        int d = R.P.cartan.d[sz(i)];
        TruncLaurent qq = qpow(TruncLaurent(d), N_ + 2) - qpow(TruncLaurent(-d), N_ + 2);
        ef_.push_back(ts_inv(ts_div_h(qq, 1), N_).truncated(N_));
    }
}

DPoly SkewPairing::K(int i, int degree) const {
    DPoly r;
    DWord w;
    TruncLaurent c(1);
    for (int m = 0; m <= degree && m <= N_; ++m) {
        add_to(r, w, c.truncated(N_));
        w.push_back({DLetter::Tp, i});
        c = c * TruncLaurent::hbar() * Rational(1, m + 1);
    }
    return r;
}

DPoly SkewPairing::L(int j, int degree) const {
    DPoly r;
    DWord w;
    Rational c(1);
    for (int m = 0; m <= degree; ++m) {
        add_to(r, w, TruncLaurent(c));
        w.push_back({DLetter::Tb, j});
        c = -c / Rational(m + 1);
    }
    return r;
}

DPoly SkewPairing::act_K(int i, const DWord& y) const {
    DPoly r{{DWord{}, TruncLaurent(1)}};
    for (const auto& l : y) {
        DPoly f{{DWord{l}, TruncLaurent(1)}};
        if (l.kind == DLetter::Tb) add_to(f, DWord{}, TruncLaurent::hbar() * R_.P.P(i, l.index));
        r = pmul(r, f, N_);
    }
    return r;
}

DPoly SkewPairing::act(const DLetter& a, const DPoly& y, int tcount) const {
    DPoly r;
    for (const auto& [w, c] : y)
        for (std::size_t k = 0; k < w.size(); ++k) {
            const DLetter& b = w[k];
            DWord pre(w.begin(), w.begin() + static_cast<long>(k));
            DWord post(w.begin() + static_cast<long>(k) + 1, w.end());
            if (a.kind == DLetter::Tp && b.kind == DLetter::Tb) {
                add_to(r, cat(pre, post), (c * R_.P.P(a.index, b.index)).truncated(N_));
            } else if (a.kind == DLetter::E && b.kind == DLetter::Fb && b.index == a.index) {
                DPoly tail = pmul(L(a.index, tcount + N_), act_K(a.index, post), N_);
                for (const auto& [x, d] : tail) add_to(r, cat(pre, x), (c * ef_value(a.index) * d).truncated(N_));
            }
        }
    // A Tbar letter left over must be consumed by a later T^+ or, at the cost of one hbar, by a later K.
    for (auto it = r.begin(); it != r.end();) {
        int v = it->second.valuation();
        if (count_kind(it->first, DLetter::Tb) > tcount + N_ - v) it = r.erase(it);
        else ++it;
    }
    return r;
}

TruncLaurent SkewPairing::operator()(const DWord& x, const DWord& y) const {
    DPoly p{{y, TruncLaurent(1)}};
    for (std::size_t s = 0; s < x.size(); ++s) {
        if (!x[s].positive()) throw UnsupportedArgument("left argument must use T+ and E letters");
        int rem = count_kind(DWord(x.begin() + static_cast<long>(s) + 1, x.end()), DLetter::Tp);
        p = act(x[s], p, rem);
        if (p.empty()) return TruncLaurent(0);
    }
    auto it = p.find(DWord{});
    return it == p.end() ? TruncLaurent(0) : it->second.truncated(N_);
}

TruncLaurent SkewPairing::operator()(const DPoly& x, const DPoly& y) const {
    TruncLaurent r(0);
    for (const auto& [a, c] : x)
        for (const auto& [b, d] : y) {
            for (const auto& l : b)
                if (l.positive()) throw UnsupportedArgument("right argument must use barred letters");
            r += c * d * (*this)(a, b);
        }
    return r.truncated(N_);
}

DTensor SkewPairing::coproduct(const DWord& w, int exp_degree) const {
    DTensor r{{{DWord{}, DWord{}}, TruncLaurent(1)}};
    for (const auto& l : w) {
        DTensor f;
        switch (l.kind) {
            case DLetter::Tp:
            case DLetter::Tb:
                f[{DWord{l}, DWord{}}] = TruncLaurent(1);
                f[{DWord{}, DWord{l}}] = TruncLaurent(1);
                break;
            case DLetter::E:
                f[{DWord{l}, DWord{}}] = TruncLaurent(1);
                for (const auto& [k, c] : K(l.index, exp_degree)) f[{k, DWord{l}}] += c;
                break;
            case DLetter::Fb:
                for (const auto& [k, c] : L(l.index, exp_degree)) f[{DWord{l}, k}] += c;
                f[{DWord{}, DWord{l}}] += TruncLaurent(1);
                break;
        }
        DTensor next;
        for (const auto& [a, c] : r)
            for (const auto& [b, d] : f) {
                TruncLaurent e = (c * d).truncated(N_);
                if (e.is_zero()) continue;
                next[{cat(a.first, b.first), cat(a.second, b.second)}] += e;
            }
        r = std::move(next);
    }
    return r;
}

UElem SkewPairing::to_element(QContext& ctx, const DPoly& x) const {
    const TruncLaurent h = TruncLaurent::hbar();
    UElem r;
    for (const auto& [w, c] : x) {
        std::vector<UElem> fs;
        for (const auto& l : w) switch (l.kind) {
                case DLetter::Tp: fs.push_back(ctx.toral(R_.Tp.row(l.index))); break;
                case DLetter::E: fs.push_back(ctx.E(l.index)); break;
                case DLetter::Tb: fs.push_back(ctx.toral(R_.Tm.row(l.index)).scaled(h)); break;
                case DLetter::Fb: fs.push_back(ctx.F(l.index).scaled(h)); break;
            }
        r += ctx.mul(fs).scaled(c);
    }
    return r.truncated(ctx.order());
}

std::vector<CheckResult> pairing_generator_table(const SkewPairing& pi) {
    const CartanDatum& A = pi.realization().P.cartan;
    const LMat& P = pi.realization().P.P;
    const int n = A.n();
    CheckResult res{"generator_table", true, ""};
    auto expect = [&](const DWord& x, const DWord& y, const TruncLaurent& want) {
        TruncLaurent got = pi(x, y);
        if (res.ok && !got.equals_to(want, pi.order())) {
            res.ok = false;
            res.witness = "pi(" + dword_str(x) + ", " + dword_str(y) + ") = " + got.str() + ", expected " + want.str();
        }
    };
    expect({}, {}, TruncLaurent(1));
    for (int i = 0; i < n; ++i) {
        DLetter T{DLetter::Tp, i}, E{DLetter::E, i}, Tb{DLetter::Tb, i}, Fb{DLetter::Fb, i};
        expect({T}, {}, TruncLaurent(0));
        expect({}, {Tb}, TruncLaurent(0));
        expect({E}, {}, TruncLaurent(0));
        expect({}, {Fb}, TruncLaurent(0));
        for (int j = 0; j < n; ++j) {
            DLetter Tbj{DLetter::Tb, j}, Fbj{DLetter::Fb, j};
            expect({T}, {Tbj}, P(i, j));
            expect({T}, {Fbj}, TruncLaurent(0));
            expect({E}, {Tbj}, TruncLaurent(0));
            TruncLaurent ef = pi({E}, {Fbj});
            if (i != j) {
                expect({E}, {Fbj}, TruncLaurent(0));
            } else if (res.ok && ef.constant_term() != Rational(1, 2 * A.d[sz(i)])) {
                res.ok = false;
                res.witness = "pi(E, Fbar) mod hbar = " + ef.constant_term().str();
            }
        }
    }
    return {res};
}

namespace {

// All words of length <= max_len over the given letters.
std::vector<DWord> all_words(const std::vector<DLetter>& letters, int max_len) {
    std::vector<DWord> out{DWord{}};
    std::vector<DWord> layer{DWord{}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<DWord> next;
        for (const auto& w : layer)
            for (const auto& l : letters) {
                DWord v = w;
                v.push_back(l);
                next.push_back(v);
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

}  // namespace

std::vector<CheckResult> pairing_radical_check(const SkewPairing& pi, QContext& ctx, int max_len) {
    const auto& R = ctx.realization();
    const int n = R.n();
    const int N = pi.order();
    std::vector<DLetter> plus, minus;
    for (int i = 0; i < n; ++i) {
        plus.push_back({DLetter::Tp, i});
        plus.push_back({DLetter::E, i});
        minus.push_back({DLetter::Tb, i});
        minus.push_back({DLetter::Fb, i});
    }
    CheckResult left{"left_radical", true, ""}, right{"right_radical", true, ""};
    auto test = [&](CheckResult& res, const std::string& name, const DPoly& rel, bool rel_left, int len) {
        for (const DWord& w : all_words(rel_left ? minus : plus, len)) {
            DPoly other{{w, TruncLaurent(1)}};
            TruncLaurent v = rel_left ? pi(rel, other) : pi(other, rel);
            if (!v.is_zero_to(N)) {
                if (res.ok) res.witness = name + " against " + dword_str(w) + ": " + v.str();
                res.ok = false;
                return;
            }
        }
    };
    const TruncLaurent h = TruncLaurent::hbar();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            DLetter Ti{DLetter::Tp, i}, Tj{DLetter::Tp, j}, Ej{DLetter::E, j};
            DLetter Bi{DLetter::Tb, i}, Bj{DLetter::Tb, j}, Fj{DLetter::Fb, j};
            DPoly tt{{{Ti, Tj}, TruncLaurent(1)}};
            add_to(tt, {Tj, Ti}, TruncLaurent(-1));
            test(left, "T+" + idx(i) + "T+" + idx(j) + " commutator", tt, true, max_len);
            DPoly te{{{Ti, Ej}, TruncLaurent(1)}};
            add_to(te, {Ej, Ti}, TruncLaurent(-1));
            add_to(te, {Ej}, -R.P.P(i, j));
            test(left, "T+" + idx(i) + "E" + idx(j) + " relation", te, true, max_len);
            DPoly bb{{{Bi, Bj}, TruncLaurent(1)}};
            add_to(bb, {Bj, Bi}, TruncLaurent(-1));
            test(right, "Tb" + idx(i) + "Tb" + idx(j) + " commutator", bb, false, max_len);
            // Tbar_i Fbar_j - Fbar_j Tbar_i = -hbar p_ji Fbar_j
            DPoly bf{{{Bi, Fj}, TruncLaurent(1)}};
            add_to(bf, {Fj, Bi}, TruncLaurent(-1));
            add_to(bf, {Fj}, h * R.P.P(j, i));
            test(right, "Tb" + idx(i) + "Fb" + idx(j) + " relation", bf, false, max_len);
            if (i == j) continue;
            int len = std::max(max_len, 2 - R.P.cartan.A(i, j));
            for (bool pos : {true, false}) {
                DPoly s;
                for (const auto& [w, c] : ctx.words(pos).serre_element(i, j)) {
                    DWord dw;
                    for (int l : w) dw.push_back({pos ? DLetter::E : DLetter::Fb, l});
                    add_to(s, dw, c);
                }
                test(pos ? left : right, std::string(pos ? "E" : "Fb") + "-Serre " + idx(i) + idx(j), s, pos, len);
            }
        }
    return {left, right};
}

std::vector<CheckResult> double_relations_check(const Realization& R, int N) {
    QContext ctx(R, N + 1);
    SkewPairing pi(R, N + 1);
    const int n = R.n();
    const int deg = N + 2;
    const TruncLaurent h = TruncLaurent::hbar();
    CheckResult pres{"cross_relations_presentation", true, ""}, eng{"cross_relations_engine", true, ""},
        unbar{"unbarred_ef", true, ""};
    auto fail = [](CheckResult& r, const std::string& w) {
        if (r.ok) r.witness = w;
        r.ok = false;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (DLetter y : {DLetter{DLetter::Tp, i}, DLetter{DLetter::E, i}})
                for (DLetter x : {DLetter{DLetter::Tb, j}, DLetter{DLetter::Fb, j}}) {
                    DTensor dx = pi.coproduct({x}, deg), dy = pi.coproduct({y}, deg);
                    DPoly lhs, rhs;
                    for (const auto& [xs, cx] : dx)
                        for (const auto& [ys, cy] : dy) {
                            TruncLaurent a = pi(ys.second, xs.second);
                            if (!a.is_zero()) add_to(lhs, cat(xs.first, ys.first), (cx * cy * a).truncated(N + 1));
                            TruncLaurent b = pi(ys.first, xs.first);
                            if (!b.is_zero()) add_to(rhs, cat(ys.second, xs.second), (cx * cy * b).truncated(N + 1));
                        }
                    // y x - x y = (lhs - x y) - (rhs - y x)
                    DPoly d = lhs;
                    add_to(d, {x, y}, TruncLaurent(-1));
                    for (const auto& [w, c] : rhs) add_to(d, w, -c);
                    add_to(d, {y, x}, TruncLaurent(1));
                    std::string tag = dword_str({y}) + "," + dword_str({x});

                    DPoly want;
                    if (y.kind == DLetter::E && x.kind == DLetter::Tb) {
                        add_to(want, {y}, -h * R.P.P(i, j));
                    } else if (y.kind == DLetter::Tp && x.kind == DLetter::Fb) {
                        add_to(want, {x}, -R.P.P(i, j));
                    } else if (y.kind == DLetter::E && x.kind == DLetter::Fb && i == j) {
                        for (const auto& [w, c] : pi.K(i, deg)) add_to(want, w, c * pi.ef_value(i));
                        for (const auto& [w, c] : pi.L(i, deg)) add_to(want, w, -c * pi.ef_value(i));
                    }
                    UElem got = pi.to_element(ctx, d);
                    if (!got.equals_to(pi.to_element(ctx, want), N)) fail(pres, tag + ": " + describe_element(got, R.labels));
                    UElem X = pi.to_element(ctx, {{DWord{x}, TruncLaurent(1)}});
                    UElem Y = pi.to_element(ctx, {{DWord{y}, TruncLaurent(1)}});
                    if (!(ctx.mul(Y, X) - ctx.mul(X, Y)).equals_to(got, N)) fail(eng, tag);
                    if (y.kind == DLetter::E && x.kind == DLetter::Fb) {
                        UElem div;
                        for (const auto& [m, c] : got.terms) div.add(m, ts_div_h(c, 1));
                        UElem target = i == j ? ctx.ef_rhs(i) : UElem{};
                        if (!div.equals_to(target, N)) fail(unbar, tag);
                    }
                }
    return {pres, eng, unbar};
}

}  // namespace mpqg
