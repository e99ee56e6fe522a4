#include "mpqg/liebialg.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace mpqg {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

NCPoly nc_mul(const NCPoly& a, const NCPoly& b) {
    NCPoly out;
    for (const auto& [u, x] : a)
        for (const auto& [v, y] : b) {
            Word w = u;
            w.insert(w.end(), v.begin(), v.end());
            out[w] += x * y;
        }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

NCPoly letter(int i) { return NCPoly{{Word{i}, Rational(1)}}; }

std::vector<int> multidegree(const Word& w, int n) {
    std::vector<int> m(sz(n), 0);
    for (int l : w) ++m[sz(l)];
    return m;
}

// All words with the given letter multiplicities, in lexicographic order.
std::vector<Word> words_of(const std::vector<int>& beta) {
    Word w;
    for (std::size_t i = 0; i < beta.size(); ++i) w.insert(w.end(), sz(beta[i]), static_cast<int>(i));
    std::vector<Word> out;
    do out.push_back(w);
    while (std::next_permutation(w.begin(), w.end()));
    return out;
}

struct Slice {
    std::vector<Word> cols;
    std::map<Word, int> index;
    std::vector<NCPoly> ideal;  // row-reduced spanning set of the ideal in this degree
    std::vector<int> basis;     // indices into NilpotentPart::words
};

QVec to_vec(const Slice& s, const NCPoly& p) {
    QVec v = QVec::Constant(static_cast<Eigen::Index>(s.cols.size()), Rational(0));
    for (const auto& [w, c] : p) v(s.index.at(w)) = c;
    return v;
}

QMat stack(const std::vector<QVec>& rows, std::size_t width) {
    QMat m = zeros<Rational>(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r) m.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    return m;
}

std::string word_label(const Word& w, char gen) {
    std::string s = std::string(1, gen) + std::to_string(w[0] + 1);
    for (std::size_t k = 1; k < w.size(); ++k) s = "[" + s + "," + gen + std::to_string(w[k] + 1) + "]";
    return s;
}

bool is_zero(const QVec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!v(i).is_zero()) return false;
    return true;
}

bool is_zero(const QMat& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) return false;
    return true;
}

}  // namespace

NCPoly nc_commutator(const NCPoly& a, const NCPoly& b) {
    NCPoly out = nc_mul(a, b);
    for (const auto& [w, c] : nc_mul(b, a)) out[w] -= c;
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

NCPoly left_normed(const Word& w) {
    NCPoly p = letter(w.at(0));
    for (std::size_t k = 1; k < w.size(); ++k) p = nc_commutator(p, letter(w[k]));
    return p;
}

NCPoly serre_poly(int i, int j, int k) {
    NCPoly p = letter(j);
    for (int s = 0; s < k; ++s) p = nc_commutator(letter(i), p);
    return p;
}

int NilpotentPart::find(const Word& w) const {
    auto it = std::find(words.begin(), words.end(), w);
    return it == words.end() ? -1 : static_cast<int>(it - words.begin());
}

int default_bound(const CartanDatum& A) {
    const int n = A.n();
    std::set<std::vector<int>> roots;
    std::vector<std::vector<int>> todo;
    for (int i = 0; i < n; ++i) {
        std::vector<int> e(sz(n), 0);
        e[sz(i)] = 1;
        todo.push_back(e);
        roots.insert(e);
    }
    while (!todo.empty()) {
        auto b = todo.back();
        todo.pop_back();
        for (int i = 0; i < n; ++i) {
            int c = 0;
            for (int j = 0; j < n; ++j) c += b[sz(j)] * A.A(i, j);
            auto s = b;
            s[sz(i)] -= c;
            if (roots.insert(s).second) {
                if (roots.size() > 2000) throw UnsupportedArgument("Cartan matrix is not of finite type");
                todo.push_back(s);
            }
        }
    }
    int h = 1;
    for (const auto& r : roots) h = std::max(h, std::accumulate(r.begin(), r.end(), 0));
    return h;
}

NilpotentPart build_nilpotent(const CartanDatum& A, int bound) {
    if (bound < 1) throw UnsupportedArgument("degree bound must be at least 1");
    const int n = A.n();
    NilpotentPart out;
    out.n = n;
    out.bound = bound;
    std::map<std::vector<int>, Slice> slices;
    auto slice = [&](const std::vector<int>& beta) -> Slice& {
        auto it = slices.find(beta);
        if (it != slices.end()) return it->second;
        Slice s;
        s.cols = words_of(beta);
        for (std::size_t c = 0; c < s.cols.size(); ++c) s.index[s.cols[c]] = static_cast<int>(c);
        return slices.emplace(beta, std::move(s)).first->second;
    };

    // Serre elements by multidegree.
    std::map<std::vector<int>, std::vector<NCPoly>> serre;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int k = 1 - A.A(i, j);
            std::vector<int> beta(sz(n), 0);
            beta[sz(i)] = k;
            beta[sz(j)] = 1;
            if (k + 1 <= bound + 1) serre[beta].push_back(serre_poly(i, j, k));
        }

    std::vector<std::vector<int>> prev;  // multidegrees of the previous total degree
    for (int k = 1; k <= bound + 1; ++k) {
        std::set<std::vector<int>> degs;
        if (k == 1) {
            for (int i = 0; i < n; ++i) {
                std::vector<int> e(sz(n), 0);
                e[sz(i)] = 1;
                degs.insert(e);
            }
        } else {
            for (const auto& b : prev)
                for (int l = 0; l < n; ++l) {
                    auto c = b;
                    ++c[sz(l)];
                    degs.insert(c);
                }
        }
        for (const auto& beta : degs) {
            Slice& s = slice(beta);
            // Ideal: ad E_l of the ideal one degree lower, plus Serre elements.
            std::vector<QVec> rows;
            for (int l = 0; l < n; ++l) {
                if (beta[sz(l)] == 0 || k == 1) continue;
                auto lower = beta;
                --lower[sz(l)];
                auto it = slices.find(lower);
                if (it == slices.end()) continue;
                for (const auto& p : it->second.ideal) rows.push_back(to_vec(s, nc_commutator(letter(l), p)));
            }
            if (auto it = serre.find(beta); it != serre.end())
                for (const auto& p : it->second) rows.push_back(to_vec(s, p));
            QMat I = stack(rows, s.cols.size());
            rref(I);
            s.ideal.clear();
            std::vector<QVec> span;
            for (Eigen::Index r = 0; r < I.rows(); ++r) {
                QVec v = I.row(r).transpose();
                if (is_zero(v)) continue;
                span.push_back(v);
                NCPoly p;
                for (Eigen::Index c = 0; c < v.size(); ++c)
                    if (!v(c).is_zero()) p[s.cols[sz(static_cast<int>(c))]] = v(c);
                s.ideal.push_back(p);
            }
            // Candidates [b, E_l] with b a basis element, in lexicographic word order.
            std::vector<Word> cands;
            if (k == 1) {
                cands.push_back(Word{static_cast<int>(std::find(beta.begin(), beta.end(), 1) - beta.begin())});
            } else {
                for (int a = 0; a < out.dim(); ++a) {
                    if (out.height(a) != k - 1) continue;
                    for (int l = 0; l < n; ++l) {
                        Word w = out.words[sz(a)];
                        w.push_back(l);
                        if (multidegree(w, n) == beta) cands.push_back(w);
                    }
                }
                std::sort(cands.begin(), cands.end());
            }
            int r0 = rank(stack(span, s.cols.size()));
            for (const auto& w : cands) {
                span.push_back(to_vec(s, left_normed(w)));
                int r1 = rank(stack(span, s.cols.size()));
                if (r1 == r0) {
                    span.pop_back();
                    continue;
                }
                r0 = r1;
                if (k == bound + 1) {
                    out.truncated = true;
                    break;
                }
                s.basis.push_back(out.dim());
                out.words.push_back(w);
                out.roots.push_back(beta);
            }
        }
        prev.assign(degs.begin(), degs.end());
    }

    // Structure constants: express commutators in the basis modulo the ideal.
    const int m = out.dim();
    out.bracket.assign(sz(m), std::vector<QVec>(sz(m), QVec::Constant(m, Rational(0))));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            if (out.height(a) + out.height(b) > bound) continue;
            std::vector<int> beta(sz(n));
            for (int i = 0; i < n; ++i) beta[sz(i)] = out.roots[sz(a)][sz(i)] + out.roots[sz(b)][sz(i)];
            NCPoly c = nc_commutator(left_normed(out.words[sz(a)]), left_normed(out.words[sz(b)]));
            if (c.empty()) continue;
            Slice& s = slice(beta);
            std::vector<QVec> rows;
            for (int e : s.basis) rows.push_back(to_vec(s, left_normed(out.words[sz(e)])));
            for (const auto& p : s.ideal) rows.push_back(to_vec(s, p));
            QMat M = stack(rows, s.cols.size());
            QMat x;
            QMat rhs = to_vec(s, c).transpose();
            if (!solve_left(M, rhs, x)) throw JacobiFailure("bracket leaves the free Lie algebra");
            for (std::size_t e = 0; e < s.basis.size(); ++e)
                out.bracket[sz(a)][sz(b)](s.basis[e]) = x(0, static_cast<Eigen::Index>(e));
        }
    return out;
}

LieRealization reduce_mod_h(const Realization& R) {
    LieRealization L;
    L.cartan = R.P.cartan;
    L.P = const_part(R.P.P);
    L.t = R.t;
    L.labels = R.labels;
    L.Tp = const_part(R.Tp);
    L.Tm = const_part(R.Tm);
    L.Amat = const_part(R.Amat);
    return L;
}

std::vector<int> LieBasis::root(int b) const {
    int p = part(b);
    if (p == 0) return std::vector<int>(sz(nil.n), 0);
    auto r = nil.roots[sz(p > 0 ? b - m() - t : b)];
    if (p < 0)
        for (int& x : r) x = -x;
    return r;
}

QVec MpLbA::unit(int a) const {
    QVec v = QVec::Constant(dim(), Rational(0));
    v(a) = Rational(1);
    return v;
}

QVec MpLbA::br(const QVec& x, const QVec& y) const {
    QVec out = QVec::Constant(dim(), Rational(0));
    for (int a = 0; a < dim(); ++a) {
        if (x(a).is_zero()) continue;
        for (int b = 0; b < dim(); ++b) {
            if (y(b).is_zero()) continue;
            const QVec& e = bracket[sz(a)][sz(b)];
            Rational c = x(a) * y(b);
            for (int k = 0; k < dim(); ++k)
                if (!e(k).is_zero()) out(k) += c * e(k);
        }
    }
    return out;
}

QMat MpLbA::cob(const QVec& x) const {
    QMat out = zeros<Rational>(dim(), dim());
    for (int a = 0; a < dim(); ++a)
        if (!x(a).is_zero()) out += x(a) * cobracket[sz(a)];
    return out;
}

QMat MpLbA::ad(const QVec& x) const {
    QMat m = zeros<Rational>(dim(), dim());
    for (int a = 0; a < dim(); ++a) m.col(a) = br(x, unit(a));
    return m;
}

QMat MpLbA::ad2(const QVec& x, const QMat& c) const {
    QMat M = ad(x);
    return M * c + c * M.transpose();
}

QVec MpLbA::h_vector(const QMat& row) const {
    QVec v = QVec::Constant(dim(), Rational(0));
    for (int g = 0; g < basis.t; ++g) v(basis.h(g)) = row(0, g);
    return v;
}

MpLbA build_mplba(const Realization& R, int bound) { return build_mplba(reduce_mod_h(R), bound); }

MpLbA build_mplba(const LieRealization& R, int bound) {
    MpLbA g;
    g.R = R;
    g.bound = bound;
    g.basis.nil = build_nilpotent(R.cartan, bound);
    if (g.basis.nil.truncated)
        throw BoundTooSmall("n_+ is nonzero in degree " + std::to_string(bound + 1));
    g.basis.t = R.t;
    const LieBasis& B = g.basis;
    const int m = B.m(), t = R.t, n = R.n(), D = B.dim();
    for (int a = 0; a < m; ++a) g.basis.labels.push_back(word_label(B.nil.words[sz(a)], 'F'));
    for (int k = 0; k < t; ++k) g.basis.labels.push_back(R.labels[sz(k)]);
    for (int a = 0; a < m; ++a) g.basis.labels.push_back(word_label(B.nil.words[sz(a)], 'E'));

    const QVec zero = QVec::Constant(D, Rational(0));
    g.bracket.assign(sz(D), std::vector<QVec>(sz(D), zero));
    std::vector<std::vector<bool>> known(sz(D), std::vector<bool>(sz(D), true));
    auto root_on = [&](int a, int k) {
        Rational s(0);
        for (int j = 0; j < n; ++j) s += Rational(B.nil.roots[sz(a)][sz(j)]) * R.Amat(j, k);
        return s;
    };
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const QVec& c = B.nil.bracket[sz(a)][sz(b)];
            for (int e = 0; e < m; ++e) {
                g.bracket[sz(B.pos(a))][sz(B.pos(b))](B.pos(e)) = c(e);
                g.bracket[sz(B.neg(a))][sz(B.neg(b))](B.neg(e)) = c(e);
            }
            known[sz(B.pos(a))][sz(B.neg(b))] = false;
            known[sz(B.neg(b))][sz(B.pos(a))] = false;
        }
    for (int a = 0; a < m; ++a)
        for (int k = 0; k < t; ++k) {
            Rational w = root_on(a, k);
            g.bracket[sz(B.h(k))][sz(B.pos(a))](B.pos(a)) = w;
            g.bracket[sz(B.pos(a))][sz(B.h(k))](B.pos(a)) = -w;
            g.bracket[sz(B.h(k))][sz(B.neg(a))](B.neg(a)) = -w;
            g.bracket[sz(B.neg(a))][sz(B.h(k))](B.neg(a)) = w;
        }

    // [n_+, n_-] by Jacobi recursion on the bracketing words, anchored at [E_i, F_j].
    std::function<const QVec&(int, int)> entry;
    std::function<QVec(const QVec&, const QVec&)> brv = [&](const QVec& x, const QVec& y) {
        QVec out = zero;
        for (int a = 0; a < D; ++a) {
            if (x(a).is_zero()) continue;
            for (int b = 0; b < D; ++b) {
                if (y(b).is_zero()) continue;
                const QVec& e = entry(a, b);
                out += (x(a) * y(b)) * e;
            }
        }
        return out;
    };
    auto unit = [&](int a) {
        QVec v = zero;
        v(a) = Rational(1);
        return v;
    };
    auto split = [&](int a) {
        const Word& w = B.nil.words[sz(a)];
        return std::pair<int, int>{B.nil.find(Word(w.begin(), w.end() - 1)), w.back()};
    };
    // [E-word a, F-word b] via the E-side word.
    auto via_left = [&](int a, int b) {
        auto [a1, j] = split(a);
        QVec x1 = unit(B.pos(a1)), ej = unit(B.E(j)), y = unit(B.neg(b));
        return QVec(brv(x1, brv(ej, y)) - brv(ej, brv(x1, y)));
    };
    // ... and via the F-side word: [x, [y1, F_j]] = [[x, y1], F_j] + [y1, [x, F_j]].
    auto via_right = [&](int a, int b) {
        auto [b1, j] = split(b);
        QVec x = unit(B.pos(a)), y1 = unit(B.neg(b1)), fj = unit(B.F(j));
        return QVec(brv(brv(x, y1), fj) + brv(y1, brv(x, fj)));
    };
    entry = [&](int p, int q) -> const QVec& {
        if (known[sz(p)][sz(q)]) return g.bracket[sz(p)][sz(q)];
        if (B.part(p) < 0) {
            g.bracket[sz(p)][sz(q)] = -entry(q, p);
            known[sz(p)][sz(q)] = true;
            return g.bracket[sz(p)][sz(q)];
        }
        int a = p - B.pos(0), b = q - B.neg(0);
        QVec v = zero;
        bool sa = B.nil.height(a) == 1, sb = B.nil.height(b) == 1;
        if (sa && sb) {
            int i = B.nil.words[sz(a)][0], j = B.nil.words[sz(b)][0];
            if (i == j) {
                Rational c = Rational(1) / Rational(2 * R.cartan.d[sz(i)]);
                for (int k = 0; k < t; ++k) v(B.h(k)) = c * (R.Tp(i, k) + R.Tm(i, k));
            }
        } else if (!sa) {
            v = via_left(a, b);
            if (!sb && via_right(a, b) != v)
                throw JacobiFailure("[" + B.labels[sz(p)] + "," + B.labels[sz(q)] + "]");
        } else {
            v = via_right(a, b);
        }
        g.bracket[sz(p)][sz(q)] = v;
        known[sz(p)][sz(q)] = true;
        return g.bracket[sz(p)][sz(q)];
    };
    for (int p = 0; p < D; ++p)
        for (int q = 0; q < D; ++q) entry(p, q);

    // Cobracket on generators, then by the cocycle rule along the words.
    g.cobracket.assign(sz(D), zeros<Rational>(D, D));
    for (int a = 0; a < m; ++a) {
        const Word& w = B.nil.words[sz(a)];
        if (w.size() == 1) {
            int i = w[0];
            for (int k = 0; k < t; ++k) {
                g.cobracket[sz(B.pos(a))](B.h(k), B.pos(a)) = R.Tp(i, k);
                g.cobracket[sz(B.pos(a))](B.pos(a), B.h(k)) = -R.Tp(i, k);
                g.cobracket[sz(B.neg(a))](B.h(k), B.neg(a)) = R.Tm(i, k);
                g.cobracket[sz(B.neg(a))](B.neg(a), B.h(k)) = -R.Tm(i, k);
            }
        } else {
            auto [a1, j] = split(a);
            g.cobracket[sz(B.pos(a))] = g.ad2(g.unit(B.pos(a1)), g.cobracket[sz(B.E(j))]) -
                                        g.ad2(g.unit(B.E(j)), g.cobracket[sz(B.pos(a1))]);
            g.cobracket[sz(B.neg(a))] = g.ad2(g.unit(B.neg(a1)), g.cobracket[sz(B.F(j))]) -
                                        g.ad2(g.unit(B.F(j)), g.cobracket[sz(B.neg(a1))]);
        }
    }
    return g;
}

std::vector<std::string> check_bialgebra(const MpLbA& g) {
    std::vector<std::string> bad;
    const int D = g.dim();
    const auto& L = g.basis.labels;
    auto lab = [&](int a) { return L[sz(a)]; };
    for (int a = 0; a < D; ++a)
        for (int b = a; b < D; ++b)
            if (!is_zero(QVec(g.bracket[sz(a)][sz(b)] + g.bracket[sz(b)][sz(a)])))
                bad.push_back("antisymmetry [" + lab(a) + "," + lab(b) + "]");
    for (int a = 0; a < D; ++a)
        for (int b = a + 1; b < D; ++b)
            for (int c = b + 1; c < D; ++c) {
                QVec s = g.br(g.unit(a), g.bracket[sz(b)][sz(c)]) + g.br(g.unit(b), g.bracket[sz(c)][sz(a)]) +
                         g.br(g.unit(c), g.bracket[sz(a)][sz(b)]);
                if (!is_zero(s)) bad.push_back("jacobi (" + lab(a) + "," + lab(b) + "," + lab(c) + ")");
            }
    for (int x = 0; x < D; ++x) {
        const QMat& C = g.cobracket[sz(x)];
        if (!is_zero(QMat(C + C.transpose()))) bad.push_back("cobracket antisymmetry " + lab(x));
        // (delta (x) id) delta(x), then the cyclic sum.
        std::vector<Rational> T(sz(D * D * D), Rational(0));
        auto at = [&](int p, int q, int r) -> Rational& { return T[sz((p * D + q) * D + r)]; };
        for (int a = 0; a < D; ++a)
            for (int r = 0; r < D; ++r) {
                if (C(a, r).is_zero()) continue;
                const QMat& Ca = g.cobracket[sz(a)];
                for (int p = 0; p < D; ++p)
                    for (int q = 0; q < D; ++q)
                        if (!Ca(p, q).is_zero()) at(p, q, r) += C(a, r) * Ca(p, q);
            }
        bool ok = true;
        for (int p = 0; p < D && ok; ++p)
            for (int q = 0; q < D && ok; ++q)
                for (int r = 0; r < D && ok; ++r)
                    if (!(at(p, q, r) + at(q, r, p) + at(r, p, q)).is_zero()) ok = false;
        if (!ok) bad.push_back("co-jacobi " + lab(x));
    }
    std::vector<QMat> ads;
    for (int a = 0; a < D; ++a) ads.push_back(g.ad(g.unit(a)));
    for (int a = 0; a < D; ++a)
        for (int b = a + 1; b < D; ++b) {
            QMat lhs = g.cob(g.bracket[sz(a)][sz(b)]);
            const QMat &Ca = g.cobracket[sz(a)], &Cb = g.cobracket[sz(b)];
            QMat rhs = ads[sz(a)] * Cb + Cb * ads[sz(a)].transpose() - ads[sz(b)] * Ca - Ca * ads[sz(b)].transpose();
            if (!is_zero(QMat(lhs - rhs))) bad.push_back("cocycle (" + lab(a) + "," + lab(b) + ")");
        }
    return bad;
}

MpLbA lie_twist_deform(const MpLbA& g, const LieTwist& theta) {
    const int t = g.basis.t;
    if (theta.Theta.rows() != t || theta.Theta.cols() != t) throw DimensionMismatch("Theta must be t x t");
    if (!is_antisymmetric(theta.Theta)) throw NotAntisymmetric("Theta");
    MpLbA out = g;
    QMat J = zeros<Rational>(g.dim(), g.dim());
    for (int a = 0; a < t; ++a)
        for (int b = 0; b < t; ++b) J(g.basis.h(a), g.basis.h(b)) = theta.Theta(a, b);
    for (int x = 0; x < g.dim(); ++x) out.cobracket[sz(x)] = g.cobracket[sz(x)] - g.ad2(g.unit(x), J);
    out.R.Tp = g.R.Tp - g.R.Amat * theta.Theta;
    out.R.Tm = g.R.Tm + g.R.Amat * theta.Theta;
    out.R.P = g.R.P - g.R.Amat * theta.Theta * g.R.Amat.transpose();
    return out;
}

MpLbA lie_cocycle_deform(const MpLbA& g, const LieCocycle& chi) {
    const int t = g.basis.t, D = g.dim();
    const QMat& X = chi.chi;
    if (X.rows() != t || X.cols() != t) throw DimensionMismatch("chi must be t x t");
    if (!is_antisymmetric(X)) throw NotAntisymmetric("chi");
    for (int i = 0; i < g.R.n(); ++i) {
        QMat s = (g.R.Tp.row(i) + g.R.Tm.row(i)) * X;
        if (!is_zero(s)) throw AltSViolated("chi(S_" + std::to_string(i + 1) + ", -) != 0");
    }
    // chi_g(b_a, b_c) on basis elements.
    auto cg = [&](int a, int c) {
        if (g.basis.part(a) != 0 || g.basis.part(c) != 0) return Rational(0);
        return X(a - g.basis.h(0), c - g.basis.h(0));
    };
    MpLbA out = g;
    for (int p = 0; p < D; ++p)
        for (int q = 0; q < D; ++q) {
            QVec v = g.bracket[sz(p)][sz(q)];
            const QMat &Cp = g.cobracket[sz(p)], &Cq = g.cobracket[sz(q)];
            for (int a = 0; a < D; ++a)
                for (int b = 0; b < D; ++b) {
                    if (!Cp(a, b).is_zero()) v(b) += Cp(a, b) * cg(a, q);
                    if (!Cq(a, b).is_zero()) v(b) -= Cq(a, b) * cg(a, p);
                }
            out.bracket[sz(p)][sz(q)] = v;
        }
    out.R.Amat = g.R.Amat + g.R.Tp * X.transpose();
    out.R.P = g.R.P + g.R.Tp * X * g.R.Tp.transpose();
    return out;
}

std::vector<std::string> compare_brackets(const MpLbA& a, const MpLbA& b) {
    if (a.dim() != b.dim()) return {"dimension " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim())};
    std::vector<std::string> bad;
    for (int p = 0; p < a.dim(); ++p)
        for (int q = 0; q < a.dim(); ++q)
            if (a.bracket[sz(p)][sz(q)] != b.bracket[sz(p)][sz(q)])
                bad.push_back("[" + a.basis.labels[sz(p)] + "," + a.basis.labels[sz(q)] + "]");
    return bad;
}

std::vector<std::string> compare_cobrackets(const MpLbA& a, const MpLbA& b) {
    if (a.dim() != b.dim()) return {"dimension " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim())};
    std::vector<std::string> bad;
    for (int p = 0; p < a.dim(); ++p)
        if (!mat_equal(a.cobracket[sz(p)], b.cobracket[sz(p)])) bad.push_back("delta(" + a.basis.labels[sz(p)] + ")");
    return bad;
}

// ---- pre-Borel pairing ----

TreePtr tree_leaf(int leaf) {
    auto t = std::make_shared<LieTree>();
    t->leaf = leaf;
    return t;
}

TreePtr tree_bracket(TreePtr a, TreePtr b) {
    auto t = std::make_shared<LieTree>();
    t->l = std::move(a);
    t->r = std::move(b);
    return t;
}

TreePtr tree_from_word(const Word& w) {
    TreePtr t = tree_leaf(w.at(0));
    for (std::size_t k = 1; k < w.size(); ++k) t = tree_bracket(t, tree_leaf(w[k]));
    return t;
}

TreePtr tree_serre(int i, int j, int k) {
    TreePtr t = tree_leaf(j);
    for (int s = 0; s < k; ++s) t = tree_bracket(tree_leaf(i), t);
    return t;
}

std::string tree_str(const TreePtr& t, char gen) {
    if (t->leaf >= 0) return std::string(1, gen) + std::to_string(t->leaf + 1);
    return "[" + tree_str(t->l, gen) + "," + tree_str(t->r, gen) + "]";
}

BorelPairing::BorelPairing(const QMat& P, std::vector<int> d) : P_(P), d_(std::move(d)), n_(static_cast<int>(P.rows())) {}

std::vector<int> BorelPairing::degree(const TreePtr& t) const {
    std::vector<int> deg(sz(n_), 0);
    std::function<void(const TreePtr&)> walk = [&](const TreePtr& u) {
        if (u->leaf >= 0) {
            if (u->leaf < n_) ++deg[sz(u->leaf)];
            return;
        }
        walk(u->l);
        walk(u->r);
    };
    walk(t);
    return deg;
}

// [T_k^{sign}, u] = w u for a toral-free tree u.
Rational BorelPairing::weight_on(const TreePtr& t, int k, int sign) const {
    auto g = degree(t);
    Rational w(0);
    for (int j = 0; j < n_; ++j)
        w += Rational(g[sz(j)]) * (sign > 0 ? P_(k, j) : -P_(j, k));
    return w;
}

BorelElem BorelPairing::bracket(const BorelElem& a, const BorelElem& b, int sign) const {
    BorelElem out;
    for (const auto& [x, u] : a)
        for (const auto& [y, v] : b) {
            bool tu = u->leaf >= n_, tv = v->leaf >= n_;
            if (tu && tv) continue;
            if (tu) {
                Rational w = weight_on(v, u->leaf - n_, sign);
                if (!w.is_zero()) out.emplace_back(x * y * w, v);
            } else if (tv) {
                Rational w = weight_on(u, v->leaf - n_, sign);
                if (!w.is_zero()) out.emplace_back(-(x * y * w), u);
            } else {
                out.emplace_back(x * y, tree_bracket(u, v));
            }
        }
    return out;
}

std::vector<std::tuple<Rational, TreePtr, TreePtr>> BorelPairing::delta(const TreePtr& x, int sign) const {
    using Terms = std::vector<std::tuple<Rational, TreePtr, TreePtr>>;
    if (x->leaf >= n_) return {};
    if (x->leaf >= 0) {
        // b_+ carries the opposite cobracket of its image in the double.
        TreePtr T = tree_leaf(n_ + x->leaf);
        Rational s(sign > 0 ? -1 : 1);
        return Terms{{s, T, x}, {-s, x, T}};
    }
    Terms out;
    auto ad = [&](const TreePtr& c, const Terms& d, const Rational& f) {
        BorelElem ce{{Rational(1), c}};
        for (const auto& [k, u, v] : d) {
            for (const auto& [y, w] : bracket(ce, BorelElem{{Rational(1), u}}, sign)) out.emplace_back(f * k * y, w, v);
            for (const auto& [y, w] : bracket(ce, BorelElem{{Rational(1), v}}, sign)) out.emplace_back(f * k * y, u, w);
        }
    };
    ad(x->l, delta(x->r, sign), Rational(1));
    ad(x->r, delta(x->l, sign), Rational(-1));
    return out;
}

Rational BorelPairing::base(const TreePtr& x, const TreePtr& y) const {
    if (x->leaf >= n_ && y->leaf >= n_) return P_(x->leaf - n_, y->leaf - n_);
    if (x->leaf >= 0 && x->leaf < n_ && x->leaf == y->leaf) return Rational(1) / Rational(2 * d_[sz(x->leaf)]);
    return Rational(0);
}

Rational BorelPairing::pair(const TreePtr& x, const TreePtr& y, bool recurse_left) const {
    return pair(BorelElem{{Rational(1), x}}, BorelElem{{Rational(1), y}}, recurse_left);
}

Rational BorelPairing::pair_pure(const TreePtr& x, const TreePtr& y, bool recurse_left) const {
    bool tx = x->leaf >= n_, ty = y->leaf >= n_;
    if (tx != ty) return Rational(0);
    if (!tx && degree(x) != degree(y)) return Rational(0);
    bool lx = x->leaf >= 0, ly = y->leaf >= 0;
    if (lx && ly) return base(x, y);
    Rational s(0);
    if ((!lx && recurse_left) || ly) {
        for (const auto& [k, u, v] : delta(y, -1))
            s += k * pair_pure(x->l, u, recurse_left) * pair_pure(x->r, v, recurse_left);
    } else {
        for (const auto& [k, u, v] : delta(x, +1))
            s += k * pair_pure(u, y->l, recurse_left) * pair_pure(v, y->r, recurse_left);
    }
    return s;
}

Rational BorelPairing::pair(const BorelElem& x, const BorelElem& y, bool recurse_left) const {
    // Resolve toral leaves inside brackets first.
    std::function<BorelElem(const TreePtr&, int)> resolve = [&](const TreePtr& t, int sign) -> BorelElem {
        if (t->leaf >= 0) return {{Rational(1), t}};
        return bracket(resolve(t->l, sign), resolve(t->r, sign), sign);
    };
    Rational s(0);
    for (const auto& [a, u] : x)
        for (const auto& [ra, uu] : resolve(u, +1))
            for (const auto& [b, v] : y)
                for (const auto& [rb, vv] : resolve(v, -1)) s += a * ra * b * rb * pair_pure(uu, vv, recurse_left);
    return s;
}

}  // namespace mpqg
