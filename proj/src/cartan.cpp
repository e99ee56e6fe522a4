#include "mpqg/cartan.hpp"

#include <numeric>
#include <queue>
#include <set>

namespace mpqg {

IMat CartanDatum::DA() const {
    IMat m = A;
    for (int i = 0; i < n(); ++i) m.row(i) *= d[static_cast<std::size_t>(i)];
    return m;
}

CartanDatum symmetrize(const IMat& A, std::string name) {
    const int n = static_cast<int>(A.rows());
    if (n == 0 || A.cols() != n) throw NotSymmetrizable("matrix must be square and nonempty");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j && A(i, j) != 2) throw NotSymmetrizable("diagonal entry must be 2");
            if (i != j && A(i, j) > 0) throw NotSymmetrizable("positive off-diagonal entry");
            if (i != j && (A(i, j) == 0) != (A(j, i) == 0))
                throw NotSymmetrizable("zero pattern not symmetric at (" + std::to_string(i + 1) + "," +
                                       std::to_string(j + 1) + ")");
        }
    std::vector<Rational> d(static_cast<std::size_t>(n), Rational(0));
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    int ncomp = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        std::queue<int> q;
        q.push(s);
        comp[static_cast<std::size_t>(s)] = ncomp;
        d[static_cast<std::size_t>(s)] = Rational(1);
        while (!q.empty()) {
            int i = q.front();
            q.pop();
            for (int j = 0; j < n; ++j) {
                if (j == i || A(i, j) == 0) continue;
                // d_i a_ij = d_j a_ji
                Rational dj = d[static_cast<std::size_t>(i)] * Rational(A(i, j)) / Rational(A(j, i));
                if (comp[static_cast<std::size_t>(j)] < 0) {
                    comp[static_cast<std::size_t>(j)] = ncomp;
                    d[static_cast<std::size_t>(j)] = dj;
                    q.push(j);
                } else if (d[static_cast<std::size_t>(j)] != dj) {
                    throw NotSymmetrizable("inconsistent at (" + std::to_string(i + 1) + "," +
                                           std::to_string(j + 1) + ")");
                }
            }
        }
        ++ncomp;
    }
    CartanDatum c;
    c.A = A;
    c.name = std::move(name);
    c.d.assign(static_cast<std::size_t>(n), 1);
    for (int k = 0; k < ncomp; ++k) {
        mpz_class l = 1, g = 0;
        for (int i = 0; i < n; ++i)
            if (comp[static_cast<std::size_t>(i)] == k) l = lcm(l, d[static_cast<std::size_t>(i)].den());
        for (int i = 0; i < n; ++i)
            if (comp[static_cast<std::size_t>(i)] == k) {
                mpz_class v = d[static_cast<std::size_t>(i)].num() * (l / d[static_cast<std::size_t>(i)].den());
                g = gcd(g, v);
            }
        for (int i = 0; i < n; ++i)
            if (comp[static_cast<std::size_t>(i)] == k) {
                mpz_class v = d[static_cast<std::size_t>(i)].num() * (l / d[static_cast<std::size_t>(i)].den()) / g;
                c.d[static_cast<std::size_t>(i)] = static_cast<int>(v.get_si());
            }
    }
    return c;
}

CartanDatum cartan_by_name(const std::string& name) {
    IMat A;
    if (name == "A1") {
        A.resize(1, 1);
        A << 2;
    } else if (name == "A2") {
        A.resize(2, 2);
        A << 2, -1, -1, 2;
    } else if (name == "B2") {
        A.resize(2, 2);
        A << 2, -2, -1, 2;
    } else if (name == "C2") {
        A.resize(2, 2);
        A << 2, -1, -2, 2;
    } else if (name == "G2") {
        A.resize(2, 2);
        A << 2, -1, -3, 2;
    } else if (name == "A1xA1") {
        A.resize(2, 2);
        A << 2, 0, 0, 2;
    } else if (name == "A3") {
        A.resize(3, 3);
        A << 2, -1, 0, -1, 2, -1, 0, -1, 2;
    } else {
        throw ConfigError("unknown Cartan type '" + name + "'");
    }
    return symmetrize(A, name);
}

LMat MpMatrix::sym() const {
    LMat s = P + P.transpose();
    for (auto& x : s.reshaped()) x *= Rational(1, 2);
    return s;
}

LMat MpMatrix::antisym() const {
    LMat s = P - P.transpose();
    for (auto& x : s.reshaped()) x *= Rational(1, 2);
    return s;
}

MpMatrix check_cartan_type(const LMat& P, const CartanDatum& cartan) {
    const int n = cartan.n();
    if (P.rows() != n || P.cols() != n) throw DimensionMismatch("P must be " + std::to_string(n) + "x" + std::to_string(n));
    IMat da = cartan.DA();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(P(i, j) + P(j, i) == TruncLaurent(Rational(2 * da(i, j)))))
                throw NotCartanType("(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    return MpMatrix{P, cartan};
}

LMat Realization::S() const {
    LMat s = Tp + Tm;
    for (auto& x : s.reshaped()) x *= Rational(1, 2);
    return s;
}

LMat Realization::Lambda() const {
    LMat s = Tp - Tm;
    for (auto& x : s.reshaped()) x *= Rational(1, 2);
    return s;
}

TruncLaurent Realization::alpha(int j, const LMat& v) const {
    TruncLaurent s(0);
    for (int g = 0; g < t; ++g) s += Amat(j, g) * v(0, g);
    return s;
}

LMat CocycleForm::ring(const Realization& R) const { return R.Tp * X * R.Tp.transpose(); }

TruncLaurent CocycleForm::eval(const LMat& u, const LMat& v) const { return (u * X * v.transpose())(0, 0); }

std::vector<int> independent_columns(const LMat& m) {
    QMat c = const_part(m);
    return rref(c);
}

void validate_realization(const Realization& R) {
    const int n = R.n();
    if (R.Tp.rows() != n || R.Tm.rows() != n || R.Amat.rows() != n || R.Tp.cols() != R.t ||
        R.Tm.cols() != R.t || R.Amat.cols() != R.t)
        throw DimensionMismatch("realization shapes");
    LMat ap = R.Tp * R.Amat.transpose();
    LMat am = R.Tm * R.Amat.transpose();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!(ap(i, j) == R.P.P(i, j)))
                throw InvalidRealization("alpha_" + std::to_string(j + 1) + "(T_" + std::to_string(i + 1) + "^+)");
            if (!(am(i, j) == R.P.P(j, i)))
                throw InvalidRealization("alpha_" + std::to_string(j + 1) + "(T_" + std::to_string(i + 1) + "^-)");
        }
    if (rank_mod_h(R.S()) != n) throw InvalidRealization("S_i dependent mod hbar");
}

Flags classify(const Realization& R, int order) {
    const int n = R.n();
    Flags f;
    f.straight = rank_mod_h(R.Amat) == n;
    LMat T(2 * n, R.t);
    T << R.Tp, R.Tm;
    int rt = rank_mod_h(T);
    f.split = rt == 2 * n;
    f.minimal = rt == R.t;
    LMat S = R.S();
    auto cols = independent_columns(S);
    if (static_cast<int>(cols.size()) == n) {
        LMat SJ(n, n), LJ(n, n);
        LMat L = R.Lambda();
        for (int a = 0; a < n; ++a) {
            SJ.col(a) = S.col(cols[static_cast<std::size_t>(a)]);
            LJ.col(a) = L.col(cols[static_cast<std::size_t>(a)]);
        }
        LMat C = LJ * inverse(SJ, order);
        f.small = mat_equal(LMat(C * S), L);
    }
    return f;
}

namespace {

std::vector<int> symmetric_pivot_order(const MpMatrix& P, int& r) {
    auto piv = independent_columns(P.sym());
    r = static_cast<int>(piv.size());
    std::vector<int> perm = piv;
    std::set<int> used(piv.begin(), piv.end());
    for (int i = 0; i < P.n(); ++i)
        if (!used.count(i)) perm.push_back(i);
    return perm;
}

std::vector<std::string> h_labels(int t) {
    std::vector<std::string> l;
    for (int g = 1; g <= t; ++g) l.push_back("H" + std::to_string(g));
    return l;
}

}  // namespace

Realization make_split_realization(const MpMatrix& P, int ell) {
    const int n = P.n();
    int r = 0;
    auto perm = symmetric_pivot_order(P, r);
    if (ell < 3 * n - r) throw RankTooSmall("need rank >= " + std::to_string(3 * n - r));
    LMat Ps = P.sym(), Pa = P.antisym();
    LMat G = zeros<TruncLaurent>(ell, ell);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            G(a, b) = Ps(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
            G(2 * n - r + a, b) = Pa(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
        }
    for (int a = r; a < n; ++a) {
        G(a, n + (a - r)) = 1;
        G(n + (a - r), a) = 1;
    }
    for (int a = 0; a < n; ++a) G(2 * n - r + a, 2 * n - r + a) = 1;
    for (int g = 3 * n - r; g < ell; ++g) G(g, g) = 1;

    Realization R;
    R.P = P;
    R.t = ell;
    R.labels = h_labels(ell);
    R.Tp = zeros<TruncLaurent>(n, ell);
    R.Tm = zeros<TruncLaurent>(n, ell);
    R.Amat = zeros<TruncLaurent>(n, ell);
    for (int a = 0; a < n; ++a) {
        int i = perm[static_cast<std::size_t>(a)];
        R.Tp.row(i) = G.row(a) + G.row(2 * n - r + a);
        R.Tm.row(i) = G.row(a) - G.row(2 * n - r + a);
        R.Amat(i, a) = 1;
    }
    validate_realization(R);
    R.flags = classify(R);
    return R;
}

Realization make_standard_realization(const MpMatrix& P) {
    const int n = P.n();
    Realization R;
    R.P = P;
    R.t = 2 * n;
    for (int i = 1; i <= n; ++i) R.labels.push_back("T+" + std::to_string(i));
    for (int i = 1; i <= n; ++i) R.labels.push_back("T-" + std::to_string(i));
    R.Tp = zeros<TruncLaurent>(n, 2 * n);
    R.Tm = zeros<TruncLaurent>(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        R.Tp(i, i) = 1;
        R.Tm(i, n + i) = 1;
    }
    R.Amat.resize(n, 2 * n);
    R.Amat << P.P.transpose(), P.P;
    validate_realization(R);
    R.flags = classify(R);
    return R;
}

Realization make_small_realization(const MpMatrix& P, int ell) {
    const int n = P.n();
    int r = 0;
    auto perm = symmetric_pivot_order(P, r);
    if (ell < 2 * n - r) throw RankTooSmall("need rank >= " + std::to_string(2 * n - r));
    LMat Pa = P.antisym();
    QMat Ps = const_part(P.sym());
    // P_a = C P_s, solved one hbar-degree at a time
    std::set<int> exps;
    int order = TruncLaurent::kExact;
    for (auto& x : Pa.reshaped()) {
        for (auto& [e, c] : x.terms()) exps.insert(e);
        order = std::min(order, x.order());
    }
    for (auto& x : P.P.reshaped()) order = std::min(order, x.order());
    LMat C = zeros<TruncLaurent>(n, n);
    for (int e : exps) {
        QMat Ae(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Ae(i, j) = Pa(i, j).coeff(e);
        QMat Ce;
        if (!solve_left(Ps, Ae, Ce)) throw SmallObstruction("antisymmetric part not in the span of P_s");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!Ce(i, j).is_zero()) C(i, j) += TruncLaurent::monomial(Ce(i, j), e);
    }
    if (order < TruncLaurent::kExact)
        for (auto& x : C.reshaped()) x = x.truncated(order);

    LMat G = zeros<TruncLaurent>(ell, ell);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            G(a, b) = TruncLaurent(Ps(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]));
    for (int a = r; a < n; ++a) {
        G(a, n + (a - r)) = 1;
        G(n + (a - r), a) = 1;
    }
    for (int g = 2 * n - r; g < ell; ++g) G(g, g) = 1;

    Realization R;
    R.P = P;
    R.t = ell;
    R.labels = h_labels(ell);
    LMat S = zeros<TruncLaurent>(n, ell);
    R.Amat = zeros<TruncLaurent>(n, ell);
    for (int a = 0; a < n; ++a) {
        int i = perm[static_cast<std::size_t>(a)];
        S.row(i) = G.row(a);
        R.Amat(i, a) = 1;
    }
    LMat L = C * S;
    R.Tp = S + L;
    R.Tm = S - L;
    validate_realization(R);
    R.flags = classify(R);
    return R;
}

std::pair<MpMatrix, Realization> twist_realization(const Realization& R, const TwistMatrix& Phi) {
    if (Phi.Phi.rows() != R.t || Phi.Phi.cols() != R.t) throw DimensionMismatch("twist matrix size");
    if (!is_antisymmetric(Phi.Phi)) throw NotAntisymmetric("twist matrix");
    LMat AP = R.Amat * Phi.Phi;
    MpMatrix PPhi = check_cartan_type(R.P.P - AP * R.Amat.transpose(), R.P.cartan);
    Realization out = R;
    out.P = PPhi;
    out.Tp = R.Tp - AP;
    out.Tm = R.Tm + AP;
    if (!mat_equal(out.S(), R.S())) throw InvalidRealization("twist moved S_i");
    validate_realization(out);
    out.flags = classify(out);
    return {PPhi, out};
}

std::pair<LMat, bool> split_stability(const Realization& R, const TwistMatrix& Phi) {
    const int n = R.n();
    bool std_basis = R.t == 2 * n && R.flags.split && R.flags.minimal;
    if (std_basis) {
        LMat I2 = identity<TruncLaurent>(2 * n);
        std_basis = mat_equal(LMat(R.Tp), LMat(I2.topRows(n))) && mat_equal(LMat(R.Tm), LMat(I2.bottomRows(n)));
    }
    if (!std_basis) throw NotSplitMinimal("basis of h must be {T_i^+, T_i^-}");
    if (!is_antisymmetric(Phi.Phi)) throw NotAntisymmetric("twist matrix");
    const LMat& F = Phi.Phi;
    LMat M = identity<TruncLaurent>(n) - R.P.P.transpose() * (F.topLeftCorner(n, n) - F.topRightCorner(n, n)) -
             R.P.P * (F.bottomLeftCorner(n, n) - F.bottomRightCorner(n, n));
    return {M, is_unit_matrix(M)};
}

void check_alt_s(const Realization& R, const CocycleForm& chi) {
    if (chi.X.rows() != R.t || chi.X.cols() != R.t) throw DimensionMismatch("cocycle matrix size");
    if (!is_antisymmetric(chi.X)) throw AltSViolated("form is not antisymmetric");
    LMat SX = R.S() * chi.X;
    for (int i = 0; i < R.n(); ++i)
        for (int g = 0; g < R.t; ++g)
            if (!(SX(i, g) == TruncLaurent(0)))
                throw AltSViolated("chi(S_" + std::to_string(i + 1) + ", H_" + std::to_string(g + 1) + ") != 0");
}

LMat cocycle_roots(const Realization& R, const CocycleForm& chi) { return R.Amat - R.Tp * chi.X; }

std::pair<MpMatrix, Realization> cocycle_realization(const Realization& R, const CocycleForm& chi) {
    check_alt_s(R, chi);
    LMat Xr = chi.ring(R);
    MpMatrix Pc = check_cartan_type(R.P.P + Xr, R.P.cartan);
    Realization out = R;
    out.P = Pc;
    out.Amat = cocycle_roots(R, chi);
    if (!mat_equal(out.Amat, LMat(R.Amat + R.Tm * chi.X)))
        throw AltSViolated("alpha + chi(-, T^+) differs from alpha - chi(-, T^-)");
    validate_realization(out);
    out.flags = classify(out);
    return {Pc, out};
}

TwistMatrix solve_twist_equiv(const MpMatrix& P, const MpMatrix& Pp, const Realization& R, int order) {
    if (!mat_equal(P.sym(), Pp.sym())) throw SymmetricPartMismatch("P_s != P'_s");
    const int n = P.n();
    auto cols = independent_columns(R.Amat);
    if (static_cast<int>(cols.size()) < n) throw InvalidRealization("realization is not straight");
    LMat G(n, n);
    for (int a = 0; a < n; ++a) G.col(a) = R.Amat.col(cols[static_cast<std::size_t>(a)]);
    LMat Gi = inverse(G, order);
    LMat Lam = Pp.P - P.P;
    LMat A = -(Gi * Lam * Gi.transpose());
    TwistMatrix out{zeros<TruncLaurent>(R.t, R.t)};
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            out.Phi(cols[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)]) = A(a, b);
    return out;
}

CocycleForm alt_s_from_complement(const Realization& R, const LMat& W, int order) {
    const int n = R.n(), t = R.t;
    if (W.rows() != t - n || W.cols() != t - n) throw DimensionMismatch("complement form size");
    if (!is_antisymmetric(W)) throw NotAntisymmetric("complement form");
    LMat B = zeros<TruncLaurent>(t, t);
    B.topRows(n) = R.S();
    int row = n;
    if (R.flags.split) {
        B.middleRows(n, n) = R.Lambda();
        row = 2 * n;
    }
    if (rank_mod_h(LMat(B.topRows(row))) != row) throw InvalidRealization("coroot block dependent mod hbar");
    for (int g = 0; g < t && row < t; ++g) {
        B(row, g) = 1;
        if (rank_mod_h(LMat(B.topRows(row + 1))) == row + 1) ++row;
        else B(row, g) = 0;
    }
    LMat Y = zeros<TruncLaurent>(t, t);
    Y.bottomRightCorner(t - n, t - n) = W;
    LMat Bi = inverse(B, order);
    return CocycleForm{Bi * Y * Bi.transpose()};
}

CocycleForm solve_cocycle_equiv(const MpMatrix& P, const MpMatrix& Pp, const Realization& R, int order) {
    if (!mat_equal(P.sym(), Pp.sym())) throw SymmetricPartMismatch("P_s != P'_s");
    if (!R.flags.split) throw InvalidRealization("realization is not split");
    const int n = P.n();
    LMat W = zeros<TruncLaurent>(R.t - n, R.t - n);
    // chi(Lambda_i, Lambda_j) = chi(T_i^+, T_j^+) since chi kills every S_i
    W.topLeftCorner(n, n) = Pp.P - P.P;
    return alt_s_from_complement(R, W, order);
}

}  // namespace mpqg
