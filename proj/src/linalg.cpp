#include "mpqg/linalg.hpp"

#include <utility>

namespace mpqg {

QMat const_part(const LMat& m) {
    QMat r(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).constant_term();
    return r;
}

LMat lift(const QMat& m) {
    LMat r(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = TruncLaurent(m(i, j));
    return r;
}

LMat lift(const IMat& m) {
    LMat r(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = TruncLaurent(Rational(m(i, j)));
    return r;
}

std::vector<int> rref(QMat& m) {
    std::vector<int> piv;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
        Eigen::Index p = row;
        while (p < m.rows() && m(p, col).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != row) m.row(p).swap(m.row(row));
        Rational inv = Rational(1) / m(row, col);
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(row, j) *= inv;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col).is_zero()) continue;
            Rational f = m(i, col);
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
        }
        piv.push_back(static_cast<int>(col));
        ++row;
    }
    return piv;
}

int rank(const QMat& m) {
    QMat c = m;
    return static_cast<int>(rref(c).size());
}

int rank_mod_h(const LMat& m) { return rank(const_part(m)); }

QMat inverse(const QMat& m) {
    const Eigen::Index n = m.rows();
    if (n != m.cols()) throw DimensionMismatch("inverse of a non-square matrix");
    QMat aug(n, 2 * n);
    aug.leftCols(n) = m;
    aug.rightCols(n) = identity<Rational>(n);
    auto piv = rref(aug);
    if (static_cast<Eigen::Index>(piv.size()) < n || piv[static_cast<std::size_t>(n - 1)] >= n)
        throw NotInvertible("singular matrix");
    return aug.rightCols(n);
}

bool solve_left(const QMat& a, const QMat& b, QMat& x) {
    // x a = b  <=>  a^T x^T = b^T
    const Eigen::Index k = a.rows();
    QMat aug(a.cols(), k + b.rows());
    aug.leftCols(k) = a.transpose();
    aug.rightCols(b.rows()) = b.transpose();
    auto piv = rref(aug);
    for (int p : piv)
        if (p >= k) return false;
    x = zeros<Rational>(b.rows(), k);
    for (std::size_t r = 0; r < piv.size(); ++r)
        for (Eigen::Index j = 0; j < b.rows(); ++j) x(j, piv[r]) = aug(static_cast<Eigen::Index>(r), k + j);
    return true;
}

bool is_unit_matrix(const LMat& m) {
    return m.rows() == m.cols() && rank_mod_h(m) == static_cast<int>(m.rows());
}

namespace {

TruncLaurent pivot_inverse(const TruncLaurent& p, int order) {
    auto t = p.terms();
    if (p.exact() && t.size() == 1) return ts_inv(p);
    return ts_inv(p, order);
}

}  // namespace

LMat inverse(const LMat& m, int order) {
    const Eigen::Index n = m.rows();
    if (n != m.cols()) throw DimensionMismatch("inverse of a non-square matrix");
    LMat a = m;
    LMat inv = identity<TruncLaurent>(n);
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index p = col;
        while (p < n && !a(p, col).is_unit()) ++p;
        if (p == n) throw NotInvertible("no unit pivot in column " + std::to_string(col + 1));
        if (p != col) {
            a.row(p).swap(a.row(col));
            inv.row(p).swap(inv.row(col));
        }
        TruncLaurent pi = pivot_inverse(a(col, col), order);
        for (Eigen::Index j = 0; j < n; ++j) {
            a(col, j) = a(col, j) * pi;
            inv(col, j) = inv(col, j) * pi;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == col || a(i, col).is_zero()) continue;
            TruncLaurent f = a(i, col);
            for (Eigen::Index j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

bool mat_equal_to(const LMat& a, const LMat& b, int n) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (!a(i, j).equals_to(b(i, j), n)) return false;
    return true;
}

}  // namespace mpqg
