#pragma once

#include <Eigen/Core>

#include <vector>

#include "mpqg/series.hpp"

namespace Eigen {

template <>
struct NumTraits<mpqg::Rational> : GenericNumTraits<mpqg::Rational> {
    using Real = mpqg::Rational;
    using NonInteger = mpqg::Rational;
    using Literal = mpqg::Rational;
    using Nested = mpqg::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 4,
        AddCost = 16,
        MulCost = 16
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

template <>
struct NumTraits<mpqg::TruncLaurent> : GenericNumTraits<mpqg::TruncLaurent> {
    using Real = mpqg::TruncLaurent;
    using NonInteger = mpqg::TruncLaurent;
    using Literal = mpqg::TruncLaurent;
    using Nested = mpqg::TruncLaurent;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 64,
        MulCost = 256
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace mpqg {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using QMat = Mat<Rational>;
using LMat = Mat<TruncLaurent>;
using IMat = Eigen::MatrixXi;

// Constant term (reduction mod hbar) of every entry.
QMat const_part(const LMat& m);
LMat lift(const QMat& m);
LMat lift(const IMat& m);

template <class S>
Mat<S> zeros(Eigen::Index r, Eigen::Index c) {
    return Mat<S>::Constant(r, c, S(0));
}

template <class S>
Mat<S> identity(Eigen::Index n) {
    Mat<S> m = zeros<S>(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
}

// Reduced row echelon form over Q; returns the pivot columns (lexicographically first basis of the
// column space).
std::vector<int> rref(QMat& m);
int rank(const QMat& m);
// Rank of the reduction mod hbar.
int rank_mod_h(const LMat& m);
QMat inverse(const QMat& m);
// Solves x * a = b for x (row space membership); false if inconsistent.
bool solve_left(const QMat& a, const QMat& b, QMat& x);

// Invertible over k[[hbar]] iff the determinant has a nonzero constant term.
bool is_unit_matrix(const LMat& m);
// Gauss-Jordan with unit pivots; entries known through `order` unless the input is exact and
// all pivots are exact monomials.
LMat inverse(const LMat& m, int order);

template <class S>
bool is_antisymmetric(const Mat<S>& m) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (!(m(i, j) == -m(j, i))) return false;
    return true;
}

template <class S>
bool mat_equal(const Mat<S>& a, const Mat<S>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (!(a(i, j) == b(i, j))) return false;
    return true;
}

bool mat_equal_to(const LMat& a, const LMat& b, int n);

}  // namespace mpqg
