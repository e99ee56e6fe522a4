#pragma once

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mpqg/cartan.hpp"

namespace mpqg {

using QVec = Vec<Rational>;
using Word = std::vector<int>;
// Element of the free associative algebra on letters 0..n-1.
using NCPoly = std::map<Word, Rational>;

NCPoly nc_commutator(const NCPoly& a, const NCPoly& b);
// Left-normed bracket [[..[x_w0, x_w1], ..], x_wk] expanded in the free associative algebra.
NCPoly left_normed(const Word& w);
// (ad x_i)^k (x_j)
NCPoly serre_poly(int i, int j, int k);

// Graded basis of n_+ = free Lie algebra on E_1..E_n modulo the Serre ideal, up to a total degree.
struct NilpotentPart {
    int n = 0;
    int bound = 0;
    bool truncated = false;           // the quotient is nonzero in degree bound + 1
    std::vector<Word> words;          // left-normed bracketing words, prefix-closed
    std::vector<std::vector<int>> roots;
    std::vector<std::vector<QVec>> bracket;  // coordinates of [b_a, b_b] in the basis

    int dim() const { return static_cast<int>(words.size()); }
    int height(int a) const { return static_cast<int>(words[static_cast<std::size_t>(a)].size()); }
    // Index of the basis element with the given word, or -1.
    int find(const Word& w) const;
};

NilpotentPart build_nilpotent(const CartanDatum& A, int bound);
// Height of the highest root for finite type; throws UnsupportedArgument otherwise.
int default_bound(const CartanDatum& A);

// Reduction mod hbar of a multiparameter matrix and one of its realizations.
struct LieRealization {
    CartanDatum cartan;
    QMat P;
    int t = 0;
    std::vector<std::string> labels;
    QMat Tp, Tm, Amat;

    int n() const { return cartan.n(); }
};

LieRealization reduce_mod_h(const Realization& R);

// Basis order: n_- (F-words), h (H_g), n_+ (E-words). Both nilpotent halves share the words.
struct LieBasis {
    NilpotentPart nil;
    int t = 0;
    std::vector<std::string> labels;

    int m() const { return nil.dim(); }
    int dim() const { return 2 * m() + t; }
    int neg(int a) const { return a; }
    int h(int g) const { return m() + g; }
    int pos(int a) const { return m() + t + a; }
    int E(int i) const { return pos(nil.find({i})); }
    int F(int i) const { return neg(nil.find({i})); }
    // -1 for F-words, 0 for h, +1 for E-words.
    int part(int b) const { return b < m() ? -1 : (b < m() + t ? 0 : 1); }
    // Signed multidegree: the root for E-words, minus it for F-words, zero on h.
    std::vector<int> root(int b) const;
};

struct MpLbA {
    LieBasis basis;
    LieRealization R;
    int bound = 0;
    std::vector<std::vector<QVec>> bracket;  // [b_a, b_b]
    std::vector<QMat> cobracket;             // delta(b_a) = sum C(p,q) b_p (x) b_q

    int dim() const { return basis.dim(); }
    QVec unit(int a) const;
    QVec br(const QVec& x, const QVec& y) const;
    QMat cob(const QVec& x) const;
    // Matrix of ad_x on coordinate columns.
    QMat ad(const QVec& x) const;
    // ad_x acting on a two-tensor.
    QMat ad2(const QVec& x, const QMat& c) const;
    QVec h_vector(const QMat& row) const;  // embeds a 1 x t coordinate row
};

MpLbA build_mplba(const LieRealization& R, int bound);
MpLbA build_mplba(const Realization& R, int bound);

std::vector<std::string> check_bialgebra(const MpLbA& g);

struct LieTwist {
    QMat Theta;
};

struct LieCocycle {
    QMat chi;  // t x t on the H-basis
};

MpLbA lie_twist_deform(const MpLbA& g, const LieTwist& theta);
MpLbA lie_cocycle_deform(const MpLbA& g, const LieCocycle& chi);

// Table comparison by basis index; returns mismatch descriptions.
std::vector<std::string> compare_brackets(const MpLbA& a, const MpLbA& b);
std::vector<std::string> compare_cobrackets(const MpLbA& a, const MpLbA& b);

// Bracket trees in the pre-Borel algebras. Leaves 0..n-1 are E_i (or F_i), leaves n..2n-1 are
// T_i^+ (or T_i^-).
struct LieTree {
    int leaf = -1;
    std::shared_ptr<const LieTree> l, r;
};
using TreePtr = std::shared_ptr<const LieTree>;
using BorelElem = std::vector<std::pair<Rational, TreePtr>>;

TreePtr tree_leaf(int leaf);
TreePtr tree_bracket(TreePtr a, TreePtr b);
TreePtr tree_from_word(const Word& w);
TreePtr tree_serre(int i, int j, int k);
std::string tree_str(const TreePtr& t, char gen);

// Lie bialgebra pairing between the positive and negative pre-Borel algebras of P.
class BorelPairing {
public:
    explicit BorelPairing(const QMat& P, std::vector<int> d);

    // Recursion through the cobracket of y (recurse_left) or of x.
    Rational pair(const TreePtr& x, const TreePtr& y, bool recurse_left = true) const;
    Rational pair(const BorelElem& x, const BorelElem& y, bool recurse_left = true) const;

    // Cobracket in b_+ (sign = +1) or b_- (sign = -1) as a list of tree pairs.
    std::vector<std::tuple<Rational, TreePtr, TreePtr>> delta(const TreePtr& x, int sign) const;
    // Bracket with toral leaves resolved through the root action.
    BorelElem bracket(const BorelElem& a, const BorelElem& b, int sign) const;

private:
    Rational weight_on(const TreePtr& t, int toral, int sign) const;
    std::vector<int> degree(const TreePtr& t) const;
    Rational base(const TreePtr& x, const TreePtr& y) const;
    Rational pair_pure(const TreePtr& x, const TreePtr& y, bool recurse_left) const;

    QMat P_;
    std::vector<int> d_;
    int n_;
};

}  // namespace mpqg
