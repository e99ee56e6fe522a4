#pragma once

#include <map>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mpqg/cartan.hpp"
#include "mpqg/liebialg.hpp"

namespace mpqg {

using HExp = std::vector<int>;
// Polynomial in H_1..H_t with series coefficients.
using HPoly = std::map<HExp, TruncLaurent>;

// PBW monomial F_f H^h E_e.
struct Mono {
    Word f;
    HExp h;
    Word e;

    auto operator<=>(const Mono&) const = default;
    bool operator==(const Mono&) const = default;
    bool is_toral() const { return f.empty() && e.empty(); }
    bool is_unit() const;
};

struct MonoHash {
    std::size_t operator()(const Mono& m) const noexcept;
};

using Terms = std::map<Mono, TruncLaurent>;

// Element of U in normal form.
struct UElem {
    Terms terms;

    bool is_zero() const { return terms.empty(); }
    void add(const Mono& m, const TruncLaurent& c);
    UElem& operator+=(const UElem& o);
    UElem& operator-=(const UElem& o);
    UElem operator-() const;
    friend UElem operator+(UElem a, const UElem& b) { return a += b; }
    friend UElem operator-(UElem a, const UElem& b) { return a -= b; }
    UElem scaled(const TruncLaurent& c) const;
    UElem truncated(int order) const;
    // Every coefficient vanishes through hbar^n.
    bool is_zero_to(int n) const;
    bool equals_to(const UElem& o, int n) const { return (*this - o).is_zero_to(n); }
    int valuation() const;
};

// Tensor with a fixed number of legs, each leg a PBW monomial.
struct Tensor {
    int legs = 2;
    std::map<std::vector<Mono>, TruncLaurent> terms;

    void add(const std::vector<Mono>& k, const TruncLaurent& c);
    Tensor& operator+=(const Tensor& o);
    Tensor& operator-=(const Tensor& o);
    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    Tensor scaled(const TruncLaurent& c) const;
    bool is_zero_to(int n) const;
    bool equals_to(const Tensor& o, int n) const { return (*this - o).is_zero_to(n); }
};

Tensor tensor(const UElem& a, const UElem& b);
Tensor tensor(const std::vector<const UElem*>& legs);
// Swap of the two legs.
Tensor flip(const Tensor& x);

// Generator symbol of the free presentation.
struct Sym {
    char kind = 'E';  // 'E', 'F' or 'H'
    int index = 0;
    auto operator<=>(const Sym&) const = default;
    bool operator==(const Sym&) const = default;
};
using GenWord = std::vector<Sym>;
using GenPoly = std::map<GenWord, TruncLaurent>;

std::string sym_str(const Sym& s, const std::vector<std::string>& labels);
std::string mono_str(const Mono& m, const std::vector<std::string>& labels);

// Normal forms of pure E-words (positive) or F-words modulo the quantum Serre relations, built degree by
// degree. Columns are ordered by total degree, then lexicographically with E_1 > E_2 > ...; pivots
// are taken on unit entries so the reduction is integral over k[[hbar]].
class SerreSystem {
public:
    SerreSystem(const CartanDatum& A, const LMat& P, int order, bool enabled, bool positive = true);

    bool enabled() const { return enabled_; }
    // sum_k (-1)^k [m, k]_{q_i} q_ij^{k/2} q_ji^{-k/2} E_i^{m-k} E_j E_i^k with m = 1 - a_ij; the F-system
    // uses q_ij^{-k/2} q_ji^{k/2}, the only choice making the element skew-primitive.
    std::vector<std::pair<Word, TruncLaurent>> serre_element(int i, int j) const;
    // nullptr when the word is already normal.
    const std::vector<std::pair<Word, TruncLaurent>>* reduce(const Word& w);
    bool is_normal(const Word& w);
    // Non-normal word whose two maximal proper factors are normal: a rule left-hand side.
    bool is_obstruction(const Word& w);
    // Builds every multidegree of total degree <= bound; throws CompletionIncomplete.
    void complete(int bound);
    int completed_degree() const { return completed_; }
    // Oriented rules (left-hand side, normal form) for all built degrees.
    std::vector<std::pair<Word, std::vector<std::pair<Word, TruncLaurent>>>> rules();

private:
    struct Table {
        std::map<Word, std::vector<std::pair<Word, TruncLaurent>>> nf;  // non-normal words only
        std::vector<std::map<Word, TruncLaurent>> basis;                 // reduced ideal rows
    };
    const Table& table(const std::vector<int>& deg);

    CartanDatum A_;
    LMat P_;
    int order_;
    bool enabled_;
    int completed_ = 0;
    std::map<std::vector<int>, Table> tables_;
    std::vector<std::vector<std::vector<std::pair<Word, TruncLaurent>>>> serre_;
};

// The FoMpQUEA U^R_{P,hbar}(g) truncated at hbar-order N, with memoized multiplication and Hopf maps.
// Contexts are not thread-safe; use one per task.
class QContext {
public:
    QContext(const Realization& R, int order, bool serre = true);

    const Realization& realization() const { return R_; }
    const CartanDatum& cartan() const { return R_.P.cartan; }
    int n() const { return R_.n(); }
    int t() const { return R_.t; }
    int order() const { return N_; }
    bool serre() const { return ewords_.enabled(); }
    SerreSystem& words(bool positive = true) { return positive ? ewords_ : fwords_; }

    const TruncLaurent& alpha(int j, int g) const { return alpha_[static_cast<std::size_t>(j * R_.t + g)]; }
    // lambda(H_g) for lambda = sum_j deg_j alpha_j.
    TruncLaurent weight(const std::vector<int>& deg, int g) const;
    std::vector<int> degree(const Word& w) const;
    // wt(e) - wt(f) as a multidegree.
    std::vector<int> mono_weight(const Mono& m) const;

    // Elements.
    UElem one() const;
    UElem scalar(const TruncLaurent& c) const;
    UElem E(int i) const;
    UElem F(int i) const;
    UElem H(int g) const;
    UElem E_word(const Word& w);
    UElem F_word(const Word& w);
    UElem from_mono(const Mono& m, const TruncLaurent& c = TruncLaurent(1)) const;
    // sum_g row(g) H_g.
    UElem toral(const LMat& row) const;
    // exp(c * sum_g row(g) H_g) with c of valuation >= 1.
    UElem exp_toral(const LMat& row, const TruncLaurent& c) const;
    UElem from_hpoly(const HPoly& p) const;
    // (e^{hbar T_i^+} - e^{-hbar T_i^-}) / (q_i - q_i^{-1}), computed at order N+1 then divided once.
    const UElem& ef_rhs(int i);
    UElem serre_element(int i, int j, bool positive);

    // Algebra.
    UElem mul(const UElem& a, const UElem& b);
    UElem mul(const std::vector<UElem>& factors);
    UElem pow(const UElem& a, int k);
    UElem commutator(const UElem& a, const UElem& b);
    UElem gen(const Sym& s) const;
    UElem normalize(const GenPoly& p);
    UElem normalize(const GenWord& w);

    // Hopf structure.
    Tensor coproduct(const UElem& x);
    TruncLaurent counit(const UElem& x) const;
    UElem antipode(const UElem& x);
    Tensor tmul(const Tensor& a, const Tensor& b);
    // Apply the coproduct to one leg.
    Tensor coproduct_leg(const Tensor& x, int leg);
    UElem multiply_legs(const Tensor& x);  // m: two legs to one
    Tensor map_leg(const Tensor& x, int leg, bool antipode_map);
    Tensor counit_leg(const Tensor& x, int leg) const;

    // Coefficient truncation used on every stored value.
    TruncLaurent cut(const TruncLaurent& c) const { return c.truncated(N_); }

private:
    friend class Rewriter;
    HPoly shifted(const HExp& h, const std::vector<int>& deg, int sign);
    const UElem& mono_mul(const Mono& a, const Mono& b);
    const UElem& straighten(const Word& e, const Word& f);
    UElem left_F(int j, const UElem& x);
    UElem left_poly(const HPoly& p, const UElem& x);
    void emit(UElem& out, const Word& f, const HPoly& p, const Word& e, const TruncLaurent& c);
    HPoly hmul(const HPoly& a, const HPoly& b) const;
    const Tensor& mono_coproduct(const Mono& m);
    const UElem& mono_antipode(const Mono& m);

    Realization R_;
    int N_;
    SerreSystem ewords_, fwords_;
    std::vector<TruncLaurent> alpha_;
    std::vector<UElem> ef_rhs_;
    std::vector<HPoly> ef_poly_;

    struct PairHash {
        std::size_t operator()(const std::pair<Mono, Mono>& p) const noexcept;
    };
    struct WordPairHash {
        std::size_t operator()(const std::pair<Word, Word>& p) const noexcept;
    };
    std::unordered_map<std::pair<Mono, Mono>, UElem, PairHash> mul_memo_;
    std::unordered_map<std::pair<Word, Word>, UElem, WordPairHash> straighten_memo_;
    std::map<std::tuple<HExp, std::vector<int>, int>, HPoly> shift_memo_;
    std::map<std::pair<int, std::vector<int>>, HPoly> ef_shift_memo_;
    std::unordered_map<Mono, Tensor, MonoHash> cop_memo_;
    std::unordered_map<Mono, UElem, MonoHash> ant_memo_;
};

// Oriented rewriting on generator words: H-sorting, H past E/F, EF-straightening and the Serre rules.
class Rewriter {
public:
    enum class Strategy { Leftmost, Random };

    explicit Rewriter(QContext& ctx) : ctx_(ctx) {}
    GenPoly rewrite(const GenPoly& p, Strategy s, std::mt19937_64* rng = nullptr);
    // Reads a fully reduced combination as a normal-form element.
    UElem to_element(const GenPoly& p) const;
    std::size_t steps() const { return steps_; }

private:
    // Positions and rule kinds applicable in w.
    struct Redex {
        int pos;
        int len;
    };
    std::vector<Redex> redexes(const GenWord& w);
    void apply(const GenWord& w, const Redex& r, const TruncLaurent& c, GenPoly& out);

    QContext& ctx_;
    std::size_t steps_ = 0;
};

// A random word of the given length over E_i, F_i, H_g.
GenWord random_genword(std::mt19937_64& rng, int n, int t, int length);

// Short human-readable rendering of the first few terms.
std::string describe_element(const UElem& x, const std::vector<std::string>& labels);
std::string describe_tensor(const Tensor& x, const std::vector<std::string>& labels);

struct CheckResult {
    std::string name;
    bool ok = true;
    std::string witness;
};

// Coassociativity, counit and antipode identities on all generators and products of two.
std::vector<CheckResult> hopf_suite(QContext& ctx);
// Delta(X_ij) = X_ij (x) 1 + e^{hbar((1-a_ij)T_i^+ + T_j^+)} (x) X_ij and the mirror for F.
std::vector<CheckResult> serre_skewprimitive_check(QContext& ctx, int i, int j);
// [E_i, F_j] written through S_i and Lambda_i.
std::vector<CheckResult> split_presentation_check(QContext& ctx);

}  // namespace mpqg
