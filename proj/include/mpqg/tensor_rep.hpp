#pragma once

#include <map>
#include <vector>

#include "mpqg/quea.hpp"

namespace mpqg {

// Vector of the tensor algebra T(V), V with basis v_1..v_n: a combination of the v_J.
struct RepVector {
    std::map<Word, TruncLaurent> terms;

    void add(const Word& J, const TruncLaurent& c);
    RepVector& operator+=(const RepVector& o);
    RepVector& operator-=(const RepVector& o);
    friend RepVector operator+(RepVector a, const RepVector& b) { return a += b; }
    friend RepVector operator-(RepVector a, const RepVector& b) { return a -= b; }
    RepVector scaled(const TruncLaurent& c) const;
    bool is_zero_to(int n) const;
};

// The two tensor representations of the algebra without Serre relations, for a weight lambda (a row over the
// H-basis). Lowering: F_i v_J = v_(i,J), T v_J = (lambda - alpha_J)(T) v_J, E_i removes a letter i.
// Raising: E_i v_J = v_(i,J), T v_J = (lambda + alpha_J)(T) v_J, F_i removes a letter i.
class TensorRep {
public:
    enum class Kind { Lowering, Raising };

    TensorRep(QContext& ctx, const LMat& lambda, Kind kind);

    RepVector apply(const Sym& g, const RepVector& v);
    // Any element in normal form, acting monomial by monomial.
    RepVector apply(const UElem& x, const RepVector& v);

private:
    // (lambda -+ alpha_J)(H_g)
    TruncLaurent weight(const Word& J, int g) const;
    // The removal coefficient (q^a - q^b) / (q_i - q_i^{-1}) at the context order.
    TruncLaurent removal(int i, const Word& tail);
    RepVector remove(int i, const RepVector& v);

    QContext& ctx_;
    LMat lambda_;
    Kind kind_;
    std::map<std::pair<int, Word>, TruncLaurent> memo_;
};

// All non-Serre defining relations annihilate every v_J with |J| <= max_len, in both representations.
std::vector<CheckResult> representation_check(QContext& ctx, const LMat& lambda, int max_len = 4);

}  // namespace mpqg
