#pragma once

#include <map>
#include <string>
#include <vector>

#include "mpqg/quea.hpp"

namespace mpqg {

// Letters of the quantum double: T_i^+ and E_i from the positive Borel half, the barred
// Tbar_j^- = hbar T_j^- and Fbar_j = hbar F_j from the negative one.
struct DLetter {
    enum Kind { Tp, E, Tb, Fb };
    Kind kind = E;
    int index = 0;
    auto operator<=>(const DLetter&) const = default;
    bool operator==(const DLetter&) const = default;
    bool positive() const { return kind == Tp || kind == E; }
};
using DWord = std::vector<DLetter>;
// Linear combination of words in the free algebra on the letters.
using DPoly = std::map<DWord, TruncLaurent>;
// Two-leg tensor of free words.
using DTensor = std::map<std::pair<DWord, DWord>, TruncLaurent>;

std::string dword_str(const DWord& w);

// Skew-Hopf pairing between the positive pre-Borel algebra and the barred negative one. Conventions:
//   pi(x' x'', y) = pi(x', y_(1)) pi(x'', y_(2)),   pi(x, y' y'') = pi(x_(2), y') pi(x_(1), y'').
// Generator values: pi(T_i^+, Tbar_j^-) = p_ij, pi(E_i, Fbar_j) = delta_ij hbar / (q_i - q_i^{-1}), others vanish.
class SkewPairing {
public:
    SkewPairing(const Realization& R, int order);

    int order() const { return N_; }
    const Realization& realization() const { return R_; }
    const TruncLaurent& ef_value(int i) const { return ef_[static_cast<std::size_t>(i)]; }
    // x in positive letters, y in barred letters.
    TruncLaurent operator()(const DPoly& x, const DPoly& y) const;
    TruncLaurent operator()(const DWord& x, const DWord& y) const;

    // Coproducts on free words through the generator formulas, exponentials cut at the given degree.
    DTensor coproduct(const DWord& w, int exp_degree) const;
    // e^{hbar T_i^+} and e^{-Tbar_j^-} as free polynomials.
    DPoly K(int i, int degree) const;
    DPoly L(int j, int degree) const;
    // Image in U under T^+ -> T^+, E -> E, Tbar -> hbar T^-, Fbar -> hbar F.
    UElem to_element(QContext& ctx, const DPoly& x) const;

private:
    // a -> (pi(a, y_(1)) y_(2)) for one positive letter; tcount bounds how many Tbar letters can still be consumed.
    DPoly act(const DLetter& a, const DPoly& y, int tcount) const;
    DPoly act_K(int i, const DWord& y) const;

    Realization R_;
    int N_;
    std::vector<TruncLaurent> ef_;
};

// Generator values of the pairing, including pi(E_i, Fbar_i) = 1/(2 d_i) mod hbar.
std::vector<CheckResult> pairing_generator_table(const SkewPairing& pi);
// Serre and toral relation elements pair to zero with every word on the other side up to length max_len
// (at least the Serre degree plus one).
std::vector<CheckResult> pairing_radical_check(const SkewPairing& pi, QContext& ctx, int max_len = 3);
// Cross relations of the double re-derived from the exchange rule
//   x_(1) y_(1) pi(y_(2), x_(2)) = pi(y_(1), x_(1)) y_(2) x_(2)
// and compared with the straightening of the same products in U.
std::vector<CheckResult> double_relations_check(const Realization& R, int N);

}  // namespace mpqg
