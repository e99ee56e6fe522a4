#pragma once

#include <map>
#include <vector>

#include "mpqg/quea.hpp"

namespace mpqg {

// ---- toral twists ----

// F_Phi = exp(hbar/2 sum phi_gk H_g (x) H_k), truncated at the context order.
Tensor twist_element(QContext& ctx, const TwistMatrix& Phi);
// F x F^{-1} for a two-leg tensor, through (H (x) 1) (a (x) b) = (a (x) b) ((H + lambda(H)) (x) 1).
Tensor twist_conjugate(QContext& ctx, const Tensor& x, const TwistMatrix& Phi);
Tensor twisted_coproduct(QContext& ctx, const UElem& x, const TwistMatrix& Phi);
// Q S(x) Q^{-1} with Q = m(id (x) S)(F_Phi).
UElem twisted_antipode(QContext& ctx, const UElem& x, const TwistMatrix& Phi);

struct TwistedGenerators {
    std::vector<UElem> E, F;        // L^{-1} E_l and F_l K
    std::vector<UElem> K, L, Kinv, Linv;
    LMat Tp, Tm;                    // T^{+-}_{Phi,l} as rows over the H-basis
};

// L_l = exp(hbar/2 sum alpha_l(H_g) phi_gk H_k), K_l = exp(hbar/2 sum alpha_l(H_g) phi_kg H_k).
TwistedGenerators twisted_generators(QContext& ctx, const TwistMatrix& Phi);

// All relations and Hopf formulas of the twisted algebra, at order N. Phi2 is used for functoriality.
std::vector<CheckResult> verify_twist_theorem(const Realization& R, const TwistMatrix& Phi, const TwistMatrix& Phi2,
                                              int N);

// ---- toral 2-cocycles ----

// sigma^{sign}(H^u e^{hbar A}, H^v e^{hbar B}) with A, B rows over the H-basis.
TruncLaurent sigma_eval(const CocycleForm& chi, const HExp& u, const LMat& A, const HExp& v, const LMat& B,
                        int sign = 1, int order = 8);

// The deformed product a .sigma b = sigma(a_1, b_1) a_2 b_2 sigma^{-1}(a_3, b_3).
class CocycleProduct {
public:
    // Run the context two orders above the comparison order: single sigma factors carry hbar^{-1}.
    CocycleProduct(QContext& ctx, const CocycleForm& chi);

    UElem mul(const UElem& a, const UElem& b);
    UElem mul(const std::vector<UElem>& factors);
    UElem commutator(const UElem& a, const UElem& b) { return mul(a, b) - mul(b, a); }

private:
    struct Leg {
        HExp u;  // left toral leg: H^u e^{hbar A}
        HExp v;  // middle: F_f H^v E_e
        HExp w;  // right toral leg: H^w e^{-hbar B}
        Rational mult;
    };
    const std::vector<Leg>& splits(const HExp& h);
    const UElem& mono_mul(const Mono& a, const Mono& b);
    LMat row_sum(const Word& w, bool plus) const;

    QContext& ctx_;
    CocycleForm chi_;
    std::map<HExp, std::vector<Leg>> split_memo_;
    std::map<std::pair<Mono, Mono>, UElem> memo_;
};

// Brute-force convolution power chi~^{*m}(H_+^k, H_-^l) from the definition on slot assignments.
TruncLaurent tilde_chi_power(const CocycleForm& chi, const LMat& Hp, int k, const LMat& Hm, int l, int m);

std::vector<CheckResult> verify_cocycle_theorem(const Realization& R, const CocycleForm& chi, int N);

}  // namespace mpqg
