#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mpqg/linalg.hpp"

namespace mpqg {

struct CartanDatum {
    IMat A;
    std::vector<int> d;
    std::string name;

    int n() const { return static_cast<int>(A.rows()); }
    IMat DA() const;
    LMat DA_series() const { return lift(DA()); }
};

// A generalized symmetrizable Cartan matrix together with its minimal symmetrizer.
CartanDatum symmetrize(const IMat& A, std::string name = "");
// "A1", "A2", "B2", "A1xA1", "G2", "A3", "C2".
CartanDatum cartan_by_name(const std::string& name);

struct MpMatrix {
    LMat P;
    CartanDatum cartan;

    int n() const { return cartan.n(); }
    const TruncLaurent& p(int i, int j) const { return P(i, j); }
    LMat sym() const;      // (P + P^T) / 2
    LMat antisym() const;  // (P - P^T) / 2
};

MpMatrix check_cartan_type(const LMat& P, const CartanDatum& cartan);

struct Flags {
    bool straight = false;
    bool small = false;
    bool split = false;
    bool minimal = false;
    friend bool operator==(const Flags&, const Flags&) = default;
};

// Coordinates are with respect to the fixed basis H_1..H_t of h.
struct Realization {
    MpMatrix P;
    int t = 0;
    std::vector<std::string> labels;  // names of H_g
    LMat Tp;    // n x t, row i = T_i^+
    LMat Tm;    // n x t, row i = T_i^-
    LMat Amat;  // n x t, alpha_l(H_g)
    Flags flags;

    int n() const { return P.n(); }
    LMat S() const;
    LMat Lambda() const;
    // alpha_j evaluated on the vector with coordinates v (row).
    TruncLaurent alpha(int j, const LMat& v) const;
};

struct TwistMatrix {
    LMat Phi;
};

struct CocycleForm {
    LMat X;
    // chi(T_i^+, T_j^+)
    LMat ring(const Realization& R) const;
    TruncLaurent eval(const LMat& u, const LMat& v) const;
};

// Throws NotCartanType / IndexOutOfRange style errors when a realization axiom fails.
void validate_realization(const Realization& R);
Flags classify(const Realization& R, int order = 8);

Realization make_split_realization(const MpMatrix& P, int ell);
Realization make_standard_realization(const MpMatrix& P);
Realization make_small_realization(const MpMatrix& P, int ell);

std::pair<MpMatrix, Realization> twist_realization(const Realization& R, const TwistMatrix& Phi);
std::pair<LMat, bool> split_stability(const Realization& R, const TwistMatrix& Phi);

void check_alt_s(const Realization& R, const CocycleForm& chi);
std::pair<MpMatrix, Realization> cocycle_realization(const Realization& R, const CocycleForm& chi);
// alpha_i^(chi) as a row over the H-basis.
LMat cocycle_roots(const Realization& R, const CocycleForm& chi);

TwistMatrix solve_twist_equiv(const MpMatrix& P, const MpMatrix& Pp, const Realization& R, int order = 8);
// The Alt^S form that vanishes on the S_i and equals W on a fixed complement: (Lambda_i, then unit
// vectors) for split R, unit vectors otherwise.
CocycleForm alt_s_from_complement(const Realization& R, const LMat& W, int order = 8);
CocycleForm solve_cocycle_equiv(const MpMatrix& P, const MpMatrix& Pp, const Realization& R, int order = 8);

// Indices of the lexicographically first set of columns of m that are independent mod hbar.
std::vector<int> independent_columns(const LMat& m);

}  // namespace mpqg
