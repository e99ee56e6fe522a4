#pragma once

#include <functional>
#include <map>
#include <vector>

#include "mpqg/deform.hpp"
#include "mpqg/liebialg.hpp"
#include "mpqg/quea.hpp"

namespace mpqg {

// Reduction mod hbar of elements and two-tensors of U into the Lie basis of an MpLbA. Basis images are
// left-normed commutators of the chosen E and F generators (toral elements map to H_g).
class LieImage {
public:
    using Commutator = std::function<UElem(const UElem&, const UElem&)>;

    LieImage(const MpLbA& g, const std::vector<UElem>& E, const std::vector<UElem>& F, int t,
             const Commutator& commutator);

    // Throws NotLiftable when the reduction is not a Lie element.
    QVec operator()(const UElem& x) const;
    // delta with x (x) y stored at (p, q).
    QMat operator()(const Tensor& x) const;

private:
    std::vector<Rational> row(const UElem& x) const;

    int dim_ = 0;
    std::map<Mono, int> column_;
    QMat images_;  // dim x columns
};

// The quea context paired with the MpLbA of the reductions mod hbar.
struct LimitContext {
    LimitContext(const Realization& R, int N);

    QContext ctx;
    MpLbA g;
    LieImage image;
};

// (x_(1) (x) x_(2) - x_(2) (x) x_(1)) / hbar mod hbar for an explicit coproduct value.
QMat semiclassical_cobracket(const Tensor& coproduct, const LieImage& image);
QMat semiclassical_cobracket(LimitContext& lc, const UElem& x);

// Generator cobrackets and all generator brackets mod hbar agree with the MpLbA tables; the EF right-hand
// side reduces to (T^+ + T^-)/(2d) and the quantum Serre coefficients reduce to the classical ones.
std::vector<CheckResult> check_limit(LimitContext& lc);
// Deform then specialize versus specialize then deform, on generators.
std::vector<CheckResult> check_square_twist(const Realization& R, const TwistMatrix& Phi, int N);
std::vector<CheckResult> check_square_cocycle(const Realization& R, const CocycleForm& chi, int N);

}  // namespace mpqg
