#pragma once

#include <random>

#include "mpqg/cartan.hpp"

namespace mpqg {

using Rng = std::mt19937_64;

// Small rationals num/den with |num| <= 3, den in {1, 2, 3}.
Rational random_rational(Rng& rng, bool nonzero = false);

// Antisymmetric t x t matrix: constant part (optional) plus an hbar part (optional).
LMat random_antisymmetric(Rng& rng, int t, bool constant = true, bool hbar = true);

// DA plus a random antisymmetric matrix.
MpMatrix random_cartan_type(Rng& rng, const CartanDatum& c, bool constant = true, bool hbar = true);

TwistMatrix random_twist(Rng& rng, int t, bool hbar = false);
CocycleForm random_alt_s(Rng& rng, const Realization& R, bool hbar = false);

}  // namespace mpqg
