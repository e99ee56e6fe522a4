#include "mpqg/random.hpp"

namespace mpqg {

Rational random_rational(Rng& rng, bool nonzero) {
    std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
    int a = num(rng);
    while (nonzero && a == 0) a = num(rng);
    return Rational(a, den(rng));
}

LMat random_antisymmetric(Rng& rng, int t, bool constant, bool hbar) {
    LMat m = zeros<TruncLaurent>(t, t);
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j) {
            TruncLaurent x(0);
            if (constant) x += TruncLaurent(random_rational(rng));
            if (hbar) x += TruncLaurent::monomial(random_rational(rng), 1);
            m(i, j) = x;
            m(j, i) = -x;
        }
    return m;
}

MpMatrix random_cartan_type(Rng& rng, const CartanDatum& c, bool constant, bool hbar) {
    return check_cartan_type(c.DA_series() + random_antisymmetric(rng, c.n(), constant, hbar), c);
}

TwistMatrix random_twist(Rng& rng, int t, bool hbar) { return TwistMatrix{random_antisymmetric(rng, t, true, hbar)}; }

CocycleForm random_alt_s(Rng& rng, const Realization& R, bool hbar) {
    int k = R.t - R.n();
    return alt_s_from_complement(R, random_antisymmetric(rng, k, true, hbar));
}

}  // namespace mpqg
