#pragma once

#include "nestlab/interval.hpp"
#include "nestlab/real.hpp"

namespace nestlab {

enum class FamilySign { positive, negative };

inline const char* family_name(FamilySign s) {
    return s == FamilySign::positive ? "positive" : "negative";
}

// A validated bimodal cubic on [0,1]. The positive family fixes 0 and 1, the
// negative family swaps them. c < d are the two turning points. Immutable
// after construction; all operations are pure.
class CubicMap {
public:
    FamilySign family_sign;
    Real a;
    Real b;
    Real c;
    Real d;
    prec_t precision_bits;

    // Polynomial value; deterministic for identical input bits.
    Real eval(const Real& x) const;

    // k-fold composition.
    Real iterate(Real x, long k) const;

    bool is_symmetric() const;

private:
    friend CubicMap make_cubic(FamilySign, const Real&, const Real&, prec_t);
    CubicMap(FamilySign sign, Real a_, Real b_, Real c_, Real d_, prec_t prec)
        : family_sign(sign), a(std::move(a_)), b(std::move(b_)), c(std::move(c_)),
          d(std::move(d_)), precision_bits(prec) {}
};

// Validates bimodality: derivative has two distinct roots in (0,1) and the
// extremal values stay inside [0,1]. Throws not_bimodal otherwise.
CubicMap make_cubic(FamilySign sign, const Real& a, const Real& b, prec_t precision_bits);

// The mirror-symmetric slice b = -3a/2, satisfying f(1-x) = 1-f(x).
CubicMap make_symmetric_cubic(FamilySign sign, const Real& a, prec_t precision_bits);

// Unique x in branch with f(x) = y, by bisection. branch must not contain a
// turning point in its interior and y must lie in the image of branch.
Real monotone_preimage(const CubicMap& map, const Real& y, const Interval& branch);

// Unique fixed point in region, by bisection on f(x) - x; requires a sign
// change across region.
Real fixed_point_in(const CubicMap& map, const Interval& region);

} // namespace nestlab
