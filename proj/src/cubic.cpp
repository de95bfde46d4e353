#include "nestlab/cubic.hpp"

namespace nestlab {

Real CubicMap::eval(const Real& x) const {
    // a x^3 + b x^2 + (1-a-b) x, reflected for the negative family
    Real up = ((a * x + b) * x + (1 - a - b)) * x;
    if (family_sign == FamilySign::negative) return 1 - up;
    return up;
}

Real CubicMap::iterate(Real x, long k) const {
    for (long i = 0; i < k; ++i) x = eval(x);
    return x;
}

bool CubicMap::is_symmetric() const {
    Real expected = mul_pow2(-3 * a, -1);
    return abs(b - expected) <= mul_pow2(abs(b) + 1, -static_cast<long>(precision_bits) + 8);
}

CubicMap make_cubic(FamilySign sign, const Real& a_in, const Real& b_in,
                    prec_t precision_bits) {
    if (precision_bits < 64) {
        throw Error(errc::malformed_input, "precision_bits must be at least 64");
    }
    Real a = a_in.rounded_to(precision_bits);
    Real b = b_in.rounded_to(precision_bits);
    if (a.is_zero()) throw Error(errc::not_bimodal, "a = 0 is not cubic");

    // turning points: roots of 3a x^2 + 2b x + (1-a-b)
    Real lin = 1 - a - b;
    Real disc = b * b - 3 * a * lin;
    if (!disc.is_positive()) {
        throw Error(errc::not_bimodal, "derivative has fewer than two real roots");
    }
    Real root = sqrt(disc);
    Real r1 = (-b - root) / (3 * a);
    Real r2 = (-b + root) / (3 * a);
    Real c = min(r1, r2);
    Real d = max(r1, r2);
    if (!(Real(0l, precision_bits) < c) || !(c < d) || !(d < Real(1l, precision_bits))) {
        throw Error(errc::not_bimodal, "turning points escape (0,1)");
    }

    CubicMap m(sign, a, b, c, d, precision_bits);
    Real fc = m.eval(c);
    Real fd = m.eval(d);
    Real zero(0l, precision_bits);
    Real one(1l, precision_bits);
    if (fc < zero || fc > one || fd < zero || fd > one) {
        throw Error(errc::not_bimodal, "extremal values escape [0,1]");
    }
    return m;
}

CubicMap make_symmetric_cubic(FamilySign sign, const Real& a, prec_t precision_bits) {
    if (a.is_zero()) throw Error(errc::not_bimodal, "a = 0 is not cubic");
    Real b = mul_pow2(-3 * a.rounded_to(precision_bits), -1);
    return make_cubic(sign, a, b, precision_bits);
}

namespace {

// width below which bisection cannot make progress at this precision
bool too_thin(const Real& width, prec_t prec) {
    return width < Real::pow2(-static_cast<long>(prec) + 16, prec);
}

} // namespace

Real monotone_preimage(const CubicMap& map, const Real& y, const Interval& branch) {
    if (branch.contains(map.c) || branch.contains(map.d)) {
        throw Error(errc::non_monotone, "branch contains a turning point");
    }
    prec_t prec = map.precision_bits;
    Real blo = branch.lo;
    Real bhi = branch.hi;
    Real flo = map.eval(blo);
    Real fhi = map.eval(bhi);
    bool increasing = flo < fhi;
    const Real& ylo = increasing ? flo : fhi;
    const Real& yhi = increasing ? fhi : flo;
    if (y < ylo || y > yhi) {
        throw Error(errc::no_preimage, "value outside branch image");
    }
    Real span = branch.width();
    if (too_thin(span, prec)) {
        throw Error(errc::precision_exhausted, "branch narrower than working precision");
    }
    Real tol = mul_pow2(span, -static_cast<long>(prec) / 2 - 4);
    Real lo = blo;
    Real hi = bhi;
    long budget = static_cast<long>(prec) + 32;
    while (hi - lo > tol && budget-- > 0) {
        Real mid = mul_pow2(lo + hi, -1);
        bool below = map.eval(mid) < y;
        if (below == increasing) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return mul_pow2(lo + hi, -1);
}

Real fixed_point_in(const CubicMap& map, const Interval& region) {
    prec_t prec = map.precision_bits;
    Real glo = map.eval(region.lo) - region.lo;
    Real ghi = map.eval(region.hi) - region.hi;
    if (glo.is_zero()) return region.lo;
    if (ghi.is_zero()) return region.hi;
    if (glo.sign() == ghi.sign()) {
        throw Error(errc::no_sign_change, "f(x)-x keeps its sign on region");
    }
    if (too_thin(region.width(), prec)) {
        throw Error(errc::precision_exhausted, "region narrower than working precision");
    }
    bool rising = glo.is_negative(); // f-x goes from negative to positive
    Real tol = mul_pow2(region.width(), -static_cast<long>(prec) / 2 - 4);
    Real lo = region.lo;
    Real hi = region.hi;
    long budget = static_cast<long>(prec) + 32;
    while (hi - lo > tol && budget-- > 0) {
        Real mid = mul_pow2(lo + hi, -1);
        Real g = map.eval(mid) - mid;
        if (g.is_negative() == rising) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return mul_pow2(lo + hi, -1);
}

} // namespace nestlab
