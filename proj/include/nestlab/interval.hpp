#pragma once

#include "nestlab/real.hpp"

namespace nestlab {

// Open interval (lo, hi) with lo < hi (degenerate allowed only where noted).
struct Interval {
    Real lo;
    Real hi;

    Interval(Real l, Real h) : lo(std::move(l)), hi(std::move(h)) {}

    Real width() const { return hi - lo; }
    Real mid() const { return mul_pow2(lo + hi, -1); }

    bool contains(const Real& x) const { return lo < x && x < hi; }
    bool contains_closed(const Real& x) const { return lo <= x && x <= hi; }

    // strict inclusion of open intervals
    bool strictly_inside(const Interval& outer) const {
        return outer.lo < lo && hi < outer.hi;
    }
    bool inside(const Interval& outer) const {
        return outer.lo <= lo && hi <= outer.hi;
    }
    bool disjoint_from(const Interval& o) const { return hi <= o.lo || o.hi <= lo; }

    // distance from x to the nearest endpoint
    Real boundary_gap(const Real& x) const { return min(abs(x - lo), abs(x - hi)); }

    Interval mirrored() const {
        // image under x -> 1-x
        return Interval(1 - hi, 1 - lo);
    }
};

} // namespace nestlab
