#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nestlab/cubic.hpp"
#include "nestlab/interval.hpp"

namespace nestlab {

// Budget for one return-time search, in map evaluations.
inline constexpr long kDefaultMaxIter = 1000000;

// Deepest level worth attempting at a given mantissa size. Box widths shrink
// roughly like exp(-const * n^2), so the usable depth grows like sqrt(bits):
// 16 levels at 256 bits.
long depth_cap(prec_t precision_bits);

enum class NestStatus { ok, central_return, not_in_class_g, precision_exhausted };

const char* nest_status_name(NestStatus s);

// One level of the twin nest. Level 0 holds the initial boxes and carries
// placeholder values S = S_hat = 1, lambda = 1, and no C/D. For n >= 1:
//   I, J   central return domains around the turning points c and d,
//   C, D   the non-central return domains meeting the critical orbits,
//   S      shared first return time of c and d into the level n-1 boxes,
//   S_hat  shared first return time of f^S(c), f^S(d) into the level n-1 boxes,
//   lambda max(|I|/|I_prev|, |J|/|J_prev|).
struct NestLevel {
    long n;
    Interval I;
    Interval J;
    std::optional<Interval> C;
    std::optional<Interval> D;
    long S;
    long S_hat;
    Real lambda;
};

struct Nest {
    CubicMap map;
    std::vector<NestLevel> levels;
    NestStatus status = NestStatus::ok;
    std::string detail;  // reason when status != ok
    long max_iter = kDefaultMaxIter;
};

// Case analysis on the fixed-point configuration; throws
// fixed_point_configuration when the map has no usable configuration
// (in particular when the unique fixed point of a negative-family map has no
// other preimages).
std::pair<Interval, Interval> initial_boxes(const CubicMap& map);

struct ReturnHit {
    long time;
    Real point;  // f^time(x)
};

// Least k >= 1 with f^k(x) in I or J (open). Throws no_return past max_iter
// and boundary_hit when the orbit comes within 2^(-prec/4) of a box endpoint,
// where membership is ambiguous.
ReturnHit first_return(const CubicMap& map, const Real& x, const Interval& I,
                       const Interval& J, long max_iter);

long first_return_time(const CubicMap& map, const Real& x,
                       const std::pair<Interval, Interval>& boxes, long max_iter);

// The component of f^-time(target) containing center, found by pulling the
// target back one map application at a time along the forward orbit of
// center. Every step must stay inside one monotone branch except the final
// one when center is a turning point, which folds. The result must lie in
// ambient. Throws non_monotone when an intermediate pullback straddles a
// turning point or escapes ambient.
Interval pullback_domain(const CubicMap& map, const Real& center,
                         const Interval& target, long time, const Interval& ambient);

// Level 0 only.
Nest make_nest(const CubicMap& map, long max_iter = kDefaultMaxIter);

// Appends one level, or returns the nest unchanged with status flipped to
// central_return / not_in_class_g / precision_exhausted. Requires status ok.
Nest extend_nest(Nest nest);

// make_nest + extend_nest until depth levels beyond level 0 exist or the
// status flips.
Nest build_nest(const CubicMap& map, long depth, long max_iter = kDefaultMaxIter);

struct ScalingRow {
    long n;
    Real width_I;
    Real width_J;
    Real lambda;
};

// Measured widths and scaling factors per level; requires at least 2 levels.
std::vector<ScalingRow> scaling_report(const Nest& nest);

}  // namespace nestlab
