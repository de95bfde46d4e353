#pragma once

#include <string>
#include <vector>

#include "nestlab/comb.hpp"
#include "nestlab/nest.hpp"

namespace nestlab {

// Everything one extraction run learns about a map.
struct Extraction {
    Nest nest;
    CombSequence seq;               // one triple per classified level
    std::vector<Subtype> subtypes;  // two-sign forms, parallel to seq.triples
    NestStatus status;              // ok means seq holds exactly the requested depth
    std::string detail;
};

// Builds the nest one level past depth (level n is classified from the
// iterate counts of level n+1) and labels each level: the letter from which
// box the central and non-central images land in, i from the orientation of
// the non-central return branches, j from whether the folded branch has a
// maximum or a minimum at c. r and t are recovered from the counted return
// times; divisibility is asserted, never rounded.
Extraction extract_prefix(const CubicMap& map, long depth, long max_iter = kDefaultMaxIter);

enum class CompareVerdict { match, before, after, incomparable };

const char* compare_verdict_name(CompareVerdict v);

// level is 1-based: the first level where the two outcomes disagree, or the
// matched depth on a match.
struct Comparison {
    CompareVerdict verdict;
    long level;
};

// Orders an extraction outcome against the target at the first disagreeing
// level. Fixed outcome order: a central return precedes every triple; triples
// compare by r under the admissible order, then by t, then by subtype rank
// A- < A+ < B- < B+ < C- < C+ < D- < D+. Failures that carry no direction
// (precision_exhausted, not_in_class_G) give incomparable.
Comparison compare_realized(const CombSequence& target, const Extraction& extracted);

struct SolveResult {
    Interval parameter_interval;
    long achieved_depth;
    CombSequence extracted;
    long evaluations;  // extraction runs performed
};

struct SolveOptions {
    prec_t precision_bits = 256;  // starting precision
    prec_t precision_cap = 4096;  // doubling on precision loss stops here
    long budget = 200000;         // extraction runs allowed
    long max_iter = kDefaultMaxIter;
};

// The maximal run of parameters accepted by map validation, by coarse scan.
Interval default_parameter_range(FamilySign family, prec_t precision_bits);

// Finds a parameter in the symmetric slice whose extracted prefix matches the
// first `depth` triples of target. Bisection on the parameter while endpoint
// verdicts stay directional, with a fallback that splits cells into 8 (then
// 64, then 512) subintervals and recurses into every subcell whose midpoint
// extends the matched prefix. Throws inadmissible for targets failing the
// admissibility check and not_found when the budget runs out.
SolveResult solve(const CombSequence& target, long depth, FamilySign family,
                  const Interval& a_range, const Real& tolerance, SolveOptions opts = {});

}  // namespace nestlab
