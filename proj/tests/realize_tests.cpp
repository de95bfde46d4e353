#include "doctest.h"

#include <string>
#include <vector>

#include "nestlab/cubic.hpp"
#include "nestlab/errors.hpp"
#include "nestlab/realize.hpp"

using namespace nestlab;

namespace {

CubicMap deep_map() {
    return make_symmetric_cubic(FamilySign::positive, Real::parse("15.7276772", 256), 256);
}

CubicMap shallow_map() {
    return make_symmetric_cubic(FamilySign::positive, Real::parse("15.7257", 192), 192);
}

}  // namespace

TEST_CASE("extraction labels the deep parameter") {
    Extraction ext = extract_prefix(deep_map(), 4);
    REQUIRE(ext.status == NestStatus::ok);
    REQUIRE(ext.seq.triples.size() == 4);
    REQUIRE(ext.subtypes.size() == 4);
    CHECK(ext.seq.origin == SeqOrigin::extracted);
    // one level past the requested depth gets built for classification
    CHECK(ext.nest.levels.size() == 6);

    CHECK(format_sequence(ext.seq) == "A+,2,1;B-,2,1;C-,2,1;A-,2,1");
    CHECK(ext.subtypes[0].str() == "A++");
    CHECK(ext.subtypes[1].str() == "B-+");
    CHECK(ext.subtypes[2].str() == "C--");
    CHECK(ext.subtypes[3].str() == "A-+");

    const long S[] = {1, 2, 3, 5, 8, 13};
    const long S_hat[] = {1, 1, 2, 3, 5, 8};
    for (std::size_t n = 0; n < ext.nest.levels.size(); ++n) {
        CHECK(ext.nest.levels[n].S == S[n]);
        CHECK(ext.nest.levels[n].S_hat == S_hat[n]);
    }

    // the labels replay through the checker and the subtype automaton
    AdmissibilityReport rep = check_admissible(ext.seq);
    CHECK(rep.ok);
    AutomatonRun run = run_automaton(ext.subtypes[0], {{2, 1}, {2, 1}, {2, 1}});
    REQUIRE(run.ok());
    for (std::size_t n = 0; n < 4; ++n) {
        CHECK(run.states[n].str() == ext.subtypes[n].str());
    }
}

TEST_CASE("extraction stops where the covering fails") {
    Extraction ext = extract_prefix(shallow_map(), 4);
    CHECK(ext.status == NestStatus::not_in_class_g);
    CHECK(ext.nest.levels.size() == 3);
    REQUIRE(ext.seq.triples.size() == 1);
    CHECK(format_sequence(ext.seq) == "A+,2,1");
    CHECK(!ext.detail.empty());
}

TEST_CASE("comparison orders outcomes") {
    Extraction ext = extract_prefix(deep_map(), 4);
    REQUIRE(ext.status == NestStatus::ok);

    Comparison full = compare_realized(parse_sequence("A+,2,1;B-,2,1;C-,2,1;A-,2,1"), ext);
    CHECK(full.verdict == CompareVerdict::match);
    CHECK(full.level == 4);

    // a shorter target already matched by the prefix still matches
    Comparison part = compare_realized(parse_sequence("A+,2,1;B-,2,1"), ext);
    CHECK(part.verdict == CompareVerdict::match);
    CHECK(part.level == 2);

    // realized r=2 is order-maximal, so it lands after a target asking for 3
    Comparison later = compare_realized(parse_sequence("A+,3,1"), ext);
    CHECK(later.verdict == CompareVerdict::after);
    CHECK(later.level == 1);

    // an extraction that died without direction is incomparable past its data
    Extraction failed = extract_prefix(shallow_map(), 4);
    Comparison inc = compare_realized(parse_sequence("A+,2,1;B-,2,1;C-,2,1"), failed);
    CHECK(inc.verdict == CompareVerdict::incomparable);
    CHECK(inc.level == 2);

    CHECK(std::string(compare_verdict_name(CompareVerdict::before)) == "before");
    CHECK(std::string(compare_verdict_name(CompareVerdict::match)) == "match");
}

TEST_CASE("parameter scan brackets the admitted window") {
    Interval range = default_parameter_range(FamilySign::positive, 128);
    CHECK(range.lo.to_double() > 4.0);
    CHECK(range.hi.to_double() <= 16.0);
    CHECK(range.contains(Real::parse("15.7276772", 128)));
    Interval nrange = default_parameter_range(FamilySign::negative, 128);
    CHECK(nrange.lo.to_double() > 4.0);
    CHECK(nrange.hi.to_double() <= 16.0);
}

TEST_CASE("solve handles trivial and bad targets") {
    Interval range = default_parameter_range(FamilySign::positive, 128);
    SolveOptions opts;
    opts.precision_bits = 128;

    CombSequence fib = parse_sequence("A+,2,1;B-,2,1;C-,2,1");
    SolveResult zero = solve(fib, 0, FamilySign::positive, range, Real::parse("1e-6", 128), opts);
    CHECK(zero.achieved_depth == 0);
    CHECK(zero.evaluations == 0);
    CHECK(zero.extracted.triples.empty());

    CHECK_THROWS_AS(
        (solve(parse_sequence("B-,2,1"), 1, FamilySign::positive, range,
               Real::parse("1e-6", 128), opts)),
        Error);
    try {
        solve(parse_sequence("B-,2,1"), 1, FamilySign::positive, range,
              Real::parse("1e-6", 128), opts);
    } catch (const Error& e) {
        CHECK(e.code() == errc::inadmissible);
    }

    CHECK_THROWS_AS(
        (solve(fib, 5, FamilySign::positive, range, Real::parse("1e-6", 128), opts)), Error);
}

TEST_CASE("solve finds a window for a short prefix") {
    Interval range = default_parameter_range(FamilySign::positive, 128);
    SolveOptions opts;
    opts.precision_bits = 128;
    CombSequence target = parse_sequence("A+,2,1;B-,2,1");
    SolveResult res =
        solve(target, 2, FamilySign::positive, range, Real::parse("1e-5", 128), opts);
    CHECK(res.achieved_depth == 2);
    CHECK(res.evaluations > 0);
    REQUIRE(res.extracted.triples.size() >= 2);
    CHECK(res.extracted.triples[0].r == 2);
    CHECK(res.extracted.triples[0].t == 1);
    CHECK(res.parameter_interval.width() <= Real::parse("1e-5", 128));

    // the certified midpoint replays the target prefix
    Real mid = res.parameter_interval.mid();
    Extraction ext =
        extract_prefix(make_symmetric_cubic(FamilySign::positive, mid, 128), 2);
    REQUIRE(ext.seq.triples.size() >= 2);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(ext.seq.triples[k].letter == target.triples[k].letter);
        CHECK((ext.seq.triples[k].i == target.triples[k].i));
        CHECK(ext.seq.triples[k].r == target.triples[k].r);
        CHECK(ext.seq.triples[k].t == target.triples[k].t);
    }
}
