#include "doctest.h"

#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nestlab/comb.hpp"
#include "nestlab/errors.hpp"
#include "support.hpp"

using namespace nestlab;

namespace {

constexpr Sgn P = Sgn::plus;
constexpr Sgn M = Sgn::minus;

Subtype st(Letter l, Sgn i, Sgn j) { return Subtype{l, i, j}; }
TypeSign ts(Letter l, Sgn i) { return TypeSign{l, i}; }

using testsupport::class_allowed;
using testsupport::TransitionRow;

}  // namespace

TEST_CASE("one-step table, all forty-two rows") {
    const std::vector<TransitionRow>& kRows = testsupport::transition_rows();
    CHECK(kRows.size() == 42);
    for (const TransitionRow& row : kRows) {
        Subtype from = st(row.from, row.i, row.j);
        std::string label = from.str() + " (" + std::to_string(row.r) + "," +
                            std::to_string(row.t) + ")";
        CAPTURE(label);
        Subtype out = transition(from, row.r, row.t);
        CHECK(out.letter == row.to);
        if (row.to != Letter::D) {
            CHECK(out.i == row.to_i);
            CHECK(out.j == row.to_j);
        }
    }
}

TEST_CASE("ordering requirement is enforced on non-terminal rows") {
    CHECK_THROWS_AS((transition(st(Letter::A, P, P), 3, 5)), Error);  // odds ascend
    CHECK_THROWS_AS((transition(st(Letter::A, M, P), 2, 3)), Error);  // needs t < r
    CHECK_THROWS_AS((transition(st(Letter::C, P, P), 2, 4)), Error);  // needs t < r
    CHECK_THROWS_AS((transition(st(Letter::D, P, P), 3, 1)), Error);
    CHECK_THROWS_AS((transition(st(Letter::A, P, P), 1, 1)), Error);  // r >= 2
    // terminal parity rows report the dead end rather than the ordering
    CHECK(transition(st(Letter::A, P, P), 2, 2).letter == Letter::D);
}

TEST_CASE("odd-ascending even-descending order") {
    CHECK(admissible_less(1, 3));
    CHECK(admissible_less(3, 5));
    CHECK(admissible_less(5, 6));
    CHECK(admissible_less(1, 2));
    CHECK(admissible_less(6, 4));
    CHECK(admissible_less(4, 2));
    CHECK(!admissible_less(2, 1));
    CHECK(!admissible_less(2, 2));
    CHECK(!admissible_less(4, 6));
    CHECK(!admissible_less(3, 1));
    CHECK(parity_class(3, 1) == -2);
    CHECK(parity_class(2, 1) == 0);
    CHECK(parity_class(2, 4) == 2);
}

namespace {

// Parity representative satisfying the given ordering requirement, if any.
std::optional<std::pair<long, long>> representative(OrderingConstraint oc, bool r_even,
                                                    bool t_even) {
    if (oc == OrderingConstraint::strict_less) {
        if (!r_even && !t_even) return {{3, 1}};
        if (!r_even && t_even) return {{3, 2}};
        if (r_even && !t_even) return {{4, 1}};
        return {{4, 2}};
    }
    if (!r_even && !t_even) return {{3, 1}};
    if (!r_even && t_even) return std::nullopt;  // even t must follow an even r
    if (r_even && !t_even) return {{2, 1}};
    return {{2, 4}};
}

}  // namespace

TEST_CASE("no allowed path reaches the terminal type") {
    std::set<std::string> seen;
    std::vector<Subtype> frontier = {st(Letter::A, P, P), st(Letter::A, P, M),
                                     st(Letter::C, M, P), st(Letter::C, M, M)};
    for (const Subtype& s : frontier) seen.insert(s.str());
    while (!frontier.empty()) {
        Subtype cur = frontier.back();
        frontier.pop_back();
        OrderingConstraint oc = ordering_constraint(cur.letter, cur.i);
        for (bool r_even : {false, true}) {
            for (bool t_even : {false, true}) {
                auto rep = representative(oc, r_even, t_even);
                if (!rep) continue;
                if (!class_allowed(cur.letter, rep->first, rep->second)) continue;
                Subtype next = transition(cur, rep->first, rep->second);
                CHECK(next.letter != Letter::D);
                // successors stay within the sets the step rules promise
                if (cur.letter == Letter::A && cur.i == M) {
                    bool allowed = (next.letter == Letter::A && next.i == P) ||
                                   (next.letter == Letter::B && next.i == P) ||
                                   (next.letter == Letter::C && next.i == M);
                    CHECK(allowed);
                }
                if (cur.letter == Letter::B && cur.i == M) {
                    bool allowed = (next.letter == Letter::A && next.i == P) ||
                                   (next.letter == Letter::B && next.i == P) ||
                                   (next.letter == Letter::C && next.i == M);
                    CHECK(allowed);
                }
                if (cur.letter == Letter::C && cur.i == P) {
                    CHECK(next.letter == Letter::A);
                    CHECK(next.i == P);
                }
                if (seen.insert(next.str()).second) frontier.push_back(next);
            }
        }
    }
    // the terminal letter never shows up among reachable states
    for (const std::string& name : seen) CHECK(name.find('D') == std::string::npos);
}

TEST_CASE("automaton letters cycle from a type-A start under the smallest times") {
    AutomatonRun run =
        run_automaton(st(Letter::A, P, P), std::vector<std::pair<long, long>>(8, {2, 1}));
    REQUIRE(run.ok());
    REQUIRE(run.states.size() == 9);
    const Letter cycle[] = {Letter::A, Letter::B, Letter::C};
    for (std::size_t n = 0; n < run.states.size(); ++n) {
        CHECK(run.states[n].letter == cycle[n % 3]);
    }
    CHECK(run.states[0].str() == "A++");
    CHECK(run.states[1].str() == "B-+");
    CHECK(run.states[2].str() == "C--");
    CHECK(run.states[3].str() == "A-+");
    CHECK(run.states[4].str() == "B+-");
    CHECK(run.states[5].str() == "C+-");
    CHECK(run.states[6].str() == "A+-");
    CHECK(run.states[7].str() == "B-+");
    CHECK(run.states[8].str() == "C--");
}

TEST_CASE("automaton letters cycle from a type-C start") {
    AutomatonRun run =
        run_automaton(st(Letter::C, M, P), std::vector<std::pair<long, long>>(6, {2, 1}));
    REQUIRE(run.ok());
    const Letter cycle[] = {Letter::C, Letter::A, Letter::B};
    for (std::size_t n = 0; n < run.states.size(); ++n) {
        CHECK(run.states[n].letter == cycle[n % 3]);
    }
}

TEST_CASE("automaton reports the failing step") {
    AutomatonRun bad = run_automaton(st(Letter::A, P, P), {{2, 2}});
    CHECK(!bad.ok());
    CHECK(*bad.failed_at == 0);

    AutomatonRun terminal = run_automaton(st(Letter::A, P, P), {{3, 1}, {2, 4}});
    CHECK(!terminal.ok());
    CHECK(*terminal.failed_at == 1);
}

TEST_CASE("stationary sequences follow the automaton letters") {
    CombSequence fib = stationary_sequence(ts(Letter::A, P), 2, 1, 9);
    REQUIRE(fib.triples.size() == 9);
    const Letter cycle[] = {Letter::A, Letter::B, Letter::C};
    for (std::size_t n = 0; n < fib.triples.size(); ++n) {
        CHECK(fib.triples[n].letter == cycle[n % 3]);
        CHECK(fib.triples[n].r == 2);
        CHECK(fib.triples[n].t == 1);
    }
    CombSequence from_c = stationary_sequence(ts(Letter::C, M), 2, 1, 7);
    const Letter c_cycle[] = {Letter::C, Letter::A, Letter::B};
    for (std::size_t n = 0; n < from_c.triples.size(); ++n) {
        CHECK(from_c.triples[n].letter == c_cycle[n % 3]);
    }

    CombSequence steady = stationary_sequence(ts(Letter::A, P), 3, 1, 5);
    for (const CombTriple& tr : steady.triples) CHECK(tr.letter == Letter::A);

    CHECK_THROWS_AS((stationary_sequence(ts(Letter::A, P), 2, 2, 3)), Error);
    CHECK_THROWS_AS((stationary_sequence(ts(Letter::A, P), 1, 1, 3)), Error);
}

TEST_CASE("return times grow like Fibonacci under the smallest stationary times") {
    CombSequence fib = stationary_sequence(ts(Letter::A, P), 2, 1, 6);
    auto times = return_times(fib);
    REQUIRE(times.size() == 7);
    const long S[] = {2, 3, 5, 8, 13, 21, 34};
    const long S_hat[] = {1, 2, 3, 5, 8, 13, 21};
    for (std::size_t n = 0; n < times.size(); ++n) {
        CHECK(times[n].first == S[n]);
        CHECK(times[n].second == S_hat[n]);
    }
}

TEST_CASE("return time recursion for general stationary times") {
    CombSequence seq;
    for (int k = 0; k < 3; ++k) seq.triples.push_back({Letter::A, P, 3, 2});
    auto times = return_times(seq);
    REQUIRE(times.size() == 4);
    // S' = S + 2 S^, S^' = S + S^
    CHECK(times[0].first == 2);
    CHECK(times[0].second == 1);
    CHECK(times[1].first == 4);
    CHECK(times[1].second == 3);
    CHECK(times[2].first == 10);
    CHECK(times[2].second == 7);
    CHECK(times[3].first == 24);
    CHECK(times[3].second == 17);
}

TEST_CASE("admissibility accepts a mixed valid sequence") {
    CombSequence seq = parse_sequence("A+,2,1;B-,2,1;C-,2,1;A-,2,1");
    AdmissibilityReport rep = check_admissible(seq);
    CHECK(rep.ok);
}

TEST_CASE("admissibility rejects with the right rule and index") {
    auto fail_of = [](const std::string& text) { return check_admissible(parse_sequence(text)); };

    AdmissibilityReport start = fail_of("B-,2,1");
    CHECK(!start.ok);
    CHECK(start.index == 0);
    CHECK(start.rule == "first-type");

    AdmissibilityReport start_order = fail_of("A+,2,2");
    CHECK(!start_order.ok);
    CHECK(start_order.index == 0);
    CHECK(start_order.rule == "ordering");

    AdmissibilityReport parity = fail_of("A+,2,4");
    CHECK(!parity.ok);
    CHECK(parity.index == 0);
    CHECK(parity.rule == "parity");

    AdmissibilityReport successor = fail_of("A+,3,1;B-,2,1");
    CHECK(!successor.ok);
    CHECK(successor.index == 1);
    CHECK(successor.rule == "successor-type");

    AdmissibilityReport next_order = fail_of("A+,2,1;B-,3,3");
    CHECK(!next_order.ok);
    CHECK(next_order.index == 1);
    CHECK(next_order.rule == "ordering");

    AdmissibilityReport tail = fail_of("A+,2,1;B-,2,1;C-,2,1;A-,4,2");
    CHECK(!tail.ok);
    CHECK(tail.index == 3);
    CHECK(tail.rule == "parity");

    AdmissibilityReport empty = check_admissible(CombSequence{});
    CHECK(!empty.ok);
    CHECK(empty.rule == "empty");
}

TEST_CASE("sequence text round-trips") {
    const std::string text = "A+,2,1;B-,3,2";
    CombSequence seq = parse_sequence(text);
    REQUIRE(seq.triples.size() == 2);
    CHECK(seq.triples[0].letter == Letter::A);
    CHECK(seq.triples[0].i == P);
    CHECK(seq.triples[1].r == 3);
    CHECK(seq.triples[1].t == 2);
    CHECK(format_sequence(seq) == text);
    CHECK(format_sequence(parse_sequence(" A+ , 2 , 1 ;  B- , 3 , 2 ")) == text);
}

TEST_CASE("malformed sequence text reports a position") {
    auto message_of = [](const std::string& text) {
        try {
            parse_sequence(text);
        } catch (const Error& e) {
            CHECK(e.code() == errc::malformed_input);
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message_of("A*,2,1").find("position") != std::string::npos);
    CHECK(message_of("E+,2,1").find("position") != std::string::npos);
    CHECK(message_of("A+,2").find("position") != std::string::npos);
    CHECK(message_of("A+,1,1").find("position") != std::string::npos);
    CHECK(message_of("A+,2,1;").find("position") != std::string::npos);
    CHECK_THROWS_AS(parse_sequence(""), Error);
}

TEST_CASE("randomly generated admissible sequences pass the checker") {
    std::mt19937_64 rng(20260815);
    for (int k = 0; k < 200; ++k) {
        CombSequence seq = testsupport::random_admissible(rng, 1 + (k % 20));
        AdmissibilityReport rep = check_admissible(seq);
        if (!rep.ok) {
            CAPTURE(format_sequence(seq));
            CAPTURE(rep.rule);
            CAPTURE(rep.detail);
        }
        CHECK(rep.ok);
    }
}
