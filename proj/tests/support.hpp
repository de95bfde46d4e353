#pragma once

// Shared fixtures for the test binaries: the one-step subtype table and
// random sequence generators.

#include <random>
#include <utility>
#include <vector>

#include "nestlab/comb.hpp"

namespace testsupport {

using nestlab::CombSequence;
using nestlab::CombTriple;
using nestlab::Letter;
using nestlab::OrderingConstraint;
using nestlab::Sgn;
using nestlab::Subtype;

struct TransitionRow {
    Letter from;
    Sgn i;
    Sgn j;
    long r;
    long t;
    Letter to;  // Letter::D marks a terminal row
    Sgn to_i;   // ignored for D
    Sgn to_j;
};

// The full one-step table. Parity representatives respect each source row's
// ordering requirement: subtypes stepping under "t < r" use (3,1), (3,2),
// (4,1), (4,2); subtypes stepping under the odd-ascending order use (3,1),
// (2,1), (2,4), where the even-even representative needs t after r.
inline const std::vector<TransitionRow>& transition_rows() {
    constexpr Sgn P = Sgn::plus;
    constexpr Sgn M = Sgn::minus;
    static const std::vector<TransitionRow> rows = {
        // negative i, letter A, local max
        {Letter::A, M, P, 3, 1, Letter::A, P, P},
        {Letter::A, M, P, 3, 2, Letter::C, M, P},
        {Letter::A, M, P, 4, 1, Letter::B, P, M},
        {Letter::A, M, P, 4, 2, Letter::D, P, P},
        // negative i, letter A, local min
        {Letter::A, M, M, 3, 1, Letter::A, P, M},
        {Letter::A, M, M, 3, 2, Letter::C, M, M},
        {Letter::A, M, M, 4, 1, Letter::B, P, P},
        {Letter::A, M, M, 4, 2, Letter::D, P, P},
        // negative i, letter B
        {Letter::B, M, P, 3, 1, Letter::D, P, P},
        {Letter::B, M, P, 3, 2, Letter::B, P, P},
        {Letter::B, M, P, 4, 1, Letter::C, M, M},
        {Letter::B, M, P, 4, 2, Letter::A, P, M},
        {Letter::B, M, M, 3, 1, Letter::D, P, P},
        {Letter::B, M, M, 3, 2, Letter::B, P, M},
        {Letter::B, M, M, 4, 1, Letter::C, M, P},
        {Letter::B, M, M, 4, 2, Letter::A, P, P},
        // negative i, letter C
        {Letter::C, M, P, 3, 1, Letter::A, P, P},
        {Letter::C, M, P, 2, 1, Letter::A, M, M},
        {Letter::C, M, P, 2, 4, Letter::A, P, M},
        {Letter::C, M, M, 3, 1, Letter::A, P, M},
        {Letter::C, M, M, 2, 1, Letter::A, M, P},
        {Letter::C, M, M, 2, 4, Letter::A, P, P},
        // positive i, letter A
        {Letter::A, P, P, 3, 1, Letter::A, P, P},
        {Letter::A, P, P, 2, 1, Letter::B, M, P},
        {Letter::A, P, P, 2, 4, Letter::D, P, P},
        {Letter::A, P, M, 3, 1, Letter::A, P, M},
        {Letter::A, P, M, 2, 1, Letter::B, M, P},
        {Letter::A, P, M, 2, 4, Letter::D, P, P},
        // positive i, letter B
        {Letter::B, P, P, 3, 1, Letter::D, P, P},
        {Letter::B, P, P, 2, 1, Letter::C, P, P},
        {Letter::B, P, P, 2, 4, Letter::A, P, P},
        {Letter::B, P, M, 3, 1, Letter::D, P, P},
        {Letter::B, P, M, 2, 1, Letter::C, P, M},
        {Letter::B, P, M, 2, 4, Letter::A, P, M},
        // positive i, letter C: every parity row lands on A with the same j
        {Letter::C, P, P, 3, 1, Letter::A, P, P},
        {Letter::C, P, P, 3, 2, Letter::A, P, P},
        {Letter::C, P, P, 4, 1, Letter::A, P, P},
        {Letter::C, P, P, 4, 2, Letter::A, P, P},
        {Letter::C, P, M, 3, 1, Letter::A, P, M},
        {Letter::C, P, M, 3, 2, Letter::A, P, M},
        {Letter::C, P, M, 4, 1, Letter::A, P, M},
        {Letter::C, P, M, 4, 2, Letter::A, P, M},
    };
    return rows;
}

// Parity classes a state may step through: types A exclude the even-even
// class, types B the odd-odd class, types C nothing.
inline bool class_allowed(Letter letter, long r, long t) {
    int e = nestlab::parity_class(r, t);
    if (letter == Letter::A) return e != 2;
    if (letter == Letter::B) return e != -2;
    return true;
}

// Admissible sequence built by walking the subtype automaton with
// rejection-sampled times.
inline CombSequence random_admissible(std::mt19937_64& rng, std::size_t length, long max_r = 9,
                                      long max_t = 9) {
    constexpr Sgn P = Sgn::plus;
    constexpr Sgn M = Sgn::minus;
    const Subtype starts[] = {{Letter::A, P, P}, {Letter::A, P, M},
                              {Letter::C, M, P}, {Letter::C, M, M}};
    Subtype cur = starts[rng() % 4];
    std::uniform_int_distribution<long> pick_r(2, max_r);
    std::uniform_int_distribution<long> pick_t(1, max_t);
    CombSequence seq;
    for (std::size_t n = 0; n < length; ++n) {
        OrderingConstraint oc = nestlab::ordering_constraint(cur.letter, cur.i);
        long r = 0;
        long t = 0;
        do {
            r = pick_r(rng);
            t = pick_t(rng);
        } while (!nestlab::ordering_holds(oc, t, r) || !class_allowed(cur.letter, r, t));
        seq.triples.push_back(CombTriple{cur.letter, cur.i, r, t});
        cur = nestlab::transition(cur, r, t);
    }
    return seq;
}

// Unconstrained random sequence; almost always inadmissible.
inline CombSequence random_any(std::mt19937_64& rng, std::size_t length, long max_r = 9,
                               long max_t = 9) {
    const Letter letters[] = {Letter::A, Letter::B, Letter::C, Letter::D};
    std::uniform_int_distribution<long> pick_r(2, max_r);
    std::uniform_int_distribution<long> pick_t(1, max_t);
    CombSequence seq;
    for (std::size_t n = 0; n < length; ++n) {
        Letter l = letters[rng() % 4];
        Sgn i = (rng() % 2) ? Sgn::plus : Sgn::minus;
        seq.triples.push_back(CombTriple{l, i, pick_r(rng), pick_t(rng)});
    }
    return seq;
}

// Admissible sequence with one random field corrupted; often still parseable
// but rarely admissible.
inline CombSequence random_corrupted(std::mt19937_64& rng, std::size_t length, long max_r = 9,
                                     long max_t = 9) {
    CombSequence seq = random_admissible(rng, length, max_r, max_t);
    if (seq.triples.empty()) return seq;
    CombTriple& victim = seq.triples[rng() % seq.triples.size()];
    switch (rng() % 4) {
        case 0: victim.letter = (rng() % 2) ? Letter::D : Letter::B; break;
        case 1: victim.i = victim.i == Sgn::plus ? Sgn::minus : Sgn::plus; break;
        case 2: victim.r = 2 + static_cast<long>(rng() % (max_r - 1)); break;
        default: victim.t = 1 + static_cast<long>(rng() % max_t); break;
    }
    return seq;
}

}  // namespace testsupport
