#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nestlab/errors.hpp"

namespace nestlab {

enum class Letter : std::uint8_t { A, B, C, D };
enum class Sgn : std::int8_t { minus = 0, plus = 1 };

inline char letter_char(Letter l) {
    switch (l) {
    case Letter::A: return 'A';
    case Letter::B: return 'B';
    case Letter::C: return 'C';
    case Letter::D: return 'D';
    }
    return '?';
}
inline char sign_char(Sgn s) { return s == Sgn::plus ? '+' : '-'; }

// Full subtype: letter, orientation sign i of the non-central branches, and
// extremum sign j at the left turning point. All 16 combinations are
// representable; D is carried only so failures can be reported.
struct Subtype {
    Letter letter;
    Sgn i;
    Sgn j;

    bool operator==(const Subtype&) const = default;
    std::string str() const { return {letter_char(letter), sign_char(i), sign_char(j)}; }
};

// External single-sign form (letter with orientation sign only).
struct TypeSign {
    Letter letter;
    Sgn i;

    bool operator==(const TypeSign&) const = default;
    std::string str() const { return {letter_char(letter), sign_char(i)}; }
};

struct CombTriple {
    Letter letter;
    Sgn i;
    long r; // >= 2
    long t; // >= 1

    TypeSign type() const { return {letter, i}; }
};

enum class SeqOrigin { declared, extracted };

struct CombSequence {
    std::vector<CombTriple> triples;
    SeqOrigin origin = SeqOrigin::declared;
};

// Total order 1 < 3 < 5 < ... < 6 < 4 < 2: odds ascend first, evens descend
// after every odd.
bool admissible_less(long m, long n);

// (-1)^r + (-1)^t
int parity_class(long r, long t);

enum class OrderingConstraint { strict_less, admissible_prec };

// Which relation t-vs-r an inducing step from this subtype must satisfy.
// Depends only on letter and i. Throws type_d for letter D.
OrderingConstraint ordering_constraint(Letter letter, Sgn i);
inline OrderingConstraint ordering_constraint(const Subtype& s) {
    return ordering_constraint(s.letter, s.i);
}

bool ordering_holds(OrderingConstraint oc, long t, long r);

// One inducing step of the subtype automaton. Rows mapping to D are returned
// as D (terminal); otherwise the ordering constraint is enforced
// (constraint_violated) and a missing parity row raises unlisted_case, which
// is unreachable when the constraint holds.
Subtype transition(const Subtype& s, long r, long t);

// Single-sign projection of the same table: the successor type for a step
// from (letter, i) with the given parities, or nullopt where the table is
// terminal (letter D). Throws unlisted_case for parity rows excluded by the
// ordering constraint.
std::optional<TypeSign> next_type(Letter letter, Sgn i, bool r_even, bool t_even);

struct AutomatonRun {
    std::vector<Subtype> states; // states[0] is the start state
    std::optional<std::size_t> failed_at; // index of first failing step
    std::string reason;

    bool ok() const { return !failed_at.has_value(); }
};

// Repeated transition from a level-1 start state (A++ or C-+).
AutomatonRun run_automaton(const Subtype& start,
                           const std::vector<std::pair<long, long>>& steps);

struct AdmissibilityReport {
    bool ok = true;
    std::size_t index = 0; // 0-based triple index of the first violation
    std::string rule;      // short identifier of the violated requirement
    std::string detail;

    static AdmissibilityReport pass() { return {}; }
    static AdmissibilityReport fail(std::size_t idx, std::string r, std::string d) {
        return {false, idx, std::move(r), std::move(d)};
    }
};

// Full inductive admissibility check on a declared sequence.
AdmissibilityReport check_admissible(const CombSequence& seq);

// Sequence with constant inducing times (r, t) whose letters follow the
// automaton from the given start type. With (2, 1) from A+ the letters cycle
// A, B, C and the return times grow like Fibonacci numbers. Throws type_d if
// the automaton reaches D before the requested length.
CombSequence stationary_sequence(const TypeSign& start, long r, long t, std::size_t length);

// Integer recursion S_{n+1} = S_n + (r_n - 1) S^_n, S^_{n+1} = S_n + (t_n - 1) S^_n
// from S_1 = 2, S^_1 = 1; returns pairs for n = 1 .. len+1.
std::vector<std::pair<mpz_class, mpz_class>> return_times(const CombSequence& seq);

// Text grammar: triples "LETTER SIGN , r , t" joined by ';'. Whitespace is
// ignored, letters are case-sensitive.
CombSequence parse_sequence(const std::string& text);
std::string format_sequence(const CombSequence& seq);

} // namespace nestlab
