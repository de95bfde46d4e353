#include "nestlab/comb.hpp"

#include <cctype>

namespace nestlab {

bool admissible_less(long m, long n) {
    if (m == n) return false;
    bool modd = m % 2 != 0;
    bool nodd = n % 2 != 0;
    if (modd && !nodd) return true;  // every odd precedes every even
    if (!modd && nodd) return false;
    if (modd) return m < n; // odds ascend
    return m > n;           // evens descend
}

int parity_class(long r, long t) {
    return (r % 2 == 0 ? 1 : -1) + (t % 2 == 0 ? 1 : -1);
}

OrderingConstraint ordering_constraint(Letter letter, Sgn i) {
    if (letter == Letter::D) throw Error(errc::type_d, "no inducing step from type D");
    if (letter == Letter::C) {
        return i == Sgn::minus ? OrderingConstraint::admissible_prec
                               : OrderingConstraint::strict_less;
    }
    // A and B share the rule: orientation decides
    return i == Sgn::minus ? OrderingConstraint::strict_less
                           : OrderingConstraint::admissible_prec;
}

bool ordering_holds(OrderingConstraint oc, long t, long r) {
    return oc == OrderingConstraint::strict_less ? t < r : admissible_less(t, r);
}

namespace {

constexpr Sgn kP = Sgn::plus;
constexpr Sgn kM = Sgn::minus;

// Successor subtype for one inducing step, keyed by source subtype and the
// parities of (r, t). nullopt marks a parity row the source's ordering
// constraint rules out. Letter D output marks terminal rows.
std::optional<Subtype> table_row(const Subtype& s, bool r_even, bool t_even) {
    const bool oo = !r_even && !t_even;
    const bool oe = !r_even && t_even;
    const bool eo = r_even && !t_even;

    auto st = [](Letter l, Sgn i, Sgn j) { return Subtype{l, i, j}; };
    const Subtype D{Letter::D, kP, kP};

    if (s.i == kM) {
        switch (s.letter) {
        case Letter::A:
            if (s.j == kP) {
                if (oo) return st(Letter::A, kP, kP);
                if (oe) return st(Letter::C, kM, kP);
                if (eo) return st(Letter::B, kP, kM);
                return D;
            }
            if (oo) return st(Letter::A, kP, kM);
            if (oe) return st(Letter::C, kM, kM);
            if (eo) return st(Letter::B, kP, kP);
            return D;
        case Letter::B:
            if (s.j == kP) {
                if (oo) return D;
                if (oe) return st(Letter::B, kP, kP);
                if (eo) return st(Letter::C, kM, kM);
                return st(Letter::A, kP, kM);
            }
            if (oo) return D;
            if (oe) return st(Letter::B, kP, kM);
            if (eo) return st(Letter::C, kM, kP);
            return st(Letter::A, kP, kP);
        case Letter::C:
            if (s.j == kP) {
                if (oo) return st(Letter::A, kP, kP);
                if (oe) return std::nullopt;
                if (eo) return st(Letter::A, kM, kM);
                return st(Letter::A, kP, kM);
            }
            if (oo) return st(Letter::A, kP, kM);
            if (oe) return std::nullopt;
            if (eo) return st(Letter::A, kM, kP);
            return st(Letter::A, kP, kP);
        default:
            break;
        }
    } else {
        switch (s.letter) {
        case Letter::A:
            if (oo) return st(Letter::A, kP, s.j);
            if (oe) return std::nullopt;
            if (eo) return st(Letter::B, kM, kP);
            return D;
        case Letter::B:
            if (oo) return D;
            if (oe) return std::nullopt;
            if (eo) return st(Letter::C, kP, s.j);
            return st(Letter::A, kP, s.j);
        case Letter::C:
            // one outcome for every parity row the constraint admits
            return st(Letter::A, kP, s.j);
        default:
            break;
        }
    }
    throw Error(errc::type_d, "no inducing step from type D");
}

} // namespace

Subtype transition(const Subtype& s, long r, long t) {
    if (r < 2 || t < 1) {
        throw Error(errc::malformed_input, "need r >= 2 and t >= 1");
    }
    auto row = table_row(s, r % 2 == 0, t % 2 == 0);
    if (row && row->letter == Letter::D) return *row; // terminal row, reported as-is
    if (!ordering_holds(ordering_constraint(s), t, r)) {
        throw Error(errc::constraint_violated,
                    "(" + std::to_string(r) + "," + std::to_string(t) +
                        ") breaks the t-vs-r requirement of " + s.str());
    }
    if (!row) {
        throw Error(errc::unlisted_case,
                    "parity row missing although the ordering constraint holds");
    }
    return *row;
}

std::optional<TypeSign> next_type(Letter letter, Sgn i, bool r_even, bool t_even) {
    // j does not influence the projected letter/orientation
    auto row = table_row(Subtype{letter, i, Sgn::plus}, r_even, t_even);
    if (!row) throw Error(errc::unlisted_case, "parity row excluded by the ordering constraint");
    if (row->letter == Letter::D) return std::nullopt;
    return TypeSign{row->letter, row->i};
}

AutomatonRun run_automaton(const Subtype& start,
                           const std::vector<std::pair<long, long>>& steps) {
    AutomatonRun run;
    run.states.push_back(start);
    for (std::size_t k = 0; k < steps.size(); ++k) {
        Subtype cur = run.states.back();
        if (cur.letter == Letter::D) {
            run.failed_at = k;
            run.reason = "type-d";
            return run;
        }
        try {
            Subtype nxt = transition(cur, steps[k].first, steps[k].second);
            run.states.push_back(nxt);
            if (nxt.letter == Letter::D) {
                run.failed_at = k;
                run.reason = "type-d";
                return run;
            }
        } catch (const Error& e) {
            run.failed_at = k;
            run.reason = errc_name(e.code());
            return run;
        }
    }
    return run;
}

AdmissibilityReport check_admissible(const CombSequence& seq) {
    const auto& tr = seq.triples;
    if (tr.empty()) return AdmissibilityReport::fail(0, "empty", "no triples");

    TypeSign first = tr[0].type();
    bool first_ok = (first.letter == Letter::A && first.i == Sgn::plus) ||
                    (first.letter == Letter::C && first.i == Sgn::minus);
    if (!first_ok) {
        return AdmissibilityReport::fail(0, "first-type",
                                         "sequence must open with A+ or C-, got " + first.str());
    }

    for (std::size_t n = 0; n < tr.size(); ++n) {
        const CombTriple& cur = tr[n];
        if (cur.letter == Letter::D) {
            return AdmissibilityReport::fail(n, "type-d", "type D admits no inducing step");
        }
        OrderingConstraint oc = ordering_constraint(cur.letter, cur.i);
        if (!ordering_holds(oc, cur.t, cur.r)) {
            const char* rel = oc == OrderingConstraint::strict_less ? "t < r" : "t before r";
            return AdmissibilityReport::fail(n, "ordering",
                                             cur.type().str() + " requires " + rel + ", got t=" +
                                                 std::to_string(cur.t) + " r=" +
                                                 std::to_string(cur.r));
        }
        auto nxt = next_type(cur.letter, cur.i, cur.r % 2 == 0, cur.t % 2 == 0);
        if (!nxt) {
            return AdmissibilityReport::fail(
                n, "parity", "parity class e=" + std::to_string(parity_class(cur.r, cur.t)) +
                                 " is excluded for " + cur.type().str());
        }
        if (n + 1 < tr.size() && !(tr[n + 1].type() == *nxt)) {
            return AdmissibilityReport::fail(n + 1, "successor-type",
                                             "step from " + cur.type().str() + " with (r,t)=(" +
                                                 std::to_string(cur.r) + "," +
                                                 std::to_string(cur.t) + ") forces " + nxt->str() +
                                                 ", got " + tr[n + 1].type().str());
        }
    }
    return AdmissibilityReport::pass();
}

CombSequence stationary_sequence(const TypeSign& start, long r, long t, std::size_t length) {
    if (r < 2 || t < 1)
        throw Error(errc::malformed_input, "stationary sequence needs r >= 2 and t >= 1");
    CombSequence seq;
    TypeSign cur = start;
    const bool r_even = r % 2 == 0;
    const bool t_even = t % 2 == 0;
    for (std::size_t n = 0; n < length; ++n) {
        seq.triples.push_back({cur.letter, cur.i, r, t});
        if (n + 1 == length) break;
        std::optional<TypeSign> nxt = next_type(cur.letter, cur.i, r_even, t_even);
        if (!nxt)
            throw Error(errc::type_d, "stationary step from " + cur.str() + " reaches D");
        cur = *nxt;
    }
    return seq;
}

std::vector<std::pair<mpz_class, mpz_class>> return_times(const CombSequence& seq) {
    std::vector<std::pair<mpz_class, mpz_class>> out;
    mpz_class S = 2;
    mpz_class Sh = 1;
    out.emplace_back(S, Sh);
    for (const CombTriple& tr : seq.triples) {
        mpz_class S1 = S + (tr.r - 1) * Sh;
        mpz_class Sh1 = S + (tr.t - 1) * Sh;
        S = S1;
        Sh = Sh1;
        out.emplace_back(S, Sh);
    }
    return out;
}

namespace {

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    char take() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        return s[pos++];
    }
    void expect(char c) {
        char got = take();
        if (got != c) {
            fail(std::string("expected '") + c + "', got '" + got + "'");
        }
    }
    long integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected an integer");
        long v = 0;
        for (std::size_t k = start; k < pos; ++k) {
            v = v * 10 + (s[k] - '0');
            if (v > 1000000000L) fail("integer out of range");
        }
        return v;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw Error(errc::malformed_input, msg + " at position " + std::to_string(pos));
    }
};

} // namespace

CombSequence parse_sequence(const std::string& text) {
    CombSequence seq;
    Cursor cur{text};
    if (cur.done()) throw Error(errc::malformed_input, "empty sequence");
    while (true) {
        char lc = cur.take();
        Letter letter;
        switch (lc) {
        case 'A': letter = Letter::A; break;
        case 'B': letter = Letter::B; break;
        case 'C': letter = Letter::C; break;
        case 'D': letter = Letter::D; break;
        default: cur.fail(std::string("expected letter A/B/C/D, got '") + lc + "'");
        }
        char sc = cur.take();
        Sgn i;
        if (sc == '+') {
            i = Sgn::plus;
        } else if (sc == '-') {
            i = Sgn::minus;
        } else {
            cur.fail(std::string("expected sign '+' or '-', got '") + sc + "'");
        }
        cur.expect(',');
        long r = cur.integer();
        cur.expect(',');
        long t = cur.integer();
        if (r < 2) cur.fail("r must be at least 2");
        if (t < 1) cur.fail("t must be at least 1");
        seq.triples.push_back(CombTriple{letter, i, r, t});
        if (cur.done()) break;
        cur.expect(';');
        if (cur.done()) cur.fail("trailing ';'");
    }
    return seq;
}

std::string format_sequence(const CombSequence& seq) {
    std::string out;
    for (std::size_t k = 0; k < seq.triples.size(); ++k) {
        const CombTriple& tr = seq.triples[k];
        if (k) out += ';';
        out += letter_char(tr.letter);
        out += sign_char(tr.i);
        out += ',';
        out += std::to_string(tr.r);
        out += ',';
        out += std::to_string(tr.t);
    }
    return out;
}

} // namespace nestlab
