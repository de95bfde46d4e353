#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nestlab/comb.hpp"
#include "nestlab/errors.hpp"

namespace nestlab {

// Normalized separation data: norm beta >= 0, half-norm alpha = beta/2, and
// corrections lambda1, lambda2 confined to [-alpha, alpha] with
// lambda1 + lambda2 >= 0. The derived quadruple s1..s4 lists the annulus
// lower bounds the symbol certifies.
struct SeparationSymbol {
    double beta;
    double lambda1;
    double lambda2;

    double alpha() const { return beta / 2; }
    double s1() const { return alpha() + lambda1; }
    double s2() const { return alpha() - lambda2; }
    double s3() const { return beta - lambda1; }
    double s4() const { return beta + lambda2; }

    bool valid(double slack = 1e-12) const;
    void require_valid() const; // throws constraint_violated
};

// Raw lower bounds b1..b4 available for s1..s4.
struct BoundQuadruple {
    double b1 = 0;
    double b2 = 0;
    double b3 = 0;
    double b4 = 0;
};

// Largest-norm valid symbol with s_i <= b_i. Closed form: beta is the minimum
// of the five linear caps 2*b3, 2*b4, (2/3)(b1+b3), (2/3)(b2+b4),
// (2/3)(b1+b4); corrections then take their maximal feasible values, which
// also maximizes s4 (the bound feeding the modulus estimates). All-zero
// bounds give the zero symbol.
SeparationSymbol normalize(const BoundQuadruple& bounds);

// Re-normalize after widening the two outer bounds by epsilon >= 0. The
// result's norm is asserted to be >= beta + epsilon/2 (it equals
// beta + 2*epsilon/3 for every valid input).
SeparationSymbol lift_norm(const SeparationSymbol& sym, double epsilon);

// Inducing step across an immediate return with t = 1: norm is preserved and
// the corrections are swapped and halved.
SeparationSymbol step_fibonacci_t1(const SeparationSymbol& sym);

// Inducing step through a non-immediate branch picking up an extra annulus of
// modulus L >= 0: corrections are averaged toward -alpha/+alpha and the norm
// grows by L/4 (exactly preserved when L = 0).
SeparationSymbol step_general(const SeparationSymbol& sym, double L);

struct LedgerState {
    SeparationSymbol symbol;
    double delta = 0;      // separation bound, refreshed to beta/4 on growth
    long step_index = 0;
    bool eta_pending = false; // a type-B level inside a (2,1) run awaits its payoff
    std::string last_rule;
    std::vector<std::pair<long, double>> history; // (step, beta)
};

// State before any inducing step: symbol = normalize((tau, 0, tau, tau)),
// delta = beta/4.
LedgerState ledger_start(double tau);

// Growth dispatch for one inducing step (the symbol's correction update is
// applied separately, see run_ledger): t >= 2 or (r >= 3, t = 1) grow the
// norm by delta/8 immediately; a (2,1) step grows by eta one step after a
// type-B (2,1) level, provided the run was not interrupted. delta refreshes
// to beta/4 after each growth event; any non-(2,1) step cancels a pending
// payoff.
LedgerState step_growth(const LedgerState& state, const CombTriple& triple, double eta);

// Certified lower bound for the principal modulus at the current step: s4/2.
double mu_lower(const LedgerState& state);

struct LedgerRow {
    long step;
    double beta;
    double delta;
    double mu_lower;
    std::string rule;
};

// Full trajectory over a sequence: row 0 is the start state, row n the state
// after processing triple n; mu_lower in row n uses the symbol entering that
// step. eta defaults to beta_0/32 when not given.
std::vector<LedgerRow> run_ledger(const CombSequence& seq, double tau,
                                  std::optional<double> eta_config = std::nullopt);

} // namespace nestlab
