#include "nestlab/ledger.hpp"

#include <algorithm>
#include <cmath>

namespace nestlab {

bool SeparationSymbol::valid(double slack) const {
    if (!(beta >= 0)) return false;
    const double a = alpha();
    if (lambda1 < -a - slack || lambda1 > a + slack) return false;
    if (lambda2 < -a - slack || lambda2 > a + slack) return false;
    if (lambda1 + lambda2 < -slack) return false;
    return true;
}

void SeparationSymbol::require_valid() const {
    if (!valid())
        throw Error(errc::constraint_violated,
                    "separation symbol leaves the admissible correction box");
}

SeparationSymbol normalize(const BoundQuadruple& b) {
    if (b.b1 < 0 || b.b2 < 0 || b.b3 < 0 || b.b4 < 0)
        throw Error(errc::malformed_input, "separation bounds must be nonnegative");
    const double two_thirds = 2.0 / 3.0;
    double beta = std::min({2 * b.b3, 2 * b.b4, two_thirds * (b.b1 + b.b3),
                            two_thirds * (b.b2 + b.b4), two_thirds * (b.b1 + b.b4)});
    beta = std::max(beta, 0.0);
    SeparationSymbol out{beta, std::min(b.b1 - beta / 2, beta / 2),
                         std::min(b.b4 - beta, beta / 2)};
    out.require_valid();
    return out;
}

SeparationSymbol lift_norm(const SeparationSymbol& sym, double epsilon) {
    sym.require_valid();
    if (epsilon < 0)
        throw Error(errc::malformed_input, "norm lift needs a nonnegative widening");
    SeparationSymbol out =
        normalize({sym.s1(), sym.s2(), sym.s3() + epsilon, sym.s4() + epsilon});
    // The lifted norm always reaches beta + 2*epsilon/3; half the widening is
    // the guaranteed floor and a failure here is an arithmetic alarm.
    if (out.beta + 1e-9 * (1 + sym.beta) < sym.beta + epsilon / 2)
        throw Error(errc::constraint_violated, "norm lift fell short of beta + epsilon/2");
    return out;
}

SeparationSymbol step_fibonacci_t1(const SeparationSymbol& sym) {
    sym.require_valid();
    SeparationSymbol out{sym.beta, sym.lambda2 / 2, sym.lambda1 / 2};
    out.require_valid();
    return out;
}

SeparationSymbol step_general(const SeparationSymbol& sym, double L) {
    sym.require_valid();
    if (L < 0)
        throw Error(errc::malformed_input, "extra annulus modulus must be nonnegative");
    const double a = sym.alpha();
    SeparationSymbol out{sym.beta + L / 4, (sym.lambda1 - a) / 2, (sym.lambda2 + a) / 2};
    out.require_valid();
    return out;
}

LedgerState ledger_start(double tau) {
    if (tau < 0)
        throw Error(errc::malformed_input, "tau must be nonnegative");
    LedgerState state;
    state.symbol = normalize({tau, 0, tau, tau});
    state.delta = state.symbol.beta / 4;
    state.step_index = 0;
    state.last_rule = "start";
    state.history.emplace_back(0, state.symbol.beta);
    return state;
}

namespace {

void grow(LedgerState& state, double amount, const char* rule) {
    state.symbol.beta += amount;
    state.delta = state.symbol.beta / 4;
    state.last_rule = rule;
}

} // namespace

LedgerState step_growth(const LedgerState& state, const CombTriple& triple, double eta) {
    LedgerState next = state;
    next.step_index = state.step_index + 1;
    next.last_rule = "none";
    if (triple.t >= 2) {
        grow(next, next.delta / 8, "deep_return");
        next.eta_pending = false;
    } else if (triple.r >= 3) {
        grow(next, next.delta / 8, "long_central");
        next.eta_pending = false;
    } else {
        // (2,1) step: a pending payoff from the previous step's type-B level
        // lands now; a fresh type-B level arms the next step.
        if (next.eta_pending) {
            grow(next, eta, "fibonacci_block");
            next.eta_pending = false;
        }
        if (triple.letter == Letter::B) next.eta_pending = true;
    }
    next.history.emplace_back(next.step_index, next.symbol.beta);
    return next;
}

double mu_lower(const LedgerState& state) { return state.symbol.s4() / 2; }

std::vector<LedgerRow> run_ledger(const CombSequence& seq, double tau,
                                  std::optional<double> eta_config) {
    LedgerState state = ledger_start(tau);
    const double eta = eta_config.value_or(state.symbol.beta / 32);
    std::vector<LedgerRow> rows;
    rows.push_back({0, state.symbol.beta, state.delta, mu_lower(state), state.last_rule});
    for (const CombTriple& triple : seq.triples) {
        const double entering_mu = mu_lower(state);
        state.symbol = triple.t == 1 ? step_fibonacci_t1(state.symbol)
                                     : step_general(state.symbol, 0);
        state = step_growth(state, triple, eta);
        rows.push_back({state.step_index, state.symbol.beta, state.delta, entering_mu,
                        state.last_rule});
    }
    return rows;
}

} // namespace nestlab
