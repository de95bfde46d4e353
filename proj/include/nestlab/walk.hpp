#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nestlab/nest.hpp"

namespace nestlab {

// One application of the distortion transfer: kappa -> kappa^2 / (1 + 2*kappa).
double koebe_kappa(double kappa);

// Per-level data used to evaluate the induced map pointwise at shell level n:
// the inducing depth r_n, the images of the turning points under the level-n
// return, and which side box holds the image of c.
struct WalkLevel {
    long r = 0;
    Real vc;
    Real vd;
    bool vc_in_J = false; // true when the return image of c lies in the J-side box
};

// The four monotone branches flanking the turning points inside I^n / J^n,
// plus the fold neighborhoods W (around c) and V (around d) that map over the
// non-central domains. Materialized only for tests; the stepper works
// pointwise.
struct BranchSet {
    std::optional<Interval> L, L_hat; // inside I^n, on either side of c
    std::optional<Interval> R, R_hat; // inside J^n, on either side of d
    std::optional<Interval> W, V;     // fold neighborhoods of c and d
};

struct InducedMapContext {
    CubicMap map;
    Nest nest;
    std::vector<WalkLevel> levels; // index n valid for 1 <= n <= depth-1
    long max_iter = kDefaultMaxIter;

    long depth() const { return static_cast<long>(nest.levels.size()) - 1; }
};

// Builds the context from a nest with at least two levels.
InducedMapContext make_walk_context(Nest nest, long max_iter = kDefaultMaxIter);

// Shell index of x: the n with x in (I^n \ I^{n+1}) u (J^n \ J^{n+1});
// nullopt when x is outside I^0 u J^0. Throws depth_exceeded when x lies in
// the deepest computed pair, and boundary_hit near any shell boundary.
std::optional<long> locate_level(const InducedMapContext& ctx, const Real& x);

// Immediate branches and fold neighborhoods serving shell level n
// (1 <= n <= depth-1), computed by monotone bisection against the level-n
// return.
BranchSet materialize_branches(const InducedMapContext& ctx, long n);

struct StepOutcome {
    Real x;
    long from_level = 0;
    long to_level = 0;
    std::string branch_case; // "level0", "immediate", "fold_return", "fold_exit", "double"
};

// One step of the induced map at x (which must lie inside a shell of level
// <= depth-1). Throws boundary_hit, depth_exceeded, no_return.
StepOutcome step_G(const InducedMapContext& ctx, const Real& x);

struct WalkRun {
    std::vector<long> levels;  // alpha_0 .. alpha_K
    std::string stop_reason;   // "ok" when all requested steps completed
    bool completed = false;
};

// Runs the level walk from x0 (iterating under the map first if x0 starts
// outside I^0 u J^0). Errors are recorded in stop_reason, never thrown.
WalkRun simulate_walk(const InducedMapContext& ctx, const Real& x0, long steps);

struct WalkStats {
    std::map<long, long> level_counts;                      // visits with an outgoing step
    std::map<std::pair<long, long>, long> transition_counts; // (level, jump) -> count
    std::map<long, double> drift_estimates;                 // mean jump per level
    std::map<long, double> variance_estimates;              // second moment per level
    long samples = 0;
    long steps_per_sample = 0;
    long aborted = 0;            // samples stopped before completing all steps
    long revisit_threshold = 2;
    double revisit_fraction = 0; // non-aborted samples reaching <= threshold at k >= 1
};

struct WalkResult {
    WalkStats stats;
    std::vector<WalkRun> runs;
};

// Seeded Monte Carlo over uniformly random starting points in I^0 u J^0
// (length-proportional, one mt19937_64 stream per sample derived from the
// seed). Per-sample failures are recorded, not thrown.
WalkResult walk_statistics(const InducedMapContext& ctx, long samples, long steps,
                           std::uint64_t seed);

} // namespace nestlab
