#include "nestlab/walk.hpp"

#include <random>

namespace nestlab {

double koebe_kappa(double kappa) {
    if (!(kappa > 0))
        throw Error(errc::malformed_input, "distortion transfer needs kappa > 0");
    return kappa * kappa / (1 + 2 * kappa);
}

namespace {

Real boundary_tol(prec_t prec) { return Real::pow2(-static_cast<long>(prec / 4), prec); }

bool in_pair(const Real& x, const NestLevel& lv) {
    return lv.I.contains(x) || lv.J.contains(x);
}

void guard_level_boundaries(const Real& x, const NestLevel& lv, const Real& tol) {
    if (lv.I.boundary_gap(x) < tol || lv.J.boundary_gap(x) < tol)
        throw Error(errc::boundary_hit, "walk point is too close to a shell boundary");
}

// g_n evaluated pointwise: first return to the level-(n-1) pair.
Real g_apply(const InducedMapContext& ctx, const Real& x, long n) {
    const NestLevel& base = ctx.nest.levels[static_cast<std::size_t>(n - 1)];
    return first_return(ctx.map, x, base.I, base.J, ctx.max_iter).point;
}

// Monotone bisection for f^time = y on [a, b]; the iterate must be monotone
// there and y must lie between the endpoint images.
Real invert_iterate(const InducedMapContext& ctx, long time, Real a, Real b, const Real& y) {
    const prec_t prec = ctx.map.precision_bits;
    Real fa = ctx.map.iterate(a, time);
    const bool increasing = fa < y;
    for (long it = 0; it < static_cast<long>(prec) + 8; ++it) {
        Real mid = Interval(a, b).mid();
        if ((ctx.map.iterate(mid, time) < y) == increasing)
            a = mid;
        else
            b = mid;
    }
    return Interval(a, b).mid();
}

} // namespace

InducedMapContext make_walk_context(Nest nest, long max_iter) {
    if (nest.levels.size() < 2)
        throw Error(errc::malformed_input, "walk context needs a nest of depth at least 1");
    InducedMapContext ctx{nest.map, std::move(nest), {}, max_iter};
    const long depth = ctx.depth();
    const prec_t prec = ctx.map.precision_bits;
    ctx.levels.push_back(WalkLevel{0, Real(0, prec), Real(0, prec), false}); // slot 0 unused
    for (long n = 1; n + 1 <= depth; ++n) {
        const NestLevel& lv = ctx.nest.levels[static_cast<std::size_t>(n)];
        const NestLevel& dn = ctx.nest.levels[static_cast<std::size_t>(n + 1)];
        WalkLevel wl{(dn.S - lv.S) / lv.S_hat + 1, ctx.map.iterate(ctx.map.c, lv.S),
                     ctx.map.iterate(ctx.map.d, lv.S), false};
        if (lv.D && lv.D->contains(wl.vc))
            wl.vc_in_J = true;
        else if (!(lv.C && lv.C->contains(wl.vc)))
            throw Error(errc::internal, "return image of the fold misses both landing boxes");
        ctx.levels.push_back(std::move(wl));
    }
    return ctx;
}

std::optional<long> locate_level(const InducedMapContext& ctx, const Real& x) {
    const Real tol = boundary_tol(ctx.map.precision_bits);
    const long depth = ctx.depth();
    long n = -1;
    for (long k = 0; k <= depth; ++k) {
        const NestLevel& lv = ctx.nest.levels[static_cast<std::size_t>(k)];
        guard_level_boundaries(x, lv, tol);
        if (!in_pair(x, lv)) break;
        n = k;
    }
    if (n < 0) return std::nullopt;
    if (n == depth)
        throw Error(errc::depth_exceeded, "point lies deeper than the computed nest");
    return n;
}

BranchSet materialize_branches(const InducedMapContext& ctx, long n) {
    if (n < 1 || n + 1 > ctx.depth())
        throw Error(errc::malformed_input, "branch level outside the computed range");
    const NestLevel& lv = ctx.nest.levels[static_cast<std::size_t>(n)];
    const WalkLevel& wl = ctx.levels[static_cast<std::size_t>(n)];
    const Interval& box_c = wl.vc_in_J ? *lv.D : *lv.C;
    const Interval& box_d = wl.vc_in_J ? *lv.C : *lv.D;
    const Interval& target_c = wl.vc_in_J ? lv.J : lv.I; // level-n box inside vc's side
    const Interval& target_d = wl.vc_in_J ? lv.I : lv.J;

    BranchSet out;
    auto pull_target = [&](const Interval& home, const Real& center, const Real& v,
                           const Interval& target, bool left) -> std::optional<Interval> {
        Real end = left ? home.lo : home.hi;
        Real img = ctx.map.iterate(end, lv.S);
        Interval sweep(min(img, v), max(img, v));
        if (!(sweep.lo <= target.lo && target.hi <= sweep.hi)) return std::nullopt;
        Real a = left ? end : center;
        Real b = left ? center : end;
        Real x1 = invert_iterate(ctx, lv.S, a, b, target.lo);
        Real x2 = invert_iterate(ctx, lv.S, a, b, target.hi);
        return Interval(min(x1, x2), max(x1, x2));
    };
    auto pull_fold_nbhd = [&](const Interval& home, const Real& center, const Real& v,
                              const Interval& box) -> std::optional<Interval> {
        auto edge_on = [&](bool left) -> Real {
            Real end = left ? home.lo : home.hi;
            Real img = ctx.map.iterate(end, lv.S);
            if (box.contains(img)) return end; // the whole half folds into the box
            Real y = img < box.lo ? box.lo : box.hi;
            return invert_iterate(ctx, lv.S, left ? end : center, left ? center : end, y);
        };
        if (!box.contains(v)) return std::nullopt;
        return Interval(edge_on(true), edge_on(false));
    };

    Real c = ctx.map.c;
    Real d = ctx.map.d;
    out.L = pull_target(lv.I, c, wl.vc, target_c, true);
    out.L_hat = pull_target(lv.I, c, wl.vc, target_c, false);
    out.R = pull_target(lv.J, d, wl.vd, target_d, true);
    out.R_hat = pull_target(lv.J, d, wl.vd, target_d, false);
    out.W = pull_fold_nbhd(lv.I, c, wl.vc, box_c);
    out.V = pull_fold_nbhd(lv.J, d, wl.vd, box_d);
    return out;
}

StepOutcome step_G(const InducedMapContext& ctx, const Real& x) {
    std::optional<long> loc = locate_level(ctx, x);
    if (!loc)
        throw Error(errc::malformed_input, "walk point lies outside the initial boxes");
    const long n = *loc;
    StepOutcome out{x, n, 0, ""};

    if (n == 0) {
        const NestLevel& lv0 = ctx.nest.levels[0];
        out.x = first_return(ctx.map, x, lv0.I, lv0.J, ctx.max_iter).point;
        out.branch_case = "level0";
    } else {
        const NestLevel& lv = ctx.nest.levels[static_cast<std::size_t>(n)];
        const WalkLevel& wl = ctx.levels[static_cast<std::size_t>(n)];
        const Interval& box_c = wl.vc_in_J ? *lv.D : *lv.C;
        const Interval& box_d = wl.vc_in_J ? *lv.C : *lv.D;
        Real z1 = g_apply(ctx, x, n);
        if (in_pair(z1, lv)) {
            out.x = z1;
            out.branch_case = "immediate";
        } else if ((lv.I.contains(x) && box_c.contains(z1)) ||
                   (lv.J.contains(x) && box_d.contains(z1))) {
            // Fold neighborhood: count how long the orbit stays over the
            // landing boxes (capped at r_n), then take one or two more steps.
            std::vector<Real> orbit{x, z1};
            long E = 1;
            for (long i = 2; i <= wl.r; ++i) {
                orbit.push_back(g_apply(ctx, orbit.back(), n));
                if (lv.C->contains(orbit.back()) || lv.D->contains(orbit.back())) E = i;
            }
            while (static_cast<long>(orbit.size()) <= E + 1)
                orbit.push_back(g_apply(ctx, orbit.back(), n));
            const Real& z2 = orbit[static_cast<std::size_t>(E + 1)];
            if (in_pair(z2, lv)) {
                out.x = z2;
                out.branch_case = "fold_return";
            } else {
                out.x = g_apply(ctx, z2, n);
                out.branch_case = "fold_exit";
            }
        } else {
            out.x = g_apply(ctx, z1, n);
            out.branch_case = "double";
        }
    }

    std::optional<long> to = locate_level(ctx, out.x);
    if (!to)
        throw Error(errc::internal, "induced image left the initial boxes");
    out.to_level = *to;
    if (out.to_level < n - 1)
        throw Error(errc::constraint_violated, "level dropped by more than one in a single step");
    return out;
}

WalkRun simulate_walk(const InducedMapContext& ctx, const Real& x0, long steps) {
    WalkRun run;
    Real x = x0.rounded_to(ctx.map.precision_bits);
    try {
        std::optional<long> loc = locate_level(ctx, x);
        for (long k = 0; !loc && k < ctx.max_iter; ++k) {
            x = ctx.map.eval(x);
            loc = locate_level(ctx, x);
        }
        if (!loc) {
            run.stop_reason = "no_return: the start point never entered the initial boxes";
            return run;
        }
        run.levels.push_back(*loc);
        for (long k = 0; k < steps; ++k) {
            StepOutcome o = step_G(ctx, x);
            x = o.x;
            run.levels.push_back(o.to_level);
        }
        run.stop_reason = "ok";
        run.completed = true;
    } catch (const Error& e) {
        run.stop_reason = e.what();
    }
    return run;
}

namespace {

Real real_of_u64(std::uint64_t v, prec_t prec) {
    Real hi(static_cast<long>(v >> 32), prec);
    Real lo(static_cast<long>(v & 0xffffffffULL), prec);
    return mul_pow2(hi, 32) + lo;
}

Real uniform_unit(std::mt19937_64& eng, prec_t prec) {
    const long chunks = (static_cast<long>(prec) + 63) / 64;
    Real u(0, prec);
    for (long i = 0; i < chunks; ++i) u = mul_pow2(u + real_of_u64(eng(), prec), -64);
    return u;
}

} // namespace

WalkResult walk_statistics(const InducedMapContext& ctx, long samples, long steps,
                           std::uint64_t seed) {
    if (samples < 0 || steps < 0)
        throw Error(errc::malformed_input, "sample and step counts must be nonnegative");
    const prec_t prec = ctx.map.precision_bits;
    const NestLevel& lv0 = ctx.nest.levels[0];
    Real wI = lv0.I.width();
    Real total = wI + lv0.J.width();

    WalkResult result;
    WalkStats& st = result.stats;
    st.samples = samples;
    st.steps_per_sample = steps;
    long completed = 0;
    long revisits = 0;
    for (long s = 0; s < samples; ++s) {
        // One independent stream per sample so aggregation is order-free.
        std::mt19937_64 eng(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(s + 1)));
        Real t = uniform_unit(eng, prec) * total;
        Real x0 = t < wI ? lv0.I.lo + t : lv0.J.lo + (t - wI);
        WalkRun run = simulate_walk(ctx, x0, steps);
        for (std::size_t k = 0; k + 1 < run.levels.size(); ++k) {
            long from = run.levels[k];
            long jump = run.levels[k + 1] - from;
            ++st.level_counts[from];
            ++st.transition_counts[{from, jump}];
        }
        if (run.completed) {
            ++completed;
            bool back = false;
            for (std::size_t k = 1; k < run.levels.size(); ++k)
                back = back || run.levels[k] <= st.revisit_threshold;
            if (back) ++revisits;
        } else {
            ++st.aborted;
        }
        result.runs.push_back(std::move(run));
    }
    for (const auto& [key, count] : st.transition_counts) {
        const auto& [level, jump] = key;
        st.drift_estimates[level] += static_cast<double>(jump) * static_cast<double>(count);
        st.variance_estimates[level] +=
            static_cast<double>(jump) * static_cast<double>(jump) * static_cast<double>(count);
    }
    for (auto& [level, value] : st.drift_estimates)
        value /= static_cast<double>(st.level_counts[level]);
    for (auto& [level, value] : st.variance_estimates)
        value /= static_cast<double>(st.level_counts[level]);
    if (completed > 0)
        st.revisit_fraction = static_cast<double>(revisits) / static_cast<double>(completed);
    return result;
}

} // namespace nestlab
