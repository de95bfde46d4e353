#include "nestlab/nest.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "nestlab/errors.hpp"

namespace nestlab {

namespace {

Real boundary_tol(prec_t prec) {
    return Real::pow2(-static_cast<long>(prec / 4), prec);
}

bool too_thin(const Real& width, prec_t prec) {
    return width < Real::pow2(-static_cast<long>(prec) + 16, prec);
}

int box_index(const Real& x, const Interval& I, const Interval& J) {
    if (I.contains(x)) return 0;
    if (J.contains(x)) return 1;
    return -1;
}

void guard_endpoints(const Real& y, const Interval& I, const Interval& J, const Real& tol) {
    if (abs(y - I.lo) < tol || abs(y - I.hi) < tol || abs(y - J.lo) < tol ||
        abs(y - J.hi) < tol)
        throw Error(errc::boundary_hit, "orbit point within tolerance of a box endpoint");
}

struct Branches {
    Interval left;    // [0, c]
    Interval middle;  // [c, d]
    Interval right;   // [d, 1]
};

Branches branches_of(const CubicMap& m) {
    Real zero(0L, m.precision_bits);
    Real one(1L, m.precision_bits);
    return {Interval(zero, m.c), Interval(m.c, m.d), Interval(m.d, one)};
}

int branch_index(const CubicMap& m, const Real& x) {
    if (x < m.c) return 0;
    if (x > m.d) return 2;
    return 1;
}

bool branch_increasing(const CubicMap& m, int idx) {
    bool inc = idx != 1;
    return m.family_sign == FamilySign::positive ? inc : !inc;
}

// One backward map application of cur around the orbit point xk, staying in
// the monotone branch that holds xk.
Interval pull_monotone(const CubicMap& m, const Real& xk, const Interval& cur) {
    Branches br = branches_of(m);
    int idx = branch_index(m, xk);
    const Interval& piece = idx == 0 ? br.left : idx == 1 ? br.middle : br.right;
    bool inc = branch_increasing(m, idx);
    Real flo = m.eval(piece.lo);
    Real fhi = m.eval(piece.hi);
    const Real& img_lo = inc ? flo : fhi;
    const Real& img_hi = inc ? fhi : flo;
    if (cur.lo < img_lo || cur.hi > img_hi)
        throw Error(errc::non_monotone, "pullback leaves the branch image, the return branch folds");
    Real nlo = monotone_preimage(m, inc ? cur.lo : cur.hi, piece);
    Real nhi = monotone_preimage(m, inc ? cur.hi : cur.lo, piece);
    return Interval(std::move(nlo), std::move(nhi));
}

// Final backward step when the center is a turning point: both sides of the
// fold solve f(x) = y for the endpoint of cur on the far side of the fold.
Interval pull_fold(const CubicMap& m, const Real& center, const Interval& cur) {
    bool at_c = center == m.c;
    bool is_max = (m.family_sign == FamilySign::positive) == at_c;
    Branches br = branches_of(m);
    const Interval& lpiece = at_c ? br.left : br.middle;
    const Interval& rpiece = at_c ? br.middle : br.right;
    Real v = m.eval(center);
    if (!cur.contains(v))
        throw Error(errc::non_monotone, "critical value outside the fold target");
    const Real& y = is_max ? cur.lo : cur.hi;
    try {
        Real l = monotone_preimage(m, y, lpiece);
        Real r = monotone_preimage(m, y, rpiece);
        return Interval(std::move(l), std::move(r));
    } catch (const Error& e) {
        if (e.code() == errc::no_preimage)
            throw Error(errc::non_monotone, "fold pullback escapes the adjacent branches");
        throw;
    }
}

std::pair<Interval, Interval> positive_boxes(const CubicMap& m) {
    // f(x) - x = x (a x^2 + b x - (a+b)) and x = 1 is a root of the quadratic,
    // so the only candidate between the turning points is -(a+b)/a.
    Real p = -(m.a + m.b) / m.a;
    if (!(m.c < p && p < m.d))
        throw Error(errc::fixed_point_configuration,
                    "no fixed point between the turning points");
    Branches br = branches_of(m);
    Real p1 = monotone_preimage(m, p, br.left);
    Real p2 = monotone_preimage(m, p, br.right);
    return {Interval(std::move(p1), p), Interval(p, std::move(p2))};
}

std::vector<Real> negative_interior_fixed_points(const CubicMap& m) {
    prec_t prec = m.precision_bits;
    Real zero(0L, prec);
    Real one(1L, prec);
    // g(x) = f(x) - x is monotone between the roots of
    // 3a x^2 + 2b x + (2 - a - b) = 0; bisect each bracket with a sign change.
    std::vector<Real> knots;
    knots.push_back(zero);
    Real qa = 3 * m.a;
    Real qb = 2 * m.b;
    Real qc = 2 - m.a - m.b;
    Real disc = qb * qb - 4 * qa * qc;
    if (disc.is_positive()) {
        Real sq = sqrt(disc);
        Real r1 = (-qb - sq) / (2 * qa);
        Real r2 = (-qb + sq) / (2 * qa);
        if (zero < r1 && r1 < one) knots.push_back(r1);
        if (zero < r2 && r2 < one) knots.push_back(r2);
    }
    knots.push_back(one);
    std::vector<Real> fps;
    for (size_t i = 0; i + 1 < knots.size(); ++i) {
        Interval seg(knots[i], knots[i + 1]);
        int slo = (m.eval(seg.lo) - seg.lo).sign();
        int shi = (m.eval(seg.hi) - seg.hi).sign();
        if (slo == 0 && i > 0) fps.push_back(seg.lo);
        if (slo * shi < 0) fps.push_back(fixed_point_in(m, seg));
    }
    std::sort(fps.begin(), fps.end());
    return fps;
}

std::pair<Interval, Interval> negative_boxes(const CubicMap& m) {
    std::vector<Real> fps = negative_interior_fixed_points(m);
    if (fps.empty())
        throw Error(errc::fixed_point_configuration, "no interior fixed point");
    Branches br = branches_of(m);
    std::vector<Real> mid;
    for (const Real& p : fps)
        if (m.c < p && p < m.d) mid.push_back(p);
    if (mid.size() > 1)
        throw Error(errc::fixed_point_configuration,
                    "several fixed points between the turning points");
    if (mid.size() == 1) {
        // same construction as the positive family
        const Real& p = mid[0];
        Real p1 = monotone_preimage(m, p, br.left);
        Real p2 = monotone_preimage(m, p, br.right);
        return {Interval(std::move(p1), p), Interval(p, std::move(p2))};
    }
    if (fps.size() != 1)
        throw Error(errc::fixed_point_configuration,
                    "several fixed points, none between the turning points");
    const Real& p = fps[0];
    Real tol = Real::pow2(-static_cast<long>(m.precision_bits / 2), m.precision_bits);
    std::vector<Real> pre;
    for (const Interval* piece : {&br.left, &br.middle, &br.right}) {
        try {
            Real q = monotone_preimage(m, p, *piece);
            if (abs(q - p) > tol) pre.push_back(q);
        } catch (const Error& e) {
            if (e.code() != errc::no_preimage) throw;
        }
    }
    std::sort(pre.begin(), pre.end());
    if (pre.empty())
        throw Error(errc::fixed_point_configuration,
                    "the fixed point has no preimage other than itself");
    if (pre.size() != 2)
        throw Error(errc::fixed_point_configuration, "unexpected preimage count");
    if (p < pre[0]) return {Interval(p, pre[0]), Interval(pre[0], pre[1])};
    if (pre[1] < p) return {Interval(pre[0], pre[1]), Interval(pre[1], p)};
    throw Error(errc::fixed_point_configuration, "fixed point lies between its preimages");
}

}  // namespace

long depth_cap(prec_t precision_bits) {
    long cap = static_cast<long>(std::sqrt(static_cast<double>(precision_bits)));
    return std::max<long>(cap, 4);
}

const char* nest_status_name(NestStatus s) {
    switch (s) {
        case NestStatus::ok: return "ok";
        case NestStatus::central_return: return "central_return";
        case NestStatus::not_in_class_g: return "not_in_class_G";
        case NestStatus::precision_exhausted: return "precision_exhausted";
    }
    return "unknown";
}

std::pair<Interval, Interval> initial_boxes(const CubicMap& map) {
    std::pair<Interval, Interval> boxes = map.family_sign == FamilySign::positive
                                              ? positive_boxes(map)
                                              : negative_boxes(map);
    const Interval& I0 = boxes.first;
    const Interval& J0 = boxes.second;
    if (!(I0.lo < I0.hi) || !(J0.lo < J0.hi) || !I0.contains(map.c) || !J0.contains(map.d))
        throw Error(errc::fixed_point_configuration,
                    "turning points are not separated by the initial boxes");
    return boxes;
}

ReturnHit first_return(const CubicMap& map, const Real& x, const Interval& I,
                       const Interval& J, long max_iter) {
    Real tol = boundary_tol(map.precision_bits);
    Real y = x;
    for (long k = 1; k <= max_iter; ++k) {
        y = map.eval(y);
        guard_endpoints(y, I, J, tol);
        if (I.contains(y) || J.contains(y)) return {k, std::move(y)};
    }
    throw Error(errc::no_return, "no return within the iteration budget");
}

long first_return_time(const CubicMap& map, const Real& x,
                       const std::pair<Interval, Interval>& boxes, long max_iter) {
    return first_return(map, x, boxes.first, boxes.second, max_iter).time;
}

Interval pullback_domain(const CubicMap& map, const Real& center, const Interval& target,
                         long time, const Interval& ambient) {
    if (time < 0) throw Error(errc::malformed_input, "negative pullback time");
    if (time == 0) {
        if (!target.contains(center))
            throw Error(errc::malformed_input, "center outside target for zero-time pullback");
        return target;
    }
    std::vector<Real> orbit;
    orbit.reserve(static_cast<size_t>(time));
    Real x = center;
    for (long k = 0; k < time; ++k) {
        orbit.push_back(x);
        x = map.eval(x);
    }
    if (!target.contains(x))
        throw Error(errc::malformed_input, "orbit does not land inside the pullback target");
    Interval cur = target;
    for (long k = time - 1; k >= 1; --k) {
        if (orbit[static_cast<size_t>(k)] == map.c || orbit[static_cast<size_t>(k)] == map.d)
            throw Error(errc::non_monotone, "orbit passes through a turning point");
        cur = pull_monotone(map, orbit[static_cast<size_t>(k)], cur);
        if (too_thin(cur.width(), map.precision_bits))
            throw Error(errc::precision_exhausted,
                        "pullback narrower than the mantissa supports");
    }
    bool critical_center = center == map.c || center == map.d;
    cur = critical_center ? pull_fold(map, center, cur) : pull_monotone(map, center, cur);
    Real slack = mul_pow2(ambient.width(), -static_cast<long>(map.precision_bits / 2));
    if (cur.lo < ambient.lo - slack || cur.hi > ambient.hi + slack)
        throw Error(errc::non_monotone, "pullback escapes its ambient interval");
    return cur;
}

Nest make_nest(const CubicMap& map, long max_iter) {
    std::pair<Interval, Interval> boxes = initial_boxes(map);
    prec_t prec = map.precision_bits;
    Nest nest{map, {}, NestStatus::ok, "", max_iter};
    nest.levels.push_back(NestLevel{0, std::move(boxes.first), std::move(boxes.second),
                                    std::nullopt, std::nullopt, 1, 1, Real(1L, prec)});
    return nest;
}

Nest extend_nest(Nest nest) {
    if (nest.status != NestStatus::ok)
        throw Error(errc::malformed_input, "nest is not extendable");
    const CubicMap& m = nest.map;
    prec_t prec = m.precision_bits;
    const NestLevel& prev = nest.levels.back();
    long n_new = prev.n + 1;
    try {
        ReturnHit rc = first_return(m, m.c, prev.I, prev.J, nest.max_iter);
        ReturnHit rd = first_return(m, m.d, prev.I, prev.J, nest.max_iter);
        if (rc.time != rd.time)
            throw Error(errc::not_in_class_g, "return times of the turning points differ");
        long S = rc.time;
        if (n_new == 1 && S != 2)
            throw Error(errc::not_in_class_g,
                        "first return time of the turning points must be 2");
        int bc = box_index(rc.point, prev.I, prev.J);
        int bd = box_index(rd.point, prev.I, prev.J);
        const Interval& tc = bc == 0 ? prev.I : prev.J;
        const Interval& td = bd == 0 ? prev.I : prev.J;
        Interval In = pullback_domain(m, m.c, tc, S, prev.I);
        Interval Jn = pullback_domain(m, m.d, td, S, prev.J);
        if (too_thin(In.width(), prec) || too_thin(Jn.width(), prec))
            throw Error(errc::precision_exhausted,
                        "boxes narrower than the mantissa supports");
        Real tol = boundary_tol(prec);
        if (In.lo - prev.I.lo < tol || prev.I.hi - In.hi < tol ||
            Jn.lo - prev.J.lo < tol || prev.J.hi - Jn.hi < tol)
            throw Error(errc::boundary_hit, "new box touches the previous one");
        // ambiguous membership of the critical values would corrupt the
        // central-return classification
        guard_endpoints(rc.point, In, Jn, tol);
        guard_endpoints(rd.point, In, Jn, tol);
        if (In.contains(rc.point) || Jn.contains(rc.point) || In.contains(rd.point) ||
            Jn.contains(rd.point)) {
            nest.status = NestStatus::central_return;
            nest.detail = "critical value returned into the new central domains";
            return nest;
        }
        if (bc == bd)
            throw Error(errc::not_in_class_g, "critical values land in the same box");
        ReturnHit hc = first_return(m, rc.point, prev.I, prev.J, nest.max_iter);
        ReturnHit hd = first_return(m, rd.point, prev.I, prev.J, nest.max_iter);
        if (hc.time != hd.time)
            throw Error(errc::not_in_class_g,
                        "return times of the critical values differ");
        long Sh = hc.time;
        if (n_new == 1 && Sh != 1)
            throw Error(errc::not_in_class_g,
                        "critical values at level 1 must return in one step");
        if (n_new >= 2) {
            long dS = S - prev.S;
            long dSh = Sh - prev.S;
            if (dS <= 0 || dS % prev.S_hat != 0 || dSh < 0 || dSh % prev.S_hat != 0)
                throw Error(errc::not_in_class_g,
                            "return times break the inducing recursion");
        }
        const Real& wc = bc == 0 ? rc.point : rd.point;
        const Real& wd = bc == 0 ? rd.point : rc.point;
        const Real& lc = bc == 0 ? hc.point : hd.point;
        const Real& ld = bc == 0 ? hd.point : hc.point;
        Interval Cn = pullback_domain(m, wc, box_index(lc, prev.I, prev.J) == 0 ? prev.I : prev.J,
                                      Sh, prev.I);
        Interval Dn = pullback_domain(m, wd, box_index(ld, prev.I, prev.J) == 0 ? prev.I : prev.J,
                                      Sh, prev.J);
        if (!Cn.disjoint_from(In) || !Dn.disjoint_from(Jn))
            throw Error(errc::not_in_class_g,
                        "non-central return domains meet the central ones");
        // the two folded images must jointly cover both new boxes
        Real ec = m.iterate(In.lo, S);
        Real ed = m.iterate(Jn.lo, S);
        Interval gI(min(ec, rc.point), max(ec, rc.point));
        Interval gJ(min(ed, rd.point), max(ed, rd.point));
        auto covered = [&](const Interval& T) {
            if (T.lo >= gI.lo - tol && T.hi <= gI.hi + tol) return true;
            if (T.lo >= gJ.lo - tol && T.hi <= gJ.hi + tol) return true;
            if (gI.lo <= gJ.hi && gJ.lo <= gI.hi)
                return T.lo >= min(gI.lo, gJ.lo) - tol && T.hi <= max(gI.hi, gJ.hi) + tol;
            return false;
        };
        if (!covered(In) || !covered(Jn))
            throw Error(errc::not_in_class_g,
                        "the folded images do not cover the new boxes");
        Real lam = max(In.width() / prev.I.width(), Jn.width() / prev.J.width());
        nest.levels.push_back(NestLevel{n_new, std::move(In), std::move(Jn), std::move(Cn),
                                        std::move(Dn), S, Sh, std::move(lam)});
        return nest;
    } catch (const Error& e) {
        switch (e.code()) {
            case errc::boundary_hit:
            case errc::precision_exhausted:
                nest.status = NestStatus::precision_exhausted;
                break;
            case errc::no_return:
            case errc::non_monotone:
            case errc::no_preimage:
            case errc::no_sign_change:
            case errc::not_in_class_g:
                nest.status = NestStatus::not_in_class_g;
                break;
            default:
                throw;
        }
        nest.detail = e.what();
        return nest;
    }
}

Nest build_nest(const CubicMap& map, long depth, long max_iter) {
    Nest nest = make_nest(map, max_iter);
    for (long k = 0; k < depth && nest.status == NestStatus::ok; ++k)
        nest = extend_nest(std::move(nest));
    return nest;
}

std::vector<ScalingRow> scaling_report(const Nest& nest) {
    if (nest.levels.size() < 2)
        throw Error(errc::malformed_input, "scaling report needs at least two levels");
    std::vector<ScalingRow> rows;
    rows.reserve(nest.levels.size());
    for (const NestLevel& lv : nest.levels)
        rows.push_back(ScalingRow{lv.n, lv.I.width(), lv.J.width(), lv.lambda});
    return rows;
}

}  // namespace nestlab
