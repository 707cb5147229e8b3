#include "pwcanard/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pwcanard/errors.hpp"
#include "pwcanard/roots.hpp"
#include "hp_shoot.hpp"

namespace pwc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ulp(double v) {
    const double a = std::fabs(v);
    return std::nextafter(a, std::numeric_limits<double>::infinity()) - a;
}

double zone_trace(Zone z, const Params& p) {
    switch (z) {
    case Zone::LL:
    case Zone::R: return -1.0;
    case Zone::L: return p.k;
    case Zone::C: return -p.m;
    }
    return 0.0;
}

OrbitEvent reversed(const OrbitEvent& ev) {
    OrbitEvent r = ev;
    std::swap(r.entry, r.exit);
    return r;
}

} // namespace

const char* half_map_name(HalfMapKind k) {
    switch (k) {
    case HalfMapKind::Cd: return "Cd";
    case HalfMapKind::Cu: return "Cu";
    case HalfMapKind::L: return "L";
    case HalfMapKind::R: return "R";
    case HalfMapKind::LL: return "LL";
    case HalfMapKind::Ld: return "Ld";
    case HalfMapKind::Lu: return "Lu";
    }
    return "?";
}

HalfMapSpec half_map_spec(HalfMapKind k, const Params& p) {
    const double se = p.sqrt_eps();
    switch (k) {
    case HalfMapKind::Cd: return {Zone::C, se, -se};
    case HalfMapKind::Cu: return {Zone::C, -se, se};
    case HalfMapKind::L: return {Zone::L, -se, -se};
    case HalfMapKind::R: return {Zone::R, se, se};
    case HalfMapKind::LL: return {Zone::LL, -1.0, -1.0};
    case HalfMapKind::Ld: return {Zone::L, -se, -1.0};
    case HalfMapKind::Lu: return {Zone::L, -1.0, -se};
    }
    return {Zone::C, se, -se};
}

HalfMapResult half_map(HalfMapKind kind, double y, const Params& p, bool inverse) {
    const HalfMapSpec spec = half_map_spec(kind, p);
    const double start_x = inverse ? spec.target_x : spec.source_x;
    const double end_x = inverse ? spec.source_x : spec.target_x;
    const int dir = inverse ? -1 : 1;
    const Vec2 q{start_x, y};
    // Velocity along the integration direction must point into the zone.
    const double v = dir * (y - nullcline_f(start_x, p));
    const bool into = start_x == zone_hi(spec.zone, p) ? v < 0.0 : v > 0.0;
    if (!into) throw DomainError(std::string("ordinate outside the domain of half-map ") + half_map_name(kind));
    const CrossingResult r = crossing_time(spec.zone, q, end_x, p, dir);
    if (r.kind == CrossingKind::none)
        throw NoCrossingError(std::string("half-map ") + half_map_name(kind) + " leaves through the wrong boundary");
    return {r.point.y, r.time};
}

std::string visit_label(const OrbitEvent& ev, const Params& p) {
    const double se = p.sqrt_eps();
    switch (ev.zone) {
    case Zone::C:
        if (ev.entry.x == se && ev.exit.x == -se) return "Cd";
        if (ev.entry.x == -se && ev.exit.x == se) return "Cu";
        return "C";
    case Zone::L:
        if (ev.entry.x == -se && ev.exit.x == -1.0) return "Ld";
        if (ev.entry.x == -1.0 && ev.exit.x == -se) return "Lu";
        return "L";
    default:
        return zone_name(ev.zone);
    }
}

double divergence_log(const std::vector<OrbitEvent>& events, const Params& p) {
    double s = 0.0;
    for (const auto& ev : events) s += zone_trace(ev.zone, p) * ev.flight_time;
    return s;
}

ReturnResult return_map(double y0, const Params& p) {
    const double se = p.sqrt_eps();
    if (!(y0 < p.m * (se - p.a))) throw DomainError("start ordinate is not on the return section");
    ReturnResult res;
    res.orbit = integrate_orbit({se, y0}, p, StopRule::section(se, -1, 64, Zone::R));
    if (res.orbit.truncated) throw NumericalError("return map: event budget exhausted");
    res.y_out = res.orbit.events.back().exit.y;
    for (const auto& ev : res.orbit.events) {
        res.times.push_back({visit_label(ev, p), ev.zone, ev.flight_time});
        if (ev.zone == Zone::LL) res.visited_LL = true;
    }
    res.multiplier_div = LogValue::from_log(divergence_log(res.orbit.events, p));
    return res;
}

double phi(double x0, const Params& p) {
    const double se = p.sqrt_eps();
    if (!(x0 < p.a) || !(x0 <= -se)) throw DomainError("width outside the domain of Phi");
    const Vec2 q{x0, nullcline_f(x0, p)};
    if (x0 == -se) return q.y;
    CrossingResult r;
    if (x0 >= -1.0) r = crossing_time(Zone::L, q, -se, p, 1);
    else r = crossing_time(Zone::LL, q, -1.0, p, -1);
    if (r.kind == CrossingKind::none) throw NoCrossingError("Phi: orbit does not reach the section");
    return r.point.y;
}

double phi_inverse(double h, PhiBranch branch, const Params& p) {
    const double se = p.sqrt_eps();
    auto g = [&](double x) { return phi(x, p) - h; };
    if (branch == PhiBranch::three_zone) {
        const double lo = -1.0, hi = std::min(-se, p.a);
        const double glo = g(lo), ghi = g(hi);
        if ((glo > 0.0) == (ghi > 0.0) && glo != 0.0 && ghi != 0.0)
            throw DomainError("height outside the range of Phi on [-1, -sqrt(eps)]");
        return bracketed_root(g, lo, hi, glo, ghi);
    }
    const double hi = std::min(-1.0, p.a);
    const double ghi = g(hi);
    double lo = hi - 0.25;
    double glo = g(lo);
    for (int i = 0; i < 60 && (glo > 0.0) == (ghi > 0.0); ++i) {
        lo = hi - (hi - lo) * 2.0;
        glo = g(lo);
    }
    if ((glo > 0.0) == (ghi > 0.0) && glo != 0.0 && ghi != 0.0)
        throw DomainError("height outside the range of Phi below -1");
    return bracketed_root(g, lo, hi, glo, ghi);
}

std::optional<ShootingArcs> shoot_from_width(double x0, const Params& p) {
    const double se = p.sqrt_eps();
    if (!(x0 < -se) || !(x0 < p.a)) return std::nullopt;
    const Vec2 q{x0, nullcline_f(x0, p)};
    try {
        ShootingArcs arcs;
        arcs.forward = integrate_orbit(q, p, StopRule::section(-se, -1, 64), 1);
        arcs.backward = integrate_orbit(q, p, StopRule::section(-se, 1, 64), -1);
        if (arcs.forward.truncated || arcs.backward.truncated) return std::nullopt;
        arcs.y_forward = arcs.forward.events.back().exit.y;
        arcs.y_backward = arcs.backward.events.back().exit.y;
        return arcs;
    } catch (const NumericalError&) {
        return std::nullopt;
    }
}

const char* stability_name(Stability s) {
    switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::nonhyperbolic: return "nonhyperbolic";
    }
    return "?";
}

const char* cycle_kind_name(CycleKind k) {
    return k == CycleKind::with_head ? "with-head" : "headless";
}

Stability classify_multiplier(double log_multiplier) {
    if (std::fabs(std::expm1(log_multiplier)) <= kNonhyperbolicBand) return Stability::nonhyperbolic;
    return log_multiplier < 0.0 ? Stability::stable : Stability::unstable;
}

bool in_transitory_window(double x0, const Params& p) {
    const Landmarks lm = landmarks(p);
    return (x0 > lm.x_u && x0 < -1.0) || (x0 > lm.x_s && x0 < -p.sqrt_eps());
}

namespace {

void finish_record(CycleRecord& c, const Params& p) {
    c.log_multiplier = divergence_log(c.orbit.events, p);
    c.stability = classify_multiplier(c.log_multiplier);
    bool ll = false;
    for (const auto& ev : c.orbit.events) ll = ll || ev.zone == Zone::LL;
    c.kind = ll ? CycleKind::with_head : CycleKind::headless;
    c.in_window = in_transitory_window(c.x0, p);
    // Cycles that never reach zone R have no return-section ordinate.
    const double scale = std::isfinite(c.y_fix) ? c.y_fix : c.h;
    c.verified = std::fabs(c.residual) <= kFixedPointTol * (1.0 + std::fabs(scale));
}

CycleRecord record_from_arcs(double x0, const ShootingArcs& arcs, const Params& p) {
    CycleRecord c;
    c.x0 = x0;
    c.from_width = true;
    c.residual = arcs.gap();
    const auto& back = arcs.backward.events;
    for (auto it = back.rbegin(); it != back.rend(); ++it) c.orbit.events.push_back(reversed(*it));
    for (const auto& ev : arcs.forward.events) {
        auto& evs = c.orbit.events;
        // The width point splits one zone visit into two pieces; join them.
        if (!evs.empty() && evs.back().zone == ev.zone && evs.back().exit.x == x0 && ev.entry.x == x0 &&
            &ev == &arcs.forward.events.front()) {
            evs.back().exit = ev.exit;
            evs.back().flight_time += ev.flight_time;
        } else {
            evs.push_back(ev);
        }
    }
    for (const auto& ev : c.orbit.events) c.orbit.total_time += ev.flight_time;
    const double se = p.sqrt_eps();
    c.y_fix = kNaN;
    for (const auto& ev : arcs.forward.events)
        if (ev.zone == Zone::R && ev.exit.x == se) c.y_fix = ev.exit.y;
    if (x0 >= -1.0) c.h = arcs.forward.events.front().exit.y;
    else c.h = arcs.backward.events.front().exit.y;
    finish_record(c, p);
    return c;
}

std::optional<CycleRecord> cycle_from_section(double y, const Params& p) {
    try {
        const ReturnResult rr = return_map(y, p);
        CycleRecord c;
        c.from_width = false;
        c.y_fix = y;
        c.residual = rr.y_out - y;
        c.orbit = rr.orbit;
        double xmin = std::numeric_limits<double>::infinity();
        for (const auto& ev : rr.orbit.events) {
            if (auto s = event_x_extremum(ev, p, 1)) {
                const Vec2 q = flow(ev.zone, ev.entry, *s, p);
                if (q.x < p.a) xmin = std::min(xmin, q.x);
            }
        }
        c.x0 = xmin;
        c.h = kNaN;
        if (xmin < -p.sqrt_eps()) {
            try {
                c.h = phi(xmin, p);
            } catch (const std::exception&) {
            }
        }
        finish_record(c, p);
        return c;
    } catch (const NumericalError&) {
        return std::nullopt;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

bool enters_zone_L(const Orbit& o) {
    for (const auto& ev : o.events)
        if (ev.zone == Zone::L || ev.zone == Zone::LL) return true;
    return false;
}

} // namespace

std::optional<CycleRecord> cycle_from_width(double x0, const Params& p) {
    const auto arcs = shoot_from_width(x0, p);
    if (!arcs) return std::nullopt;
    return record_from_arcs(x0, *arcs, p);
}

std::vector<CycleRecord> fixed_points(const Params& p, double y_lo, double y_hi, const FixedPointOptions& opt) {
    std::vector<CycleRecord> out;
    const double se = p.sqrt_eps();
    const Landmarks lm = landmarks(p);

    // Cycles reaching zone L, parametrized by their width.
    {
        const double x_hi = std::min(-se, p.a) - 1e-9;
        const double x_lo = (std::isfinite(lm.x_r) ? lm.x_r : -(1.0 + p.k)) - 0.5;
        const int n = std::max(opt.width_grid, 8);
        std::vector<double> xs(n), gaps(n, kNaN), ys(n, 0.0);
        for (int i = 0; i < n; ++i) xs[i] = x_lo + (x_hi - x_lo) * i / (n - 1);
#pragma omp parallel for schedule(dynamic, 8)
        for (int i = 0; i < n; ++i) {
            if (auto arcs = shoot_from_width(xs[i], p)) {
                gaps[i] = arcs->gap();
                ys[i] = arcs->y_forward;
            }
        }
        for (int i = 0; i + 1 < n; ++i) {
            const double g0 = gaps[i], g1 = gaps[i + 1];
            if (!std::isfinite(g0) || !std::isfinite(g1)) continue;
            if (g0 == 0.0 && i > 0) continue;
            if (!(g0 == 0.0 || (g0 > 0.0) != (g1 > 0.0))) continue;
            // A sign flip inside rounding noise is not a cycle.
            if (std::max(std::fabs(g0), std::fabs(g1)) < 64.0 * ulp(ys[i])) continue;
            auto gap = [&](double x) {
                auto arcs = shoot_from_width(x, p);
                if (!arcs) throw NumericalError("shooting failed inside a bracket");
                return arcs->gap();
            };
            try {
                const double x0 = bracketed_root(gap, xs[i], xs[i + 1], g0, g1);
                if (auto c = cycle_from_width(x0, p)) out.push_back(*c);
            } catch (const NumericalError&) {
            }
        }
    }

    // Small cycles that never reach zone L, through the return map on the section.
    {
        const double top = p.m * (se - p.a);
        const double lo = std::max(y_lo, top - 4.0);
        const double hi = std::min(y_hi, top);
        if (lo < hi) {
            const int n = std::max(opt.section_grid, 8);
            const double d_min = 1e-12 * (1.0 + std::fabs(top));
            const double d_max = top - lo;
            std::vector<double> ys(n), ds(n, kNaN);
            for (int i = 0; i < n; ++i) {
                const double d = d_min * std::pow(d_max / d_min, double(i) / (n - 1));
                ys[i] = top - d;
            }
#pragma omp parallel for schedule(dynamic, 4)
            for (int i = 0; i < n; ++i) {
                if (ys[i] > hi || ys[i] < lo) continue;
                try {
                    const ReturnResult rr = return_map(ys[i], p);
                    if (!enters_zone_L(rr.orbit)) ds[i] = rr.y_out - ys[i];
                } catch (const std::exception&) {
                }
            }
            for (int i = 0; i + 1 < n; ++i) {
                const double d0 = ds[i], d1 = ds[i + 1];
                if (!std::isfinite(d0) || !std::isfinite(d1)) continue;
                if (!(d0 == 0.0 || (d0 > 0.0) != (d1 > 0.0))) continue;
                if (std::max(std::fabs(d0), std::fabs(d1)) < 64.0 * ulp(ys[i])) continue;
                auto d = [&](double y) { return return_map(y, p).y_out - y; };
                try {
                    const double y = bracketed_root(d, ys[i + 1], ys[i], d1, d0);
                    if (auto c = cycle_from_section(y, p)) out.push_back(*c);
                } catch (const std::exception&) {
                }
            }
        }
    }

    std::erase_if(out, [&](const CycleRecord& c) { return !(c.y_fix >= y_lo && c.y_fix <= y_hi); });
    std::sort(out.begin(), out.end(), [](const CycleRecord& a, const CycleRecord& b) { return a.y_fix < b.y_fix; });
    return out;
}

LogValue multiplier(const CycleRecord& cycle, const Params& p) {
    return LogValue::from_log(divergence_log(cycle.orbit.events, p));
}

namespace {

struct Derivative {
    double value;
    double error;  // estimated absolute error
};

// Central differences with one Richardson step over a ladder of steps; the
// step whose estimate agrees best with its neighbour wins, which balances
// rounding noise against curvature.
template <class F>
std::optional<Derivative> robust_derivative(F&& f, double x, double h_min = 1e-11, double h_max = 1e-2) {
    std::vector<double> est;
    for (double h = h_min; h <= h_max * 1.0001; h *= std::sqrt(10.0)) {
        try {
            const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
            const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
            const double r = (4.0 * d2 - d1) / 3.0;
            if (!std::isfinite(r)) break;
            est.push_back(r);
        } catch (const NumericalError&) {
            break;  // larger steps leave the neighbourhood of the cycle
        }
    }
    if (est.size() < 2) return std::nullopt;
    std::size_t best = 0;
    double err = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < est.size(); ++i) {
        const double e = std::fabs(est[i] - est[i + 1]);
        if (e < err) {
            err = e;
            best = i;
        }
    }
    return Derivative{est[best], err};
}

} // namespace

std::optional<double> fd_multiplier(const CycleRecord& cycle, const Params& p) {
    try {
        if (!cycle.from_width) {
            auto pi = [&](double y) { return return_map(y, p).y_out; };
            const double top = p.m * (p.sqrt_eps() - p.a);
            const double room = 0.5 * (top - cycle.y_fix);
            const auto d = robust_derivative(pi, cycle.y_fix, std::min(1e-9, 0.01 * room), std::min(1e-3, room));
            if (!d) return std::nullopt;
            return d->value;
        }
        // Split the revolution through the width point at a vertical section:
        // the return map on that section has derivative G'/B' with G, B the
        // forward and backward images of the width. Strong contractions swamp
        // double-precision differences, so G and B are integrated in quad.
        const double period = cycle.orbit.total_time;
        std::vector<Vec2> candidates;
        for (double frac : {0.5, 0.35, 0.65, 0.2, 0.8}) {
            const double target = frac * cycle.log_multiplier;
            double cum = 0.0;
            for (const auto& ev : cycle.orbit.events) {
                const double tr = ev.zone == Zone::L ? p.k : (ev.zone == Zone::C ? -p.m : -1.0);
                const double next = cum + tr * ev.flight_time;
                if ((target - cum) * (target - next) <= 0.0 && tr != 0.0) {
                    candidates.push_back(flow(ev.zone, ev.entry, std::clamp((target - cum) / tr, 0.0, ev.flight_time), p));
                    break;
                }
                cum = next;
            }
        }
        for (const auto& ev : cycle.orbit.events)
            for (double q : {0.25, 0.5, 0.75}) candidates.push_back(flow(ev.zone, ev.entry, q * ev.flight_time, p));

        for (const Vec2& split : candidates) {
            const Vec2 f = vector_field(split, p);
            if (std::fabs(f.x) < 0.2 * norm(f)) continue;  // nearly tangent section
            const double c = split.x;
            if (c == -1.0 || std::fabs(std::fabs(c) - p.sqrt_eps()) < 1e-9) continue;
            const int sdir = f.x > 0.0 ? 1 : -1;
            const auto hits = detail::hp_line_hits(p, cycle.x0, 1, c, sdir, period);
            int index = -1;
            double closest = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < hits.size(); ++i)
                if (std::fabs(hits[i] - split.y) < closest) {
                    closest = std::fabs(hits[i] - split.y);
                    index = static_cast<int>(i);
                }
            if (index < 0 || closest > 1e-6 * (1.0 + std::fabs(split.y))) continue;
            const auto r = detail::hp_split_multiplier(p, cycle.x0, c, sdir, index, static_cast<int>(hits.size()), period);
            if (r) return r;
        }
        return std::nullopt;
    } catch (const NumericalError&) {
        return std::nullopt;
    }
}

std::optional<double> cycle_crossing(const CycleRecord& cycle, double c, const Params& p) {
    for (const auto& ev : cycle.orbit.events) {
        const double lo = zone_lo(ev.zone, p), hi = zone_hi(ev.zone, p);
        if (!(c > lo && c < hi)) continue;
        const ZoneSolution sol(zone_data(ev.zone, p), ev.entry);
        const int n = 256;
        double t_prev = 0.0, g_prev = ev.entry.x - c;
        for (int i = 1; i <= n; ++i) {
            const double t = ev.flight_time * i / n;
            const double g = sol.x(t) - c;
            if (g_prev < 0.0 && g >= 0.0) {
                const double ts = bracketed_root([&](double s) { return sol.x(s) - c; }, t_prev, t, g_prev, g);
                return sol.point(ts).y;
            }
            t_prev = t;
            g_prev = g;
        }
    }
    return std::nullopt;
}

} // namespace pwc
