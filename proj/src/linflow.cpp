#include "pwcanard/linflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pwcanard/errors.hpp"

namespace pwc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;
// Below this relative eigenvalue gap the eigenbasis is ill-conditioned.
constexpr double kEigenGap = 1e-3;

double grazing_tol(Vec2 field) { return 1e-10 * (1.0 + norm(field)); }

} // namespace

ZoneSolution::ZoneSolution(const ZoneData& d, Vec2 q) : d_(d) {
    del_ = q - d.equilibrium;
    sigma_ = 0.5 * d.trace;
    adel_ = {(d.trace - sigma_) * del_.x + del_.y, -d.det * del_.x - sigma_ * del_.y};
    if (d.is_real && std::sqrt(d.disc) >= kEigenGap * 2.0 * std::sqrt(d.det)) {
        mode_ = Mode::eigen;
        const double ls = d.real.lambda_s, lq = d.real.lambda_q;
        const double gap = lq - ls;
        cs_ = -(del_.y + ls * del_.x) / gap;
        cq_ = (del_.y + lq * del_.x) / gap;
    } else if (d.disc > 0.0) {
        mode_ = Mode::hyperbolic;
        delta_ = 0.5 * std::sqrt(d.disc);
    } else if (d.disc == 0.0) {
        mode_ = Mode::parabolic;
    } else {
        mode_ = Mode::complex;
        omega_ = d.complex.omega;
    }
}

void ZoneSolution::cs(double t, double& c, double& s) const {
    switch (mode_) {
    case Mode::hyperbolic:
        c = std::cosh(delta_ * t);
        s = std::sinh(delta_ * t) / delta_;
        return;
    case Mode::parabolic:
        c = 1.0;
        s = t;
        return;
    default:
        c = std::cos(omega_ * t);
        s = std::sin(omega_ * t) / omega_;
    }
}

Vec2 ZoneSolution::point(double t) const {
    if (mode_ == Mode::eigen) {
        const double ls = d_.real.lambda_s, lq = d_.real.lambda_q;
        const double es = cs_ != 0.0 ? cs_ * std::exp(ls * t) : 0.0;
        const double eq = cq_ != 0.0 ? cq_ * std::exp(lq * t) : 0.0;
        return {d_.equilibrium.x + es + eq, d_.equilibrium.y - lq * es - ls * eq};
    }
    double c, s;
    cs(t, c, s);
    const double g = std::exp(sigma_ * t);
    return {d_.equilibrium.x + g * (c * del_.x + s * adel_.x),
            d_.equilibrium.y + g * (c * del_.y + s * adel_.y)};
}

double ZoneSolution::x(double t) const { return point(t).x; }

double ZoneSolution::dx(double t) const {
    if (mode_ == Mode::eigen) {
        const double ls = d_.real.lambda_s, lq = d_.real.lambda_q;
        const double es = cs_ != 0.0 ? ls * cs_ * std::exp(ls * t) : 0.0;
        const double eq = cq_ != 0.0 ? lq * cq_ * std::exp(lq * t) : 0.0;
        return es + eq;
    }
    const Vec2 off = point(t) - d_.equilibrium;
    return d_.trace * off.x + off.y;
}

double ZoneSolution::next_extremum(double s_from, int dir) const {
    const double tol = 1e-12 * (1.0 + std::fabs(s_from));
    const double s_min = s_from + tol;
    auto accept = [&](double t) { return dir * t > s_min ? dir * t : kInf; };
    if (mode_ == Mode::eigen) {
        if (cs_ == 0.0 || cq_ == 0.0) return kInf;
        const double ls = d_.real.lambda_s, lq = d_.real.lambda_q;
        const double ratio = -ls * cs_ / (lq * cq_);
        if (!(ratio > 0.0)) return kInf;
        return accept(std::log(ratio) / (lq - ls));
    }
    // x'(t) = e^{sigma t}(C al + S be) with al, be the x-parts of A del and (A - sigma I) A del.
    const Vec2 ad = {d_.trace * del_.x + del_.y, -d_.det * del_.x};
    const double al = ad.x;
    const double be = (d_.trace - sigma_) * ad.x + ad.y;
    if (al == 0.0 && be == 0.0) return kInf;
    switch (mode_) {
    case Mode::hyperbolic: {
        if (be == 0.0) return kInf;
        const double arg = -delta_ * al / be;
        if (std::fabs(arg) >= 1.0) return kInf;
        return accept(std::atanh(arg) / delta_);
    }
    case Mode::parabolic:
        if (be == 0.0) return kInf;
        return accept(-al / be);
    default: {
        const double phase = std::atan2(be / omega_, al) + 0.5 * kPi;
        double t;
        if (dir > 0) {
            const double n = std::ceil((omega_ * s_min - phase) / kPi);
            t = (phase + n * kPi) / omega_;
            if (t <= s_min) t += kPi / omega_;
        } else {
            const double n = std::floor((-omega_ * s_min - phase) / kPi);
            t = (phase + n * kPi) / omega_;
            if (-t <= s_min) t -= kPi / omega_;
        }
        return dir * t;
    }
    }
}

double ZoneSolution::asymptotic_rate(int dir) const {
    if (del_.x == 0.0 && del_.y == 0.0) return -kInf;
    switch (mode_) {
    case Mode::eigen: {
        double r = -kInf;
        if (cs_ != 0.0) r = std::max(r, dir * d_.real.lambda_s);
        if (cq_ != 0.0) r = std::max(r, dir * d_.real.lambda_q);
        return r;
    }
    case Mode::hyperbolic: return dir * sigma_ + delta_;
    default: return dir * sigma_;
    }
}

double ZoneSolution::envelope_amplitude() const {
    if (mode_ != Mode::complex) return kInf;
    return std::hypot(del_.x, adel_.x / omega_);
}

Vec2 flow(const ZoneData& d, Vec2 q, double t) {
    if (t == 0.0) return q;
    return ZoneSolution(d, q).point(t);
}

Vec2 flow(Zone z, Vec2 q, double t, const Params& p) { return flow(zone_data(z, p), q, t); }

Mat2 propagator(const ZoneData& d, double t) {
    ZoneData shifted = d;
    shifted.equilibrium = {0.0, 0.0};
    const Vec2 c1 = ZoneSolution(shifted, {1.0, 0.0}).point(t);
    const Vec2 c2 = ZoneSolution(shifted, {0.0, 1.0}).point(t);
    return {c1.x, c2.x, c1.y, c2.y};
}

const char* crossing_kind_name(CrossingKind k) {
    switch (k) {
    case CrossingKind::transversal: return "transversal";
    case CrossingKind::grazing: return "grazing";
    case CrossingKind::none: return "none";
    }
    return "?";
}

namespace {

// Root of g(s) = x(dir s) - c on [lo, hi] with g(lo), g(hi) of opposite sign.
double solve_crossing(const ZoneSolution& sol, int dir, double c, double lo, double hi) {
    auto g = [&](double s) { return sol.x(dir * s) - c; };
    double glo = g(lo), ghi = g(hi);
    if (ghi == 0.0) return hi;
    if (glo == 0.0) return lo;
    // Orient so that g(a) < 0 < g(b).
    double a = lo, b = hi;
    if (glo > 0.0) std::swap(a, b);
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 300; ++it) {
        const double gs = g(s);
        if (gs == 0.0) return s;
        if (gs < 0.0) a = s;
        else b = s;
        const double dg = dir * sol.dx(dir * s);
        double next = dg != 0.0 ? s - gs / dg : 0.5 * (a + b);
        const double left = std::min(a, b), right = std::max(a, b);
        if (!(next > left && next < right)) next = 0.5 * (a + b);
        const double step = std::fabs(next - s);
        s = next;
        if (step <= 1e-14 * (1.0 + std::fabs(s))) break;
        if (right - left <= 1e-14 * (1.0 + std::fabs(s))) break;
    }
    return s;
}

CrossingResult make_crossing(const ZoneSolution& sol, const Params& p, int dir, double s, double c) {
    CrossingResult r;
    r.time = s;
    r.boundary = c;
    r.point = sol.point(dir * s);
    r.point.x = c;
    const Vec2 f = zone_field(sol.data().zone, r.point, p);
    r.kind = std::fabs(f.x) <= grazing_tol(f) ? CrossingKind::grazing : CrossingKind::transversal;
    return r;
}

CrossingResult bracket_and_solve(const ZoneSolution& sol, const Params& p, int dir, double s0,
                                 double c, double rate) {
    const double scale = std::max({std::fabs(rate), std::sqrt(p.eps), 1e-300});
    double h = std::min(0.1, 0.1 / scale);
    const double g0 = sol.x(dir * s0) - c;
    double prev = s0;
    for (int it = 0; it < 4000; ++it) {
        const double s = s0 + h;
        const double gs = sol.x(dir * s) - c;
        if (!std::isfinite(gs)) break;
        if (gs == 0.0 || (gs > 0.0) != (g0 > 0.0))
            return make_crossing(sol, p, dir, solve_crossing(sol, dir, c, prev, s), c);
        prev = s;
        h *= 2.0;
    }
    return {};
}

} // namespace

CrossingResult first_exit(Zone z, Vec2 q, const Params& p, int dir) {
    const double lo = zone_lo(z, p), hi = zone_hi(z, p);
    const ZoneData d = zone_data(z, p);
    const ZoneSolution sol(d, q);
    const Vec2 f0 = zone_field(z, q, p);
    const double v0 = dir * f0.x;
    const double xpp = p.eps * (p.a - q.x);
    const bool flat = std::fabs(f0.x) <= grazing_tol(f0);
    auto at_start = [&](double c, CrossingKind kind) {
        CrossingResult r;
        r.time = 0.0;
        r.point = q;
        r.kind = kind;
        r.boundary = c;
        return r;
    };
    if (q.x >= hi) {
        if (v0 > 0.0 && !flat) return at_start(hi, CrossingKind::transversal);
        if (flat && xpp > 0.0) return at_start(hi, CrossingKind::grazing);
    }
    if (q.x <= lo) {
        if (v0 < 0.0 && !flat) return at_start(lo, CrossingKind::transversal);
        if (flat && xpp < 0.0) return at_start(lo, CrossingKind::grazing);
    }

    const double ex = d.equilibrium.x;
    const bool complex = !d.is_real && d.disc != 0.0;
    const double period = complex ? 2.0 * kPi / d.complex.omega : 0.0;
    double s_a = 0.0;
    double x_a = q.x;
    for (int it = 0; it < 200000; ++it) {
        const double s_b = sol.next_extremum(s_a, dir);
        if (!std::isfinite(s_b)) break;
        const double x_b = sol.x(dir * s_b);
        if (!std::isfinite(x_b)) break;
        if (x_b >= hi && x_b > x_a)
            return make_crossing(sol, p, dir, solve_crossing(sol, dir, hi, s_a, s_b), hi);
        if (x_b <= lo && x_b < x_a)
            return make_crossing(sol, p, dir, solve_crossing(sol, dir, lo, s_a, s_b), lo);
        if (complex) {
            const double rate = dir * d.complex.sigma;
            if (rate < 0.0 && ex > lo && ex < hi) {
                const double bound = sol.envelope_amplitude() * std::exp(rate * s_b);
                if (bound < std::min(ex - lo, hi - ex)) return {};
            }
            if (rate == 0.0 && s_b > 2.0 * period) return {};
        }
        s_a = s_b;
        x_a = x_b;
    }

    // Last monotone piece [s_a, inf).
    const double rate = sol.asymptotic_rate(dir);
    if (!(rate > -kInf)) return {};
    if (rate < 0.0) {
        if (ex >= hi && x_a < hi) return bracket_and_solve(sol, p, dir, s_a, hi, rate);
        if (ex <= lo && x_a > lo) return bracket_and_solve(sol, p, dir, s_a, lo, rate);
        return {};
    }
    const double probe = s_a + std::min(1.0, 1.0 / std::max(rate, 1e-300));
    const double v = dir * sol.dx(dir * probe);
    if (v > 0.0 && std::isfinite(hi)) return bracket_and_solve(sol, p, dir, s_a, hi, rate);
    if (v < 0.0 && std::isfinite(lo)) return bracket_and_solve(sol, p, dir, s_a, lo, rate);
    return {};
}

CrossingResult crossing_time(Zone z, Vec2 q, double c, const Params& p, int dir) {
    const double lo = zone_lo(z, p), hi = zone_hi(z, p);
    if (c != lo && c != hi) throw ValidationError("crossing line is not a boundary of the zone");
    if (q.x == c) {
        const Vec2 f = zone_field(z, q, p);
        if (std::fabs(f.x) <= grazing_tol(f)) {
            CrossingResult r;
            r.point = q;
            r.boundary = c;
            r.kind = CrossingKind::grazing;
            return r;
        }
    }
    CrossingResult r = first_exit(z, q, p, dir);
    if (r.kind == CrossingKind::none || r.boundary != c) {
        CrossingResult none;
        none.boundary = c;
        return none;
    }
    return r;
}

Zone entering_zone(Vec2 q, const Params& p, int dir, std::optional<Zone> current) {
    const double se = p.sqrt_eps();
    Zone left, right;
    if (q.x == -1.0) {
        left = Zone::LL;
        right = Zone::L;
    } else if (q.x == -se) {
        left = Zone::L;
        right = Zone::C;
    } else if (q.x == se) {
        left = Zone::C;
        right = Zone::R;
    } else {
        return zone_containing(q.x, p);
    }
    const double v = dir * (q.y - nullcline_f(q.x, p));
    if (v > 0.0) return right;
    if (v < 0.0) return left;
    if (current && (*current == left || *current == right)) return *current;
    return p.eps * (p.a - q.x) > 0.0 ? right : left;
}

std::optional<OrbitEvent> try_advance(Vec2 q, const Params& p, int dir, std::optional<Zone> current) {
    Zone z = entering_zone(q, p, dir, current);
    CrossingResult r = first_exit(z, q, p, dir);
    if (r.kind != CrossingKind::none && r.time <= 0.0) {
        // Tangency resolved the other way: the orbit leaves through the shared line.
        const double c = r.boundary;
        const Zone other = zone_containing(c + (c == zone_hi(z, p) ? 1e-9 : -1e-9), p);
        if (other == z) return std::nullopt;
        z = other;
        r = first_exit(z, q, p, dir);
        if (r.kind != CrossingKind::none && r.time <= 0.0) return std::nullopt;
    }
    if (r.kind == CrossingKind::none) return std::nullopt;
    OrbitEvent ev;
    ev.zone = z;
    ev.entry = q;
    ev.exit = r.point;
    ev.flight_time = r.time;
    return ev;
}

OrbitEvent advance(Vec2 q, const Params& p, int dir, std::optional<Zone> current) {
    auto ev = try_advance(q, p, dir, current);
    if (!ev) throw CaptureError("orbit captured without further switching-line crossings");
    return *ev;
}

StopRule StopRule::events(int n) {
    StopRule s;
    s.kind = Kind::max_events;
    s.max_events = n;
    return s;
}

StopRule StopRule::time(double t, int budget) {
    StopRule s;
    s.kind = Kind::max_time;
    s.max_time = t;
    s.max_events = budget;
    return s;
}

StopRule StopRule::section(double x, int dir, int budget, std::optional<Zone> after) {
    StopRule s;
    s.kind = Kind::section;
    s.section_x = x;
    s.section_dir = dir;
    s.max_events = budget;
    s.require_visit = after;
    return s;
}

Orbit integrate_orbit(Vec2 q, const Params& p, const StopRule& stop, int dir) {
    Orbit orbit;
    orbit.direction = dir;
    Vec2 cur = q;
    std::optional<Zone> zone;
    bool visited = !stop.require_visit.has_value();
    while (true) {
        if (static_cast<int>(orbit.events.size()) >= stop.max_events) {
            orbit.truncated = stop.kind != StopRule::Kind::max_events;
            return orbit;
        }
        auto ev = try_advance(cur, p, dir, zone);
        if (!ev) {
            if (stop.kind == StopRule::Kind::max_time) {
                // Remaining time spent inside the capturing zone.
                const double rest = stop.max_time - orbit.total_time;
                if (rest > 0.0) {
                    OrbitEvent tail;
                    tail.zone = entering_zone(cur, p, dir, zone);
                    tail.entry = cur;
                    tail.exit = flow(tail.zone, cur, dir * rest, p);
                    tail.flight_time = rest;
                    tail.truncated = true;
                    orbit.events.push_back(tail);
                    orbit.total_time = stop.max_time;
                }
                orbit.captured = true;
                return orbit;
            }
            if (stop.stop_on_capture) {
                orbit.captured = true;
                return orbit;
            }
            throw CaptureError("orbit captured without further switching-line crossings");
        }
        if (stop.kind == StopRule::Kind::max_time &&
            orbit.total_time + ev->flight_time >= stop.max_time) {
            const double rest = stop.max_time - orbit.total_time;
            ev->exit = flow(ev->zone, ev->entry, dir * rest, p);
            ev->flight_time = rest;
            ev->truncated = true;
            orbit.events.push_back(*ev);
            orbit.total_time = stop.max_time;
            return orbit;
        }
        orbit.events.push_back(*ev);
        orbit.total_time += ev->flight_time;
        if (stop.require_visit && ev->zone == *stop.require_visit) visited = true;
        if (stop.kind == StopRule::Kind::section && visited && ev->exit.x == stop.section_x) {
            const double v = dir * (ev->exit.y - nullcline_f(ev->exit.x, p));
            if ((v > 0.0 ? 1 : -1) == stop.section_dir && v != 0.0) return orbit;
        }
        cur = ev->exit;
        zone = ev->zone;
    }
}

std::vector<OrbitSample> sample_orbit(const Orbit& orbit, const Params& p, double dt) {
    std::vector<OrbitSample> out;
    if (!(dt > 0.0)) throw ValidationError("sample spacing must be positive");
    double t0 = 0.0;
    std::size_t n = 0;
    for (const auto& ev : orbit.events) {
        const ZoneSolution sol(zone_data(ev.zone, p), ev.entry);
        const double t1 = t0 + ev.flight_time;
        for (;; ++n) {
            const double t = n * dt;
            if (t >= t1) break;
            out.push_back({t, sol.point(orbit.direction * (t - t0)), ev.zone});
        }
        t0 = t1;
    }
    if (!orbit.events.empty()) out.push_back({t0, orbit.events.back().exit, orbit.events.back().zone});
    return out;
}

Vec2 rk4_affine(const Mat2& A, Vec2 b, Vec2 q, double t, int n) {
    if (n < 1) throw ValidationError("rk4 needs at least one step");
    const double h = t / n;
    auto f = [&](Vec2 v) { return A * v + b; };
    Vec2 v = q;
    for (int i = 0; i < n; ++i) {
        const Vec2 k1 = f(v);
        const Vec2 k2 = f(v + (0.5 * h) * k1);
        const Vec2 k3 = f(v + (0.5 * h) * k2);
        const Vec2 k4 = f(v + h * k3);
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return v;
}

Vec2 rk4_oracle(Zone z, Vec2 q, double t, int n, const Params& p) {
    const ZoneData d = zone_data(z, p);
    return rk4_affine(d.A, d.b, q, t, n);
}

std::optional<double> event_x_extremum(const OrbitEvent& ev, const Params& p, int dir) {
    const ZoneSolution sol(zone_data(ev.zone, p), ev.entry);
    const double s = sol.next_extremum(0.0, dir);
    if (std::isfinite(s) && s <= ev.flight_time) return s;
    return std::nullopt;
}

} // namespace pwc
