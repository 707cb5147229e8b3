#include "pwcanard/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pwcanard/errors.hpp"
#include "pwcanard/roots.hpp"

namespace pwc {

const char* stability_source_name(StabilitySource s) {
    switch (s) {
    case StabilitySource::multiplier: return "multiplier";
    case StabilitySource::r_function: return "r_function";
    case StabilitySource::none: return "none";
    }
    return "?";
}

namespace {

constexpr double kExactStabilityEps = 0.05;

Branch branch_header(double k, double eps, int m_sign) {
    Branch b;
    b.k = k;
    b.eps = eps;
    b.m_sign = m_sign;
    const Connection c = maximal_canard(k, eps, m_sign);
    b.a_tilde = c.a_tilde;
    const Params p = canard_params(k, eps, m_sign, c);
    const Landmarks lm = landmarks(p);
    b.x_r = lm.x_r;
    b.x_u = lm.x_u;
    b.x_s = lm.x_s;
    b.a_H = lm.a_H;
    return b;
}

// n points in (lo, hi), denser near both ends.
void clustered(std::vector<double>& out, double lo, double hi, int n) {
    for (int i = 0; i < n; ++i) {
        const double t = (i + 0.5) / n;
        const double s = 0.5 * (1.0 - std::cos(std::numbers::pi * t));
        out.push_back(lo + (hi - lo) * s);
    }
}

template <bool Parallel>
Branch trace(double k, double eps, int m_sign, const BranchOptions& opt) {
    Branch b = branch_header(k, eps, m_sign);
    std::vector<double> xs = opt.widths.empty() ? branch_widths(k, eps, m_sign, opt.points, opt.edge_guard)
                                                : opt.widths;
    std::sort(xs.begin(), xs.end(), std::greater<>());
    const int n = static_cast<int>(xs.size());
    b.points.resize(n);
    if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int i = 0; i < n; ++i) b.points[i] = branch_point(xs[i], k, eps, m_sign);
    } else {
        for (int i = 0; i < n; ++i) b.points[i] = branch_point(xs[i], k, eps, m_sign);
    }
    return b;
}

int validity_interval(double x0, const Branch& b) {
    if (x0 > b.x_r && x0 < b.x_u) return 1;
    if (x0 >= -1.0 && x0 < b.x_s) return 2;
    return 0;
}

} // namespace

std::vector<double> branch_widths(double k, double eps, int m_sign, int n, double edge_guard) {
    if (n < 8) throw ValidationError("branch needs at least 8 widths");
    const Branch b = branch_header(k, eps, m_sign);
    const double se = std::sqrt(eps);
    const std::vector<double> edges{b.x_r + edge_guard, b.x_u, -1.0, b.x_s, -se - edge_guard};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) total += std::max(edges[i + 1] - edges[i], 0.0);
    std::vector<double> xs;
    int used = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double len = edges[i + 1] - edges[i];
        if (!(len > 0.0)) continue;
        int m = std::max(2, static_cast<int>(std::lround(n * len / total)));
        if (i + 2 == edges.size()) m = std::max(2, n - used);
        clustered(xs, edges[i], edges[i + 1], m);
        used += m;
    }
    std::sort(xs.begin(), xs.end(), std::greater<>());
    return xs;
}

bool in_validity_window(double x0, const Branch& b) { return validity_interval(x0, b) != 0; }

BranchPoint branch_point(double x0, double k, double eps, int m_sign) {
    BranchPoint bp;
    bp.x0 = x0;
    bp.h = std::nan("");
    bp.a = std::nan("");
    bp.log_multiplier = std::nan("");
    try {
        const WidthSolve ws = cycle_for_width(x0, k, eps, m_sign);
        bp.a = ws.a_hat;
        bp.underflow = ws.underflow_dominated;
        if (!ws.cycle) {
            bp.error = "no cycle through the width point";
            return bp;
        }
        const CycleRecord& c = *ws.cycle;
        bp.h = c.h;
        bp.kind = c.kind;
        bp.window = c.in_window || ws.outside_validity;
        bp.log_multiplier = c.log_multiplier;
        bp.two_zone = std::none_of(c.orbit.events.begin(), c.orbit.events.end(),
                                   [](const OrbitEvent& ev) { return ev.zone == Zone::R || ev.zone == Zone::LL; });
        // Underflow-dominated points sit at a_tilde, where the closure cannot be resolved.
        bp.verified = c.verified || ws.underflow_dominated;

        const Connection con = maximal_canard(k, eps, m_sign);
        const Params pc = canard_params(k, eps, m_sign, con);
        if (std::isfinite(c.h)) {
            try {
                const RFamily fam = x0 >= -1.0 ? RFamily::three_zone : RFamily::four_zone;
                bp.r_value = r_function(fam, c.h, pc, con.tau_C).value;
            } catch (const DomainError&) {
            }
        }
        if (eps < kExactStabilityEps && bp.r_value) {
            bp.source = StabilitySource::r_function;
            bp.stability = bp.r_value->sign > 0 ? Stability::unstable
                         : bp.r_value->sign < 0 ? Stability::stable
                                                : Stability::nonhyperbolic;
        } else {
            bp.source = StabilitySource::multiplier;
            bp.stability = c.stability;
        }
        bp.ok = true;
    } catch (const std::exception& e) {
        bp.error = e.what();
    }
    return bp;
}

Branch trace_branch(double k, double eps, int m_sign, const BranchOptions& opt) {
    return trace<true>(k, eps, m_sign, opt);
}

Branch trace_branch_serial(double k, double eps, int m_sign, const BranchOptions& opt) {
    return trace<false>(k, eps, m_sign, opt);
}

std::vector<Fold> detect_folds(const Branch& b) {
    std::vector<Fold> out;
    const auto& pts = b.points;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const BranchPoint& u = pts[i];
        const BranchPoint& v = pts[i + 1];
        if (!u.ok || !v.ok || u.window || v.window) continue;
        const int zone = validity_interval(u.x0, b);
        if (zone == 0 || zone != validity_interval(v.x0, b)) continue;
        if ((u.log_multiplier > 0.0) == (v.log_multiplier > 0.0)) continue;

        Fold f;
        auto g = [&](double x) {
            const BranchPoint q = branch_point(x, b.k, b.eps, b.m_sign);
            if (!q.ok) throw NumericalError("branch point failed inside the fold bracket: " + q.error);
            return q.log_multiplier;
        };
        try {
            f.x_star = bracketed_root(g, v.x0, u.x0, v.log_multiplier, u.log_multiplier, 80);
        } catch (const NumericalError&) {
            const double t = u.log_multiplier / (u.log_multiplier - v.log_multiplier);
            f.x_star = u.x0 + t * (v.x0 - u.x0);
            f.coarse = true;
        }
        const BranchPoint s = branch_point(f.x_star, b.k, b.eps, b.m_sign);
        if (s.ok) {
            f.a_star = s.a;
            f.side = s.kind;
            f.multiplier_residual = std::fabs(std::expm1(s.log_multiplier));
        } else {
            f.a_star = 0.5 * (u.a + v.a);
            f.side = u.kind;
            f.multiplier_residual = std::nan("");
            f.coarse = true;
        }
        try {
            const RFamily fam = f.side == CycleKind::headless ? RFamily::three_zone : RFamily::four_zone;
            const HstarResult hr = hstar_root(fam, b.k, b.eps, b.m_sign);
            if (hr.h) {
                f.hstar = hr.h;
                if (s.ok && std::isfinite(s.h)) f.hstar_rel_gap = std::fabs(s.h - *hr.h) / std::fabs(*hr.h);
            }
        } catch (const std::exception&) {
        }
        out.push_back(f);
    }

    // a(x0) reversals not accompanied by a multiplier sign change nearby: report
    // the vertex of a parabola through three points as a coarse fold.
    auto resolvable = [&](const BranchPoint& p) { return p.ok && !p.window && !p.underflow && std::isfinite(p.a); };
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const BranchPoint &u = pts[i - 1], &v = pts[i], &w = pts[i + 1];
        if (!resolvable(u) || !resolvable(v) || !resolvable(w)) continue;
        const int zone = validity_interval(v.x0, b);
        if (zone == 0 || zone != validity_interval(u.x0, b) || zone != validity_interval(w.x0, b)) continue;
        const double d1 = v.a - u.a, d2 = w.a - v.a;
        const double noise = 1e4 * std::numeric_limits<double>::epsilon() * std::fabs(v.a);
        if (std::fabs(d1) <= noise || std::fabs(d2) <= noise || (d1 > 0.0) == (d2 > 0.0)) continue;
        bool near = false;
        for (const Fold& f : out) near = near || (f.x_star <= u.x0 && f.x_star >= w.x0);
        if (near) continue;
        // Parabola through (x, a) at u, v, w.
        const double x1 = u.x0, x2 = v.x0, x3 = w.x0;
        const double s12 = (v.a - u.a) / (x2 - x1), s23 = (w.a - v.a) / (x3 - x2);
        const double c2 = (s23 - s12) / (x3 - x1);
        const double c1 = s12 - c2 * (x1 + x2);
        Fold f;
        f.coarse = true;
        f.x_star = c2 != 0.0 ? -c1 / (2.0 * c2) : x2;
        f.a_star = u.a + (f.x_star - x1) * (s12 + c2 * (f.x_star - x2));
        f.side = v.kind;
        f.multiplier_residual = std::fabs(std::expm1(v.log_multiplier));
        out.push_back(f);
    }
    std::sort(out.begin(), out.end(), [](const Fold& p, const Fold& q) { return p.x_star > q.x_star; });
    return out;
}

HopfCheck hopf_check(double k, double eps, int m_sign, int samples) {
    if (samples < 3) throw ValidationError("hopf_check needs at least 3 samples");
    const double se = std::sqrt(eps);
    HopfCheck out;
    out.a_H = m_sign < 0 ? se : -se;

    // Stable above a_H, unstable below.
    {
        const double d = 1e-3 * se;
        const bool lo = equilibrium_stability(Params::with_sign(out.a_H - d, k, m_sign, eps)).stable();
        const bool hi = equilibrium_stability(Params::with_sign(out.a_H + d, k, m_sign, eps)).stable();
        out.equilibrium_flip = hi && !lo;
    }

    // Small cycles live while the equilibrium is in zone C; the section is the
    // switching line through the tangency point, crossed away from zone C.
    const double xs = m_sign < 0 ? se : -se;
    const int sdir = m_sign < 0 ? -1 : 1;
    // The subcritical cycle repels; inside it orbits fall onto the focus and never
    // return, so that case is integrated backward where the cycle attracts.
    const int tdir = m_sign < 0 ? 1 : -1;
    for (int i = 1; i <= samples; ++i) {
        const double delta = 0.2 * se * i / samples;
        const double a = m_sign < 0 ? out.a_H - delta : out.a_H + delta;
        const Params p = Params::with_sign(a, k, m_sign, eps);
        const double y_tan = nullcline_f(xs, p);
        auto ret = [&](double s) -> std::optional<Orbit> {
            try {
                const Orbit o = integrate_orbit({xs, y_tan + sdir * s}, p, StopRule::section(xs, sdir * tdir, 64), tdir);
                if (o.truncated || o.events.empty()) return std::nullopt;
                return o;
            } catch (const NumericalError&) {
                return std::nullopt;
            }
        };
        auto disp = [&](double s) -> std::optional<double> {
            const auto o = ret(s);
            if (!o) return std::nullopt;
            return sdir * (o->events.back().exit.y - y_tan) - s;
        };
        std::optional<double> prev;
        double s_prev = 0.0;
        std::optional<double> s_star;
        for (int j = -30; j <= 12 && !s_star; ++j) {
            const double s = delta * std::ldexp(1.0, j);
            const auto d = disp(s);
            if (d && prev && (*d > 0.0) != (*prev > 0.0)) {
                auto f = [&](double ss) {
                    const auto v = disp(ss);
                    if (!v) throw NumericalError("hopf return map undefined inside the bracket");
                    return *v;
                };
                s_star = bracketed_root(f, s_prev, s, *prev, *d);
            }
            prev = d;
            s_prev = s;
        }
        if (!s_star) throw NumericalError("hopf_check: no small cycle at delta = " + std::to_string(delta));
        const auto o = ret(*s_star);
        out.samples.push_back({delta, *s_star, o ? divergence_log(o->events, p) : std::nan("")});
    }

    const double n = static_cast<double>(out.samples.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& s : out.samples) {
        sx += s.delta;
        sy += s.amplitude;
        sxx += s.delta * s.delta;
        sxy += s.delta * s.amplitude;
        syy += s.amplitude * s.amplitude;
    }
    const double cxx = sxx - sx * sx / n, cxy = sxy - sx * sy / n, cyy = syy - sy * sy / n;
    out.slope = cxy / cxx;
    out.intercept = (sy - out.slope * sx) / n;
    out.r2 = cyy > 0.0 ? cxy * cxy / (cxx * cyy) : 1.0;
    return out;
}

} // namespace pwc
