#include "pwcanard/canard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "pwcanard/errors.hpp"
#include "pwcanard/roots.hpp"

namespace pwc {

namespace {

const double kPiSqrt3 = std::numbers::pi / std::sqrt(3.0);

// Slow and fast eigenvalues of the two slope-one zones (LL and R share them).
double lambda_unit_s(double eps) { return -2.0 * eps / (1.0 + std::sqrt(1.0 - 4.0 * eps)); }
double lambda_unit_q(double eps) { return -0.5 * (1.0 + std::sqrt(1.0 - 4.0 * eps)); }

// Zone L: eigenvalues of x^2 - k x + eps.
double lambda_L_s(double k, double eps) { return 2.0 * eps / (k + std::sqrt(k * k - 4.0 * eps)); }
double lambda_L_q(double k, double eps) { return 0.5 * (k + std::sqrt(k * k - 4.0 * eps)); }

void check_connection_inputs(double k, double eps, int m_sign) {
    if (!(k > 0.0)) throw ValidationError("k must be positive");
    if (!(eps > 0.0 && eps <= kEpsMax)) throw ValidationError("eps must lie in (0, 0.25]");
    if (m_sign != 1 && m_sign != -1) throw ValidationError("m_sign must be +1 or -1");
}

struct CFlowState {
    Vec2 q;      // position
    Vec2 dq_da;  // derivative with respect to a
};

// Flow of zone C from q1_R for time tau with a = abar sqrt(eps).
CFlowState c_flow(double tau, double a, double k, double eps, int m_sign) {
    const double se = std::sqrt(eps);
    const double m = m_sign * se;
    const Params p{a, k, m, eps};
    const ZoneData c = zone_data(Zone::C, p);
    const double rs = lambda_unit_s(eps);
    const Vec2 q1{se, (m + rs) * (se - a)};
    const Mat2 M = propagator(c, tau);
    const Vec2 e = c.equilibrium;
    CFlowState s;
    s.q = M * (q1 - e) + e;
    // d/da of e + M (q1 - e): e_a = (1, 0), q1_a = (0, -(m + rs)).
    const Vec2 e_a{1.0, 0.0};
    const Vec2 q_a{0.0, -(m + rs)};
    s.dq_da = M * (q_a - e_a) + e_a;
    return s;
}

} // namespace

SingularConnection singular_connection() {
    const double E = std::exp(kPiSqrt3);
    // det of the (F/sqrt(eps), G/eps) Jacobian; the partials are dF = (0, 1 + E), dG = (2E/(1+E), -(1+E)).
    return {(E - 1.0) / (E + 1.0), 2.0 * kPiSqrt3, -2.0 * E};
}

Vec2 connection_residual(double tau_bar, double a_bar, double k, double eps, int m_sign) {
    const double se = std::sqrt(eps);
    const double a = a_bar * se;
    const CFlowState s = c_flow(tau_bar / se, a, k, eps, m_sign);
    const double m = m_sign * se;
    const double F = s.q.x + se;
    const double G = s.q.y + (m + lambda_L_s(k, eps)) * (se + a);
    return {F / se, G / eps};
}

Mat2 connection_jacobian(double tau_bar, double a_bar, double k, double eps, int m_sign) {
    const double se = std::sqrt(eps);
    const double a = a_bar * se;
    const double m = m_sign * se;
    const CFlowState s = c_flow(tau_bar / se, a, k, eps, m_sign);
    const double xdot = s.q.y - m * (s.q.x - a);
    const double ydot = eps * (a - s.q.x);
    Mat2 J;
    J.a11 = xdot / eps;
    J.a12 = s.dq_da.x;
    J.a21 = ydot / (eps * se);
    J.a22 = (s.dq_da.y + m + lambda_L_s(k, eps)) / se;
    return J;
}

bool connection_in_corridor(const Connection& c, double k, double eps, int m_sign, int n) {
    const double se = std::sqrt(eps);
    for (int i = 1; i <= n; ++i) {
        const double s = c.tau_C * i / (n + 1.0);
        const double x = c_flow(s, c.a_tilde, k, eps, m_sign).q.x;
        if (!(x > -se && x < se)) return false;
    }
    return true;
}

Connection maximal_canard_unchecked(double k, double eps, int m_sign) {
    check_connection_inputs(k, eps, m_sign);
    const SingularConnection s0 = singular_connection();
    double tb = s0.tau_bar;
    double ab = -m_sign * s0.a_bar;
    Vec2 r = connection_residual(tb, ab, k, eps, m_sign);
    Connection out;
    int it = 0;
    for (; it < 50 && norm(r) > 1e-13; ++it) {
        const Mat2 J = connection_jacobian(tb, ab, k, eps, m_sign);
        const double det = J.det();
        if (det == 0.0 || !std::isfinite(det)) break;
        const double dt = (J.a22 * r.x - J.a12 * r.y) / det;
        const double da = (-J.a21 * r.x + J.a11 * r.y) / det;
        double lam = 1.0;
        Vec2 r_new;
        for (int h = 0; h < 30; ++h) {
            r_new = connection_residual(tb - lam * dt, ab - lam * da, k, eps, m_sign);
            if (norm(r_new) < norm(r) || h == 29) break;
            lam *= 0.5;
        }
        if (!(norm(r_new) < norm(r))) break;  // no further progress at rounding level
        tb -= lam * dt;
        ab -= lam * da;
        r = r_new;
    }
    const double se = std::sqrt(eps);
    out.iterations = it;
    out.tau_bar = tb;
    out.a_bar = ab;
    out.tau_C = tb / se;
    out.a_tilde = ab * se;
    out.residual = r;
    out.converged = norm(r) <= 1e-12;
    out.valid = out.converged && out.tau_C > 0.0 && std::fabs(out.a_tilde) < se &&
                connection_in_corridor(out, k, eps, m_sign);
    return out;
}

Connection maximal_canard(double k, double eps, int m_sign) {
    Connection c = maximal_canard_unchecked(k, eps, m_sign);
    if (!c.converged)
        throw ConvergenceError("maximal canard Newton did not converge (last a = " + std::to_string(c.a_tilde) +
                               ", tau = " + std::to_string(c.tau_C) + ")");
    if (!c.valid) throw DomainError("maximal canard leaves the central band");
    return c;
}

double a_tilde_series(double k, double eps, int m_sign) {
    check_connection_inputs(k, eps, m_sign);
    const double E = std::exp(kPiSqrt3);
    return -m_sign * (E - 1.0) / (E + 1.0) * std::sqrt(eps) -
           E / ((E + 1.0) * (E + 1.0)) * ((1.0 - k * k) / (k * k)) * eps * std::sqrt(eps);
}

double tau_C_series(double k, double eps, int m_sign) {
    check_connection_inputs(k, eps, m_sign);
    const double se = std::sqrt(eps);
    return 2.0 * kPiSqrt3 / se - (1.0 + k) / k + m_sign * (1.0 - k * k) / (2.0 * k * k) * se;
}

Params canard_params(double k, double eps, int m_sign, const Connection& c) {
    return Params::with_sign(c.a_tilde, k, m_sign, eps);
}

namespace {

struct Eigs {
    double ls, lq;  // zone L
    double rs, rq;  // zones R and LL
};

Eigs eigs(const Params& p) {
    if (p.k * p.k <= 4.0 * p.eps) throw DomainError("zone L has no real slow eigenvalue");
    return {lambda_L_s(p.k, p.eps), lambda_L_q(p.k, p.eps), lambda_unit_s(p.eps), lambda_unit_q(p.eps)};
}

// log(1 + u) / lambda, or NaN when 1 + u <= 0.
double log_power(double u, double inv_lambda) {
    if (!(u > -1.0)) return std::numeric_limits<double>::quiet_NaN();
    return inv_lambda * std::log1p(u);
}

double u_R(double h, const Params& p, const Eigs& e) {
    const double se = p.sqrt_eps();
    return ((p.m + e.rs) * (se - p.a) - h) / ((e.rq - e.rs) * (se - p.a));
}
double u_L(double h, const Params& p, const Eigs& e) {
    const double se = p.sqrt_eps();
    return (h + (p.m + e.ls) * (se + p.a)) / ((e.lq - e.ls) * (se + p.a));
}
double u_Ld(double h, const Params& p, const Eigs& e) {
    const double se = p.sqrt_eps();
    return (h + p.m * (se + p.a) + e.ls * (2.0 * se + p.a - 1.0)) / ((e.lq - e.ls) * (se + p.a));
}
double u_LL(double h, const Params& p, const Eigs& e) {
    const double se = p.sqrt_eps();
    return (h + p.m * (se + p.a) + p.k * (se - 1.0) + e.rs * (1.0 + p.a)) / ((e.rq - e.rs) * (1.0 + p.a));
}
double u_RR(const Params& p, const Eigs& e) {
    const double se = p.sqrt_eps();
    return (e.rs * (se - p.a) + e.rs * (1.0 + p.a) + p.k * (se - 1.0) + 2.0 * p.m * se) /
           ((e.rq - e.rs) * (se - p.a));
}

std::optional<double> finite_or_empty(double v) {
    if (std::isfinite(v)) return v;
    return std::nullopt;
}

// log of the product of powers in R3z / R4z (NaN outside the power domains).
double r_log_product(RFamily f, double h, const Params& p, const Eigs& e) {
    if (f == RFamily::three_zone)
        return log_power(u_L(h, p, e), p.k / e.ls) + log_power(u_R(h, p, e), 1.0 / e.rs);
    return log_power(u_Ld(h, p, e), p.k / e.ls) + log_power(u_LL(h, p, e), 1.0 / e.rs) +
           log_power(u_RR(p, e), 1.0 / e.rs);
}

} // namespace

FlightTimes flight_times(double h, const Params& p) {
    const Eigs e = eigs(p);
    FlightTimes t;
    t.tau_R = finite_or_empty(-log_power(u_R(h, p, e), 1.0 / e.rs));
    t.tau_L = finite_or_empty(log_power(u_L(h, p, e), 1.0 / e.ls));
    t.tau_Ld = finite_or_empty(log_power(u_Ld(h, p, e), 1.0 / e.ls));
    t.tau_LL = finite_or_empty(-log_power(u_LL(h, p, e), 1.0 / e.rs));
    t.tau_RR = finite_or_empty(-log_power(u_RR(p, e), 1.0 / e.rs));
    return t;
}

const char* r_family_name(RFamily f) { return f == RFamily::three_zone ? "3z" : "4z"; }

std::pair<double, double> r_domain(RFamily f, const Params& p) {
    const Landmarks lm = landmarks(p);
    if (f == RFamily::three_zone) return {lm.h_s, lm.h_M};
    return {lm.h_r, lm.h_u};
}

RFunctionValue r_function(RFamily f, double h, const Params& p, double tau_C) {
    const auto [lo, hi] = r_domain(f, p);
    const bool inside = f == RFamily::three_zone ? (h > lo && h <= hi) : (h > lo && h < hi);
    if (!inside) throw DomainError(std::string("h outside the ") + r_family_name(f) + " interval");
    const Eigs e = eigs(p);
    RFunctionValue r;
    r.family = f;
    r.h = h;
    r.log_product = r_log_product(f, h, p, e);
    if (std::isnan(r.log_product)) throw DomainError("R function power base is not positive");
    r.log_target = p.m * tau_C;
    r.value = exp_difference(r.log_product, r.log_target);
    return r;
}

RFunctionValue R3z(double h, const Params& p, double tau_C) { return r_function(RFamily::three_zone, h, p, tau_C); }
RFunctionValue R4z(double h, const Params& p, double tau_C) { return r_function(RFamily::four_zone, h, p, tau_C); }

HstarResult hstar_root(RFamily f, double k, double eps, int m_sign, int samples) {
    const Connection c = maximal_canard(k, eps, m_sign);
    const Params p = canard_params(k, eps, m_sign, c);
    const Eigs e = eigs(p);
    const auto [lo, hi] = r_domain(f, p);
    HstarResult out;
    out.h_lo = lo;
    out.h_hi = hi;
    const double target = p.m * c.tau_C;
    // sign(R) = sign(log product - m tau_C); the log form is smooth and bounded.
    auto g = [&](double h) { return r_log_product(f, h, p, e) - target; };
    std::vector<double> hs(samples), gs(samples);
    for (int i = 0; i < samples; ++i) {
        hs[i] = lo + (hi - lo) * (i + 1.0) / samples;
        if (f == RFamily::four_zone && i == samples - 1) hs[i] = hi - 1e-12 * (hi - lo);
        gs[i] = g(hs[i]);
    }
    std::optional<std::pair<int, int>> first;
    int last = -1;
    for (int i = 0; i < samples; ++i) {
        if (std::isnan(gs[i])) continue;
        if (last >= 0 && (gs[i] > 0.0) != (gs[last] > 0.0)) {
            ++out.sign_changes;
            if (!first) first = std::make_pair(last, i);
        }
        last = i;
    }
    if (!first) return out;
    const int i0 = first->first, i1 = first->second;
    out.h = bracketed_root(g, hs[i0], hs[i1], gs[i0], gs[i1]);
    out.derivative_sign = gs[i1] > gs[i0] ? 1 : -1;
    int claimed = 0;
    if (f == RFamily::four_zone) claimed = 1;
    else if (m_sign < 0 && k > 1.0) claimed = 1;
    else if (m_sign > 0 && k < 1.0) claimed = -1;
    out.derivative_as_claimed = claimed == 0 || claimed == out.derivative_sign;
    return out;
}

std::optional<double> hstar_series(RFamily f, double k, double eps, int m_sign) {
    check_connection_inputs(k, eps, m_sign);
    const double se = std::sqrt(eps);
    const double k2 = k * k;
    if (f == RFamily::three_zone) {
        if (k == 1.0) return std::nullopt;
        const double base = std::pow(k, k2 / (k2 - 1.0));
        if (m_sign < 0)
            return 2.0 / (1.0 + std::exp(-kPiSqrt3)) * base * std::exp(kPiSqrt3 * (1.0 - 2.0 * eps) / (k2 - 1.0)) * se;
        return 2.0 / (1.0 + std::exp(kPiSqrt3)) * base * std::exp(kPiSqrt3 * (1.0 - 2.0 * eps) / (1.0 - k2)) * se;
    }
    if (k == 1.0) return 2.0 / (1.0 + std::exp(kPiSqrt3));
    return (k + 1.0) * std::exp((2.0 - k2) / 2.0) * std::pow(se, (k2 - 1.0) / k2);
}

double width_gap_log_estimate(double x0, const Params& p) {
    const Landmarks lm = landmarks(p);
    if (x0 >= -1.0) {
        const double d = std::fabs(x0);
        return std::log(d) - d / (p.eps * p.sqrt_eps());
    }
    const double d = std::fabs(x0 - lm.x_r);
    return std::log(d) - d / p.eps;
}

WidthSolve cycle_for_width(double x0, double k, double eps, int m_sign) {
    const Connection c = maximal_canard(k, eps, m_sign);
    WidthSolve out;
    out.x0 = x0;
    out.a_tilde = c.a_tilde;
    out.a_hat = c.a_tilde;
    const Params p0 = canard_params(k, eps, m_sign, c);
    const Landmarks lm = landmarks(p0);
    out.outside_validity = !((x0 > lm.x_r && x0 < lm.x_u) || (x0 >= -1.0 && x0 < lm.x_s));

    auto closure = [&](double a) -> std::optional<double> {
        const Params p = Params::with_sign(a, k, m_sign, eps);
        if (!(x0 < -p.sqrt_eps())) return std::nullopt;
        try {
            const auto arcs = shoot_from_width(x0, p);
            if (!arcs) return std::nullopt;
            return arcs->gap();
        } catch (const NumericalError&) {
            return std::nullopt;
        }
    };
    auto finish_underflow = [&] {
        out.a_hat = c.a_tilde;
        out.underflow_dominated = true;
        out.gap_estimated = true;
        out.gap_to_a_tilde = LogValue::from_log(width_gap_log_estimate(x0, p0), 1);
    };

    const double a0 = c.a_tilde;
    const double ulp = std::nextafter(std::fabs(a0), INFINITY) - std::fabs(a0);
    // Sample the closure geometrically on both sides of a_tilde; one side may be
    // undefined (capture or no return), so edges of the defined set are refined.
    std::vector<std::pair<double, std::optional<double>>> samples{{a0, closure(a0)}};
    for (double w = 64.0 * ulp; w < 2.0 * std::sqrt(eps); w *= 2.0) {
        samples.push_back({a0 - w, closure(a0 - w)});
        samples.push_back({a0 + w, closure(a0 + w)});
    }
    double lo = a0, hi = a0;
    std::optional<double> g_lo, g_hi;
    bool found = false;
    for (int level = 0; level < 5 && !found; ++level) {
        std::sort(samples.begin(), samples.end(), [](const auto& u, const auto& v) { return u.first < v.first; });
        // Nearest sign change to a_tilde among consecutive defined samples.
        double best = INFINITY;
        int last = -1;
        for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
            if (!samples[i].second) continue;
            if (last >= 0 && (*samples[i].second > 0.0) != (*samples[last].second > 0.0)) {
                const double d = std::min(std::fabs(samples[i].first - a0), std::fabs(samples[last].first - a0));
                if (d < best) {
                    best = d;
                    lo = samples[last].first;
                    hi = samples[i].first;
                    g_lo = samples[last].second;
                    g_hi = samples[i].second;
                    found = true;
                }
            }
            last = i;
        }
        if (found) break;
        std::vector<std::pair<double, std::optional<double>>> extra;
        for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
            if (samples[i].second.has_value() == samples[i + 1].second.has_value()) continue;
            for (int j = 1; j < 8; ++j) {
                const double a = samples[i].first + (samples[i + 1].first - samples[i].first) * j / 8.0;
                extra.push_back({a, closure(a)});
            }
        }
        if (extra.empty()) break;
        samples.insert(samples.end(), extra.begin(), extra.end());
    }
    if (!found) throw NumericalError("cycle_for_width: no sign change of the closure around a_tilde");

    const bool tight = hi - lo <= 2.0 * 64.0 * ulp;
    if (tight) {
        finish_underflow();
    } else {
        auto f = [&](double a) {
            const auto g = closure(a);
            if (!g) throw NumericalError("closure undefined inside the bracket");
            return *g;
        };
        out.a_hat = bracketed_root(f, lo, hi, *g_lo, *g_hi);
        if (std::fabs(out.a_hat - a0) <= 64.0 * ulp) {
            finish_underflow();
        } else {
            out.gap_to_a_tilde = LogValue::from_double(out.a_hat - a0);
        }
    }
    out.cycle = cycle_from_width(x0, Params::with_sign(out.a_hat, k, m_sign, eps));
    return out;
}

double saddle_node_k_for_width(double x0, double eps, int m_sign, double k_min, double k_max) {
    const RFamily fam = x0 >= -1.0 ? RFamily::three_zone : RFamily::four_zone;
    auto g = [&](double k) -> std::optional<double> {
        try {
            const HstarResult r = hstar_root(fam, k, eps, m_sign, 800);
            if (!r.h) return std::nullopt;
            const Connection c = maximal_canard(k, eps, m_sign);
            return *r.h - phi(x0, canard_params(k, eps, m_sign, c));
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };
    const int n = 74;
    std::optional<double> prev;
    double k_prev = k_min;
    for (int i = 0; i <= n; ++i) {
        const double k = k_min + (k_max - k_min) * i / n;
        if (std::fabs(k - 1.0) < 1e-9) continue;
        const auto v = g(k);
        if (v && prev && (*v > 0.0) != (*prev > 0.0)) {
            auto f = [&](double kk) {
                const auto w = g(kk);
                if (!w) throw NumericalError("saddle-node height undefined inside the k bracket");
                return *w;
            };
            return bracketed_root(f, k_prev, k, *prev, *v, 80);
        }
        if (v) {
            prev = v;
            k_prev = k;
        } else {
            prev.reset();
        }
    }
    throw NumericalError("saddle_node_k_for_width: no bracket in k in [" + std::to_string(k_min) + ", " +
                         std::to_string(k_max) + "]");
}

HalfMapAsymptotic halfmap_asymptotic(HalfMapKind kind, double h, const Params& p) {
    const Eigs e = eigs(p);
    const Landmarks lm = landmarks(p);
    const double se = p.sqrt_eps(), a = p.a, k = p.k, m = p.m, eps = p.eps;
    const double eps_nu = std::pow(eps, kNu);
    const double p2 = lm.p_LL.y;
    HalfMapAsymptotic out{};
    switch (kind) {
    case HalfMapKind::L:
        if (!(h > (-m + e.ls / eps_nu) * (se + a))) throw DomainError("h below the L threshold");
        out = {lm.q0_L, 1, LogValue::from_log(std::log(std::fabs(h)) - k * h / (eps * (se - a)), h > 0 ? 1 : -1)};
        break;
    case HalfMapKind::R:
        if (!(h > (m - e.rs / eps_nu) * (se - a))) throw DomainError("h below the R threshold");
        out = {lm.q1_R, 1, LogValue::from_log(std::log(std::fabs(h)) - h / (eps * (se - a)), h > 0 ? 1 : -1)};
        break;
    case HalfMapKind::LL:
        if (!(h < p2 + e.rs / eps_nu * (1.0 + a))) throw DomainError("h above the LL threshold");
        out = {lm.q1_LL, -1,
               LogValue::from_log(std::log(std::fabs(k - h)) - k * (k - h) / (eps * (1.0 + a)), k > h ? 1 : -1)};
        break;
    case HalfMapKind::Ld:
        if (!(h > p2 - e.lq * (1.0 + a) && h < p2)) throw DomainError("h outside the Ld band");
        out = {lm.q0_L, -1,
               LogValue::from_log(std::log(std::fabs(k - h)) - k * k / eps * std::log((1.0 + a) / (a + se)),
                                  k > h ? 1 : -1)};
        break;
    default:
        throw ValidationError("no asymptotic correction for this half map");
    }
    return out;
}

} // namespace pwc
