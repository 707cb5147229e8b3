#include "pwcanard/model.hpp"

#include <cmath>
#include <limits>

#include "pwcanard/errors.hpp"

namespace pwc {

Params Params::make(double a, double k, double m, double eps) {
    Params p{a, k, m, eps};
    p.validate();
    return p;
}

Params Params::with_sign(double a, double k, int m_sign, double eps) {
    if (m_sign != 1 && m_sign != -1) throw ValidationError("m_sign must be +1 or -1");
    if (!(eps > 0.0)) throw ValidationError("eps must be positive");
    return make(a, k, m_sign * std::sqrt(eps), eps);
}

void Params::validate() const {
    if (!std::isfinite(a) || !std::isfinite(k) || !std::isfinite(m) || !std::isfinite(eps))
        throw ValidationError("parameters must be finite");
    if (!(eps > 0.0) || eps > kEpsMax)
        throw ValidationError("eps must lie in (0, 0.25]");
    if (!(k > 0.0)) throw ValidationError("k must be positive");
    if (!(std::fabs(m) < 2.0 * std::sqrt(eps)))
        throw ValidationError("|m| must be below 2*sqrt(eps)");
}

double Params::sqrt_eps() const { return std::sqrt(eps); }

const char* zone_name(Zone z) {
    switch (z) {
    case Zone::LL: return "LL";
    case Zone::L: return "L";
    case Zone::C: return "C";
    case Zone::R: return "R";
    }
    return "?";
}

double zone_lo(Zone z, const Params& p) {
    switch (z) {
    case Zone::LL: return -std::numeric_limits<double>::infinity();
    case Zone::L: return -1.0;
    case Zone::C: return -p.sqrt_eps();
    case Zone::R: return p.sqrt_eps();
    }
    return 0.0;
}

double zone_hi(Zone z, const Params& p) {
    switch (z) {
    case Zone::LL: return -1.0;
    case Zone::L: return -p.sqrt_eps();
    case Zone::C: return p.sqrt_eps();
    case Zone::R: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

Zone zone_containing(double x, const Params& p) {
    const double se = p.sqrt_eps();
    if (x <= -1.0) return Zone::LL;
    if (x <= -se) return Zone::L;
    if (x <= se) return Zone::C;
    return Zone::R;
}

namespace {

void piece_coefficients(Zone z, const Params& p, double& slope, double& offset) {
    const double se = p.sqrt_eps();
    switch (z) {
    case Zone::LL:
        slope = 1.0;
        offset = 1.0 - p.k * (se - 1.0) - p.m * (se + p.a);
        break;
    case Zone::L:
        slope = -p.k;
        offset = -p.k * se - p.m * (se + p.a);
        break;
    case Zone::C:
        slope = p.m;
        offset = -p.m * p.a;
        break;
    case Zone::R:
        slope = 1.0;
        offset = -se + p.m * (se - p.a);
        break;
    }
}

} // namespace

double nullcline_piece(Zone z, double x, const Params& p) {
    const double se = p.sqrt_eps();
    // Written in the factored form of the model so knots agree to rounding.
    switch (z) {
    case Zone::LL: return x + 1.0 - p.k * (se - 1.0) - p.m * (se + p.a);
    case Zone::L: return -p.k * (x + se) - p.m * (se + p.a);
    case Zone::C: return p.m * (x - p.a);
    case Zone::R: return x - se + p.m * (se - p.a);
    }
    return 0.0;
}

double nullcline_f(double x, const Params& p) {
    return nullcline_piece(zone_containing(x, p), x, p);
}

ZoneData zone_data(Zone z, const Params& p) {
    ZoneData d;
    d.zone = z;
    piece_coefficients(z, p, d.slope, d.offset);
    const double t = -d.slope;
    d.A = {t, 1.0, -p.eps, 0.0};
    d.b = {-d.offset, p.eps * p.a};
    d.trace = t;
    d.det = p.eps;
    d.disc = t * t - 4.0 * p.eps;
    d.equilibrium = {p.a, d.slope * p.a + d.offset};
    d.is_virtual = !(p.a >= zone_lo(z, p) && p.a <= zone_hi(z, p));
    if (d.disc > 0.0) {
        d.is_real = true;
        // The larger-magnitude root first, then the product identity, avoids cancellation.
        const double root = std::sqrt(d.disc);
        const double lq = 0.5 * (t + std::copysign(root, t));
        const double ls = p.eps / lq;
        d.real.lambda_s = ls;
        d.real.lambda_q = lq;
        d.real.v_s = {ls, -p.eps};
        d.real.v_q = {lq, -p.eps};
    } else {
        d.is_real = false;
        d.complex.sigma = 0.5 * t;
        d.complex.omega = 0.5 * std::sqrt(-d.disc);
    }
    return d;
}

Vec2 zone_field(Zone z, Vec2 q, const Params& p) {
    return {q.y - nullcline_piece(z, q.x, p), p.eps * (p.a - q.x)};
}

Vec2 vector_field(Vec2 q, const Params& p) {
    return {q.y - nullcline_f(q.x, p), p.eps * (p.a - q.x)};
}

SlowManifold slow_manifold(const Params& p) {
    const double se = p.sqrt_eps();
    const ZoneData ll = zone_data(Zone::LL, p);
    const ZoneData l = zone_data(Zone::L, p);
    const ZoneData r = zone_data(Zone::R, p);
    SlowManifold s;
    s.mu_LL = {ll.equilibrium, ll.real.v_s, (-1.0 - p.a) / ll.real.lambda_s,
               std::numeric_limits<double>::infinity()};
    if (l.is_real) {
        s.mu_L = {l.equilibrium, l.real.v_s, (-1.0 - p.a) / l.real.lambda_s,
                  (-se - p.a) / l.real.lambda_s};
    }
    s.mu_R = {r.equilibrium, r.real.v_s, -std::numeric_limits<double>::infinity(),
              (se - p.a) / r.real.lambda_s};
    return s;
}

Landmarks landmarks(const Params& p) {
    const double se = p.sqrt_eps();
    const double a = p.a, k = p.k, m = p.m;
    const ZoneData ll = zone_data(Zone::LL, p);
    const ZoneData l = zone_data(Zone::L, p);
    const ZoneData r = zone_data(Zone::R, p);
    const double lls = ll.real.lambda_s;
    const double rs = r.real.lambda_s;
    // Zone L may be a focus when k < 2 sqrt(eps); landmarks on mu_L are then NaN.
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double ls = l.is_real ? l.real.lambda_s : nan;
    const double lq = l.is_real ? l.real.lambda_q : nan;
    const double eps_nu = std::pow(p.eps, kNu);

    Landmarks lm;
    lm.p_LL = {-1.0, k * (1.0 - se) - m * (se + a)};
    lm.p_L = {-se, -m * (se + a)};
    lm.p_R = {se, m * (se - a)};
    lm.q1_R = {se, (m + rs) * (se - a)};
    lm.q1_LL = {-1.0, -lls * (1.0 + a) - k * (se - 1.0) - m * (se + a)};
    lm.q0_L = {-se, -(m + ls) * (se + a)};
    lm.q1_L = {-1.0, -(m + k) * (se + a) + (1.0 + a) * lq};
    lm.q0_RR = {se, lm.q1_LL.y};
    lm.x_r = -(1.0 + k) + k * se - ls * (se + a);
    lm.x_s = -se - ls * (se + a);
    lm.x_u = -1.0 + lls * (1.0 + a);
    lm.h_r = -(m + ls) * (se + a);
    lm.h_s = -(m - ls / eps_nu) * (se + a);
    lm.h_M = -m * (se + a) + k * (1.0 - se);
    lm.h_u = lm.h_M + lls * (1.0 + a) / eps_nu;

    const double tol = 1e-12 * se;
    if (std::fabs(m + se) <= tol) lm.a_H = se;
    else if (std::fabs(m - se) <= tol) lm.a_H = -se;

    lm.equilibrium = {a, nullcline_f(a, p)};

    const Vec2 e_ll = ll.equilibrium;
    const Vec2 e_r = r.equilibrium;
    const double slope = -p.eps / rs;  // slope of the slow eigen-line, shared by LL and R
    const double dx = (e_ll.y - e_r.y) / slope;
    lm.rhomboid = {e_r, Vec2{a + dx, e_ll.y}, e_ll, Vec2{a - dx, e_r.y}};
    return lm;
}

const char* equilibrium_class_name(EquilibriumClass c) {
    switch (c) {
    case EquilibriumClass::stable_node: return "stable node";
    case EquilibriumClass::stable_focus: return "stable focus";
    case EquilibriumClass::unstable_node: return "unstable node";
    case EquilibriumClass::unstable_focus: return "unstable focus";
    case EquilibriumClass::center: return "center";
    case EquilibriumClass::non_generic: return "non-generic (on switching line)";
    }
    return "?";
}

EquilibriumInfo equilibrium_stability(const Params& p) {
    EquilibriumInfo info;
    const double se = p.sqrt_eps();
    info.point = {p.a, nullcline_f(p.a, p)};
    info.zone = zone_containing(p.a, p);
    if (p.a == -1.0 || p.a == -se || p.a == se) {
        info.classification = EquilibriumClass::non_generic;
        return info;
    }
    const ZoneData d = zone_data(info.zone, p);
    if (d.trace == 0.0) info.classification = EquilibriumClass::center;
    else if (d.is_real)
        info.classification = d.trace < 0 ? EquilibriumClass::stable_node : EquilibriumClass::unstable_node;
    else
        info.classification = d.trace < 0 ? EquilibriumClass::stable_focus : EquilibriumClass::unstable_focus;
    return info;
}

} // namespace pwc
