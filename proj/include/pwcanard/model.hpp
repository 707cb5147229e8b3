#pragma once

#include <array>
#include <optional>
#include <string>

#include "pwcanard/vec2.hpp"

namespace pwc {

constexpr double kEpsMax = 0.25;
// Exponent nu of the height bounds; only used as a guard band.
constexpr double kNu = 0.5;

struct Params {
    double a = 0.0;
    double k = 1.0;
    double m = 0.0;
    double eps = 0.01;

    // Throws ValidationError unless eps in (0, kEpsMax], k > 0, |m| < 2 sqrt(eps).
    static Params make(double a, double k, double m, double eps);
    // m = sign * sqrt(eps).
    static Params with_sign(double a, double k, int m_sign, double eps);

    void validate() const;
    double sqrt_eps() const;
    int m_sign() const { return m > 0 ? 1 : (m < 0 ? -1 : 0); }
};

enum class Zone { LL, L, C, R };

const char* zone_name(Zone z);
double zone_lo(Zone z, const Params& p);
double zone_hi(Zone z, const Params& p);
// Zone containing x; boundary points go to the left zone.
Zone zone_containing(double x, const Params& p);

struct RealPair {
    double lambda_s = 0.0;
    double lambda_q = 0.0;
    Vec2 v_s;
    Vec2 v_q;
};

struct ComplexPair {
    double sigma = 0.0;
    double omega = 0.0;
};

struct ZoneData {
    Zone zone = Zone::C;
    Mat2 A;
    Vec2 b;
    double trace = 0.0;
    double det = 0.0;
    double disc = 0.0;
    bool is_real = false;
    RealPair real;
    ComplexPair complex;
    Vec2 equilibrium;
    bool is_virtual = false;
    // Nullcline piece restricted to this zone: f(x) = slope * x + offset.
    double slope = 0.0;
    double offset = 0.0;
};

double nullcline_f(double x, const Params& p);
double nullcline_piece(Zone z, double x, const Params& p);
ZoneData zone_data(Zone z, const Params& p);
Vec2 vector_field(Vec2 q, const Params& p);
Vec2 zone_field(Zone z, Vec2 q, const Params& p);

struct SlowSegment {
    Vec2 base;
    Vec2 direction;
    double r_min = 0.0;
    double r_max = 0.0;
    Vec2 at(double r) const { return base + r * direction; }
};

struct SlowManifold {
    SlowSegment mu_LL;
    SlowSegment mu_L;
    SlowSegment mu_R;
};

struct Landmarks {
    Vec2 p_LL, p_L, p_R;
    Vec2 q1_LL, q1_R, q0_L, q1_L, q0_RR;
    double x_r = 0.0, x_s = 0.0, x_u = 0.0;
    double h_r = 0.0, h_s = 0.0, h_u = 0.0, h_M = 0.0;
    std::optional<double> a_H;
    Vec2 equilibrium;
    // Vertices in order e_R, upper-right, e_LL, lower-left.
    std::array<Vec2, 4> rhomboid;
};

Landmarks landmarks(const Params& p);
SlowManifold slow_manifold(const Params& p);

enum class EquilibriumClass {
    stable_node,
    stable_focus,
    unstable_node,
    unstable_focus,
    center,
    non_generic
};

const char* equilibrium_class_name(EquilibriumClass c);

struct EquilibriumInfo {
    Vec2 point;
    Zone zone = Zone::C;
    EquilibriumClass classification = EquilibriumClass::non_generic;
    bool stable() const {
        return classification == EquilibriumClass::stable_node ||
               classification == EquilibriumClass::stable_focus;
    }
};

EquilibriumInfo equilibrium_stability(const Params& p);

} // namespace pwc
