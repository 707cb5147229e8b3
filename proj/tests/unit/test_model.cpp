#include <doctest.h>

#include <cmath>
#include <random>

#include "pwcanard/errors.hpp"
#include "pwcanard/model.hpp"

using namespace pwc;

namespace {
const Params P = Params::make(0.1, 2.0, -0.2, 0.04);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(Params::make(0.0, 1.0, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(Params::make(0.0, 1.0, 0.0, 0.3), ValidationError);
    CHECK_THROWS_AS(Params::make(0.0, -1.0, 0.0, 0.04), ValidationError);
    CHECK_THROWS_AS(Params::make(0.0, 1.0, 0.4, 0.04), ValidationError);
    CHECK_NOTHROW(Params::make(0.0, 1.0, 0.39, 0.04));
    const Params q = Params::with_sign(0.0, 1.0, -1, 0.09);
    CHECK(q.m == doctest::Approx(-0.3).epsilon(1e-15));
    CHECK(q.m_sign() == -1);
}

TEST_CASE("zones and boundaries") {
    const double se = 0.2;
    CHECK(zone_containing(-1.5, P) == Zone::LL);
    CHECK(zone_containing(-1.0, P) == Zone::LL);
    CHECK(zone_containing(-0.5, P) == Zone::L);
    CHECK(zone_containing(-se, P) == Zone::L);
    CHECK(zone_containing(0.0, P) == Zone::C);
    CHECK(zone_containing(se, P) == Zone::C);
    CHECK(zone_containing(0.5, P) == Zone::R);
    CHECK(zone_lo(Zone::C, P) == doctest::Approx(-se));
    CHECK(zone_hi(Zone::C, P) == doctest::Approx(se));
}

TEST_CASE("nullcline is continuous with the stated slopes") {
    const double se = P.sqrt_eps();
    for (double x : {-1.0, -se, se}) {
        const double l = nullcline_f(std::nextafter(x, -10.0), P);
        const double r = nullcline_f(std::nextafter(x, 10.0), P);
        CHECK(std::fabs(l - r) < 1e-14);
    }
    const double h = 1e-3;
    auto slope = [&](double x) { return (nullcline_f(x + h, P) - nullcline_f(x - h, P)) / (2 * h); };
    CHECK(slope(-2.0) == doctest::Approx(1.0));
    CHECK(slope(-0.6) == doctest::Approx(-2.0));
    CHECK(slope(0.0) == doctest::Approx(-0.2));
    CHECK(slope(1.0) == doctest::Approx(1.0));
    // f(a) = 0 in zone C, so the equilibrium sits on y = 0
    CHECK(nullcline_f(P.a, P) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("zone matrices have trace -slope and determinant eps") {
    for (Zone z : {Zone::LL, Zone::L, Zone::C, Zone::R}) {
        const ZoneData d = zone_data(z, P);
        CHECK(d.A.det() == doctest::Approx(P.eps));
        CHECK(d.A.trace() == doctest::Approx(-d.slope));
        if (d.is_real) {
            CHECK(d.real.lambda_s * d.real.lambda_q == doctest::Approx(P.eps));
            CHECK(d.real.lambda_s + d.real.lambda_q == doctest::Approx(d.trace));
            CHECK(std::fabs(d.real.lambda_s) < std::fabs(d.real.lambda_q));
            // v_s is an eigenvector
            const Vec2 av = d.A * d.real.v_s;
            CHECK(av.x == doctest::Approx(d.real.lambda_s * d.real.v_s.x));
            CHECK(av.y == doctest::Approx(d.real.lambda_s * d.real.v_s.y));
        }
        // equilibrium of the affine extension
        const Vec2 f = zone_field(z, d.equilibrium, P);
        CHECK(std::fabs(f.x) < 1e-14);
        CHECK(std::fabs(f.y) < 1e-14);
    }
}

TEST_CASE("landmark anchors lie on the slow eigen-lines") {
    const Landmarks lm = landmarks(P);
    CHECK(lm.q0_L.x == doctest::Approx(-0.2));
    CHECK(lm.q0_L.y == doctest::Approx(0.053938769133981372).epsilon(1e-13));
    CHECK(lm.q1_R.y == doctest::Approx(-0.0241742430504416).epsilon(1e-13));
    CHECK(lm.p_L.y == doctest::Approx(nullcline_f(-0.2, P)).epsilon(1e-14));
    CHECK(lm.p_R.y == doctest::Approx(nullcline_f(0.2, P)).epsilon(1e-14));
    CHECK(lm.p_LL.y == doctest::Approx(nullcline_f(-1.0, P)).epsilon(1e-14));
    CHECK(lm.h_r < lm.h_M);
    CHECK(lm.h_s < lm.h_M);
    CHECK(lm.x_r < -1.0);
    CHECK(lm.x_s > -1.0);
    CHECK(lm.x_s < -0.2);
    // m = -sqrt(eps) here
    REQUIRE(lm.a_H.has_value());
    CHECK(*lm.a_H == doctest::Approx(0.2));
    CHECK_FALSE(landmarks(Params::make(0.1, 2.0, -0.1, 0.04)).a_H.has_value());
}

TEST_CASE("rhomboid boundary points flow inward") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int sign : {-1, 1}) {
        const Params p = Params::with_sign(-sign * 0.05, 1.5, sign, 0.04);
        const auto v = landmarks(p).rhomboid;
        Vec2 c{};
        for (const Vec2& q : v) c = c + 0.25 * q;
        for (int i = 0; i < 200; ++i) {
            const int e = i % 4;
            const Vec2 a = v[e], b = v[(e + 1) % 4];
            const Vec2 q = a + u(rng) * (b - a);
            Vec2 n{b.y - a.y, a.x - b.x};
            if (dot(n, c - a) < 0) n = -1.0 * n;
            CHECK(dot(n, vector_field(q, p)) >= -1e-12);
        }
    }
}

TEST_CASE("equilibrium classification switches at a = a_H") {
    const double se = 0.2;
    const auto below = equilibrium_stability(Params::with_sign(se - 0.01, 2.0, -1, 0.04));
    const auto above = equilibrium_stability(Params::with_sign(se + 0.01, 2.0, -1, 0.04));
    CHECK(below.zone == Zone::C);
    CHECK_FALSE(below.stable());
    CHECK(above.zone == Zone::R);
    CHECK(above.stable());
    CHECK(equilibrium_stability(Params::with_sign(se, 2.0, -1, 0.04)).classification ==
          EquilibriumClass::non_generic);
    CHECK(equilibrium_stability(Params::make(0.0, 2.0, 0.0, 0.04)).classification == EquilibriumClass::center);
}
