#include <doctest.h>

#include <cmath>

#include "pwcanard/canard.hpp"
#include "pwcanard/errors.hpp"
#include "pwcanard/poincare.hpp"

using namespace pwc;

TEST_CASE("Phi matches the oracle on both branches") {
    const Params p = Params::make(0.1, 2.0, -0.2, 0.04);
    // zone-L forward to x = -sqrt(eps), zone-LL backward to x = -1
    CHECK(phi(-0.5, p) == doctest::Approx(0.70318895846781843).epsilon(1e-12));
    CHECK(phi(-0.9, p) == doctest::Approx(1.5345493323828377).epsilon(1e-12));
    CHECK(phi(-1.2, p) == doctest::Approx(1.3644224426294323).epsilon(1e-12));
    CHECK(phi(-1.6, p) == doctest::Approx(0.90350736478301367).epsilon(1e-12));
    CHECK_THROWS_AS(phi(0.0, p), DomainError);
}

TEST_CASE("Phi inverse round trip") {
    const Params p = Params::make(0.1, 2.0, -0.2, 0.04);
    for (double x0 : {-0.3, -0.5, -0.8}) CHECK(phi_inverse(phi(x0, p), PhiBranch::three_zone, p) == doctest::Approx(x0));
    for (double x0 : {-1.1, -1.4, -1.9}) CHECK(phi_inverse(phi(x0, p), PhiBranch::four_zone, p) == doctest::Approx(x0));
}

TEST_CASE("half maps invert") {
    const Params p = Params::make(0.1, 2.0, -0.2, 0.04);
    const HalfMapResult f = half_map(HalfMapKind::L, 0.055, p);
    CHECK(f.tau > 0.0);
    CHECK(f.y_out > nullcline_f(-0.2, p));
    const HalfMapResult b = half_map(HalfMapKind::L, f.y_out, p, true);
    CHECK(b.y_out == doctest::Approx(0.055).epsilon(1e-11));
    CHECK(b.tau == doctest::Approx(f.tau).epsilon(1e-11));
    CHECK_THROWS_AS(half_map(HalfMapKind::L, 0.5, p), DomainError);
    // below the slow manifold the orbit escapes through x = -1
    CHECK(0.05 < landmarks(p).q0_L.y);
    CHECK_THROWS_AS(half_map(HalfMapKind::L, 0.05, p), NoCrossingError);
}

TEST_CASE("multiplier classification band") {
    CHECK(classify_multiplier(-1.0) == Stability::stable);
    CHECK(classify_multiplier(1.0) == Stability::unstable);
    CHECK(classify_multiplier(0.1 * kNonhyperbolicBand) == Stability::nonhyperbolic);
}

TEST_CASE("three coexisting cycles near the connection") {
    const double eps = 0.1;
    const Params p = Params::make(0.2305968812, 2.5, -std::sqrt(eps), eps);
    const auto fps = fixed_points(p, -10.0, 10.0);
    REQUIRE(fps.size() >= 3);
    int stable = 0, unstable = 0;
    for (const auto& c : fps) {
        CHECK(c.verified);
        // orbit closes
        REQUIRE_FALSE(c.orbit.events.empty());
        const Vec2 s = c.orbit.events.front().entry, e = c.orbit.events.back().exit;
        CHECK(norm(s - e) < 1e-8);
        (c.stability == Stability::stable ? stable : unstable)++;
        // exact log multiplier is the divergence integral
        CHECK(c.log_multiplier == doctest::Approx(divergence_log(c.orbit.events, p)).epsilon(1e-12));
    }
    CHECK(stable >= 2);
    CHECK(unstable >= 1);
}

TEST_CASE("exact multiplier agrees with the finite-difference multiplier") {
    for (double x0 : {-0.6, -1.3}) {
        const WidthSolve w = cycle_for_width(x0, 2.5, 0.1, -1);
        REQUIRE(w.cycle.has_value());
        const Params p = Params::with_sign(w.a_hat, 2.5, -1, 0.1);
        const LogValue m = multiplier(*w.cycle, p);
        const auto fd = fd_multiplier(*w.cycle, p);
        REQUIRE(fd.has_value());
        CAPTURE(x0);
        CHECK(std::log(std::fabs(*fd)) == doctest::Approx(m.log_abs).epsilon(1e-3));
    }
}

TEST_CASE("transitory windows") {
    const Params p = Params::with_sign(0.23, 2.5, -1, 0.1);
    const Landmarks lm = landmarks(p);
    CHECK(in_transitory_window(0.5 * (lm.x_s - p.sqrt_eps()), p));
    CHECK(in_transitory_window(0.5 * (lm.x_u - 1.0), p));
    CHECK_FALSE(in_transitory_window(-0.6, p));
}
