#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <string>

#include "pwcanard/errors.hpp"
#include "pwcanard/linflow.hpp"

using namespace pwc;

namespace {

void check_close(Vec2 got, double x, double y, double rel = 1e-12) {
    const double sx = std::max(1.0, std::fabs(x)), sy = std::max(1.0, std::fabs(y));
    CHECK(std::fabs(got.x - x) <= rel * sx);
    CHECK(std::fabs(got.y - y) <= rel * sy);
}

struct Ref {
    double t, x, y;
};

} // namespace

TEST_CASE("closed-form zone flow matches a matrix-exponential oracle") {
    const Params p = Params::make(0.05, 2.0, -0.2, 0.04);
    const Vec2 q{0.3, -0.2};
    // 40-digit expm(tA) evaluations
    const std::map<Zone, std::vector<Ref>> ref = {
        {Zone::LL, {{1.7, -2.236199966714704, -0.10649406218268821},
                    {-0.9, 4.8677101065343667, -0.12075228084723724},
                    {12, -1.8742807110589526, 0.85601160978392098}}},
        {Zone::L, {{1.7, 10.921700752174219, -0.4056895226069879},
                   {-0.9, -0.013817537456754496, -0.19825545616666339},
                   {12, 7901947050.9251054, -159651751.34633504}}},
        {Zone::C, {{1.7, -0.013981745049096995, -0.20699813938624206},
                   {-0.9, 0.41907424305365434, -0.18876198618711301},
                   {12, -3.2849666364505962, 0.49031872326580928}}},
        {Zone::R, {{1.7, 0.0746090999635716, -0.2073234385898057},
                   {-0.9, 0.68641618942738778, -0.18503520911926723},
                   {12, 0.029879523110125266, -0.19928323108483185}}},
    };
    for (const auto& [z, rows] : ref)
        for (const Ref& r : rows) {
            CAPTURE(zone_name(z));
            CAPTURE(r.t);
            check_close(flow(z, q, r.t, p), r.x, r.y);
        }
}

TEST_CASE("focus zones match the oracle") {
    const Params p = Params::make(-0.1, 0.3, 0.1, 0.04);
    const Vec2 q{-0.5, 0.4};
    CHECK_FALSE(zone_data(Zone::L, p).is_real);
    CHECK_FALSE(zone_data(Zone::C, p).is_real);
    check_close(flow(Zone::L, q, 7.5, p), 6.6338136481147699, -0.27349596866464898);
    check_close(flow(Zone::C, q, 7.5, p), 1.3477190322115392, 0.15935588527405199);
}

TEST_CASE("flow agrees with fixed-step RK4") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double eps = 0.01 + 0.2 * std::fabs(u(rng));
        const Params p = Params::make(0.1 * u(rng), 0.5 + 2.0 * std::fabs(u(rng)), 1.5 * std::sqrt(eps) * u(rng), eps);
        const Zone z = static_cast<Zone>(i % 4);
        const Vec2 q{u(rng), u(rng)};
        const double t = 3.0 * u(rng);
        const Vec2 a = flow(z, q, t, p);
        const Vec2 b = rk4_oracle(z, q, t, 4000, p);
        CHECK(norm(a - b) <= 1e-10 * std::max(1.0, norm(b)));
    }
}

TEST_CASE("propagator is a group and has determinant exp(t trace)") {
    const Params p = Params::make(0.05, 2.0, -0.2, 0.04);
    for (Zone z : {Zone::LL, Zone::L, Zone::C, Zone::R}) {
        const ZoneData d = zone_data(z, p);
        const Mat2 a = propagator(d, 0.7), b = propagator(d, 1.3), c = propagator(d, 2.0);
        const Mat2 ab = a * b;
        CHECK(ab.a11 == doctest::Approx(c.a11).epsilon(1e-12));
        CHECK(ab.a12 == doctest::Approx(c.a12).epsilon(1e-12));
        CHECK(ab.a21 == doctest::Approx(c.a21).epsilon(1e-12));
        CHECK(ab.a22 == doctest::Approx(c.a22).epsilon(1e-12));
        CHECK(c.det() == doctest::Approx(std::exp(2.0 * d.trace)).epsilon(1e-12));
    }
}

TEST_CASE("first exit lands on a zone boundary with consistent time") {
    const Params p = Params::make(0.05, 2.0, -0.2, 0.04);
    const Vec2 q{-0.5, 0.9};
    const CrossingResult r = first_exit(Zone::L, q, p, 1);
    REQUIRE(r.kind == CrossingKind::transversal);
    CHECK((r.boundary == doctest::Approx(-1.0) || r.boundary == doctest::Approx(-0.2)));
    CHECK(r.point.x == doctest::Approx(r.boundary).epsilon(1e-14));
    check_close(flow(Zone::L, q, r.time, p), r.point.x, r.point.y, 1e-11);
    CHECK(r.time > 0.0);
    const CrossingResult back = first_exit(Zone::L, q, p, -1);
    // times are elapsed along the integration direction
    CHECK(back.time > 0.0);
    check_close(flow(Zone::L, q, -back.time, p), back.point.x, back.point.y, 1e-11);
}

TEST_CASE("capture by a real in-zone equilibrium reports no exit") {
    // a in zone C with trace < 0: a stable focus, orbits near it never leave
    const Params p = Params::make(0.0, 2.0, 0.1, 0.04);
    const CrossingResult r = first_exit(Zone::C, {0.01, 0.0}, p, 1);
    CHECK(r.kind == CrossingKind::none);
    CHECK_THROWS_AS(advance({0.01, 0.0}, p, 1), CaptureError);
}

TEST_CASE("orbit events chain continuously") {
    const Params p = Params::with_sign(0.23, 2.5, -1, 0.1);
    const Orbit o = integrate_orbit({-0.5, 0.6}, p, StopRule::events(30));
    REQUIRE(o.events.size() >= 10);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < o.events.size(); ++i) {
        CHECK(o.events[i].exit.x == o.events[i + 1].entry.x);
        CHECK(o.events[i].exit.y == o.events[i + 1].entry.y);
        CHECK(o.events[i].zone != o.events[i + 1].zone);
    }
    for (const auto& e : o.events) {
        CHECK(e.flight_time > 0.0);
        total += e.flight_time;
    }
    CHECK(o.total_time == doctest::Approx(total));
    const auto samples = sample_orbit(o, p, 0.5);
    REQUIRE(samples.size() > 2);
    for (std::size_t i = 1; i < samples.size(); ++i) CHECK(samples[i].t > samples[i - 1].t);
    CHECK(samples.back().t == doctest::Approx(o.total_time));
}

TEST_CASE("section stop rule ends on the requested line") {
    const Params p = Params::with_sign(0.23, 2.5, -1, 0.1);
    const double se = std::sqrt(0.1);
    const Orbit o = integrate_orbit({-0.5, 0.6}, p, StopRule::section(-se, -1));
    REQUIRE_FALSE(o.events.empty());
    CHECK(o.events.back().exit.x == doctest::Approx(-se).epsilon(1e-14));
    CHECK(o.events.back().zone == Zone::C);
}
