#include <doctest.h>

#include <cmath>

#include "pwcanard/canard.hpp"
#include "pwcanard/errors.hpp"

using namespace pwc;

namespace {

struct ConnRef {
    double k, eps;
    int sign;
    double a, tau;
};

// Newton on the 40-digit matrix-exponential flow through zone C
const ConnRef kConn[] = {
    {2.5, 0.1, -1, 0.23059688316110239, 10.103419411359752},
    {0.8, 0.05, -1, 0.1591739665500288, 13.725501395288249},
    {1.0, 0.01, 1, -0.071947616808140755, 34.255618772385609},
    {0.75, 0.05, 1, -0.16151521324570802, 13.802256879509382},
    {1.3, 0.0001, -1, 0.0071964567589078087, 360.99253844578796},
};

} // namespace

TEST_CASE("singular connection closed form") {
    const SingularConnection s = singular_connection();
    CHECK(s.a_bar == doctest::Approx(0.71964087029254709).epsilon(1e-15));
    CHECK(s.tau_bar == doctest::Approx(3.6275987284684357).epsilon(1e-15));
    CHECK(s.det_J == doctest::Approx(-12.267414812472455).epsilon(1e-15));
}

TEST_CASE("maximal canard matches the high-precision oracle") {
    for (const ConnRef& r : kConn) {
        CAPTURE(r.k);
        CAPTURE(r.eps);
        const Connection c = maximal_canard(r.k, r.eps, r.sign);
        CHECK(c.converged);
        CHECK(c.valid);
        CHECK(c.a_tilde == doctest::Approx(r.a).epsilon(1e-12));
        CHECK(c.tau_C == doctest::Approx(r.tau).epsilon(1e-12));
        CHECK(connection_in_corridor(c, r.k, r.eps, r.sign));
    }
}

TEST_CASE("connection Jacobian matches finite differences") {
    const double tb = 3.4, ab = -0.7, k = 2.5, eps = 0.05;
    const Mat2 J = connection_jacobian(tb, ab, k, eps, -1);
    const double h = 1e-6;
    const Vec2 dt = (1.0 / (2 * h)) * (connection_residual(tb + h, ab, k, eps, -1) - connection_residual(tb - h, ab, k, eps, -1));
    const Vec2 da = (1.0 / (2 * h)) * (connection_residual(tb, ab + h, k, eps, -1) - connection_residual(tb, ab - h, k, eps, -1));
    CHECK(J.a11 == doctest::Approx(dt.x).epsilon(1e-6));
    CHECK(J.a21 == doctest::Approx(dt.y).epsilon(1e-6));
    CHECK(J.a12 == doctest::Approx(da.x).epsilon(1e-6));
    CHECK(J.a22 == doctest::Approx(da.y).epsilon(1e-6));
}

TEST_CASE("series approach the connection as eps shrinks") {
    for (int sign : {-1, 1}) {
        double prev_a = INFINITY, prev_t = INFINITY;
        for (double eps : {0.04, 0.01, 0.0025}) {
            const Connection c = maximal_canard(2.0, eps, sign);
            const double ea = std::fabs(c.a_tilde - a_tilde_series(2.0, eps, sign));
            const double et = std::fabs(c.tau_C - tau_C_series(2.0, eps, sign));
            CHECK(ea < prev_a);
            CHECK(et < prev_t);
            // next-order terms: eps^2 in a, eps in tau
            CHECK(ea < 5.0 * eps * eps);
            CHECK(et < 5.0 * eps);
            prev_a = ea;
            prev_t = et;
        }
    }
}

TEST_CASE("bad connection inputs") {
    CHECK_THROWS_AS(maximal_canard(-1.0, 0.01, 1), ValidationError);
    CHECK_THROWS_AS(maximal_canard(1.0, 0.5, 1), ValidationError);
    CHECK_THROWS_AS(maximal_canard(1.0, 0.01, 0), ValidationError);
}

TEST_CASE("flight time worked example") {
    const Params p = Params::make(0.0, 2.0, -0.2, 0.04);
    const FlightTimes t = flight_times(0.5, p);
    REQUIRE(t.tau_L.has_value());
    CHECK(*t.tau_L == doctest::Approx(38.663886337638821).epsilon(1e-12));
}

TEST_CASE("R functions are defined only on their intervals") {
    const Connection c = maximal_canard(2.5, 0.05, -1);
    const Params p = canard_params(2.5, 0.05, -1, c);
    const auto [lo3, hi3] = r_domain(RFamily::three_zone, p);
    const auto [lo4, hi4] = r_domain(RFamily::four_zone, p);
    CHECK(lo3 < hi3);
    CHECK(lo4 < hi4);
    CHECK_THROWS_AS(R3z(lo3, p, c.tau_C), DomainError);
    CHECK_NOTHROW(R3z(hi3, p, c.tau_C));
    CHECK_THROWS_AS(R4z(hi4, p, c.tau_C), DomainError);
    const RFunctionValue r = R3z(0.5 * (lo3 + hi3), p, c.tau_C);
    CHECK(r.log_target == doctest::Approx(p.m * c.tau_C));
    const double direct = std::exp(r.log_product) - std::exp(r.log_target);
    CHECK(r.value.value() == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("h* roots: k = 1 four-zone anchor and derivative sign") {
    const HstarResult r = hstar_root(RFamily::four_zone, 1.0, 0.005, 1);
    REQUIRE(r.h.has_value());
    CHECK(r.sign_changes == 1);
    CHECK(*r.h > r.h_lo);
    CHECK(*r.h < r.h_hi);
    const double E = std::exp(M_PI / std::sqrt(3.0));
    CHECK(*r.h == doctest::Approx(2.0 / (1.0 + E)).epsilon(0.02));
    const auto s = hstar_series(RFamily::four_zone, 1.0, 0.005, 1);
    REQUIRE(s.has_value());
    CHECK(*s == doctest::Approx(2.0 / (1.0 + E)));
    CHECK_FALSE(hstar_series(RFamily::three_zone, 1.0, 0.005, 1).has_value());
}

TEST_CASE("4z series worked example") {
    const auto s = hstar_series(RFamily::four_zone, 1.3, 1e-4, -1);
    REQUIRE(s.has_value());
    const double k = 1.3;
    CHECK(*s == doctest::Approx((k + 1) * std::exp((2 - k * k) / 2) * std::pow(0.01, (k * k - 1) / (k * k))));
}

TEST_CASE("width solve returns a verified cycle near a_tilde") {
    const WidthSolve w = cycle_for_width(-0.6, 2.5, 0.1, -1);
    REQUIRE(w.cycle.has_value());
    CHECK(w.cycle->verified);
    CHECK(w.cycle->kind == CycleKind::headless);
    CHECK(std::fabs(w.a_hat - w.a_tilde) < 1e-6);
    const WidthSolve v = cycle_for_width(-1.5, 2.5, 0.1, -1);
    REQUIRE(v.cycle.has_value());
    CHECK(v.cycle->kind == CycleKind::with_head);
}
