#include <doctest.h>

#include <cmath>

#include "pwcanard/canard.hpp"
#include "pwcanard/continuation.hpp"

using namespace pwc;

TEST_CASE("branch widths avoid the edges and decrease") {
    const Branch ref = trace_branch_serial(2.5, 0.1, -1, {.points = 24});
    const auto w = branch_widths(2.5, 0.1, -1, 60, 0.01);
    REQUIRE(w.size() >= 50);
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] < w[i - 1]);
    CHECK(w.front() < -std::sqrt(0.1));
    CHECK(w.back() > ref.x_r);
}

TEST_CASE("serial and parallel branches are identical") {
    const BranchOptions opt{.points = 40};
    const Branch a = trace_branch_serial(2.5, 0.1, -1, opt);
    const Branch b = trace_branch(2.5, 0.1, -1, opt);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        const BranchPoint &p = a.points[i], &q = b.points[i];
        CHECK(p.x0 == q.x0);
        CHECK(p.ok == q.ok);
        if (!p.ok) continue;
        CHECK(p.a == q.a);
        CHECK(p.log_multiplier == q.log_multiplier);
        CHECK(p.stability == q.stability);
    }
}

TEST_CASE("every resolved branch point is a verified cycle of the right kind") {
    const Branch b = trace_branch(2.5, 0.05, -1, {.points = 60});
    int ok = 0;
    for (const BranchPoint& p : b.points) {
        if (!p.ok) continue;
        ++ok;
        CHECK(p.verified);
        CHECK(p.kind == (p.x0 < -1.0 ? CycleKind::with_head : CycleKind::headless));
        // close to x_r the branch turns into relaxation cycles away from a_tilde
        if (p.x0 > b.x_r + 0.5) CHECK(std::fabs(p.a - b.a_tilde) < 1e-4);
        CHECK(in_validity_window(p.x0, b) == !p.window);
    }
    CHECK(ok >= 50);
}

TEST_CASE("R function sign agrees with the multiplier") {
    const Branch b = trace_branch(2.5, 0.05, -1, {.points = 60});
    int n = 0;
    for (const BranchPoint& p : b.points) {
        if (!p.ok || !p.r_value || p.window) continue;
        if (std::fabs(p.log_multiplier) < 0.5) continue;
        ++n;
        CHECK(p.r_value->sign == (p.log_multiplier > 0 ? 1 : -1));
    }
    CHECK(n > 10);
}

TEST_CASE("supercritical k = 2.5 has one fold on each side") {
    const Branch b = trace_branch(2.5, 0.1, -1);
    const auto folds = detect_folds(b);
    int head = 0, headless = 0;
    for (const Fold& f : folds) {
        (f.side == CycleKind::with_head ? head : headless)++;
        CHECK(f.multiplier_residual < 1e-6);
        CHECK(std::fabs(f.a_star - b.a_tilde) < 1e-7);
    }
    CHECK(head == 1);
    CHECK(headless == 1);
    for (std::size_t i = 1; i < folds.size(); ++i) CHECK(folds[i].x_star < folds[i - 1].x_star);
}

TEST_CASE("small cycles near the Hopf-like point are homothetic") {
    for (int s : {-1, 1}) {
        const HopfCheck h = hopf_check(2.5, 0.01, s);
        CAPTURE(s);
        CHECK(h.equilibrium_flip);
        CHECK(h.r2 >= 0.999);
        REQUIRE(h.samples.size() >= 5);
        // supercritical small cycles are stable, subcritical unstable
        for (const HopfSample& q : h.samples) CHECK((s < 0 ? q.log_multiplier < 0 : q.log_multiplier > 0));
    }
}
