#include "pwcanard/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "pwcanard/canard.hpp"
#include "pwcanard/continuation.hpp"
#include "pwcanard/errors.hpp"
#include "pwcanard/linflow.hpp"
#include "pwcanard/model.hpp"
#include "pwcanard/poincare.hpp"

namespace pwc::acceptance {

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[fail] " << what << "; ";
        }
    }
};

std::string g(double v, int digits = 6) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

const char* sign_name(int s) { return s < 0 ? "sup" : "sub"; }

// Spread of positive ratios: max / min.
double band(const std::vector<double>& r) {
    const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
    return *hi / *lo;
}

void series_band(Outcome& o, bool tau) {
    const double eps_list[] = {0.04, 0.01, 0.0025};
    for (double k : {0.75, 1.0, 2.5}) {
        for (int s : {-1, 1}) {
            std::vector<double> ratios;
            for (double eps : eps_list) {
                const Connection c = maximal_canard_unchecked(k, eps, s);
                const double res = std::hypot(c.residual.x, c.residual.y);
                o.require(c.converged && res <= 1e-12,
                          "k=" + g(k) + " " + sign_name(s) + " eps=" + g(eps) + " residual " + g(res));
                if (tau) ratios.push_back(std::fabs(c.tau_C - tau_C_series(k, eps, s)) / eps);
                else ratios.push_back(std::fabs(c.a_tilde - a_tilde_series(k, eps, s)) / (eps * eps));
            }
            const double b = band(ratios);
            o.require(b <= 3.0, "k=" + g(k) + " " + sign_name(s) + " band " + g(b));
            o.detail << "k=" << g(k) << ' ' << sign_name(s) << " ratios " << g(ratios[0], 4) << '/'
                     << g(ratios[1], 4) << '/' << g(ratios[2], 4) << "; ";
        }
    }
}

Outcome c1() {
    Outcome o;
    series_band(o, false);
    return o;
}

Outcome c2() {
    Outcome o;
    series_band(o, true);
    return o;
}

Outcome c3() {
    Outcome o;
    const double eps = 0.1;
    const Params p = Params::make(0.2305968812, 2.5, -std::sqrt(eps), eps);
    const auto fps = fixed_points(p, -10.0, 10.0);
    o.require(fps.size() >= 3, "only " + std::to_string(fps.size()) + " fixed points");
    o.detail << fps.size() << " fixed points; ";
    const double seeds[] = {0.595, 0.642, 2.12361};
    const Stability want[] = {Stability::stable, Stability::unstable, Stability::stable};
    for (int i = 0; i < 3; ++i) {
        const CycleRecord* best = nullptr;
        double best_d = INFINITY, best_y = NAN;
        for (const auto& c : fps) {
            const auto y = cycle_crossing(c, 0.0, p);
            if (y && std::fabs(*y - seeds[i]) < best_d) {
                best_d = std::fabs(*y - seeds[i]);
                best_y = *y;
                best = &c;
            }
        }
        o.require(best && best_d <= 5e-3, "seed " + g(seeds[i]) + " nearest crossing " + g(best_y, 8));
        if (!best) continue;
        o.require(best->stability == want[i], "seed " + g(seeds[i]) + " is " + stability_name(best->stability));
        o.detail << "seed " << g(seeds[i]) << " -> " << g(best_y, 7) << ' ' << stability_name(best->stability)
                 << "; ";
    }
    return o;
}

Outcome c4() {
    Outcome o;
    struct Case {
        double k, eps;
        int s;
        int headless, with_head;
    };
    const Case cases[] = {{2.5, 0.1, -1, 1, 1}, {0.8, 0.1, -1, 0, 0}, {0.8, 0.05, -1, 0, 0},
                          {0.75, 0.05, 1, 1, 0}, {2.5, 0.05, 1, 0, 1}};
    for (const Case& c : cases) {
        const Branch b = trace_branch(c.k, c.eps, c.s);
        const auto folds = detect_folds(b);
        int nh = 0, nw = 0;
        for (const Fold& f : folds) (f.side == CycleKind::headless ? nh : nw)++;
        const std::string tag = "k=" + g(c.k) + " eps=" + g(c.eps) + " " + sign_name(c.s);
        o.require(nh == c.headless && nw == c.with_head, tag + " folds headless/with-head " + std::to_string(nh) +
                                                              "/" + std::to_string(nw) + ", expected " +
                                                              std::to_string(c.headless) + "/" +
                                                              std::to_string(c.with_head));
        o.detail << tag << ": " << nh << '/' << nw;
        for (const Fold& f : folds)
            o.detail << " [" << cycle_kind_name(f.side) << " x*=" << g(f.x_star) << " a*=" << g(f.a_star, 14) << ']';
        o.detail << "; ";
        if (c.k == 2.5 && c.s < 0 && folds.size() == 2) {
            const double da = std::fabs(folds[0].a_star - folds[1].a_star);
            o.require(da >= 5e-10 && da <= 1e-8, "|a1-a2| = " + g(da));
            o.detail << "|a1-a2|=" << g(da, 3) << "; ";
        }
    }
    return o;
}

Outcome c5() {
    Outcome o;
    int tested = 0, agree = 0;
    for (double k : {0.8, 2.5}) {
        for (int s : {-1, 1}) {
            const double eps = 0.1;
            const Connection con = maximal_canard(k, eps, s);
            const Landmarks lm = landmarks(canard_params(k, eps, s, con));
            std::vector<double> xs;
            for (int i = 0; i < 20; ++i) {
                xs.push_back(lm.x_r + (lm.x_u - lm.x_r) * (i + 0.5) / 20.0);
                xs.push_back(-1.0 + (lm.x_s + 1.0) * (i + 0.5) / 20.0);
            }
            std::vector<BranchPoint> pts(xs.size());
#pragma omp parallel for schedule(dynamic, 1)
            for (int i = 0; i < static_cast<int>(xs.size()); ++i) pts[i] = branch_point(xs[i], k, eps, s);
            int t = 0, a = 0;
            for (const auto& bp : pts) {
                if (!bp.ok || !bp.r_value || bp.r_value->log_abs <= std::log(0.1)) continue;
                ++t;
                if ((bp.r_value->sign > 0) == (bp.log_multiplier > 0.0)) ++a;
            }
            o.detail << "k=" << g(k) << ' ' << sign_name(s) << ' ' << a << '/' << t << "; ";
            tested += t;
            agree += a;
        }
    }
    const double frac = tested ? static_cast<double>(agree) / tested : 0.0;
    o.require(tested > 0 && frac >= 0.95, "agreement " + g(frac, 4));
    o.detail << "total " << agree << '/' << tested;
    return o;
}

Outcome c6() {
    Outcome o;
    {
        const auto r = hstar_root(RFamily::four_zone, 1.0, 0.005, 1);
        const double anchor = 2.0 / (1.0 + std::exp(std::numbers::pi / std::sqrt(3.0)));
        const double rel = r.h ? std::fabs(*r.h - anchor) / anchor : INFINITY;
        o.require(rel <= 0.15, "4z sub k=1 anchor gap " + g(rel));
        o.detail << "4z sub k=1 h*=" << (r.h ? g(*r.h) : "none") << " vs " << g(anchor) << "; ";
    }
    struct Case {
        RFamily f;
        double k;
        int s;
    };
    const Case cases[] = {{RFamily::three_zone, 2.5, -1},
                          {RFamily::three_zone, 0.75, 1},
                          {RFamily::four_zone, 2.5, -1},
                          {RFamily::four_zone, 2.5, 1}};
    for (const Case& c : cases) {
        std::vector<double> gaps;
        std::string tag = std::string(r_family_name(c.f)) + " " + sign_name(c.s) + " k=" + g(c.k);
        o.detail << tag << " gaps";
        for (double eps : {0.05, 0.01, 0.005}) {
            const auto r = hstar_root(c.f, c.k, eps, c.s);
            const auto ser = hstar_series(c.f, c.k, eps, c.s);
            if (!r.h || !ser) {
                o.detail << " none";
                gaps.push_back(INFINITY);
                continue;
            }
            gaps.push_back(std::fabs(*r.h - *ser) / std::fabs(*ser));
            o.detail << ' ' << g(gaps.back(), 3);
        }
        o.detail << "; ";
        const bool mono = std::isfinite(gaps[0]) && gaps[1] < gaps[0] && gaps[2] < gaps[1];
        o.require(mono, tag + " not monotonically approaching its series");
    }
    return o;
}

Outcome c7() {
    Outcome o;
    struct Item {
        CycleRecord c;
        Params p;
    };
    std::vector<Item> items;
    const double eps = 0.1;
    for (double a : {0.2305968812, 0.23059688315966}) {
        const Params p = Params::make(a, 2.5, -std::sqrt(eps), eps);
        for (auto& c : fixed_points(p, -10.0, 10.0)) items.push_back({c, p});
    }
    struct W {
        double x0, k, eps;
        int s;
    };
    const W widths[] = {{-0.4, 2.5, 0.1, -1}, {-0.6, 2.5, 0.1, -1},  {-1.3, 2.5, 0.1, -1},
                        {-2.0, 2.5, 0.1, -1}, {-0.5, 0.8, 0.05, -1}, {-1.2, 1.0, 0.05, 1}};
    for (const W& w : widths) {
        const WidthSolve ws = cycle_for_width(w.x0, w.k, w.eps, w.s);
        if (ws.cycle) items.push_back({*ws.cycle, Params::with_sign(ws.a_hat, w.k, w.s, w.eps)});
    }
    int checked = 0, good = 0, unresolved = 0;
    std::vector<std::optional<double>> fds(items.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < static_cast<int>(items.size()); ++i)
        if (items[i].c.verified) fds[i] = fd_multiplier(items[i].c, items[i].p);
    double worst = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!items[i].c.verified) continue;
        ++checked;
        if (!fds[i]) {
            ++unresolved;
            continue;
        }
        const double mult = std::exp(items[i].c.log_multiplier);
        const double err = std::fabs(mult - *fds[i]);
        const double tol = std::max(1e-3 * mult, 1e-8);
        worst = std::max(worst, err / tol);
        if (err <= tol) ++good;
    }
    o.require(checked > 0 && good == checked, std::to_string(checked - good) + " of " + std::to_string(checked) +
                                                  " cycles outside tolerance (" + std::to_string(unresolved) +
                                                  " unresolved)");
    o.detail << good << '/' << checked << " cycles within tolerance, worst err/tol " << g(worst, 3);
    return o;
}

Outcome c8() {
    Outcome o;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    int n = 0;
    for (double eps : {0.1, 0.01}) {
        const double se = std::sqrt(eps);
        for (Zone z : {Zone::LL, Zone::L, Zone::C, Zone::R}) {
            for (int i = 0; i < 20; ++i) {
                const double k = 0.5 + 2.5 * u01(rng);
                const int s = u01(rng) < 0.5 ? -1 : 1;
                const double a = -0.5 + u01(rng);
                const Params p = Params::with_sign(a, k, s, eps);
                const double lo = z == Zone::LL ? -2.0 : zone_lo(z, p);
                const double hi = z == Zone::R ? 2.0 : zone_hi(z, p);
                const double x = lo + (hi - lo) * u01(rng);
                const Vec2 q{x, nullcline_piece(z, x, p) + (u01(rng) - 0.5) * 2.0 * se};
                const Vec2 e = flow(z, q, 1.0, p);
                const Vec2 r = rk4_oracle(z, q, 1.0, 100000, p);
                worst = std::max(worst, std::max(std::fabs(e.x - r.x), std::fabs(e.y - r.y)));
                ++n;
            }
        }
    }
    o.require(worst <= 1e-8, "max deviation " + g(worst));
    o.detail << n << " segments, max deviation " << g(worst, 3);
    return o;
}

Outcome c9() {
    Outcome o;
    for (double eps : {0.04, 0.01}) {
        for (int s : {-1, 1}) {
            for (double k : {1.0, 2.5}) {
                const HopfCheck h = hopf_check(k, eps, s);
                const std::string tag = "k=" + g(k) + " eps=" + g(eps) + " " + sign_name(s);
                o.require(h.equilibrium_flip, tag + " equilibrium does not flip as stated");
                o.require(h.r2 >= 0.999, tag + " R^2 " + g(h.r2, 8));
                bool side = true;
                for (const auto& smp : h.samples) side = side && ((s < 0) == (smp.log_multiplier < 0.0));
                o.require(side, tag + " small-cycle stability");
                o.detail << tag << " slope " << g(h.slope, 4) << " R2 " << g(h.r2, 10) << "; ";
            }
        }
    }
    return o;
}

Outcome c10() {
    Outcome o;
    double worst = INFINITY;
    int n = 0;
    struct Case {
        double k, eps;
        int s;
        double a;
    };
    const Case cases[] = {{0.75, 0.1, -1, 0.0}, {2.5, 0.1, -1, 0.2}, {1.0, 0.01, 1, -0.05}, {2.5, 0.05, 1, -0.3}};
    for (const Case& c : cases) {
        const Params p = Params::with_sign(c.a, c.k, c.s, c.eps);
        const auto v = landmarks(p).rhomboid;
        double area = 0.0;
        for (int i = 0; i < 4; ++i) area += v[i].x * v[(i + 1) % 4].y - v[(i + 1) % 4].x * v[i].y;
        const double orient = area > 0 ? 1.0 : -1.0;
        double perim = 0.0;
        for (int i = 0; i < 4; ++i) perim += std::hypot(v[(i + 1) % 4].x - v[i].x, v[(i + 1) % 4].y - v[i].y);
        const int total = 400;
        for (int j = 0; j < total; ++j) {
            double sdist = perim * j / total;
            int e = 0;
            double len = 0.0;
            for (;; ++e) {
                len = std::hypot(v[(e + 1) % 4].x - v[e].x, v[(e + 1) % 4].y - v[e].y);
                if (sdist <= len || e == 3) break;
                sdist -= len;
            }
            const Vec2 d{(v[(e + 1) % 4].x - v[e].x) / len, (v[(e + 1) % 4].y - v[e].y) / len};
            const Vec2 q{v[e].x + sdist * d.x, v[e].y + sdist * d.y};
            const Vec2 inward{-orient * d.y, orient * d.x};
            const Vec2 f = vector_field(q, p);
            worst = std::min(worst, f.x * inward.x + f.y * inward.y);
            ++n;
        }
    }
    o.require(worst >= -1e-12, "min inward component " + g(worst));
    o.detail << n << " boundary points, min inward component " << g(worst, 3);
    return o;
}

struct CriterionDef {
    const char* name;
    double limit;
    std::function<Outcome()> run;
};

const CriterionDef& criterion_def(int id) {
    static const CriterionDef defs[kCriteria] = {
        {"maximal-canard asymptotics (a_tilde)", 5.0, c1},
        {"tau_C asymptotics", 5.0, c2},
        {"Figure 6(a) reproduction", 10.0, c3},
        {"fold structure", 300.0, c4},
        {"R-function / multiplier sign agreement", 120.0, c5},
        {"h* anchors and series approach", 60.0, c6},
        {"multiplier identity", 60.0, c7},
        {"exact-flow oracle", 30.0, c8},
        {"Hopf-like bifurcation", 60.0, c9},
        {"invariant rhomboid", 5.0, c10},
    };
    if (id < 1 || id > kCriteria) throw ValidationError("no acceptance criterion " + std::to_string(id));
    return defs[id - 1];
}

} // namespace

CriterionResult run_criterion(int id) {
    const CriterionDef& s = criterion_def(id);
    CriterionResult r;
    r.id = id;
    r.name = s.name;
    r.limit_seconds = s.limit;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        Outcome o = s.run();
        r.pass = o.pass;
        r.detail = o.detail.str();
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > r.limit_seconds) {
        r.pass = false;
        r.detail += " [fail] runtime over limit";
    }
    return r;
}

std::vector<CriterionResult> run_all(const std::vector<int>& ids) {
    std::vector<CriterionResult> out;
    if (ids.empty())
        for (int i = 1; i <= kCriteria; ++i) out.push_back(run_criterion(i));
    else
        for (int i : ids) out.push_back(run_criterion(i));
    return out;
}

std::string format_line(const CriterionResult& r) {
    char head[160];
    std::snprintf(head, sizeof head, "%s %2d  %s  (%.2f s / %.0f s)  ", r.pass ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.seconds, r.limit_seconds);
    return head + r.detail;
}

} // namespace pwc::acceptance
