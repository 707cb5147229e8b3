#include "hp_shoot.hpp"

#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <limits>

#include "pwcanard/errors.hpp"

namespace pwc::detail {

namespace {

using T = boost::multiprecision::float128;

struct HpParams {
    T a, k, m, eps, se;
};

HpParams widen(const Params& p) {
    HpParams q;
    q.a = p.a;
    q.k = p.k;
    q.m = p.m;
    q.eps = p.eps;
    q.se = sqrt(q.eps);
    return q;
}

// Zone index 0..3 = LL, L, C, R.
T piece(int z, const T& x, const HpParams& p) {
    switch (z) {
    case 0: return x + 1 - p.k * (p.se - 1) - p.m * (p.se + p.a);
    case 1: return -p.k * (x + p.se) - p.m * (p.se + p.a);
    case 2: return p.m * (x - p.a);
    default: return x - p.se + p.m * (p.se - p.a);
    }
}

T slope(int z, const HpParams& p) {
    switch (z) {
    case 0: return T(1);
    case 1: return -p.k;
    case 2: return p.m;
    default: return T(1);
    }
}

T lo_of(int z, const HpParams& p) {
    switch (z) {
    case 0: return -std::numeric_limits<T>::infinity();
    case 1: return T(-1);
    case 2: return -p.se;
    default: return p.se;
    }
}

T hi_of(int z, const HpParams& p) {
    switch (z) {
    case 0: return T(-1);
    case 1: return -p.se;
    case 2: return p.se;
    default: return std::numeric_limits<T>::infinity();
    }
}

int zone_at(const T& x, const HpParams& p) {
    if (x < -1) return 0;
    if (x < -p.se) return 1;
    if (x < p.se) return 2;
    return 3;
}

T nullcline(const T& x, const HpParams& p) { return piece(zone_at(x, p), x, p); }

// Affine flow of one zone in the e^{sigma t}(C I + S (A - sigma I)) form.
struct Segment {
    int zone;
    T ex, ey, trace, sigma, kappa, root;
    T dx, dy, ax, ay;  // q - e and (A - sigma I)(q - e)

    Segment(int z, const T& x, const T& y, const HpParams& p) : zone(z) {
        trace = -slope(z, p);
        ex = p.a;
        ey = piece(z, p.a, p);
        sigma = trace / 2;
        kappa = sigma * sigma - p.eps;
        root = sqrt(abs(kappa));
        dx = x - ex;
        dy = y - ey;
        ax = (trace - sigma) * dx + dy;
        ay = -p.eps * dx - sigma * dy;
    }

    void at(const T& t, T& x, T& y) const {
        T c, s;
        if (kappa > 0) {
            c = cosh(root * t);
            s = sinh(root * t) / root;
        } else if (kappa < 0) {
            c = cos(root * t);
            s = sin(root * t) / root;
        } else {
            c = 1;
            s = t;
        }
        const T g = exp(sigma * t);
        x = ex + g * (c * dx + s * ax);
        y = ey + g * (c * dy + s * ay);
    }

    T x_at(const T& t) const {
        T x, y;
        at(t, x, y);
        return x;
    }
};

// Root of x(dir*s) - c on [s0, s1] by bisection to quad resolution.
T locate(const Segment& seg, int dir, const T& c, T s0, T s1) {
    T g0 = seg.x_at(dir * s0) - c;
    for (int it = 0; it < 130; ++it) {
        const T mid = (s0 + s1) / 2;
        if (mid == s0 || mid == s1) break;
        const T gm = seg.x_at(dir * mid) - c;
        if ((gm > 0) == (g0 > 0)) {
            s0 = mid;
            g0 = gm;
        } else {
            s1 = mid;
        }
    }
    return (s0 + s1) / 2;
}

struct HitWalker {
    const HpParams& p;
    int dir;
    T c;
    int want_dir;

    // Calls visit(y) for every crossing; visit returns false to stop.
    template <class Visit>
    void run(const T& x0, const T& t_max, Visit&& visit) const {
        T x = x0;
        T y = nullcline(x0, p);
        int zone = zone_at(x, p);
        T elapsed = 0;
        while (elapsed < t_max) {
            const Segment seg(zone, x, y, p);
            const T lo = lo_of(zone, p), hi = hi_of(zone, p);
            const T rate = abs(seg.sigma) + seg.root;
            const T dt = T(0.05) / (rate > 1 ? rate : T(1));
            T s = 0;
            T xa = x;
            bool left_zone = false;
            while (elapsed + s < t_max) {
                const T s1 = s + dt;
                T xb, yb;
                seg.at(dir * s1, xb, yb);
                const bool out_hi = xb >= hi, out_lo = xb <= lo;
                const bool hit_c = c > lo && c < hi && ((xa - c) > 0) != ((xb - c) > 0) &&
                                   ((xb > xa) ? 1 : -1) == want_dir;
                T s_exit = s1, s_hit = s1;
                if (out_hi || out_lo) s_exit = locate(seg, dir, out_hi ? hi : lo, s, s1);
                if (hit_c) s_hit = locate(seg, dir, c, s, s1);
                if (hit_c && (!(out_hi || out_lo) || s_hit < s_exit)) {
                    T xh, yh;
                    seg.at(dir * s_hit, xh, yh);
                    if (!visit(yh)) return;
                }
                if (out_hi || out_lo) {
                    T xe, ye;
                    seg.at(dir * s_exit, xe, ye);
                    x = out_hi ? hi : lo;
                    y = ye;
                    elapsed += s_exit;
                    const T v = dir * (y - piece(zone, x, p));
                    zone = v > 0 ? zone + 1 : zone - 1;
                    if (zone < 0 || zone > 3) throw NumericalError("quad integration left the model");
                    left_zone = true;
                    break;
                }
                s = s1;
                xa = xb;
            }
            if (!left_zone) return;
        }
    }
};

T hit_ordinate(const HpParams& p, const T& x0, int dir, const T& c, int want_dir, int index, const T& t_max) {
    int n = 0;
    T out = std::numeric_limits<T>::quiet_NaN();
    HitWalker{p, dir, c, want_dir}.run(x0, t_max, [&](const T& y) {
        if (n++ == index) {
            out = y;
            return false;
        }
        return true;
    });
    if (n <= index) throw NumericalError("quad integration: section hit not reached");
    return out;
}

} // namespace

std::vector<double> hp_line_hits(const Params& p, double x0, int dir, double c, int want_dir, double t_max) {
    const HpParams q = widen(p);
    std::vector<double> out;
    HitWalker{q, dir, T(c), want_dir}.run(T(x0), T(t_max), [&](const T& y) {
        out.push_back(static_cast<double>(y));
        return true;
    });
    return out;
}

std::optional<double> hp_split_multiplier(const Params& p, double x0, double c, int sdir, int index, int total,
                                          double period) {
    const HpParams q = widen(p);
    const T tmax = T(period) * T(1.05);
    const T cc = c;
    auto fwd = [&](const T& x) { return hit_ordinate(q, x, 1, cc, sdir, index, tmax); };
    auto bwd = [&](const T& x) { return hit_ordinate(q, x, -1, cc, -sdir, total - 1 - index, tmax); };
    auto richardson = [&](auto&& f, const T& x, const T& h) {
        const T d1 = (f(x + h) - f(x - h)) / (2 * h);
        const T d2 = (f(x + h / 2) - f(x - h / 2)) / h;
        return (4 * d2 - d1) / 3;
    };
    try {
        const T x = x0;
        const T scale = 1 + abs(x);
        // Step ladder; keep the pair of neighbouring steps that agree best.
        T best = 0, best_err = std::numeric_limits<T>::infinity();
        T prev = std::numeric_limits<T>::quiet_NaN();
        for (int e = 5; e <= 10; ++e) {
            const T h = scale * pow(T(10), -e);
            const T r = richardson(fwd, x, h) / richardson(bwd, x, h);
            if (!isnan(prev)) {
                const T err = abs(r - prev);
                if (err < best_err) {
                    best_err = err;
                    best = r;
                }
            }
            prev = r;
        }
        if (!(best_err < std::numeric_limits<T>::infinity())) return std::nullopt;
        return static_cast<double>(best);
    } catch (const NumericalError&) {
        return std::nullopt;
    }
}

} // namespace pwc::detail
