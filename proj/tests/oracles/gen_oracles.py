# Independent high-precision values frozen into the unit tests.
# Run: python3 tests/oracles/gen_oracles.py
from mpmath import mp, mpf, sqrt, exp, log, pi, matrix, expm, findroot

mp.dps = 40


def pieces(a, k, m, eps):
    se = sqrt(eps)
    return {
        "LL": (mpf(1), 1 - k * (se - 1) - m * (se + a)),
        "L": (-k, -k * se - m * (se + a)),
        "C": (m, -m * a),
        "R": (mpf(1), -se + m * (se - a)),
    }


def zone_flow(zone, q, t, a, k, m, eps):
    s, c = pieces(a, k, m, eps)[zone]
    A = matrix([[-s, 1], [-eps, 0]])
    e = matrix([a, s * a + c])
    d = matrix([q[0], q[1]]) - e
    r = e + expm(A * t) * d
    return r[0], r[1]


def slow_eig(tr, eps):
    # larger-magnitude root first, slow root from the product
    lq = (tr + (1 if tr > 0 else -1) * sqrt(tr * tr - 4 * eps)) / 2
    return eps / lq, lq


def connection(k, eps, sign):
    k, eps = mpf(k), mpf(eps)
    se = sqrt(eps)
    m = sign * se
    ls, _ = slow_eig(k, eps)
    rs, _ = slow_eig(mpf(-1), eps)
    E = exp(pi / sqrt(3))

    def F(tau, a):
        q = (se, (m + rs) * (se - a))
        x, y = zone_flow("C", q, tau, a, k, m, eps)
        return [x + se, y + (m + ls) * (se + a)]

    t0 = 2 * pi / sqrt(3) / se - (1 + k) / k
    a0 = -sign * (E - 1) / (E + 1) * se
    tau, a = findroot(F, (t0, a0))
    return a, tau


def phi(x0, a, k, m, eps):
    se = sqrt(eps)
    if x0 >= -1:
        zone, target, tdir = "L", -se, 1
    else:
        zone, target, tdir = "LL", mpf(-1), -1
    s, c = pieces(a, k, m, eps)[zone]
    q = (x0, s * x0 + c)
    # first time with x = target; bracket by stepping
    dt = mpf("0.01") * tdir
    t = mpf(0)
    prev = x0 - target
    while True:
        t += dt
        x, _ = zone_flow(zone, q, t, a, k, m, eps)
        if (x - target) * prev < 0:
            break
        prev = x - target
    tr = findroot(lambda s_: zone_flow(zone, q, s_, a, k, m, eps)[0] - target, (t - dt, t), solver="anderson")
    return zone_flow(zone, q, tr, a, k, m, eps)[1]


def show(name, v):
    print(f"{name} = {mp.nstr(v, 17)}")


E = exp(pi / sqrt(3))
show("singular a_bar", (E - 1) / (E + 1))
show("singular tau_bar", 2 * pi / sqrt(3))
show("singular det", -2 * E)

for k, eps, sg in [("2.5", "0.1", -1), ("0.8", "0.05", -1), ("1", "0.01", 1), ("0.75", "0.05", 1), ("1.3", "0.0001", -1)]:
    a, tau = connection(k, eps, sg)
    show(f"connection k={k} eps={eps} sign={sg} a", a)
    show(f"connection k={k} eps={eps} sign={sg} tau", tau)

# flight time in zone L for the worked example eps=0.04, k=2, m=-0.2, a=0, h=0.5
eps, k, m, a, h = mpf("0.04"), mpf(2), mpf("-0.2"), mpf(0), mpf("0.5")
se = sqrt(eps)
ls, lq = slow_eig(k, eps)
show("tau_L example", log(1 + (h + (m + ls) * (se + a)) / ((lq - ls) * (se + a))) / ls)

a, k, m, eps = mpf("0.05"), mpf(2), mpf("-0.2"), mpf("0.04")
for zone in ["LL", "L", "C", "R"]:
    for t in ["1.7", "-0.9", "12"]:
        x, y = zone_flow(zone, (mpf("0.3"), mpf("-0.2")), mpf(t), a, k, m, eps)
        show(f"flow {zone} t={t} x", x)
        show(f"flow {zone} t={t} y", y)

# focus zones: k=0.3 makes L a focus, m=0.1 makes C a focus
a, k, m, eps = mpf("-0.1"), mpf("0.3"), mpf("0.1"), mpf("0.04")
for zone in ["L", "C"]:
    x, y = zone_flow(zone, (mpf("-0.5"), mpf("0.4")), mpf("7.5"), a, k, m, eps)
    show(f"focus flow {zone} x", x)
    show(f"focus flow {zone} y", y)

# Phi at a = 0.1, k = 2, m = -0.2, eps = 0.04
a, k, m, eps = mpf("0.1"), mpf(2), mpf("-0.2"), mpf("0.04")
for x0 in ["-0.5", "-0.9", "-1.2", "-1.6"]:
    show(f"phi x0={x0}", phi(mpf(x0), a, k, m, eps))

# slow-manifold anchors at the same parameters
se = sqrt(eps)
ls, lq = slow_eig(k, eps)
rs, rq = slow_eig(mpf(-1), eps)
eL = (a, -k * (a + se) - m * (se + a))
eR = (a, a - se + m * (se - a))
show("q0_L y", eL[1] + (-eps / ls) * (-se - a))
show("q1_R y", eR[1] + (-eps / rs) * (se - a))
