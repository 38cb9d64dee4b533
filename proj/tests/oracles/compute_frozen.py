"""Independent high-precision reference values for the C++ tests.

Run with `python3 tests/oracles/compute_frozen.py`; the printed numbers are
frozen into the test sources.  Everything here is computed with mpmath at
50 digits and shares no code with the library.
"""

import mpmath as mp

mp.mp.dps = 50


def kaon():
    return dict(dm=mp.mpf("0.5292e10"), gs=1 / mp.mpf("0.8953e-10"), gl=1 / mp.mpf("5.18e-8"),
                d=mp.mpf("3.27e-3"))


def bmeson():
    tau = mp.mpf("1.536e-12")
    return dict(dm=mp.mpf("0.502e12"), gs=1 / tau, gl=1 / tau, d=mp.mpf("1.0e-3"))


def disc(p, t):
    return (1 - mp.exp(-t * p["gs"])) * (1 - mp.exp(-t * p["gl"])) - p["d"] ** 2 * mp.sin(t * p["dm"]) ** 2


def lower_root(p, t):
    return mp.cos(t * p["dm"]) - mp.sqrt(disc(p, t)) / p["d"]


def upper_bound(p, t):
    return -mp.log(lower_root(p, t)) / t - (p["gs"] + p["gl"]) / 2


def t_plus(p):
    # first sign change of lower_root on a fine linear scan, then polish
    step = (mp.pi / 2) / p["dm"] / 4000
    t = step
    while lower_root(p, t) > 0:
        t += step
    return mp.findroot(lambda x: lower_root(p, x), (t - step, t), solver="anderson")


def lambda_max(p, tp):
    # dense scan of the upper bound, including values far below t_plus
    best = None
    for k in range(0, 4001):
        t = tp * mp.mpf(10) ** (-12 + 12 * mp.mpf(k) / 4000)
        if lower_root(p, t) <= 0:
            continue
        v = upper_bound(p, t)
        if best is None or v < best[1]:
            best = (t, v)
    g = (p["gs"] + p["gl"]) / 2
    limit = mp.sqrt(p["gs"] * p["gl"] / p["d"] ** 2 - p["dm"] ** 2) - g
    return min(best[1], limit), best[0], limit


def first_order(p):
    return mp.sqrt(p["gs"] * p["gl"] - p["d"] ** 2 * p["dm"] ** 2) / p["d"] - (p["gs"] + p["gl"]) / 2


def p_k0_weisskopf_wigner(p, eps, t):
    """Pure-state amplitude evolution of |K0> with the phenomenological
    exponential law, no density matrices involved."""
    n = 1 / mp.sqrt(1 + abs(eps) ** 2)
    r = 1 / mp.sqrt(2)
    k1 = mp.matrix([r, r])
    k2 = mp.matrix([r, -r])
    ks = n * (k1 + eps * k2)
    kl = n * (eps * k1 + k2)
    k0 = mp.matrix([1, 0])
    # solve K0 = a KS + b KL
    m = mp.matrix([[ks[0], kl[0]], [ks[1], kl[1]]])
    a, b = mp.lu_solve(m, k0)
    ms, ml = -p["dm"] / 2, p["dm"] / 2
    psi = a * mp.exp(-t * (1j * ms + p["gs"] / 2)) * ks + b * mp.exp(-t * (1j * ml + p["gl"] / 2)) * kl
    return abs(psi[0]) ** 2, abs(psi[1]) ** 2


def main():
    for name, p in (("K0", kaon()), ("B0", bmeson())):
        tp = t_plus(p)
        lm, targ, lim = lambda_max(p, tp)
        print(f"{name}: t_plus = {mp.nstr(tp, 15)}")
        print(f"{name}: lambda_max = {mp.nstr(lm, 15)}  (argmin t = {mp.nstr(targ, 5)}, t->0 limit {mp.nstr(lim, 15)})")
        print(f"{name}: lambda_max_first_order = {mp.nstr(first_order(p), 15)}")
        print(f"{name}: necessary bound = {mp.nstr(mp.sqrt(p['gs'] * p['gl']) / p['dm'], 15)}")
        print(f"{name}: upper bound at t_plus/2 = {mp.nstr(upper_bound(p, tp / 2), 15)}")

    p = kaon()
    modulus = mp.mpf("2.228e-3")
    re = p["d"] * (1 + modulus ** 2) / 2
    eps = mp.mpc(re, mp.sqrt(modulus ** 2 - re ** 2))
    tau_s = 1 / p["gs"]
    pk, pkb = p_k0_weisskopf_wigner(p, eps, tau_s)
    print(f"K0: p_K0(tau_S) = {mp.nstr(pk, 15)}, p_K0bar(tau_S) = {mp.nstr(pkb, 15)}")
    for f in (mp.mpf("0.5"), 3):
        pk, pkb = p_k0_weisskopf_wigner(p, eps, f * tau_s)
        print(f"K0: p_K0({f} tau_S) = {mp.nstr(pk, 15)}, p_K0bar = {mp.nstr(pkb, 15)}")

    # scalar channel: gamma = 1, m = 0.7, lambda = 0.4, z = 0.3 + 0.1i, t = 1.3
    g, m, lam, z, t = mp.mpf(1), mp.mpf("0.7"), mp.mpf("0.4"), mp.mpc("0.3", "0.1"), mp.mpf("1.3")
    a12 = mp.exp(-t * ((g + lam) / 2 + 1j * m))
    a11 = z * (mp.exp(-t * g) - a12)
    print(f"scalar: A12 = {mp.nstr(a12, 17)}")
    print(f"scalar: A11 = {mp.nstr(a11, 17)}")
    alpha = abs(z) ** 2 * ((lam - g) ** 2 / 4 + m ** 2) / (g * lam)
    beta = z * (1j * m + (lam - g) / 2)
    print(f"scalar: alpha = {mp.nstr(alpha, 17)}, beta = {mp.nstr(beta, 17)}")
    # degenerate branch: lambda = gamma = 1, mu = 0, z = 0.2
    print(f"scalar: degenerate A11(t=1.3) = {mp.nstr(mp.mpf('0.2') * t * mp.exp(-t), 17)}")

    print(f"hbar check: 1.84e-12 MeV -> {mp.nstr(mp.mpf('1.84e-12') / mp.mpf('6.58211915e-22'), 15)} 1/s")


if __name__ == "__main__":
    main()
