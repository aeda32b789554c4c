"""Independent high-precision oracles for pinning expected values.

Everything here is summed from defining power series with mpmath
multiprecision arithmetic; the production code paths (compensated doubles,
asymptotic expansions, recurrences) share nothing with these routines.
"""

import mpmath as mp


def airy_series(x, dps=60):
    """(Ai, Ai', Bi, Bi') at x from the Maclaurin series of w'' = x w.

    Initial constants from Gamma values; valid wherever enough precision is
    supplied (cancellation costs ~0.87*|x|^1.5 digits on the positive axis).
    """
    with mp.workdps(dps):
        x = mp.mpf(x)
        ai0 = mp.mpf(3) ** (mp.mpf(-2) / 3) / mp.gamma(mp.mpf(2) / 3)
        aip0 = -(mp.mpf(3) ** (mp.mpf(-1) / 3) / mp.gamma(mp.mpf(1) / 3))
        x3 = x ** 3
        f, g = mp.mpf(1), x
        fp, gp = mp.mpf(0), mp.mpf(1)
        t, u, v = mp.mpf(1), x, mp.mpf(1)
        s = x * x / 2
        for k in range(1, 2000):
            t = t * x3 / ((3 * k) * (3 * k - 1))
            u = u * x3 / ((3 * k + 1) * (3 * k))
            if k >= 2:
                s = s * x3 / ((3 * k - 1) * (3 * k - 3))
            v = v * x3 / ((3 * k) * (3 * k - 2))
            f += t
            g += u
            fp += s
            gp += v
            if max(abs(t), abs(u), abs(v)) < mp.mpf(10) ** (-dps - 10) * (abs(f) + abs(g) + 1):
                break
        sqrt3 = mp.sqrt(3)
        ai = ai0 * f + aip0 * g
        aip = ai0 * fp + aip0 * gp
        bi = sqrt3 * (ai0 * f - aip0 * g)
        bip = sqrt3 * (ai0 * fp - aip0 * gp)
        return ai, aip, bi, bip


def bessel_series(m, x, dps=50):
    """J_m(x) from the ascending series in mpmath precision."""
    with mp.workdps(dps):
        x = mp.mpf(x)
        half = x / 2
        t = half ** m / mp.factorial(m)
        total = t
        q = -half * half
        for k in range(1, 5000):
            t = t * q / (k * (k + m))
            total += t
            if abs(t) < mp.mpf(10) ** (-dps - 10) * (abs(total) + 1):
                break
        return total


def bisect(f, lo, hi, dps=50, steps=300):
    """Plain bisection to ~10^-(dps-5); f must change sign on [lo, hi]."""
    with mp.workdps(dps):
        lo = mp.mpf(lo)
        hi = mp.mpf(hi)
        flo = f(lo)
        assert flo * f(hi) < 0, "oracle bisection needs a sign change"
        for _ in range(steps):
            mid = (lo + hi) / 2
            fm = f(mid)
            if fm == 0:
                return mid
            if flo * fm < 0:
                hi = mid
            else:
                lo, flo = mid, fm
            if hi - lo < mp.mpf(10) ** (-(dps - 5)):
                break
        return (lo + hi) / 2


def first_airy_zero(dps=50):
    """First zero magnitude of Ai via bisection on the series oracle."""
    return bisect(lambda t: airy_series(-t, dps=dps)[0], 2.0, 2.5, dps=dps)


def bessel_zero_oracle(m, k_bracket, dps=50):
    """A Bessel zero via bisection on the series oracle within a given bracket."""
    lo, hi = k_bracket
    return bisect(lambda x: bessel_series(m, x, dps=dps), lo, hi, dps=dps)
