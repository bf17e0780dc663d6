"""Independent reference evaluations.

Everything here is computed with mpmath's own q-functions or with naive
term-by-term formulas at elevated precision, never through :mod:`qmh`.
"""

import mpmath

ORACLE_DPS = 120


def _mp():
    mp = mpmath.MPContext()
    mp.dps = ORACLE_DPS
    return mp


MP = _mp()


def num(x):
    """Oracle-precision number from int, float, Fraction, complex or ``(re, im)``."""
    if isinstance(x, tuple):
        return MP.mpc(num(x[0]), num(x[1]))
    if hasattr(x, "numerator") and not isinstance(x, int):
        return MP.mpf(x.numerator) / x.denominator
    return MP.mpmathify(x)


def qpow(q, z):
    return MP.exp(MP.mpc(z) * MP.log(MP.mpf(q)))


def qpochhammer(a, q, k):
    return MP.qp(MP.mpc(a), MP.mpf(q), k)


def qpochhammer_direct(a, q, k):
    p = MP.mpc(1)
    for j in range(k):
        p *= 1 - MP.mpc(a) * MP.mpf(q) ** j
    return p


def qgamma(z, q):
    return MP.qgamma(MP.mpc(z), MP.mpf(q))


def phi_direct(num, den, q, z, terms):
    """Term-by-term ``_r phi_s`` with parameters given as values (not exponents)."""
    q = MP.mpf(q)
    r, s = len(num), len(den)
    total = MP.mpc(0)
    for k in range(terms):
        t = MP.mpc(1)
        for a in num:
            t *= qpochhammer_direct(a, q, k)
        for b in den:
            t /= qpochhammer_direct(b, q, k)
        t /= qpochhammer_direct(q, q, k)
        t *= ((-1) ** k * q ** (k * (k - 1) // 2)) ** (1 + s - r)
        total += t * MP.mpc(z) ** k
    return total


def qhyper(num, den, q, z):
    """mpmath's basic hypergeometric series (parameters as values)."""
    return MP.qhyper([MP.mpc(a) for a in num], [MP.mpc(b) for b in den], MP.mpf(q), MP.mpc(z))


def besselj(alpha, x):
    return MP.besselj(alpha, x)


def jackson_j2(alpha, z, q):
    """``(q^(alpha+1);q)_inf/(q;q)_inf (z/2)^alpha _0phi_1(-;q^(alpha+1);q,-q^(alpha+1) z^2/4)`` via mpmath."""
    q = MP.mpf(q)
    qa1 = qpow(q, MP.mpf(alpha) + 1)
    pref = MP.qp(qa1, q) / MP.qp(q, q)
    return pref * MP.power(MP.mpc(z) / 2, alpha) * MP.qhyper([], [qa1], q, -qa1 * MP.mpc(z) ** 2 / 4)


def poly_from_roots(roots):
    """Ascending coefficients of ``prod (z - r)``."""
    c = [MP.mpc(1)]
    for r in roots:
        c = [MP.mpc(0)] + c
        for i in range(len(c) - 1):
            c[i] -= MP.mpc(r) * c[i + 1]
    return c


def close(a, b, tol):
    return abs(MP.mpc(a) - MP.mpc(b)) <= tol
