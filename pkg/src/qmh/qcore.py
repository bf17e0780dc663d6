"""q-numbers, q-Pochhammer symbols, the q-Gamma function and normalized ratios.

All functions take the base ``q`` as a real number in ``(0, 1)`` and a
:class:`~qmh.numerics.NumericContext`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, PoleError, TruncationError
from .numerics import NumericContext, check_finite, q_to_complex_power, to_hp, to_real

# extra bits for long products
PRODUCT_GUARD_BITS = 16

__all__ = [
    "QGammaValue",
    "as_qbase",
    "q_number",
    "q_pochhammer",
    "q_pochhammer_inf",
    "q_gamma",
    "q_gamma_ratio",
    "normalized_qminus_ratio",
    "normalized_shifted_ratio",
    "normalized_qminus_ratios",
    "normalized_shifted_ratios",
    "shifted_ratio_bounds",
    "in_nonpositive_integers",
]


@dataclass(frozen=True)
class QGammaValue:
    value: object
    pole_flag: bool = False


def as_qbase(q, ctx: NumericContext):
    """Validate and convert the base ``q``."""
    q = to_real(q, ctx)
    if not (0 < q < 1):
        raise DomainError(f"q must satisfy 0 < q < 1, got {q}")
    return q


def in_nonpositive_integers(x, ctx: NumericContext) -> bool:
    """True when real ``x`` lies within ``eps * 2**16`` of ``{0, -1, -2, ...}``."""
    mp = ctx.mp
    x = to_real(x, ctx)
    window = mp.ldexp(ctx.eps, 16) * max(1, abs(x))
    nearest = mp.nint(x)
    return nearest <= 0 and abs(x - nearest) <= window


def q_number(z, q, ctx: NumericContext):
    """``[z]_q = (1 - q**z) / (1 - q)``, via ``expm1`` so small ``z`` keeps full accuracy."""
    mp = ctx.mp
    q = as_qbase(q, ctx)
    return -mp.expm1(to_hp(z, ctx) * mp.log(q)) / (1 - q)


def q_pochhammer(a, q, k: int, ctx: NumericContext):
    """Finite product ``(a; q)_k``; ``k = 0`` gives 1."""
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    q = as_qbase(q, ctx)
    a = to_hp(a, ctx)
    p = ctx.mp.mpc(1)
    t = a
    for _ in range(k):
        p *= 1 - t
        t *= q
    return p


def q_pochhammer_inf(a, q, ctx: NumericContext):
    """Infinite product ``(a; q)_inf`` with a certified truncation.

    Factors are multiplied until ``|a q**k| < eps * 2**-8``; the neglected tail
    then satisfies ``|log prod_{j>=k}(1 - a q**j)| <= 2 |a| q**k / (1 - q)``,
    which must not exceed ``ctx.series_tol``.  The product runs with
    :data:`PRODUCT_GUARD_BITS` extra bits so that rounding over thousands of
    factors stays below ``eps``.
    """
    mp = ctx.mp
    q = as_qbase(q, ctx)
    a = to_hp(a, ctx)
    stop = mp.ldexp(ctx.eps, -8)
    work = ctx.elevated(PRODUCT_GUARD_BITS)
    p = work.mp.mpc(1)
    t = to_hp(a, work)
    qw = to_real(q, work)
    for _ in range(ctx.max_terms):
        at = abs(t)
        if at < stop:
            bound = 2 * at / (1 - q)
            if bound <= ctx.series_tol:
                return check_finite(to_hp(p, ctx))
        p *= 1 - t
        t *= qw
    bound = 2 * abs(t) / (1 - q)
    raise TruncationError(
        f"(a;q)_inf not certified within max_terms={ctx.max_terms}; tail bound {mp.nstr(bound, 5)}",
        bound=to_real(bound, ctx))


def _pole_check(z, q, ctx: NumericContext):
    """Raise :class:`PoleError` if ``q**(z+m) == 1`` numerically for some m >= 0."""
    mp = ctx.mp
    window = mp.ldexp(ctx.eps, 16)
    qz = q_to_complex_power(q, z, ctx)
    t = qz
    for _ in range(ctx.max_terms):
        if abs(1 - t) < window:
            return True
        if abs(t) < mp.mpf(1) / 2:
            return False
        t *= q
    return False


def q_gamma(z, q, ctx: NumericContext, strict: bool = True) -> QGammaValue:
    """q-Gamma function ``(q;q)_inf / (q**z;q)_inf * (1-q)**(1-z)``.

    With ``strict`` (default) a pole raises :class:`PoleError`; otherwise a
    :class:`QGammaValue` with ``pole_flag=True`` and ``value=None`` is returned.
    """
    mp = ctx.mp
    q = as_qbase(q, ctx)
    z = to_hp(z, ctx)
    if _pole_check(z, q, ctx):
        if strict:
            raise PoleError(f"Gamma_q has a pole at z = {mp.nstr(z, 10)}")
        return QGammaValue(None, True)
    work = ctx.elevated(PRODUCT_GUARD_BITS)
    qw, zw = to_real(q, work), to_hp(z, work)
    num = q_pochhammer_inf(qw, qw, work)
    den = q_pochhammer_inf(q_to_complex_power(qw, zw, work), qw, work)
    value = num / den * work.mp.exp((1 - zw) * work.mp.log(1 - qw))
    return QGammaValue(check_finite(to_hp(value, ctx)), False)


def q_gamma_ratio(z, k: int, q, ctx: NumericContext):
    """``Gamma_q(z + k) / Gamma_q(z)`` evaluated as ``(q**z; q)_k / (1 - q)**k``."""
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    q = as_qbase(q, ctx)
    qz = q_to_complex_power(q, z, ctx)
    p = ctx.mp.mpc(1)
    t = qz
    for _ in range(k):
        p *= (1 - t) / (1 - q)
        t *= q
    return p


def normalized_qminus_ratios(n: int, q, ctx: NumericContext, k_max: int | None = None) -> list:
    """``[normalized_qminus_ratio(n, k, q) for k in 0..k_max]`` in one pass (``k_max`` defaults to n)."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    k_max = n if k_max is None else k_max
    if not 0 <= k_max <= n:
        raise DomainError(f"k must lie in [0, n], got k={k_max}, n={n}")
    as_qbase(q, ctx)
    work = ctx.elevated(PRODUCT_GUARD_BITS)
    q = to_real(q, work)
    qn = q ** n
    bracket_n = (1 - qn) / (1 - q)
    out = [ctx.mp.mpc(1)]
    p = work.mp.mpf(1)
    qj = work.mp.mpf(1)
    for _ in range(k_max):
        p *= (qn - qj) / bracket_n
        qj *= q
        out.append(to_hp(p, ctx))
    return out


def normalized_qminus_ratio(n: int, k: int, q, ctx: NumericContext):
    """``(q**-n; q)_k / ([n]_q**k q**(-n k))``, built factor by factor.

    Each factor ``(q**n - q**j) / [n]_q`` is O(1), so no intermediate overflows;
    the modulus never exceeds ``q**binom(k, 2)``.
    """
    return normalized_qminus_ratios(n, q, ctx, k)[k]


def normalized_shifted_ratios(a, b, n: int, q, ctx: NumericContext, k_max: int | None = None) -> list:
    """``[normalized_shifted_ratio(a, b, n, k, q) for k in 0..k_max]`` in one pass."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    k_max = n if k_max is None else k_max
    if not 0 <= k_max <= n:
        raise DomainError(f"k must lie in [0, n], got k={k_max}, n={n}")
    mp = ctx.mp
    q = as_qbase(q, ctx)
    a = to_real(a, ctx)
    b = to_hp(b, ctx)
    if a <= 0:
        raise DomainError(f"a must be positive, got {a}")
    if in_nonpositive_integers(a * n + b.real, ctx):
        raise DomainError(f"a*n + Re(b) = {mp.nstr(a * n + b.real, 10)} is a nonpositive integer")
    work = ctx.elevated(PRODUCT_GUARD_BITS)
    q, a, b = to_real(q, work), to_real(a, work), to_hp(b, work)
    qa = q ** a
    denom = (1 - qa ** n) / (1 - qa) * (1 - q)
    t = q_to_complex_power(q, a * n + b, work)
    out = [mp.mpc(1)]
    p = work.mp.mpc(1)
    for _ in range(k_max):
        p *= (1 - t) / denom
        t *= q
        out.append(to_hp(p, ctx))
    return out


def normalized_shifted_ratio(a, b, n: int, k: int, q, ctx: NumericContext):
    """``(q**(a n + b); q)_k / ((1 - q)**k [n]_{q**a}**k)`` for ``a > 0``.

    Raises :class:`DomainError` when ``a n + Re(b)`` is a nonpositive integer.
    """
    return normalized_shifted_ratios(a, b, n, q, ctx, k)[k]


def shifted_ratio_bounds(a, b, q, ctx: NumericContext, n_max: int | None = None):
    """Per-factor constants ``(C, D)`` with ``C**k <= |ratio| <= D**k``.

    ``ratio`` is :func:`normalized_shifted_ratio`.  ``D`` is the upper constant
    ``[a]_q (1 + q**(a + gamma)) / (1 - q**a)`` and ``C`` the lower constant:
    ``[a]_q`` when ``gamma = Re(b) >= 0``, otherwise ``[a]_q * eps_lower`` with
    ``eps_lower = min(q**-gamma / 2, delta)``, where ``delta`` is the smallest
    ``|q**-gamma - q**(a m + j)|`` over the finitely many ``(m, j)`` with
    ``m <= n0`` and ``n0`` the threshold beyond which ``q**(a m) < q**-gamma / 2``.

    ``n_max`` only caps the search for ``n0`` (defaults to ``ctx.max_terms``).
    """
    mp = ctx.mp
    q = as_qbase(q, ctx)
    a = to_real(a, ctx)
    b = to_hp(b, ctx)
    gamma = b.real
    bracket_a = (1 - q ** a) / (1 - q)
    upper = bracket_a * (1 + q ** (a + gamma)) / (1 - q ** a)
    if gamma >= 0:
        return bracket_a, upper
    half = q ** (-gamma) / 2
    cap = ctx.max_terms if n_max is None else n_max
    n0 = 0
    while n0 < cap and q ** (a * (n0 + 1)) >= half:
        n0 += 1
    delta = mp.mpf(1)
    target = q ** (-gamma)
    for m in range(1, n0 + 1):
        for j in range(m):
            delta = min(delta, abs(target - q ** (a * m + j)))
    return bracket_a * min(half, delta), upper
