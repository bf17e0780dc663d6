"""Basic hypergeometric series, terminating coefficients and q-Bessel functions.

Parameters of ``_r phi_s`` are stored as exponents ``e`` with ``a = q**e``.  A
literal parameter ``c * q**e`` is ingested with :func:`fold_literal`, which uses
``c * q**e = q**(e + ln(c) / ln(q))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DivergenceError, DomainError, TruncationError
from .numerics import NumericContext, check_finite, q_to_complex_power, to_hp, to_real
from .qcore import as_qbase, in_nonpositive_integers, q_gamma, q_pochhammer_inf

__all__ = [
    "PhiSpec",
    "TerminatingPhi",
    "fold_literal",
    "eval_phi",
    "phi_coefficients",
    "q_bessel_j2",
    "limit_fn_z",
    "limit_fn_bessel_form",
    "horner",
    "phi_ratio",
    "sum_series",
]

# Extra working bits for series summation; raised adaptively under cancellation.
GUARD_BITS = 32
MAX_GUARD_BITS = 1024


@dataclass(frozen=True)
class PhiSpec:
    """Parameters of ``_r phi_s(q**num; q**den; q, z)``.

    ``num_exponents`` and ``den_exponents`` hold the exponents ``e`` of the
    parameters ``q**e``; entries may be anything :func:`~qmh.numerics.to_hp`
    accepts.
    """

    num_exponents: tuple
    den_exponents: tuple
    q: object

    def __post_init__(self):
        object.__setattr__(self, "num_exponents", tuple(self.num_exponents))
        object.__setattr__(self, "den_exponents", tuple(self.den_exponents))

    @property
    def r(self) -> int:
        return len(self.num_exponents)

    @property
    def s(self) -> int:
        return len(self.den_exponents)

    def terminating_degree(self, ctx: NumericContext):
        """Smallest ``n`` with some numerator exponent equal to ``-n``, else None."""
        best = None
        for e in self.num_exponents:
            e = to_hp(e, ctx)
            if e.imag == 0 and in_nonpositive_integers(e.real, ctx):
                n = int(-ctx.mp.nint(e.real))
                best = n if best is None else min(best, n)
        return best


@dataclass(frozen=True)
class TerminatingPhi:
    """A terminating series as the polynomial ``sum_k coefficients[k] z**k``."""

    spec: PhiSpec
    degree: int
    coefficients: tuple = field(repr=False)

    def __call__(self, z, ctx: NumericContext):
        return horner(self.coefficients, to_hp(z, ctx))


def horner(coefficients, z):
    """Evaluate ``sum_k coefficients[k] z**k`` (ascending powers)."""
    acc = coefficients[-1] * 0
    for c in reversed(coefficients):
        acc = acc * z + c
    return acc


def fold_literal(c, exponent, q, ctx: NumericContext):
    """Exponent of the literal parameter ``c * q**exponent``."""
    mp = ctx.mp
    q = as_qbase(q, ctx)
    c = to_hp(c, ctx)
    if c == 0:
        raise DomainError("a zero literal parameter has no exponent form")
    return to_hp(exponent, ctx) + mp.log(c) / mp.log(q)


def _term_factors(spec: PhiSpec, ctx: NumericContext):
    q = as_qbase(spec.q, ctx)
    num = [q_to_complex_power(q, e, ctx) for e in spec.num_exponents]
    den = [q_to_complex_power(q, e, ctx) for e in spec.den_exponents]
    return q, num, den


def phi_ratio(num, den, q, excess, ctx: NumericContext):
    """Term-ratio callback ``k -> term_{k+1} / term_k`` of a basic series with unit argument.

    ``num`` and ``den`` are parameter values (not exponents).  The returned
    callable expects ``k`` to increase by one per call starting from 0.
    """
    mp = ctx.mp
    sign = -1 if excess % 2 else 1
    window = mp.ldexp(ctx.eps, 16)
    q_excess = q ** excess
    state = {"qk": mp.mpf(1), "qkx": mp.mpf(1)}

    def ratio(k):
        qk = state["qk"]
        f = mp.mpc(sign * state["qkx"]) / (1 - qk * q)
        for a in num:
            f *= 1 - a * qk
        for b in den:
            d = 1 - b * qk
            if abs(d) < window:
                raise DomainError(f"denominator parameter makes (b;q)_{k + 1} vanish")
            f /= d
        state["qk"] = qk * q
        state["qkx"] *= q_excess
        return f

    return ratio


def _sum_terms(ratio, z, ctx: NumericContext, n_terms):
    """Sum ``sum_k t_k z**k`` with ``t_0 = 1`` and ``t_{k+1} = ratio(k) t_k``.

    Returns ``(sum, max_abs_term)``.  ``n_terms`` fixes the count for a
    terminating series; ``None`` stops after three consecutive terms below
    ``ctx.series_tol`` relative to the partial sum (or below the rounding
    floor of the largest term) while the terms decrease.
    """
    mp = ctx.mp
    term = mp.mpc(1)
    total = mp.mpc(1)
    biggest = mp.mpf(1)
    limit = ctx.max_terms if n_terms is None else n_terms
    small_run = 0
    for k in range(limit):
        step = ratio(k) * z
        term *= step
        total += term
        at = abs(term)
        if at > biggest:
            biggest = at
        if n_terms is None:
            if at <= ctx.series_tol * abs(total) or at <= ctx.eps * biggest:
                small_run += 1
                if small_run >= 3 and abs(step) < 1:
                    return total, biggest
            else:
                small_run = 0
    if n_terms is not None:
        return total, biggest
    raise TruncationError(f"series not converged within max_terms={ctx.max_terms}",
                          bound=abs(term))


def sum_series(make_ratio, z, ctx: NumericContext, n_terms=None):
    """Guarded summation of a power series given by its term ratios.

    ``make_ratio(work_ctx)`` must return a fresh ratio callback valid at the
    precision of ``work_ctx``.  Summation runs with guard bits that grow until
    the cancellation ``max|term| / |sum|`` cannot spoil the working precision.
    """
    z = to_hp(z, ctx)
    if z == 0 or n_terms == 0:
        return ctx.mp.mpc(1)
    guard = GUARD_BITS
    while True:
        work = ctx.elevated(guard)
        total, biggest = _sum_terms(make_ratio(work), to_hp(z, work), work, n_terms)
        lost = 0 if total == 0 else int(work.mp.log(biggest / abs(total), 2))
        if lost <= guard - 16 or guard >= MAX_GUARD_BITS:
            return check_finite(to_hp(total, ctx))
        guard = min(MAX_GUARD_BITS, lost + 32)


def eval_phi(spec: PhiSpec, z, ctx: NumericContext):
    """Evaluate ``_r phi_s`` at ``z``.

    A terminating series (some numerator ``q**-n``) sums exactly ``n + 1``
    terms; otherwise the truncation rule of :func:`sum_series` applies.
    """
    r, s = spec.r, spec.s
    z = to_hp(z, ctx)
    degree = spec.terminating_degree(ctx)
    if degree is None:
        if r > s + 1:
            raise DivergenceError(f"_{r}phi_{s} diverges for every z != 0 (r > s + 1)")
        if r == s + 1 and abs(z) >= 1:
            raise DivergenceError(f"_{r}phi_{s} requires |z| < 1")

    def make_ratio(work):
        q, num, den = _term_factors(spec, work)
        return phi_ratio(num, den, q, 1 + s - r, work)

    return sum_series(make_ratio, z, ctx, degree)


def phi_coefficients(spec: PhiSpec, ctx: NumericContext) -> TerminatingPhi:
    """Monomial coefficients of a terminating series.

    Coefficient ``k + 1`` is obtained from coefficient ``k`` through the closed
    form term ratio.
    """
    n = spec.terminating_degree(ctx)
    if n is None:
        raise DomainError("no numerator exponent equals a nonpositive integer -n")
    q, num, den = _term_factors(spec, ctx)
    ratio = phi_ratio(num, den, q, 1 + spec.s - spec.r, ctx)
    coeffs = [ctx.mp.mpc(1)]
    for k in range(n):
        coeffs.append(coeffs[-1] * ratio(k))
    return TerminatingPhi(spec, n, tuple(coeffs))


def _is_negative_integer(x, ctx):
    return in_nonpositive_integers(x, ctx) and abs(x) >= 1 - ctx.eps


def q_bessel_j2(alpha, z, q, ctx: NumericContext):
    """Jackson's second q-Bessel function ``J^(2)_alpha(z; q)``.

    Uses the principal branch of ``(z/2)**alpha``.  The prefactor, power and
    series are combined with :data:`GUARD_BITS` extra bits.
    """
    mp = ctx.mp
    as_qbase(q, ctx)
    a = to_real(alpha, ctx)
    if _is_negative_integer(a, ctx):
        raise DomainError(f"(q^(alpha+1); q)_k vanishes for alpha = {a}")
    if to_hp(z, ctx) == 0:
        if a == 0:
            return mp.mpc(1)
        if a > 0:
            return mp.mpc(0)
        raise DomainError("z = 0 is a branch point of (z/2)**alpha for alpha < 0")
    work = ctx.elevated(GUARD_BITS)
    value = _q_bessel_j2(to_real(alpha, work), to_hp(z, work), as_qbase(q, work), work)
    return check_finite(to_hp(value, ctx))


def _q_bessel_j2(alpha, z, q, ctx):
    qa1 = q_to_complex_power(q, alpha + 1, ctx)
    pref = q_pochhammer_inf(qa1, q, ctx) / q_pochhammer_inf(q, q, ctx)
    series = eval_phi(PhiSpec((), (alpha + 1,), q), -qa1 * z * z / 4, ctx)
    return pref * ctx.mp.power(z / 2, alpha) * series


def _check_alpha(alpha, ctx):
    if in_nonpositive_integers(alpha, ctx):
        raise DomainError(f"alpha must not be a nonpositive integer, got {alpha}")


def limit_fn_z(alpha, kappa, z, q, ctx: NumericContext):
    """Entire limit function ``_0phi_1(-; q**alpha; q, -kappa z (q-1)**2 q**alpha)``.

    For ``z != 0`` its zeros are those of
    ``(kappa z)**((1-alpha)/2) J^(2)_{alpha-1}(2 (1-q) sqrt(kappa z); q)``.
    """
    as_qbase(q, ctx)
    _check_alpha(to_real(alpha, ctx), ctx)
    # the argument is formed with guard bits; its rounding is amplified near zeros
    work = ctx.elevated(GUARD_BITS)
    qw, aw = as_qbase(q, work), to_real(alpha, work)
    x = -to_hp(kappa, work) * to_hp(z, work) * (qw - 1) ** 2 * q_to_complex_power(qw, aw, work)
    return to_hp(eval_phi(PhiSpec((), (aw,), qw), x, work), ctx)


def limit_fn_bessel_form(alpha, kappa, z, q, ctx: NumericContext):
    """``Gamma_q(alpha) (kappa z)**((1-alpha)/2) J^(2)_{alpha-1}(2 (1-q) sqrt(kappa z); q)``.

    Equal to :func:`limit_fn_z` for ``z != 0``; principal branches throughout.
    """
    as_qbase(q, ctx)
    _check_alpha(to_real(alpha, ctx), ctx)
    work = ctx.elevated(GUARD_BITS)
    mp = work.mp
    alpha, q = to_real(alpha, work), as_qbase(q, work)
    w = to_hp(kappa, work) * to_hp(z, work)
    if w == 0:
        raise DomainError("the Bessel form is not defined at z = 0; use limit_fn_z")
    gam = q_gamma(alpha, q, work).value
    j = q_bessel_j2(alpha - 1, 2 * (1 - q) * mp.sqrt(w), q, work)
    return check_finite(to_hp(gam * mp.power(w, (1 - alpha) / 2) * j, ctx))
