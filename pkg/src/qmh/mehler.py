"""Mehler-Heine scaling of terminating q-hypergeometric polynomials.

A family is the parameter bundle

    _r phi_s(q**-n, q**(a_j n + b_j); q**alpha, q**(c_l n + d_l); q, x)

with ``j = 1..r-1`` and ``l = 1..s-1``.  Under the substitution
``x = scale(n) * z`` the polynomials converge, uniformly on compacts, to an
entire limit function of ``z``.  Everything here works with the polynomial in
the already-scaled variable ``z``: its coefficients stay bounded, whereas the
unscaled ones carry factors of size ``q**(-n k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError, HypothesisError
from .numerics import NumericContext, q_to_complex_power, to_hp, to_real
from .qcore import (
    as_qbase,
    in_nonpositive_integers,
    q_pochhammer,
    shifted_ratio_bounds,
)
from .qhyper import GUARD_BITS, PhiSpec, eval_phi, fold_literal, horner, limit_fn_z, phi_ratio, sum_series

__all__ = [
    "GeneralizedFamily",
    "MHFamily",
    "ScaledPolynomial",
    "kappa",
    "mh_scale_factor",
    "phi_spec",
    "scaled_polynomial",
    "mh_limit",
    "generalized_limit",
    "qn_scaled_polynomial",
    "qn_limit",
    "dominant_coefficients",
    "q_laguerre",
    "q_laguerre_scaled",
    "little_q_jacobi",
    "little_q_jacobi_scaled",
    "little_q_jacobi_family",
    "little_q_jacobi_limit",
]


@dataclass(frozen=True)
class ScaledPolynomial:
    """Polynomial ``sum_k coefficients[k] z**k`` in a scaled variable.

    ``provenance`` records which family and degree produced it.
    """

    coefficients: tuple = field(repr=False)
    provenance: str = ""

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z, ctx: NumericContext):
        return horner(self.coefficients, to_hp(z, ctx))


@dataclass(frozen=True)
class GeneralizedFamily:
    """Parameter bundle with ``r - 1`` upper pairs ``(a_j, b_j)`` and ``s - 1`` lower pairs ``(c_l, d_l)``.

    Numbers are kept as given (ints, Fractions, strings, complex, ``(re, im)``
    tuples) and converted at the working precision of each call.
    """

    alpha: object
    q: object
    upper: tuple = ()
    lower: tuple = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(tuple(p) for p in self.upper))
        object.__setattr__(self, "lower", tuple(tuple(p) for p in self.lower))
        self._validate()

    @property
    def r(self) -> int:
        return len(self.upper) + 1

    @property
    def s(self) -> int:
        return len(self.lower) + 1

    def _validate(self):
        probe = 64
        q = to_real(self.q, probe)
        if not 0 < q < 1:
            raise HypothesisError(f"q must satisfy 0 < q < 1, got {self.q}", "0 < q < 1")
        alpha = to_real(self.alpha, probe)
        if alpha == int(alpha) and alpha <= 0:
            raise HypothesisError(f"alpha = {self.alpha} is a nonpositive integer",
                                  "alpha not in Z_-")
        for label, pairs in (("a", self.upper), ("c", self.lower)):
            for j, (x, _) in enumerate(pairs, 1):
                if not to_real(x, probe) > 0:
                    raise HypothesisError(f"{label}_{j} = {x} must be positive", f"{label}_{j} > 0")
        if self.r - 1 > self.s:
            raise HypothesisError(f"r - 1 = {self.r - 1} exceeds s = {self.s}", "r - 1 <= s")

    def check_n(self, n: int, ctx: NumericContext):
        """Raise :class:`HypothesisError` if a shifted exponent hits ``Z_-`` at this ``n``."""
        if n < 0:
            raise DomainError(f"n must be nonnegative, got {n}")
        for label, shift, pairs in (("a", "b", self.upper), ("c", "d", self.lower)):
            for j, (x, y) in enumerate(pairs, 1):
                val = to_real(x, ctx) * n + to_hp(y, ctx).real
                if n > 0 and in_nonpositive_integers(val, ctx):
                    hyp = f"{label}_{j}*n + Re({shift}_{j}) not in Z_-"
                    raise HypothesisError(f"{hyp} violated at n = {n}", hyp)

    def params(self, ctx: NumericContext):
        q = as_qbase(self.q, ctx)
        alpha = to_real(self.alpha, ctx)
        upper = [(to_real(a, ctx), to_hp(b, ctx)) for a, b in self.upper]
        lower = [(to_real(c, ctx), to_hp(d, ctx)) for c, d in self.lower]
        return q, alpha, upper, lower

    def describe(self) -> str:
        return self.name or f"r={self.r},s={self.s},alpha={self.alpha},q={self.q}"


@dataclass(frozen=True)
class MHFamily(GeneralizedFamily):
    """Family with ``r = s``, the setting of the Mehler-Heine theorem."""

    def _validate(self):
        super()._validate()
        if len(self.upper) != len(self.lower):
            raise HypothesisError("upper and lower parameter lists must have equal length",
                                  "r = s")


def _bracket(n, base):
    """``[n]_base`` for a real base in (0, 1)."""
    return (1 - base ** n) / (1 - base)


def kappa(fam: GeneralizedFamily, ctx: NumericContext):
    """``prod [a_j]_q / prod [c_l]_q`` (1 for empty products)."""
    q, _, upper, lower = fam.params(ctx)
    k = ctx.mp.mpf(1)
    for a, _ in upper:
        k *= _bracket(a, q)
    for c, _ in lower:
        k /= _bracket(c, q)
    return k


def mh_scale_factor(fam: GeneralizedFamily, n: int, ctx: NumericContext):
    """``q**(n+alpha) prod [n]_{q**c} (q - 1) / ([n]_q prod [n]_{q**a})``."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    fam.check_n(n, ctx)
    q, alpha, upper, lower = fam.params(ctx)
    f = q_to_complex_power(q, n + alpha, ctx) * (q - 1) / _bracket(n, q)
    for a, _ in upper:
        f /= _bracket(n, q ** a)
    for c, _ in lower:
        f *= _bracket(n, q ** c)
    return f


def phi_spec(fam: GeneralizedFamily, n: int, ctx: NumericContext) -> PhiSpec:
    """The unscaled degree-``n`` series as a :class:`~qmh.qhyper.PhiSpec`."""
    fam.check_n(n, ctx)
    q, alpha, upper, lower = fam.params(ctx)
    num = [ctx.mp.mpc(-n)] + [a * n + b for a, b in upper]
    den = [ctx.mp.mpc(alpha)] + [c * n + d for c, d in lower]
    return PhiSpec(num, den, fam.q)


def _scaled_coefficients(fam: GeneralizedFamily, n: int, ctx: NumericContext, mode: str):
    """Coefficients in the scaled variable, one O(1) factor at a time.

    ``mode == "mh"`` uses the Mehler-Heine scale, ``mode == "qn"`` uses ``q**n``.
    """
    fam.check_n(n, ctx)
    mp = ctx.mp
    q, alpha, upper, lower = fam.params(ctx)
    excess = 1 + fam.s - fam.r
    sign = -1 if excess % 2 else 1
    qa = q_to_complex_power(q, alpha, ctx)
    qn = q ** n
    up = [(q_to_complex_power(q, a * n + b, ctx), _bracket(n, q ** a)) for a, b in upper]
    lo = [(q_to_complex_power(q, c * n + d, ctx), _bracket(n, q ** c)) for c, d in lower]
    window = mp.ldexp(ctx.eps, 16)
    if mode == "mh":
        lead = qa * (q - 1) / _bracket(n, q)
    else:
        lead = mp.mpc(1)
    coeffs = [mp.mpc(1)]
    qk = mp.mpf(1)
    for k in range(n):
        # (1 - q**(k-n)) * q**n = q**n - q**k
        f = lead * sign * qk ** excess * (qn - qk) / ((1 - qa * qk) * (1 - q * qk))
        for t, br in up:
            f *= 1 - t * qk
            if mode == "mh":
                f /= br
        for t, br in lo:
            dnm = 1 - t * qk
            if abs(dnm) < window:
                raise HypothesisError("a lower parameter makes the denominator vanish",
                                      "(q^(c n + d); q)_k != 0")
            f /= dnm
            if mode == "mh":
                f *= br
        coeffs.append(coeffs[-1] * f)
        qk *= q
    return tuple(coeffs)


def scaled_polynomial(fam: GeneralizedFamily, n: int, ctx: NumericContext) -> ScaledPolynomial:
    """Degree-``n`` polynomial ``z -> phi(scale(n) z)`` as coefficients ``g_{n,k} / z**k``.

    Its zeros are exactly the scaled zeros ``x* = x / scale(n)``.
    """
    if n == 0:
        return ScaledPolynomial((ctx.mp.mpc(1),), f"{fam.describe()};n=0")
    return ScaledPolynomial(_scaled_coefficients(fam, n, ctx, "mh"), f"{fam.describe()};n={n}")


def qn_scaled_polynomial(fam: GeneralizedFamily, n: int, ctx: NumericContext) -> ScaledPolynomial:
    """Degree-``n`` polynomial ``z -> phi(q**n z)``."""
    if n == 0:
        return ScaledPolynomial((ctx.mp.mpc(1),), f"{fam.describe()};qn;n=0")
    return ScaledPolynomial(_scaled_coefficients(fam, n, ctx, "qn"), f"{fam.describe()};qn;n={n}")


def _limit_ratio(alpha, q, power, sign, ctx):
    """Ratio callback of ``sum sign**k q**(power binom(k,2)) x**k / ((q**alpha;q)_k (q;q)_k)``."""
    qa = q_to_complex_power(q, alpha, ctx)
    mp = ctx.mp
    qp = q ** power
    state = {"qk": mp.mpf(1), "qkp": mp.mpf(1)}

    def ratio(k):
        qk = state["qk"]
        f = sign * state["qkp"] / ((1 - qa * qk) * (1 - q * qk))
        state["qk"] = qk * q
        state["qkp"] *= qp
        return f

    return ratio


def generalized_limit(fam: GeneralizedFamily, z, ctx: NumericContext):
    """Limit of the Mehler-Heine scaled polynomials for ``r - 1 <= s``.

    ``sum_k (-1)**((1+r-s)k) q**((2+s-r) binom(k,2)) kappa**k z**k q**(alpha k)
    (1-q)**((2+r-s)k) / ((q**alpha;q)_k (q;q)_k)``; for ``r = s`` this is the
    ``_0phi_1`` of :func:`mh_limit`.
    """
    r, s = fam.r, fam.s
    if r - 1 > s:
        raise HypothesisError("r - 1 <= s is required", "r - 1 <= s")
    q, alpha, _, _ = fam.params(ctx)
    if in_nonpositive_integers(alpha, ctx):
        raise DomainError(f"alpha must not be a nonpositive integer, got {alpha}")
    z = to_hp(z, ctx)
    sign = -1 if (1 + r - s) % 2 else 1

    def make_ratio(work):
        qw, aw, _, _ = fam.params(work)
        return _limit_ratio(aw, qw, 2 + s - r, sign, work)

    work = ctx.elevated(GUARD_BITS)
    qw, aw, _, _ = fam.params(work)
    x = (kappa(fam, work) * q_to_complex_power(qw, aw, work)
         * (1 - qw) ** (2 + r - s) * to_hp(z, work))
    return to_hp(sum_series(make_ratio, x, work), ctx)


def mh_limit(fam: GeneralizedFamily, z, ctx: NumericContext):
    """Mehler-Heine limit ``_0phi_1(-; q**alpha; q, -kappa z (q-1)**2 q**alpha)``."""
    if fam.r != fam.s:
        raise HypothesisError("mh_limit needs r = s; use generalized_limit", "r = s")
    return limit_fn_z(fam.alpha, kappa(fam, ctx.elevated(GUARD_BITS)), z, fam.q, ctx)


def qn_limit(fam: GeneralizedFamily, z, ctx: NumericContext):
    """Limit of ``phi(q**n z)``: ``sum (-1)**((r-s)k) q**((2+s-r) binom(k,2)) z**k / ((q**alpha;q)_k (q;q)_k)``.

    For ``r = s`` this is ``_0phi_1(-; q**alpha; q, z)`` whatever ``s`` is.
    """
    r, s = fam.r, fam.s
    if r - 1 > s:
        raise HypothesisError("r - 1 <= s is required", "r - 1 <= s")
    sign = -1 if (r - s) % 2 else 1

    def make_ratio(work):
        qw, aw, _, _ = fam.params(work)
        return _limit_ratio(aw, qw, 2 + s - r, sign, work)

    return sum_series(make_ratio, z, ctx)


def dominant_coefficients(fam: GeneralizedFamily, count: int, ctx: NumericContext):
    """Bounds ``G_k`` with ``|g_{n,k} / z**k| <= G_k`` for every ``n >= k``.

    ``G_k = (prod D_a / prod C_c)**k q**(2 binom(k,2)) q**(alpha k) (1-q)**k
    / (|(q**alpha;q)_k| (q;q)_k)`` for ``r = s``; ``D`` and ``C`` come from
    :func:`~qmh.qcore.shifted_ratio_bounds`.
    """
    if fam.r != fam.s:
        raise HypothesisError("dominant bound is stated for r = s", "r = s")
    mp = ctx.mp
    q, alpha, upper, lower = fam.params(ctx)
    ratio = mp.mpf(1)
    for a, b in upper:
        ratio *= shifted_ratio_bounds(a, b, q, ctx)[1]
    for c, d in lower:
        ratio /= shifted_ratio_bounds(c, d, q, ctx)[0]
    qa = q ** alpha
    out = []
    for k in range(count + 1):
        g = (ratio ** k * q ** (k * (k - 1)) * qa ** k * (1 - q) ** k
             / (abs(q_pochhammer(qa, q, k, ctx)) * q_pochhammer(q, q, k, ctx).real))
        out.append(g)
    return out


# Classical examples


def q_laguerre(n: int, alpha, q, z, ctx: NumericContext):
    """Moak's q-Laguerre polynomial.

    ``(q**(alpha+1);q)_n / (q;q)_n * _1phi_1(q**-n; q**(alpha+1); q, -q**(n+alpha+1) z)``.
    """
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    q = as_qbase(q, ctx)
    alpha = to_real(alpha, ctx)
    if not alpha > -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    z = to_hp(z, ctx)
    qa1 = q_to_complex_power(q, alpha + 1, ctx)
    pref = q_pochhammer(qa1, q, n, ctx) / q_pochhammer(q, q, n, ctx)
    spec = PhiSpec((-n,), (alpha + 1,), q)
    arg = -q_to_complex_power(q, n + alpha + 1, ctx) * z
    return pref * eval_phi(spec, arg, ctx)


def q_laguerre_scaled(n: int, alpha, q, z, ctx: NumericContext):
    """``L_n^(alpha)(z / ((1-q) [n]_q); q)``."""
    qq = as_qbase(q, ctx)
    return q_laguerre(n, alpha, q, to_hp(z, ctx) / ((1 - qq) * _bracket(n, qq)), ctx)


def _jacobi_exponents(n, a, b, q, ctx):
    a = to_real(a, ctx)
    b = to_real(b, ctx)
    if not (0 < a * q < 1):
        raise DomainError(f"little q-Jacobi needs 0 < a q < 1, got a = {a}")
    if not b * q < 1:
        raise DomainError(f"little q-Jacobi needs b q < 1, got b = {b}")
    upper = fold_literal(a * b, n + 1, q, ctx) if a * b != 0 else None
    lower = fold_literal(a, 1, q, ctx)
    return upper, lower


def little_q_jacobi(n: int, a, b, q, z, ctx: NumericContext):
    """``p_n(z; a, b | q) = _2phi_1(q**-n, a b q**(n+1); a q; q, q z)``."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    q = as_qbase(q, ctx)
    z = to_hp(z, ctx)
    upper, lower = _jacobi_exponents(n, a, b, q, ctx)
    if upper is None:
        # b = 0: the zero numerator parameter contributes factor 1
        def make_ratio(work):
            qw = as_qbase(q, work)
            num = [q_to_complex_power(qw, -n, work)]
            den = [q_to_complex_power(qw, to_hp(lower, work), work)]
            return phi_ratio(num, den, qw, 0, work)

        return sum_series(make_ratio, q * z, ctx, n)
    return eval_phi(PhiSpec((-n, upper), (lower,), q), q * z, ctx)


def little_q_jacobi_family(a, b, q, ctx: NumericContext) -> GeneralizedFamily:
    """The ``(r, s) = (2, 1)`` family behind little q-Jacobi polynomials.

    Upper pair ``(1, 1 + ln(ab)/ln q)`` and ``alpha = 1 + ln(a)/ln q``.  Requires
    ``a b > 0`` and ``alpha`` real.
    """
    qq = as_qbase(q, ctx)
    upper, lower = _jacobi_exponents(0, a, b, qq, ctx)
    if upper is None:
        raise DomainError("b = 0 has no exponent form")
    alpha = lower.real
    if not alpha > -1:
        raise DomainError("the limit needs 1 + ln(a)/ln(q) > -1")
    return GeneralizedFamily(alpha=alpha, q=qq, upper=[(1, upper)], lower=[],
                             name=f"little-q-Jacobi(a={a},b={b},q={q})")


def little_q_jacobi_scaled(n: int, a, b, q, z, ctx: NumericContext):
    """``p_n`` with ``q z -> q**(n+1+ln(a)/ln q) (q-1) z / [n]_q**2``."""
    qq = as_qbase(q, ctx)
    _, lower = _jacobi_exponents(n, a, b, qq, ctx)
    x = (q_to_complex_power(qq, n + lower, ctx) * (qq - 1) * to_hp(z, ctx)
         / _bracket(n, qq) ** 2)
    return little_q_jacobi(n, a, b, qq, x / qq, ctx)


def little_q_jacobi_limit(a, b, q, z, ctx: NumericContext):
    """``sum q**binom(k,2) z**k q**(A k) (1-q)**(3k) / ((q**A;q)_k (q;q)_k)``, ``A = 1 + ln(a)/ln q``."""
    return generalized_limit(little_q_jacobi_family(a, b, q, ctx), z, ctx)


def families_for_harness(ctx: NumericContext) -> Sequence[GeneralizedFamily]:
    """Built-in families exercised by the convergence harness."""
    from .experiments import builtin_experiment

    fams = [builtin_experiment(i).family for i in range(1, 6)]
    fams.append(MHFamily(alpha=1, q=fams[0].q, name="s=1,alpha=1"))
    return fams
