"""High-precision arithmetic facade.

Every numerical routine in the package receives a :class:`NumericContext` and
computes through the mpmath context it owns.  Contexts are immutable; each
working precision maps to one cached mpmath ``MPContext`` that is never mutated
after construction, so values computed under different contexts never interfere.

Values are mpmath ``mpc`` numbers (the high-precision complex scalar used
throughout).  Inputs may be given as ``int``, ``float``, ``complex``,
``fractions.Fraction``, decimal strings, ``(re, im)`` pairs or mpmath numbers;
:func:`to_hp` normalises them.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath

from .errors import DomainError

__all__ = [
    "NumericContext",
    "make_context",
    "default_context",
    "to_hp",
    "to_real",
    "q_to_complex_power",
    "DEFAULT_PRECISION_BITS",
]

DEFAULT_PRECISION_BITS = 256
MIN_PRECISION_BITS = 64
MIN_MAX_TERMS = 64


@functools.lru_cache(maxsize=None)
def _mp_at(bits: int) -> mpmath.MPContext:
    mp = mpmath.MPContext()
    mp.prec = bits
    return mp


@dataclass(frozen=True)
class NumericContext:
    """Working precision and tolerance policy.

    Attributes
    ----------
    precision_bits : int
        Binary mantissa digits of every intermediate value.
    eps : mpf
        Unit roundoff ``2**(1 - precision_bits)``.
    series_tol : mpf
        Relative truncation tolerance for series and products.
    max_terms : int
        Hard cap on the number of series terms or product factors.
    """

    precision_bits: int
    eps: object
    series_tol: object
    max_terms: int

    @property
    def mp(self) -> mpmath.MPContext:
        return _mp_at(self.precision_bits)

    @property
    def digits(self) -> int:
        """Decimal digits that are meaningful at this precision."""
        return max(1, int(self.precision_bits / 3.4))

    def mpc(self, x):
        return to_hp(x, self)

    def mpf(self, x):
        return to_real(x, self)

    def elevated(self, extra_bits: int) -> "NumericContext":
        """Context with ``extra_bits`` more precision and the same tolerance policy."""
        bits = self.precision_bits + extra_bits
        ratio = self.series_tol / self.eps
        mp = _mp_at(bits)
        eps = mp.ldexp(mp.mpf(1), 1 - bits)
        return NumericContext(bits, eps, eps * mp.mpf(ratio), self.max_terms)

    def with_max_terms(self, max_terms: int) -> "NumericContext":
        if max_terms < MIN_MAX_TERMS:
            raise DomainError(f"max_terms must be >= {MIN_MAX_TERMS}, got {max_terms}")
        return NumericContext(self.precision_bits, self.eps, self.series_tol, max_terms)


def make_context(precision_bits: int = DEFAULT_PRECISION_BITS, series_tol=None,
                 max_terms: int = 4096) -> NumericContext:
    """Build a :class:`NumericContext`.

    ``series_tol`` defaults to ``eps * 2**16``.

    >>> ctx = make_context(256)
    >>> ctx.eps == ctx.mp.mpf(2) ** -255
    True
    """
    if int(precision_bits) != precision_bits or precision_bits < MIN_PRECISION_BITS:
        raise DomainError(f"precision_bits must be an integer >= {MIN_PRECISION_BITS}, "
                          f"got {precision_bits!r}")
    if max_terms < MIN_MAX_TERMS:
        raise DomainError(f"max_terms must be >= {MIN_MAX_TERMS}, got {max_terms}")
    bits = int(precision_bits)
    mp = _mp_at(bits)
    eps = mp.ldexp(mp.mpf(1), 1 - bits)
    if series_tol is None:
        tol = mp.ldexp(eps, 16)
    else:
        tol = to_real(series_tol, bits)
    if not (eps <= tol <= mp.mpf("1e-6")):
        raise DomainError("series_tol must lie in [eps, 1e-6]")
    return NumericContext(bits, eps, tol, int(max_terms))


def default_context() -> NumericContext:
    """Context at ``$QMH_PREC_BITS`` bits (256 when unset)."""
    bits = int(os.environ.get("QMH_PREC_BITS", DEFAULT_PRECISION_BITS))
    return make_context(bits)


def _mp_of(ctx):
    if isinstance(ctx, NumericContext):
        return ctx.mp
    return _mp_at(int(ctx))


def to_real(x, ctx):
    """Convert ``x`` to an mpf at the precision of ``ctx``.

    ``ctx`` may also be a bare bit count.  Complex input with nonzero imaginary
    part is rejected.
    """
    mp = _mp_of(ctx)
    if isinstance(x, Rational) and not isinstance(x, int):
        return mp.mpf(x.numerator) / x.denominator
    if isinstance(x, str) and "/" in x:
        f = Fraction(x)
        return mp.mpf(f.numerator) / f.denominator
    if isinstance(x, complex) or isinstance(x, mpmath.mpc) or hasattr(x, "_mpc_"):
        z = to_hp(x, ctx)
        if z.imag != 0:
            raise DomainError(f"expected a real number, got {x!r}")
        return z.real
    return mp.mpf(x)


def to_hp(x, ctx):
    """Convert ``x`` to an mpc at the precision of ``ctx``."""
    mp = _mp_of(ctx)
    if isinstance(x, tuple):
        re, im = x
        return mp.mpc(to_real(re, ctx), to_real(im, ctx))
    if isinstance(x, Rational) and not isinstance(x, int):
        return mp.mpc(mp.mpf(x.numerator) / x.denominator)
    if isinstance(x, str):
        if "/" in x:
            return mp.mpc(to_real(x, ctx))
        return mp.mpc(complex(x)) if "j" in x else mp.mpc(mp.mpf(x))
    if hasattr(x, "_mpc_"):
        return mp.mpc(mp.mpf(x.real), mp.mpf(x.imag))
    return mp.mpc(x)


def check_finite(value, what="result"):
    """Raise if ``value`` carries an infinity or NaN."""
    mp = _mp_at(53)
    if not (mp.isfinite(value.real) and mp.isfinite(value.imag)):
        raise ArithmeticError(f"non-finite {what}: {value}")
    return value


def q_to_complex_power(q, z, ctx: NumericContext):
    """``q**z`` for real ``0 < q < 1`` and complex ``z``.

    Computed as ``exp(z * ln q)`` with the real logarithm of ``q``; no branch
    choice is involved.  Sixteen guard bits absorb the error growth of ``exp``
    for large ``|z ln q|``.
    """
    q = to_real(q, ctx)
    if not (0 < q < 1):
        raise DomainError(f"q must satisfy 0 < q < 1, got {q}")
    wmp = _mp_at(ctx.precision_bits + 16)
    w = wmp.exp(to_hp(z, ctx.precision_bits + 16) * wmp.log(wmp.mpf(q)))
    return check_finite(to_hp(w, ctx))
