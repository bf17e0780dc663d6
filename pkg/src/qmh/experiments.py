"""Built-in zero experiments, Hurwitz matching tables and the imaginary-zero census.

All five experiments share ``s = 3`` and

    a_1 = 3,    b_1 = 6,          c_1 = 4/3,  d_1 = 2 - 3i
    a_2 = 5/4,  b_2 = -2/3 + 2i,  c_2 = 5/6,  d_2 = 1

and differ in ``alpha`` (and ``q`` for the fifth).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BoxInstabilityError, DomainError, MatchingError
from .mehler import MHFamily, kappa, scaled_polynomial
from .numerics import NumericContext, to_real
from .qhyper import GUARD_BITS, limit_fn_z
from .roots import (
    COMPLEX,
    Rect,
    ZeroRecord,
    count_zeros_rectangle,
    find_zeros_in_box,
    make_record,
    real_axis_zero_scan,
    solve_all_roots,
    sort_key,
)

__all__ = [
    "ExperimentConfig",
    "ConvergenceRow",
    "ZeroCensus",
    "EXPERIMENT_UPPER",
    "EXPERIMENT_LOWER",
    "builtin_experiment",
    "scaled_zeros",
    "limit_zeros",
    "convergence_table",
    "imaginary_zero_census",
]

EXPERIMENT_UPPER = ((3, 6), (Fraction(5, 4), (Fraction(-2, 3), 2)))
EXPERIMENT_LOWER = ((Fraction(4, 3), (2, -3)), (Fraction(5, 6), 1))

_ALPHAS = {1: Fraction(1), 2: Fraction(-51, 100), 3: Fraction(-78, 10),
           4: Fraction(-88, 10), 5: Fraction(-78, 10)}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a family, the degrees to solve and where its limit zeros live.

    ``scan_interval`` is searched by a sign-change scan of the limit function;
    ``scan_box`` (if set) by the argument principle seeded with polynomial zeros.
    ``default_zero_indices`` (1-based, None for all) is the table selection
    used when none is requested.
    """

    id: int
    family: MHFamily
    n_values: tuple = (10, 20, 40)
    scan_interval: tuple | None = None
    scan_box: Rect | None = None
    default_zero_indices: tuple | None = None

    @property
    def scan_window(self):
        """``(interval, box)``; either may be None."""
        return self.scan_interval, self.scan_box


@dataclass(frozen=True)
class ConvergenceRow:
    zero_index: int
    n: int
    x_star: object
    matched_limit_zero: object
    gap: object


@dataclass(frozen=True)
class ZeroCensus:
    """Zero counts of the limit function, mapped to ``w = 2 sqrt(z)``.

    Each negative real ``z`` gives two purely imaginary ``w``; each nonreal
    ``z`` gives two nonreal ``w`` off the imaginary axis.
    """

    alpha: object
    q: object
    total_nonreal_w: int
    purely_imaginary_w: int
    negative_real_z: int
    nonreal_z: int
    boxes_used: str
    zeros: tuple = field(default=(), repr=False)
    ambiguous: int = 0

    def __post_init__(self):
        if self.purely_imaginary_w != 2 * self.negative_real_z:
            raise ValueError("purely imaginary w zeros must pair with negative real z zeros")


def builtin_experiment(id: int) -> ExperimentConfig:
    """Configuration of experiment ``id`` (1 to 5)."""
    if id not in _ALPHAS:
        raise DomainError(f"experiment id must be in 1..5, got {id}")
    q = Fraction(9, 10) if id == 5 else Fraction(1, 2)
    fam = MHFamily(alpha=_ALPHAS[id], q=q, upper=EXPERIMENT_UPPER, lower=EXPERIMENT_LOWER,
                   name=f"experiment-{id}")
    if id == 1:
        return ExperimentConfig(1, fam, (10, 20, 40), scan_interval=(0, 60))
    if id == 2:
        return ExperimentConfig(2, fam, (10, 20, 40), scan_interval=(-1, 20))
    n_values = (20, 40) if id == 5 else (10, 20, 40)
    # q = 9/10 converges slowly: only the nonreal zeros and the first positive
    # one are resolved by n = 40.
    default = tuple(range(1, 10)) if id == 5 else None
    return ExperimentConfig(id, fam, n_values, scan_interval=(-40, 0),
                            scan_box=Rect(-60, 400, -120, 120), default_zero_indices=default)


def scaled_zeros(fam: MHFamily, n: int, ctx: NumericContext) -> list[ZeroRecord]:
    """Zeros ``x*`` of the scaled polynomial of degree ``n``, sorted by ``(Re, Im)``."""
    return solve_all_roots(scaled_polynomial(fam, n, ctx), ctx)


def _limit_fn(fam: MHFamily, ctx: NumericContext):
    k = kappa(fam, ctx.elevated(GUARD_BITS))

    def f(z, c):
        return limit_fn_z(fam.alpha, k, z, fam.q, c)

    return f


def _snap_real(records, ctx):
    """Put zeros whose imaginary part is rounding noise onto the real axis.

    Valid for functions real on the real axis, whose zeros are real or come
    in conjugate pairs.
    """
    mp = ctx.mp
    tol = mp.ldexp(mp.mpf(1), -(ctx.precision_bits // 4))
    out = []
    for r in records:
        if r.value.imag != 0 and abs(r.value.imag) <= tol * (1 + abs(r.value)):
            r = make_record(mp.mpc(r.value.real), r.residual, r.multiplicity)
        out.append(r)
    return out


def _dedupe(records, ctx):
    out = []
    for r in sorted(_snap_real(records, ctx), key=lambda r: sort_key(r.value)):
        if not any(abs(r.value - o.value) <= ctx.mp.mpf("1e-20") * (1 + abs(r.value)) for o in out):
            out.append(r)
    return out


def limit_zeros(cfg: ExperimentConfig, ctx: NumericContext, seeds=None) -> list[ZeroRecord]:
    """Zeros of the limit function inside the configured scan window.

    The real interval is scanned for sign changes.  Zeros in the box are
    located by subdivision, using the scaled zeros at the largest ``n`` as
    Newton seeds (Hurwitz seeds); the box count is checked against the
    argument principle.
    """
    f = _limit_fn(cfg.family, ctx)
    found = []
    if cfg.scan_interval is not None:
        found += real_axis_zero_scan(f, cfg.scan_interval, 256, ctx)
    if cfg.scan_box is not None:
        if seeds is None:
            seeds = [r.value for r in scaled_zeros(cfg.family, max(cfg.n_values), ctx)]
        found += find_zeros_in_box(f, cfg.scan_box, ctx, seeds=seeds)
    return _dedupe(found, ctx)


def _greedy_match(limit_vals, xs):
    """Injective pairing of limit zeros with x*, closest pairs first."""
    pairs = sorted((abs(z - x), i, j) for i, z in enumerate(limit_vals) for j, x in enumerate(xs))
    used_i, used_j, match = set(), set(), {}
    for d, i, j in pairs:
        if i in used_i or j in used_j:
            continue
        used_i.add(i)
        used_j.add(j)
        match[i] = j
    return match


def convergence_table(cfg: ExperimentConfig, zero_indices, ctx: NumericContext,
                      limit: list[ZeroRecord] | None = None) -> list[ConvergenceRow]:
    """Rows ``(zero_index, n, x*, z_l, |x* - z_l|)`` for the requested limit zeros.

    ``zero_indices`` are 1-based positions in the sorted output of
    :func:`limit_zeros`; ``None`` selects ``cfg.default_zero_indices`` or, if
    that is unset, all of them.  Pairing is greedy
    nearest-first and injective per ``n``.  At the largest ``n`` each gap must
    stay below 25% of the distance from ``z_l`` to its nearest other limit
    zero, otherwise :class:`~qmh.errors.MatchingError` is raised.  Rows are
    ordered by ``(zero_index, n)``.
    """
    per_n = {n: scaled_zeros(cfg.family, n, ctx) for n in cfg.n_values}
    if limit is None:
        limit = limit_zeros(cfg, ctx, seeds=[r.value for r in per_n[max(cfg.n_values)]])
    lv = [r.value for r in limit]
    if zero_indices is None:
        zero_indices = cfg.default_zero_indices or range(1, len(lv) + 1)
    zero_indices = list(zero_indices)
    for i in zero_indices:
        if not 1 <= i <= len(lv):
            raise MatchingError(f"zero index {i} outside 1..{len(lv)} (limit zeros found in the window)")
    spacing = []
    for i, z in enumerate(lv):
        others = [abs(z - w) for j, w in enumerate(lv) if j != i]
        spacing.append(min(others) if others else abs(z) + 1)
    rows = []
    n_top = max(cfg.n_values)
    for n in sorted(cfg.n_values):
        xs = [r.value for r in per_n[n]]
        match = _greedy_match(lv, xs)
        for idx in zero_indices:
            i = idx - 1
            if i not in match:
                raise MatchingError(f"limit zero {idx} has no partner at n = {n}")
            x = xs[match[i]]
            gap = abs(x - lv[i])
            if n == n_top and gap > spacing[i] / 4:
                raise MatchingError(
                    f"limit zero {ctx.mp.nstr(lv[i], 12)}: nearest x* at n = {n} is {ctx.mp.nstr(gap, 3)} "
                    f"away, beyond 25% of the spacing {ctx.mp.nstr(spacing[i], 3)}")
            rows.append(ConvergenceRow(idx, n, x, lv[i], gap))
    rows.sort(key=lambda r: (r.zero_index, r.n))
    return rows


def _census_counts(f, radius, ctx, strip):
    """(nonreal zeros, negative real zeros, zeros) for the square of half-width ``radius``."""
    upper = Rect(-radius, radius, strip, radius)
    lower = Rect(-radius, radius, -radius, -strip)
    nonreal = []
    for box in (upper, lower):
        if count_zeros_rectangle(f, box, ctx):
            nonreal += find_zeros_in_box(f, box, ctx)
    negative = real_axis_zero_scan(f, (-radius, 0), 512, ctx)
    return nonreal, negative


def imaginary_zero_census(alpha, q, search_box: Rect | None, ctx: NumericContext,
                          kappa_value=1, strip=None, max_doublings: int = 6) -> ZeroCensus:
    """Count the purely imaginary and nonreal ``w``-zeros of ``w**(1-alpha) J^(2)_{alpha-1}(w (1-q); q)``.

    Works on ``Phi(z) = _0phi_1(-; q**alpha; q, -kappa z (q-1)**2 q**alpha)``
    with ``w = 2 sqrt(z)``.  Nonreal zeros are counted in the half boxes
    ``|Im z| >= strip`` by the argument principle and located by subdivision;
    negative real zeros by a sign-change scan.  The square search region
    (half-width 64 unless ``search_box`` is given) doubles until both counts
    are unchanged under doubling.
    """
    mp = ctx.mp
    alpha = to_real(alpha, ctx)
    if strip is None:
        strip = mp.mpf("1e-3")

    def f(z, c):
        return limit_fn_z(alpha, kappa_value, z, q, c)

    if search_box is not None:
        radius = max(abs(search_box.x0), abs(search_box.x1), abs(search_box.y0), abs(search_box.y1))
    else:
        radius = 64
    prev = None
    for _ in range(max_doublings):
        nonreal, negative = _census_counts(f, radius, ctx, strip)
        cur = (len(nonreal), len(negative))
        if prev is not None and cur == prev[0]:
            nonreal, negative = prev[1]
            radius = prev[2]
            break
        prev = (cur, (nonreal, negative), radius)
        radius *= 2
    else:
        raise BoxInstabilityError(f"zero counts still changing at half-width {radius}")
    amb = sum(1 for r in nonreal + negative if r.ambiguous)
    boxes = (f"nonreal: [-{radius},{radius}]x[{mp.nstr(strip, 3)},{radius}] and mirror; "
             f"negative axis: [-{radius},0]; stable under doubling")
    zeros = tuple(sorted(nonreal + negative, key=lambda r: sort_key(r.value)))
    if any(r.classification != COMPLEX for r in nonreal):
        amb += 1
    return ZeroCensus(alpha=alpha, q=q, total_nonreal_w=2 * (len(nonreal) + len(negative)),
                      purely_imaginary_w=2 * len(negative), negative_real_z=len(negative),
                      nonreal_z=len(nonreal), boxes_used=boxes, zeros=zeros, ambiguous=amb)


def experiment_limit_function(cfg: ExperimentConfig, ctx: NumericContext):
    """Handle ``(z, ctx) -> Phi(z)`` of an experiment (its own ``kappa``)."""
    return _limit_fn(cfg.family, ctx)
