"""Zero location for polynomials and entire functions.

* :func:`solve_all_roots` -- all roots of a complex polynomial (Aberth-Ehrlich).
* :func:`real_axis_zero_scan` -- sign-change scan plus polishing on a real interval.
* :func:`count_zeros_rectangle` -- argument principle on an axis-aligned box.
* :func:`refine_newton` -- Newton polishing with a central-difference derivative.
* :func:`find_zeros_in_box` -- box subdivision driven by the zero count.

Scalar function handles take ``(z, ctx)`` and return an mpmath number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import BoundaryZeroError, ConvergenceError, DomainError
from .numerics import NumericContext, to_hp, to_real

__all__ = [
    "ZeroRecord",
    "Rect",
    "classify",
    "make_record",
    "solve_all_roots",
    "real_axis_zero_scan",
    "count_zeros_rectangle",
    "refine_newton",
    "find_zeros_in_box",
    "sort_key",
    "REAL_AXIS_TOL",
]

# |Im z| <= REAL_AXIS_TOL * (1 + |z|) counts as real.
REAL_AXIS_TOL = 1e-8

POSITIVE_REAL = "positive-real"
NEGATIVE_REAL = "negative-real"
COMPLEX = "complex-pair-member"

MAX_SWEEPS = 500


@dataclass(frozen=True)
class ZeroRecord:
    """A located zero.

    ``residual`` is ``|f(value)|`` (for polynomials, relative to
    ``sum |c_k| |value|**k``).  ``ambiguous`` marks values whose imaginary part
    lies within a factor 10 of the real-axis threshold.
    """

    value: object
    residual: object
    classification: str
    multiplicity: int = 1
    ambiguous: bool = False


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle ``[x0, x1] x [y0, y1]``."""

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise DomainError(f"degenerate rectangle {self}")

    def dilate(self, factor) -> "Rect":
        cx, cy = (self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2
        hw, hh = (self.x1 - self.x0) / 2 * factor, (self.y1 - self.y0) / 2 * factor
        return Rect(cx - hw, cx + hw, cy - hh, cy + hh)

    def contains(self, z) -> bool:
        return self.x0 < z.real < self.x1 and self.y0 < z.imag < self.y1

    def split(self) -> list["Rect"]:
        xm, ym = (self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2
        return [Rect(self.x0, xm, self.y0, ym), Rect(xm, self.x1, self.y0, ym),
                Rect(self.x0, xm, ym, self.y1), Rect(xm, self.x1, ym, self.y1)]

    @property
    def diameter(self):
        return math.hypot(float(self.x1 - self.x0), float(self.y1 - self.y0))


def sort_key(z):
    return (z.real, z.imag)


def classify(z, tol=REAL_AXIS_TOL):
    """Return ``(classification, ambiguous)`` for a zero ``z``."""
    bound = tol * (1 + abs(z))
    im = abs(z.imag)
    if im <= bound:
        return (NEGATIVE_REAL if z.real < 0 else POSITIVE_REAL), False
    return COMPLEX, im <= 10 * bound


def make_record(z, residual, multiplicity=1, tol=REAL_AXIS_TOL) -> ZeroRecord:
    cls, amb = classify(z, tol)
    return ZeroRecord(z, residual, cls, multiplicity, amb)


# Polynomial roots


def _horner_with_derivative(coeffs, z):
    """``(p(z), p'(z))`` for ascending coefficients."""
    p = coeffs[-1]
    dp = p * 0
    for c in coeffs[-2::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _newton_polygon_start(coeffs, ctx):
    """Initial iterates on circles whose radii come from the Newton polygon.

    The upper convex hull of ``(k, log|c_k|)`` gives, per edge ``i -> j``,
    ``j - i`` roots of modulus about ``(|c_i| / |c_j|)**(1/(j-i))``.
    """
    mp = ctx.mp
    n = len(coeffs) - 1
    pts = [(k, float(mp.log(abs(c))) if c != 0 else -math.inf) for k, c in enumerate(coeffs)]
    hull = []
    for p in pts:
        if p[1] == -math.inf:
            continue
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) <= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    starts = []
    sigma = 0.7
    for (i, yi), (j, yj) in zip(hull, hull[1:]):
        m = j - i
        radius = mp.exp(mp.mpf(yi - yj) / m)
        for t in range(m):
            angle = 2 * mp.pi * t / m + 2 * mp.pi * i / n + sigma
            starts.append(radius * mp.expjpi(angle / mp.pi))
    # zero low-order coefficients give roots at the origin
    lead_zero = hull[0][0] if hull else 0
    starts = [mp.mpc(0)] * lead_zero + starts
    return starts


def solve_all_roots(p, ctx: NumericContext, residual_tol=None) -> list[ZeroRecord]:
    """All roots of a polynomial, counted with multiplicity.

    Parameters
    ----------
    p : ScaledPolynomial or sequence
        Polynomial, or its coefficients in ascending powers.
    residual_tol : real, optional
        Bound on the relative residual ``|p(z)| / sum |c_k| |z|**k`` each root must meet;
        defaults to ``2**(-precision_bits/2)``.

    Returns
    -------
    list of ZeroRecord
        Sorted by ``(Re, Im)``.

    Notes
    -----
    Aberth-Ehrlich iteration in a fixed serial (Gauss-Seidel) sweep order,
    starting from Newton-polygon radii.  A root is frozen once its correction
    drops below ``2**(-precision_bits/2) (1 + |z|)``.
    """
    mp = ctx.mp
    coeffs = tuple(to_hp(c, ctx) for c in getattr(p, "coefficients", p))
    n = len(coeffs) - 1
    if n < 1:
        return []
    # tiny leading coefficients are legitimate (huge roots); only exact zero is rejected
    if coeffs[-1] == 0:
        raise DomainError("leading coefficient vanishes")
    tol = mp.ldexp(mp.mpf(1), -(ctx.precision_bits // 2))
    if residual_tol is None:
        residual_tol = tol
    work = ctx.elevated(16)
    wmp = work.mp
    wc = [to_hp(c, work) for c in coeffs]
    lead_zeros = 0
    while wc[lead_zeros] == 0:
        lead_zeros += 1
    core = wc[lead_zeros:]
    m = len(core) - 1
    z = [to_hp(s, work) for s in _newton_polygon_start(core, work)]
    done = [False] * m
    for sweep in range(MAX_SWEEPS):
        for i in range(m):
            if done[i]:
                continue
            zi = z[i]
            val, der = _horner_with_derivative(core, zi)
            if val == 0:
                done[i] = True
                continue
            ratio = val / der if der != 0 else wmp.mpc(wmp.inf)
            rep = wmp.mpc(0)
            for j in range(m):
                if j != i:
                    rep += 1 / (zi - z[j])
            w = ratio / (1 - ratio * rep)
            z[i] = zi - w
            if abs(w) < tol * (1 + abs(z[i])):
                done[i] = True
        if all(done):
            break
    else:
        best = sorted((to_hp(v, ctx) for v in z), key=sort_key)
        raise ConvergenceError(f"Aberth iteration did not converge in {MAX_SWEEPS} sweeps",
                               best=best)
    roots = [wmp.mpc(0)] * lead_zeros + z
    records = []
    for r in roots:
        val, _ = _horner_with_derivative(wc, r)
        size = sum(abs(c) * abs(r) ** k for k, c in enumerate(wc))
        res = abs(val) / size if val != 0 else wmp.mpf(0)
        if res > residual_tol:
            raise ConvergenceError(f"root {wmp.nstr(r, 15)} has residual {wmp.nstr(res, 3)}",
                                   best=roots)
        records.append((to_hp(r, ctx), to_real(res, ctx)))
    records.sort(key=lambda t: sort_key(t[0]))
    # residual-cluster merging: multiplicity = size of the cluster of coincident roots
    out = []
    cluster_tol = mp.ldexp(mp.mpf(1), -(ctx.precision_bits // 8))
    for r, res in records:
        mult = sum(1 for s, _ in records if abs(s - r) <= cluster_tol * (1 + abs(r)))
        out.append(make_record(r, res, mult))
    return out


# Entire functions


def _eval(f, z, ctx):
    return to_hp(f(z, ctx), ctx)


def refine_newton(f: Callable, z0, ctx: NumericContext, max_iter: int = 100) -> ZeroRecord:
    """Polish ``z0`` onto a zero of ``f`` by Newton iteration.

    The derivative is a central difference with step ``2**(-precision_bits/3) (1 + |z|)``.
    Converged when ``|step| < 2**(-precision_bits/2) (1 + |z|)``.
    """
    mp = ctx.mp
    z = to_hp(z0, ctx)
    start = abs(z)
    h0 = mp.ldexp(mp.mpf(1), -(ctx.precision_bits // 3))
    tol = mp.ldexp(mp.mpf(1), -(ctx.precision_bits // 2))
    for _ in range(max_iter):
        fz = _eval(f, z, ctx)
        if fz == 0:
            return make_record(z, mp.mpf(0))
        h = h0 * (1 + abs(z))
        d = (_eval(f, z + h, ctx) - _eval(f, z - h, ctx)) / (2 * h)
        if d == 0:
            raise ConvergenceError("zero derivative in Newton iteration", best=z)
        step = fz / d
        z -= step
        if abs(z) > 1e6 * (1 + start):
            raise ConvergenceError("Newton iteration diverged", best=z)
        if abs(step) < tol * (1 + abs(z)):
            return make_record(z, abs(_eval(f, z, ctx)))
    raise ConvergenceError(f"Newton iteration hit the {max_iter}-iteration cap", best=z)


def _real_value(f, x, ctx):
    return to_hp(f(x, ctx), ctx).real


def _scan_once(f, lo, hi, grid_points, ctx):
    mp = ctx.mp
    xs = [lo + (hi - lo) * mp.mpf(i) / grid_points for i in range(grid_points + 1)]
    vals = [_real_value(f, x, ctx) for x in xs]
    if any(v == 0 for v in vals):
        return None
    brackets = [(xs[i], xs[i + 1], vals[i], vals[i + 1])
                for i in range(grid_points) if (vals[i] < 0) != (vals[i + 1] < 0)]
    return brackets, max(abs(v) for v in vals)


def _polish_bracket(f, a, b, fa, fb, ctx):
    """Bisect to a small bracket, then Newton (kept inside the bracket)."""
    mp = ctx.mp
    for _ in range(40):
        m = (a + b) / 2
        fm = _real_value(f, m, ctx)
        if fm == 0:
            return m
        if (fa < 0) != (fm < 0):
            b, fb = m, fm
        else:
            a, fa = m, fm
    try:
        rec = refine_newton(f, (a + b) / 2, ctx)
    except ConvergenceError:
        rec = None
    if rec is not None and a - (b - a) <= rec.value.real <= b + (b - a):
        return rec.value.real
    while b - a > mp.ldexp(abs(a) + abs(b) + 1, -(ctx.precision_bits // 2)):
        m = (a + b) / 2
        fm = _real_value(f, m, ctx)
        if fm == 0:
            return m
        if (fa < 0) != (fm < 0):
            b, fb = m, fm
        else:
            a, fa = m, fm
    return (a + b) / 2


def real_axis_zero_scan(f: Callable, interval, grid_points: int, ctx: NumericContext,
                        max_refinements: int = 8) -> list[ZeroRecord]:
    """Zeros of a real-on-the-real-axis function in ``[lo, hi]``.

    Sign changes on a uniform grid are polished by bisection and Newton.  The
    grid doubles until the zero count is unchanged across two refinements.  A
    grid node landing on a zero shifts the grid by a small irrational offset.
    """
    mp = ctx.mp
    lo, hi = (to_real(v, ctx) for v in interval)
    if not lo < hi:
        raise DomainError(f"empty interval [{lo}, {hi}]")
    counts = []
    points = grid_points
    result = None
    for _ in range(max_refinements):
        scan = _scan_once(f, lo, hi, points, ctx)
        if scan is None:
            shift = (hi - lo) / points * (mp.sqrt(2) - 1) / 7
            lo_s, hi_s = lo - shift, hi - shift
            scan = _scan_once(f, lo_s, hi_s, points, ctx)
            if scan is None:
                raise BoundaryZeroError("grid node coincides with a zero twice")
        brackets, _ = scan
        counts.append(len(brackets))
        result = brackets
        if len(counts) >= 3 and counts[-1] == counts[-2] == counts[-3]:
            break
        points *= 2
    zeros = []
    for a, b, fa, fb in result:
        x = _polish_bracket(f, a, b, fa, fb, ctx)
        if lo <= x <= hi:
            zeros.append(make_record(mp.mpc(x), abs(to_hp(f(x, ctx), ctx))))
    zeros.sort(key=lambda r: sort_key(r.value))
    return zeros


def _boundary(rect: Rect, ctx):
    mp = ctx.mp
    c = [mp.mpc(rect.x0, rect.y0), mp.mpc(rect.x1, rect.y0),
         mp.mpc(rect.x1, rect.y1), mp.mpc(rect.x0, rect.y1)]
    return list(zip(c, c[1:] + c[:1]))


def _winding(f, rect: Rect, ctx, samples_per_edge: int, max_depth: int):
    """Total phase change of ``f`` along the boundary divided by 2 pi."""
    mp = ctx.mp
    quarter = mp.pi / 4
    total = mp.mpf(0)
    floor = None
    for a, b in _boundary(rect, ctx):
        pts = [a + (b - a) * mp.mpf(i) / samples_per_edge for i in range(samples_per_edge + 1)]
        vals = [_eval(f, p, ctx) for p in pts]
        scale = max(abs(v) for v in vals)
        floor = mp.ldexp(scale, -(ctx.precision_bits // 2)) if floor is None else max(
            floor, mp.ldexp(scale, -(ctx.precision_bits // 2)))
        stack = [(pts[i], vals[i], pts[i + 1], vals[i + 1], 0)
                 for i in range(samples_per_edge)][::-1]
        while stack:
            p0, v0, p1, v1, depth = stack.pop()
            if v0 == 0 or v1 == 0 or abs(v0) < floor or abs(v1) < floor:
                raise BoundaryZeroError("function vanishes on the contour")
            d = mp.arg(v1 / v0)
            if abs(d) < quarter:
                total += d
                continue
            if depth >= max_depth:
                raise BoundaryZeroError("phase tracking failed to resolve a boundary segment")
            pm = (p0 + p1) / 2
            vm = _eval(f, pm, ctx)
            stack.append((pm, vm, p1, v1, depth + 1))
            stack.append((p0, v0, pm, vm, depth + 1))
    w = total / (2 * mp.pi)
    k = int(mp.nint(w))
    if abs(w - k) > mp.mpf("1e-6"):
        raise BoundaryZeroError(f"winding number {mp.nstr(w, 10)} is not an integer")
    return k


def count_zeros_rectangle(f: Callable, rect, ctx: NumericContext, samples_per_edge: int = 16,
                          max_dilations: int = 8, max_depth: int = 40) -> int:
    """Number of zeros of analytic ``f`` inside ``rect`` (argument principle).

    Consecutive boundary samples are bisected until their phase increment is
    below ``pi/4``.  If ``f`` (numerically) vanishes on the boundary, the
    rectangle is dilated by 1% and the count retried, at most ``max_dilations``
    times.
    """
    rect = rect if isinstance(rect, Rect) else Rect(*rect)
    last = None
    for _ in range(max_dilations + 1):
        try:
            return _winding(f, rect, ctx, samples_per_edge, max_depth)
        except BoundaryZeroError as exc:
            last = exc
            rect = rect.dilate(1.01)
    raise BoundaryZeroError(f"boundary zero unresolved after {max_dilations} dilations: {last}")


def find_zeros_in_box(f: Callable, rect, ctx: NumericContext, min_size=1e-3,
                      seeds: Sequence = ()) -> list[ZeroRecord]:
    """Locate every zero of ``f`` inside ``rect``.

    The box is subdivided while it holds more than one zero (or its single
    zero is not captured by Newton from the box centre or from ``seeds``).
    """
    rect = rect if isinstance(rect, Rect) else Rect(*rect)
    mp = ctx.mp
    found: list[ZeroRecord] = []

    def accept(rec):
        for g in found:
            if abs(g.value - rec.value) <= mp.mpf("1e-20") * (1 + abs(rec.value)):
                return
        found.append(rec)

    def visit(box: Rect, count: int | None):
        if count is None:
            count = count_zeros_rectangle(f, box, ctx)
        if count == 0:
            return
        if count == 1:
            cands = [s for s in seeds if box.contains(to_hp(s, ctx))]
            cands.append(mp.mpc((box.x0 + box.x1) / 2, (box.y0 + box.y1) / 2))
            for c in cands:
                try:
                    rec = refine_newton(f, c, ctx)
                except ConvergenceError:
                    continue
                if box.contains(rec.value):
                    accept(rec)
                    return
        if box.diameter < min_size:
            raise ConvergenceError(f"could not isolate {count} zero(s) in {box}")
        subs = _split_avoiding_boundary_zeros(f, box, ctx)
        for sub, c in subs:
            visit(sub, c)

    visit(rect, None)
    found.sort(key=lambda r: sort_key(r.value))
    return found


def _split_avoiding_boundary_zeros(f, box: Rect, ctx):
    """Split ``box`` into four, nudging the cut lines off any zero."""
    last = None
    for shift in (0.0, 0.0137, -0.0291, 0.0419, -0.0577):
        xm = (box.x0 + box.x1) / 2 + shift * (box.x1 - box.x0)
        ym = (box.y0 + box.y1) / 2 + shift * (box.y1 - box.y0)
        subs = [Rect(box.x0, xm, box.y0, ym), Rect(xm, box.x1, box.y0, ym),
                Rect(box.x0, xm, ym, box.y1), Rect(xm, box.x1, ym, box.y1)]
        try:
            return [(s, _winding(f, s, ctx, 16, 40)) for s in subs]
        except BoundaryZeroError as exc:
            last = exc
    raise BoundaryZeroError(f"could not split {box} away from zeros: {last}")
