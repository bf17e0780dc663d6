import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import published_complex
from oracles import MP, poly_from_roots
from qmh.errors import BoundaryZeroError, ConvergenceError, DomainError
from qmh.experiments import builtin_experiment, experiment_limit_function, limit_zeros, scaled_zeros
from qmh.mehler import MHFamily, scaled_polynomial
from qmh.numerics import make_context
from qmh.roots import (
    COMPLEX,
    NEGATIVE_REAL,
    POSITIVE_REAL,
    Rect,
    classify,
    count_zeros_rectangle,
    find_zeros_in_box,
    real_axis_zero_scan,
    refine_newton,
    solve_all_roots,
)


def values(records):
    return [r.value for r in records]


def published_limits(published, exp_id):
    return [t["z_limit"] for t in published["tables"] if t["experiment"] == exp_id]


# polynomial roots

def test_solve_quadratic(ctx):
    got = values(solve_all_roots([-1, 0, 1], ctx))
    assert abs(got[0] + 1) < 1e-70 and abs(got[1] - 1) < 1e-70


def test_solve_linear(ctx):
    (r,) = solve_all_roots([1, 4], ctx)
    assert abs(r.value + ctx.mpf(1) / 4) < 1e-70
    assert r.classification == NEGATIVE_REAL


def test_solve_degree_eight_from_factors(ctx):
    rng = random.Random(8)
    roots = [complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(8)]
    got = values(solve_all_roots(poly_from_roots(roots), ctx))
    for r in roots:
        assert min(abs(MP.mpc(g) - r) for g in got) < MP.mpf(2) ** -100


def test_solve_rejects_zero_leading(ctx):
    with pytest.raises(DomainError):
        solve_all_roots([1, 2, 0], ctx)


def test_solve_constant_has_no_roots(ctx):
    assert solve_all_roots([3], ctx) == []


def test_solve_zero_roots_and_multiplicity(ctx):
    recs = solve_all_roots([0, 0, -1, 1], ctx)
    assert sorted(abs(r.value) < 1e-60 for r in recs) == [False, True, True]
    assert [r.multiplicity for r in recs if abs(r.value) < 1e-60] == [2, 2]


def test_output_sorted(ctx):
    recs = solve_all_roots(poly_from_roots([3, -2j, 1 + 1j, -5, 1 - 1j]), ctx)
    keys = [(r.value.real, r.value.imag) for r in recs]
    assert keys == sorted(keys)


@settings(max_examples=25)
@given(st.integers(2, 30), st.integers(0, 10 ** 6), st.booleans())
def test_residual_and_vieta(degree, seed, real_coeffs):
    ctx = make_context(256)
    rng = random.Random(seed)
    if real_coeffs:
        coeffs = [rng.uniform(-2, 2) for _ in range(degree + 1)]
    else:
        coeffs = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(degree + 1)]
    coeffs[-1] = coeffs[-1] or 1.0
    recs = solve_all_roots(coeffs, ctx)
    assert len(recs) == degree
    mp = ctx.mp
    c = [ctx.mpc(x) for x in coeffs]
    tol = mp.ldexp(1, -(ctx.precision_bits // 2))
    for r in recs:
        val = sum(ck * r.value ** k for k, ck in enumerate(c))
        assert abs(val) <= tol * sum(abs(ck) for ck in c) * max(1, abs(r.value)) ** degree
    total = sum(r.value for r in recs)
    want = -c[-2] / c[-1]
    assert abs(total - want) <= tol * max(1, abs(want), sum(abs(r.value) for r in recs))
    prod = mp.fprod(r.value for r in recs)
    want = (-1) ** degree * c[0] / c[-1]
    assert abs(prod - want) <= tol * max(abs(want), mp.fprod(abs(r.value) for r in recs))
    if real_coeffs:
        for r in recs:
            assert min(abs(s.value - mp.conj(r.value)) for s in recs) <= tol * (1 + abs(r.value))


def test_scaled_polynomial_roots_conjugate_closed(ctx):
    # the experiment families carry complex b, d and hence complex coefficients;
    # real shifts give real coefficients
    fam = MHFamily(alpha=Fraction(-39, 5), q=Fraction(1, 2), upper=[(3, 6)], lower=[(Fraction(5, 6), 1)])
    recs = solve_all_roots(scaled_polynomial(fam, 20, ctx), ctx)
    assert any(r.classification == COMPLEX for r in recs)
    for r in recs:
        assert min(abs(s.value - ctx.mp.conj(r.value)) for s in recs) < 1e-60 * (1 + abs(r.value))


def test_tiny_leading_coefficient(ctx):
    p = scaled_polynomial(builtin_experiment(1).family, 40, ctx)
    assert abs(p.coefficients[-1]) < 1e-300
    assert len(solve_all_roots(p, ctx)) == 40


# classification

def test_classify():
    mp = make_context(128).mp
    assert classify(mp.mpc(2, 1e-15))[0] == POSITIVE_REAL
    assert classify(mp.mpc(-2, -1e-15))[0] == NEGATIVE_REAL
    assert classify(mp.mpc(-2, 1))[0] == COMPLEX
    assert classify(mp.mpc(1, 5e-8)) == (COMPLEX, True)


# real-axis scan

def test_scan_linear(ctx):
    (r,) = real_axis_zero_scan(lambda z, c: c.mpc(z) - 2, (0, 5), 8, ctx)
    assert abs(r.value - 2) < 1e-60


def test_scan_grid_node_on_zero(ctx):
    # 2.5 is a node of the 8-point grid on [0, 5]
    (r,) = real_axis_zero_scan(lambda z, c: c.mpc(z) - 2.5, (0, 5), 8, ctx)
    assert abs(r.value - 2.5) < 1e-60


def test_scan_empty_interval(ctx):
    with pytest.raises(DomainError):
        real_axis_zero_scan(lambda z, c: z, (1, 1), 8, ctx)


@pytest.mark.parametrize("exp_id,interval", [(1, (0, 60)), (2, (-1, 20))])
def test_scan_experiment_limit_function(ctx, published, exp_id, interval):
    f = experiment_limit_function(builtin_experiment(exp_id), ctx)
    got = values(real_axis_zero_scan(f, interval, 64, ctx))
    want = [published_complex(ctx.mp, z) for z in published_limits(published, exp_id)]
    assert len(got) == len(want)
    for g, w in zip(got, want):
        assert abs(g - w) < 1e-10


# argument principle

def test_count_identity(ctx):
    assert count_zeros_rectangle(lambda z, c: z, Rect(-1, 1, -1, 1), ctx) == 1


def test_count_quadratic(ctx):
    assert count_zeros_rectangle(lambda z, c: z * z + 1, Rect(-2, 2, -2, 2), ctx) == 2
    assert count_zeros_rectangle(lambda z, c: z * z + 1, Rect(-2, 2, 0.5, 2), ctx) == 1


def test_count_dilates_off_boundary_zero(ctx):
    # the zero at 1 sits on the right edge
    assert count_zeros_rectangle(lambda z, c: z - 1, Rect(-1, 1, -1, 1), ctx) == 1


def test_count_boundary_zero_unresolved(ctx):
    with pytest.raises(BoundaryZeroError):
        count_zeros_rectangle(lambda z, c: z - 1, Rect(-1, 1, -1, 1), ctx, max_dilations=0)


def test_count_experiment_one_box(ctx):
    f = experiment_limit_function(builtin_experiment(1), ctx)
    assert count_zeros_rectangle(f, Rect(0.5, 2, -1, 1), ctx) == 1


def test_rect_validation():
    with pytest.raises(DomainError):
        Rect(1, 1, 0, 1)


@pytest.mark.parametrize("exp_id", [1, 2, 3, 4, 5])
def test_argument_principle_matches_located_zeros(ctx, exp_id):
    cfg = builtin_experiment(exp_id)
    f = experiment_limit_function(cfg, ctx)
    zs = values(limit_zeros(cfg, ctx))
    box = cfg.scan_box or Rect(cfg.scan_interval[0], cfg.scan_interval[1], -1, 1)
    inside = sum(1 for z in zs if box.contains(z))
    assert count_zeros_rectangle(f, box, ctx) == inside


def test_find_zeros_in_box(ctx):
    f = lambda z, c: (z - 1) * (z + 2j) * (z - 0.5 - 0.5j)  # noqa: E731
    got = values(find_zeros_in_box(f, Rect(-3, 3, -3, 3), ctx))
    want = [-2j, 0.5 + 0.5j, 1]
    assert len(got) == 3
    for g, w in zip(got, want):
        assert abs(g - w) < 1e-60


# Newton polishing

def test_newton_quadratic(ctx):
    r = refine_newton(lambda z, c: z * z - 1, 0.9, ctx)
    assert abs(r.value - 1) < 1e-70


def test_newton_divergence(ctx):
    with pytest.raises(ConvergenceError):
        refine_newton(lambda z, c: c.mp.exp(z), 0.0, ctx)


def test_newton_from_published_seed_experiment_one(ctx):
    f = experiment_limit_function(builtin_experiment(1), ctx)
    r = refine_newton(f, "1.191320585494", ctx)
    assert abs(r.value - ctx.mpf("1.191320585443")) < 1e-10


def test_newton_from_published_seed_experiment_three(ctx):
    f = experiment_limit_function(builtin_experiment(3), ctx)
    r = refine_newton(f, (ctx.mpf("-24.215268341967"), ctx.mpf("13.495244741513")), ctx)
    want = ctx.mp.mpc(ctx.mpf("-24.215268337780"), ctx.mpf("13.495244740537"))
    assert abs(r.value - want) < 1e-10
    assert r.classification == COMPLEX
