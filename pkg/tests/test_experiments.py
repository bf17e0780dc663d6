from dataclasses import replace
from fractions import Fraction

import pytest

from conftest import cached_census, cached_limit_zeros, cached_table, published_complex
from qmh.errors import DomainError, MatchingError
from qmh.experiments import (
    ZeroCensus,
    builtin_experiment,
    convergence_table,
    imaginary_zero_census,
    scaled_zeros,
)
from qmh.mehler import scaled_polynomial
from qmh.roots import COMPLEX, NEGATIVE_REAL, POSITIVE_REAL


def rows_for(table, z, tol=1e-6):
    """Rows of the zero closest to ``z``."""
    best = min({r.zero_index: r.matched_limit_zero for r in table}.items(), key=lambda kv: abs(kv[1] - z))
    assert abs(best[1] - z) < tol
    return sorted((r for r in table if r.zero_index == best[0]), key=lambda r: r.n)


# configurations

@pytest.mark.parametrize("exp_id,alpha", [(1, 1), (2, Fraction(-51, 100)), (3, Fraction(-78, 10)),
                                          (4, Fraction(-88, 10)), (5, Fraction(-78, 10))])
def test_builtin_parameters(exp_id, alpha):
    fam = builtin_experiment(exp_id).family
    assert fam.alpha == alpha
    assert fam.q == (Fraction(9, 10) if exp_id == 5 else Fraction(1, 2))
    assert fam.s == 3
    assert fam.upper == ((3, 6), (Fraction(5, 4), (Fraction(-2, 3), 2)))
    assert fam.lower == ((Fraction(4, 3), (2, -3)), (Fraction(5, 6), 1))


def test_builtin_defaults():
    assert builtin_experiment(1).n_values == (10, 20, 40)
    assert builtin_experiment(1).scan_window == ((0, 60), None)
    interval, box = builtin_experiment(3).scan_window
    assert interval == (-40, 0) and (box.x0, box.x1, box.y0, box.y1) == (-60, 400, -120, 120)


@pytest.mark.parametrize("bad", [0, 6, -1])
def test_builtin_rejects_unknown_id(bad):
    with pytest.raises(DomainError):
        builtin_experiment(bad)


# scaled zeros

def test_scaled_zero_degree_one(ctx):
    fam = builtin_experiment(1).family
    (r,) = scaled_zeros(fam, 1, ctx)
    c = scaled_polynomial(fam, 1, ctx).coefficients
    assert abs(r.value + c[0] / c[1]) < 1e-70


@pytest.mark.parametrize("exp_id,want", [(1, ("1.191320585494", "-1.806507624485e-15")),
                                         (2, ("-0.257443205893", "3.345689303361e-16"))])
def test_scaled_zeros_contain_published_value(ctx, exp_id, want):
    zs = [r.value for r in scaled_zeros(builtin_experiment(exp_id).family, 40, ctx)]
    target = published_complex(ctx.mp, want)
    assert min(abs(z - target) for z in zs) < 1e-11


# limit zeros and tables

def test_experiment_two_negative_zero_classified():
    zs = cached_limit_zeros(2)
    assert [r.classification for r in zs] == [NEGATIVE_REAL, POSITIVE_REAL, POSITIVE_REAL]


def test_limit_zeros_conjugate_closed(ctx):
    for exp_id in (3, 4, 5):
        zs = [r.value for r in cached_limit_zeros(exp_id)]
        for z in zs:
            if z.imag != 0:
                assert min(abs(w - ctx.mp.conj(z)) for w in zs) < 1e-40


def test_experiment_one_first_zero_gaps():
    rows = rows_for(cached_table(1), 1.191320585443)
    gaps = [float(r.gap) for r in rows]
    assert [r.n for r in rows] == [10, 20, 40]
    assert 1e-3 < gaps[0] < 3e-3 and 3e-6 < gaps[1] < 8e-6 and 3e-11 < gaps[2] < 8e-11


def test_experiment_four_large_zero(ctx):
    rows = rows_for(cached_table(4), 371.698707595280)
    x40 = rows[-1].x_star
    assert abs(x40 - published_complex(ctx.mp, ("371.698707738027", "-2.106396160012e-15"))) < 1e-9
    assert abs(rows[-1].matched_limit_zero - ctx.mpf("371.698707595280")) < 1e-10


def test_experiment_three_complex_zero_matched(ctx):
    z = published_complex(ctx.mp, ("-24.215268337780", "13.495244740537"))
    rows = rows_for(cached_table(3), z)
    assert [r.n for r in rows] == [10, 20, 40]
    assert rows[0].matched_limit_zero.imag > 0


@pytest.mark.parametrize("exp_id", [1, 2, 3, 4, 5])
def test_hurwitz_trend(exp_id):
    table = cached_table(exp_id)
    for idx in {r.zero_index for r in table}:
        gaps = [r.gap for r in sorted((r for r in table if r.zero_index == idx), key=lambda r: r.n)]
        assert all(a > b for a, b in zip(gaps, gaps[1:])), (exp_id, idx)
    for r in table:
        assert r.gap == abs(r.x_star - r.matched_limit_zero)


def test_slow_convergence_for_larger_q(ctx):
    third = rows_for(cached_table(3), published_complex(ctx.mp, ("-24.215268337780", "13.495244740537")))
    fifth = rows_for(cached_table(5), published_complex(ctx.mp, ("2.632871686846202", "3.803425181595050")))
    assert fifth[-1].n == third[-1].n == 40
    assert fifth[-1].gap > third[-1].gap


def test_rows_sorted_and_injective():
    table = cached_table(3)
    assert [(r.zero_index, r.n) for r in table] == sorted((r.zero_index, r.n) for r in table)
    for n in (10, 20, 40):
        xs = [r.x_star for r in table if r.n == n]
        assert len(xs) == len(set((x.real, x.imag) for x in xs))


def test_matching_errors(ctx):
    cfg = builtin_experiment(1)
    limit = list(cached_limit_zeros(1))
    with pytest.raises(MatchingError):
        convergence_table(cfg, [99], ctx, limit=limit)
    # two roots cannot serve three limit zeros
    with pytest.raises(MatchingError):
        convergence_table(replace(cfg, n_values=(2,)), None, ctx, limit=limit)
    # at n = 3 the third x* (about 90.9) is beyond a quarter of the zero spacing
    with pytest.raises(MatchingError):
        convergence_table(replace(cfg, n_values=(3,)), [3], ctx, limit=limit)


# census

def test_census_positive_alpha_has_only_positive_zeros(ctx):
    c = imaginary_zero_census(1, Fraction(1, 2), None, ctx)
    assert (c.total_nonreal_w, c.purely_imaginary_w, c.negative_real_z, c.nonreal_z) == (0, 0, 0, 0)


def test_census_parity_and_closure(ctx):
    c = cached_census(Fraction(-78, 10), Fraction(1, 2))
    assert c.purely_imaginary_w % 2 == 0
    assert c.purely_imaginary_w == 2 * c.negative_real_z
    nonreal = [r.value for r in c.zeros if r.classification == COMPLEX]
    assert len(nonreal) == c.nonreal_z
    for z in nonreal:
        assert min(abs(w - ctx.mp.conj(z)) for w in nonreal) < 1e-40
    assert "stable under doubling" in c.boxes_used


def test_census_invariant_enforced():
    with pytest.raises(ValueError):
        ZeroCensus(alpha=1, q=0.5, total_nonreal_w=4, purely_imaginary_w=2, negative_real_z=2,
                   nonreal_z=0, boxes_used="")
