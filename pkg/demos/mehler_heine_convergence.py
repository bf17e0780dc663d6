"""Watch the scaled polynomials converge to their limit on the unit circle.

Prints the sup-norm gap on 16 points of |z| = 1 for every harness family,
under both scalings, for n = 10, 20, 40.

Run with ``python3 demos/mehler_heine_convergence.py``.
"""

from qmh import make_context, mh_limit, qn_limit, qn_scaled_polynomial, scaled_polynomial
from qmh.mehler import families_for_harness

ctx = make_context(192)
mp = ctx.mp
circle = [mp.expj(2 * mp.pi * j / 16) for j in range(16)]

for fam in families_for_harness(ctx):
    print(f"alpha={fam.alpha}, q={fam.q}, {len(fam.upper)} upper / {len(fam.lower)} lower shifts")
    for label, poly, limit in (("q-power scaling", scaled_polynomial, mh_limit),
                               ("q-number scaling", qn_scaled_polynomial, qn_limit)):
        gaps = []
        for n in (10, 20, 40):
            p = poly(fam, n, ctx)
            gaps.append(max(abs(p(z, ctx) - limit(fam, z, ctx)) for z in circle))
        print(f"  {label:17s} " + "  ".join(f"n={n}: {float(g):.2e}" for n, g in zip((10, 20, 40), gaps)))
