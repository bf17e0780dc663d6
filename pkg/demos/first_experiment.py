"""Reproduce the first zero experiment and print the convergence table.

For each positive zero of the q-Bessel-type limit function, the scaled
polynomial zeros x* at n = 10, 20, 40 approach it and the gap shrinks
geometrically.

Run with ``python3 demos/first_experiment.py``.
"""

from qmh import builtin_experiment, convergence_table, limit_zeros, make_context

ctx = make_context(256)
cfg = builtin_experiment(1)
print(f"family: alpha={cfg.family.alpha}, q={cfg.family.q}, n in {cfg.n_values}")

zeros = limit_zeros(cfg, ctx)
for i, z in enumerate(zeros, 1):
    print(f"limit zero {i}: {ctx.mp.nstr(z.value.real, 15)} ({z.classification})")

print()
print(f"{'k':>2} {'n':>3}  {'x* (real part)':>22}  {'gap':>10}")
for row in convergence_table(cfg, None, ctx, limit=zeros):
    print(f"{row.zero_index:>2} {row.n:>3}  {ctx.mp.nstr(row.x_star.real, 18):>22}  {float(row.gap):10.3e}")
