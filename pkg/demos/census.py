"""Count the nonreal zeros of the limit function for a negative alpha.

Zeros on the negative real axis of z correspond to purely imaginary zeros
w of the Bessel-form variable (z = w^2 up to scaling), which is why the
purely imaginary count is always twice the negative real count.

Run with ``python3 demos/census.py [alpha] [q]``, e.g. ``-78/10 1/2``.
"""

import sys
import time
from fractions import Fraction

from qmh import imaginary_zero_census, make_context

alpha = Fraction(sys.argv[1]) if len(sys.argv) > 1 else Fraction(-78, 10)
q = Fraction(sys.argv[2]) if len(sys.argv) > 2 else Fraction(1, 2)

t0 = time.perf_counter()
c = imaginary_zero_census(alpha, q, None, make_context(256))
print(f"alpha={alpha}, q={q}")
print(f"  nonreal w zeros:          {c.total_nonreal_w}")
print(f"  purely imaginary w zeros: {c.purely_imaginary_w}")
print(f"  negative real z zeros:    {c.negative_real_z}")
print(f"  nonreal z zeros:          {c.nonreal_z}")
print(f"  search: {c.boxes_used}")
print(f"  {time.perf_counter() - t0:.1f} s")
