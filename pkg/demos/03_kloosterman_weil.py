#!/usr/bin/env python3
"""Complete exponential sums and the square-root cancellation they exhibit.

The complete sum of 1/X over a prime period is exactly -1; Kloosterman
sums aX + 1/X are real and sit below 2 sqrt(p).  check_weil reports the
observed ratio against sqrt(q (q, f')).
"""

import math

from autoexp import check_weil, complete_sum, parse_rational_function
from autoexp.presets import primes_upto

inv_x = parse_rational_function("1/X")
print("complete sums of 1/X (exact rational values):")
for p in (7, 101, 499):
    print(f"  q={p:4d}: {complete_sum(inv_x, p).exact_rational()}")

print("\nKloosterman sums X + a/X at p = 101:")
for a in (1, 2, 3):
    f = parse_rational_function(f"(X^2+{a})/X")
    z = complex(complete_sum(f, 101))
    print(f"  a={a}: S = {z.real:+.6f} {z.imag:+.1e}i   (2 sqrt p = "
          f"{2 * math.sqrt(101):.4f})")

print("\ncheck_weil ratios |S| / sqrt(q (q, f')):")
for fs in ("1/X", "(X^2+1)/X", "(X^3+2)/(X+1)"):
    f = parse_rational_function(fs)
    rows = [check_weil(f, p) for p in primes_upto(199) if p > 3]
    worst = max(rows, key=lambda r: r.ratio)
    print(f"  f = {fs:14s}: max ratio {worst.ratio:.3f} at q = {worst.q}")
