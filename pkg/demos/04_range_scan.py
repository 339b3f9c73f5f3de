#!/usr/bin/env python3
"""Incomplete sums over automatic sequences in the square-root range.

For x = ceil(q^0.75), the weighted sum of the evil-number indicator against
e((1/n mod q)/q) is already far below the trivial bound x; the report rows
carry the reference envelope (1/q1 + q^2/(q1 x^2))^c.
"""

from autoexp import parse_rational_function, pv_range_scan, thue_morse_even

tm = thue_morse_even()
f = parse_rational_function("1/X")
for policy in ("0", "q"):
    rep = pv_range_scan(tm, f, [1009, 10007, 100003], theta=0.75, y=policy)
    print(f"y policy = {policy}:")
    print("  " + ",".join(rep.columns))
    for row in rep.rows:
        print("  " + ",".join(f"{v:.6g}" if isinstance(v, float) else str(v)
                              for v in row))
print("\n(plot-ready CSV comes from: autoexp preset pv-thue-morse --run)")
