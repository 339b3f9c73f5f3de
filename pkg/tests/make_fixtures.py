"""Regenerate tests/fixtures/oracle_pins.json from the naive oracles.

Run from the repo root:  python tests/make_fixtures.py
Deterministic; takes a couple of minutes (the sync-failure oracle walks
every digit string the slow way on purpose).
"""

import json
import math
import pathlib
import time

import oracles

HERE = pathlib.Path(__file__).resolve().parent
OUT = HERE / "fixtures" / "oracle_pins.json"


def cplx(z):
    return {"re": z.real, "im": z.imag, "abs": abs(z)}


def main():
    t0 = time.time()
    pins = {}

    # Polya-Vinogradov range scan: thue_morse_even, f = 1/X, theta = 0.75
    scan = {}
    for q in (1009, 10007, 100003):
        x = math.ceil(q ** 0.75)
        per_y = {}
        for y in (0, q, 10 * q):
            s = oracles.weighted_tm_inv_sum(q, y, x)
            per_y[str(y)] = dict(cplx(s), x=x, ratio=abs(s) / x)
        scan[str(q)] = per_y
    pins["pv_scan_tm_inv"] = scan
    print(f"[{time.time()-t0:6.1f}s] pv scan done")

    # single-value pins for module examples
    pins["weighted_tm_inv_q1009_x1009"] = cplx(
        oracles.weighted_tm_inv_sum(1009, 0, 1009))
    pins["correlation_inv_q101_h5"] = cplx(
        oracles.correlation_inv(101, 101, 0, 5, 1, 0))
    pins["difference_inv_q35_r3_s2_a1_x70"] = cplx(
        oracles.difference_inv_sum(35, 3, 0, 70, 2, 1))
    s0 = oracles.weighted_tm_inv_sum(1009, 0, 100000)
    pins["weyl_s0_q1009_x100000"] = cplx(s0)
    # odious-complement stage magnitude for the same window
    tot = 0.0 + 0.0j
    for n in range(1, 100001):
        if oracles.evil(n):
            continue
        a = oracles.inv_phase(n, 1009)
        if a is not None:
            tot += oracles.e(a, 1009)
    pins["weyl_s1_odious_q1009_x100000"] = cplx(tot)
    print(f"[{time.time()-t0:6.1f}s] single pins done")

    # congruence counts: S = evil, f_j = 1/X, r = 3, m = 1
    cong = {}
    for q in (101, 1009, 10007):
        n_sol, support = oracles.congruence_count_evil_inv(q, 1, r=3)
        main_term = support ** 3 / q
        cong[str(q)] = {
            "N": n_sol,
            "support": support,
            "rel_err": n_sol / main_term - 1.0,
        }
    cong["brute_101"] = oracles.brute_congruence_evil_inv(101, 1, r=3)
    pins["congruence_evil_inv_m1"] = cong
    print(f"[{time.time()-t0:6.1f}s] congruence done")

    # carry-property violation counts (thue_morse, k=2, lam=10, alpha=3)
    carry = oracles.carry_violation_counts_tm(10, 3, rhos=range(2, 7),
                                              rs=(0, 1, 7))
    pins["carry_tm_lam10_alpha3"] = {
        f"r{r}_rho{rho}": c for (r, rho), c in carry.items()}
    print(f"[{time.time()-t0:6.1f}s] carry done")

    # synchronization failure counts (block_11, x = 2^16 and the x=1024 example)
    sync = oracles.sync_failure_counts_b11(2 ** 16, range(2, 11))
    pins["sync_block11_x65536"] = {str(l): c for l, c in sync.items()}
    pins["sync_block11_x1024_lam4"] = oracles.sync_failure_counts_b11(
        1024, [4])[4]
    print(f"[{time.time()-t0:6.1f}s] sync done")

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(pins, indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
