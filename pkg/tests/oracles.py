"""Naive, independent reference computations used to pin fixture values.

Everything here is deliberately written the dumb way: digit strings via
format(n, 'b'), inverses via pow(n, -1, q), plain float sums, np.convolve
for exact integer convolutions.  Nothing imports the autoexp package.
"""

import cmath
import math

import numpy as np

TWO_PI_I = 2j * math.pi


def evil(n):
    """True iff the binary digit sum of n is even."""
    return bin(n).count("1") % 2 == 0


def tm_sign(n):
    return -1 if bin(n).count("1") % 2 else 1


def e(phase_num, modulus):
    return cmath.exp(TWO_PI_I * phase_num / modulus)


def inv_phase(n, q):
    """Phase numerator of e_q(1/n), or None at a pole."""
    if math.gcd(n, q) != 1:
        return None
    return pow(n, -1, q)


# ---------------------------------------------------------------------------
# incomplete sums


def weighted_tm_inv_sum(q, y, x):
    """sum over y < n <= y+x, n evil, of e((1/n mod q)/q)."""
    total = 0.0 + 0.0j
    for n in range(y + 1, y + x + 1):
        if not evil(n):
            continue
        a = inv_phase(n, q)
        if a is None:
            continue
        total += e(a, q)
    return total


def correlation_inv(q, x, y, h, s, a):
    """sum over y < n <= y+x, n = a mod s, of g(n) * conj(g(n+h)),
    g(n) = e_q(1/n)."""
    total = 0.0 + 0.0j
    for n in range(y + 1, y + x + 1):
        if n % s != a % s:
            continue
        u = inv_phase(n, q)
        v = inv_phase(n + h, q)
        if u is None or v is None:
            continue
        total += e(u, q) * e(v, q).conjugate()
    return total


def difference_inv_sum(q, r, y, x, s, a):
    """sum of e_q(g(n)) over the progression, g = 1/(X+r) - 1/X = -r/(X^2+rX)."""
    total = 0.0 + 0.0j
    for n in range(y + 1, y + x + 1):
        if n % s != a % s:
            continue
        den = n * n + r * n
        if math.gcd(den, q) != 1:
            continue
        total += e((-r) * pow(den, -1, q) % q, q)
    return total


# ---------------------------------------------------------------------------
# block_11 synchronization failures


_B11 = {
    (0, "0"): 0, (0, "1"): 1,
    (1, "0"): 0, (1, "1"): 2,
    (2, "0"): 2, (2, "1"): 2,
}


def b11_walk(state, word):
    for ch in word:
        state = _B11[(state, ch)]
    return state


def sync_failure_counts_b11(x, lams):
    """count of n in (0, x] where some start state reads n and n-truncated
    to different end states, for each lambda in lams."""
    full = []
    for n in range(1, x + 1):
        w = format(n, "b")
        full.append((b11_walk(0, w), b11_walk(1, w), b11_walk(2, w)))
    out = {}
    for lam in lams:
        mod = 2 ** lam
        cnt = 0
        for n in range(1, x + 1):
            m = n % mod
            wt = format(m, "b") if m else ""
            te = (b11_walk(0, wt), b11_walk(1, wt), b11_walk(2, wt))
            if te != full[n - 1]:
                cnt += 1
        out[lam] = cnt
    return out


# ---------------------------------------------------------------------------
# carry-property violations for the Thue-Morse sign cocycle


def carry_violation_counts_tm(lam, alpha, rhos, rs):
    """count of l in [0, 2^lam) admitting (n1, n2) in [0, 2^alpha)^2 with
    f(B)f(A) != f_t(B)f_t(A), f = tm_sign, f_t = tm_sign of (arg mod 2^(alpha+rho)),
    A = l*2^alpha + n1 + r, B = A + n2."""
    ka = 2 ** alpha
    out = {}
    for r in rs:
        for rho in rhos:
            mod = 2 ** (alpha + rho)
            cnt = 0
            for l in range(2 ** lam):
                base = l * ka + r
                bad = False
                for n1 in range(ka):
                    A = base + n1
                    fa = tm_sign(A) * tm_sign(A % mod)
                    for n2 in range(ka):
                        B = A + n2
                        if tm_sign(B) * tm_sign(B % mod) != fa:
                            bad = True
                            break
                    if bad:
                        break
                cnt += bad
            out[(r, rho)] = cnt
    return out


# ---------------------------------------------------------------------------
# congruence counting (S = evil numbers, f_j = 1/X)


def histogram_evil_inv(q):
    """counts[m] = #{n in [1,q] evil, gcd(n,q)=1, 1/n = m mod q}, support size."""
    h = [0] * q
    support = 0
    for n in range(1, q + 1):
        if not evil(n) or math.gcd(n, q) != 1:
            continue
        h[pow(n, -1, q)] += 1
        support += 1
    return h, support


def cyclic_convolve_int(h1, h2):
    q = len(h1)
    lin = np.convolve(np.asarray(h1, dtype=np.int64), np.asarray(h2, dtype=np.int64))
    out = lin[:q].copy()
    out[: len(lin) - q] += lin[q:]
    return [int(v) for v in out]


def congruence_count_evil_inv(q, m, r=3):
    h, support = histogram_evil_inv(q)
    conv = h
    for _ in range(r - 1):
        conv = cyclic_convolve_int(conv, h)
    return conv[m % q], support


def brute_congruence_evil_inv(q, m, r=3):
    vals = [pow(n, -1, q) for n in range(1, q + 1)
            if evil(n) and math.gcd(n, q) == 1]
    if r != 3:
        raise ValueError("oracle only does r=3")
    cnt = 0
    for a in vals:
        for b in vals:
            ab = a + b
            for c in vals:
                if (ab + c) % q == m:
                    cnt += 1
    return cnt
