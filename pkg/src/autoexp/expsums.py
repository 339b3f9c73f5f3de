"""Complete and incomplete exponential sums, correlations, and bound checkers.

Sums over rational-fraction phases are exact (phase histograms); complex
values appear only when a caller asks for them.  The check_* helpers compute
both sides of their bound and report ratios -- thresholds live in the
acceptance suite, except where the bound is an identity-level theorem
(geometric sums, van der Corput) and a violation means a genuine bug.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from .automata import Dfao
from .exact import Cyclotomic
from .modring import (FactoredModulus, RationalFunction, mod_inverse,
                      phase_numerators, rational_gcd, reduces_to_quadratic_poly,
                      shift_scale, squarefree_cofactor)


@dataclass(frozen=True)
class IntervalProgression:
    """{n : y < n <= y+x, n = a mod s}."""

    y: int
    x: int
    s: int = 1
    a: int = 0

    def __post_init__(self):
        if self.y < 0 or self.x < 1 or self.s < 1:
            raise ValueError("need y >= 0, x >= 1, s >= 1")
        if not 0 <= self.a < self.s:
            raise ValueError("residue must lie in [0, s)")

    @property
    def count(self) -> int:
        return (self.y + self.x - self.a) // self.s - (self.y - self.a) // self.s

    def values(self) -> np.ndarray:
        first = self.y + 1 + (self.a - (self.y + 1)) % self.s
        return np.arange(first, self.y + self.x + 1, self.s, dtype=np.int64)

    def __contains__(self, n: int) -> bool:
        return self.y < n <= self.y + self.x and n % self.s == self.a


def _fsum_complex(terms: Iterable[complex]) -> complex:
    ts = list(terms)
    return complex(math.fsum(t.real for t in ts), math.fsum(t.imag for t in ts))


def complete_sum(f: RationalFunction, q: Union[int, FactoredModulus]) -> Cyclotomic:
    """Exact sum of the fraction phases over one full period n mod q."""
    fq = FactoredModulus.of(q)
    qv = fq.value
    phases = phase_numerators(f, fq, np.arange(qv, dtype=np.int64))
    counts = np.bincount(phases[phases >= 0].astype(np.int64), minlength=qv)
    return Cyclotomic._from_counts(qv, counts.astype(np.int64))


def weighted_sum(dfao: Dfao, f: RationalFunction, q: Union[int, FactoredModulus],
                 region: IntervalProgression) -> Union[Cyclotomic, complex]:
    """Sum over the region of a_n times the fraction phase at n.

    Exact (Cyclotomic) when the automaton outputs are exact; complex otherwise.
    """
    fq = FactoredModulus.of(q)
    qv = fq.value
    ns = region.values()
    if ns.size == 0:
        return Cyclotomic.zero() if dfao.outputs_exact else 0j
    phases = phase_numerators(f, fq, ns)
    states = dfao.states_at(ns)
    if dfao.outputs_exact:
        key = states.astype(np.int64) * (qv + 1) + (phases + 1)
        uniq, cnt = np.unique(key, return_counts=True)
        pairs: List[Tuple[Fraction, Fraction]] = []
        for u, c in zip(uniq.tolist(), cnt.tolist()):
            st, ph = divmod(u, qv + 1)
            if ph == 0:
                continue
            term = dfao.outputs[st] * Fraction(c)
            for t, coeff in term.iter_terms():
                pairs.append(((t + Fraction(ph - 1, qv)) % 1, coeff))
        return Cyclotomic.from_terms(pairs)
    vals = np.array([complex(dfao.outputs[s]) for s in states])
    ang = 2.0 * np.pi * phases / qv
    z = np.where(phases >= 0, np.exp(1j * ang), 0j) * vals
    return _fsum_complex(z.tolist())


def correlation_sum(g: Callable[[int], object], x: int, y: int, h: int,
                    q: int, a: int) -> complex:
    """Two-point correlation sum of g(n) * conj(g(n+h)) over {y < n <= y+x,
    n = a mod q}."""
    region = IntervalProgression(y, x, q, a % q if q > 1 else 0)
    terms = []
    for n in region.values():
        terms.append(complex(g(int(n))) * complex(g(int(n) + h)).conjugate())
    return _fsum_complex(terms)


def difference_sum(f: RationalFunction, q: Union[int, FactoredModulus], r: int,
                   region: IntervalProgression) -> Cyclotomic:
    """Exact sum over the region of the phase of f(n+r) - f(n), built once
    symbolically and evaluated pointwise (zero where the symbolic difference
    fraction has a pole mod q)."""
    fq = FactoredModulus.of(q)
    qv = fq.value
    diff = shift_scale(f, 0, 1, r)
    ns = region.values()
    if ns.size == 0:
        return Cyclotomic.zero()
    phases = phase_numerators(diff, fq, ns)
    hist: Dict[int, int] = {}
    uniq, cnt = np.unique(phases, return_counts=True)
    for u, c in zip(uniq.tolist(), cnt.tolist()):
        if u >= 0:
            hist[u] = c
    return Cyclotomic.from_int_histogram(qv, hist)


# ---------------------------------------------------------------------------
# bound checkers


@dataclass
class WeilCheck:
    q: int
    sum_abs: float
    comparator: float
    ratio: float
    gcd_factor: int


def check_weil(f: RationalFunction, q: Union[int, FactoredModulus]) -> WeilCheck:
    """|complete sum| against sqrt(q * (q, f')) for squarefree q; ratio only,
    no pass/fail here."""
    fq = FactoredModulus.of(q)
    if not fq.is_squarefree:
        raise ValueError("modulus must be squarefree")
    s = abs(complete_sum(f, fq))
    gf = rational_gcd(fq, f.derivative())
    comparator = math.sqrt(fq.value * gf)
    return WeilCheck(fq.value, s, comparator, s / comparator, gf)


def check_gcd_lemma(f: RationalFunction, r: int, ell: int,
                    primes: Sequence[int]) -> List[dict]:
    """Violations of per-prime coprimality of f'(X+r) - f'(X) + ell.

    Primes failing the side conditions (p in Q_f, p | 2r, denominator of f or
    of the difference vanishing mod p) are skipped, matching the hypotheses.
    """
    if f.is_polynomial() and f.num.degree <= 2:
        raise ValueError("f must not be a polynomial of degree <= 2")
    d = f.derivative()
    gdiff = d.shift(r) - d + Fraction(ell)
    violations = []
    for p in primes:
        if (2 * r) % p == 0:
            continue
        if all(c % p == 0 for c in f.den.coeffs):
            continue
        if reduces_to_quadratic_poly(f, p):
            continue
        try:
            gv = rational_gcd(p, gdiff)
        except ValueError:
            continue
        if gv > 1:
            violations.append({"p": p, "gcd": gv, "r": r, "ell": ell})
    return violations


@dataclass
class QuadGeometricCheck:
    q: int
    r: int
    s: int
    x: int
    lhs: float
    comparator: float


def check_quadratic_geometric(f: RationalFunction, q: Union[int, FactoredModulus],
                              r: int, s: int, a: int, y: int,
                              x: int) -> QuadGeometricCheck:
    """Geometric-sum bound for quadratic f = (u/v) X^2: the difference sum over
    the progression is at most min(x/s + 1, 1/||2 u v^-1 r s / q||).

    Raises ArithmeticError on violation -- the bound is a theorem.
    """
    fq = FactoredModulus.of(q)
    qv = fq.value
    if (f.num.degree != 2 or any(f.num.coeffs[:2]) or f.den.degree != 0):
        raise ValueError("f must be (u/v) X^2")
    u = f.num.coeffs[2]
    v = f.den.coeffs[0]
    if math.gcd(u * qv, v) != 1:
        raise ValueError("need gcd(u*q, v) = 1")
    region = IntervalProgression(y, x, s, a % s)
    lhs = abs(difference_sum(f, fq, r, region))
    tnum = 2 * u * mod_inverse(v, qv) % qv * (r % qv) % qv * (s % qv) % qv
    dist = min(tnum / qv, 1.0 - tnum / qv)
    comparator = x / s + 1.0
    if dist > 0:
        comparator = min(comparator, 1.0 / dist)
    if lhs > comparator * (1.0 + 1e-9):
        raise ArithmeticError(
            f"geometric bound violated: {lhs} > {comparator} at q={qv} r={r} s={s}")
    return QuadGeometricCheck(qv, r, s, x, lhs, comparator)


# ---------------------------------------------------------------------------
# range scans


@dataclass
class SweepReport:
    """Plot-ready tabular result; rows already sorted by the sweep key."""

    columns: Tuple[str, ...]
    rows: List[Tuple]
    metadata: Dict[str, object] = field(default_factory=dict)

    @staticmethod
    def _cell(v) -> str:
        if isinstance(v, float):
            return repr(v)
        return str(v)

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(self._cell(v) for v in row))
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "metadata": self.metadata,
            "columns": list(self.columns),
            "rows": [list(r) for r in self.rows],
        }


def _resolve_y(policy, q: int) -> int:
    if isinstance(policy, str):
        table = {"0": 0, "q": q, "10q": 10 * q}
        if policy not in table:
            raise ValueError(f"unknown y policy {policy!r}")
        return table[policy]
    if callable(policy):
        return int(policy(q))
    return int(policy)


def pv_range_scan(dfao: Dfao, f: RationalFunction, qs: Sequence[int], theta: float,
                  y: Union[int, str, Callable[[int], int]] = 0,
                  c_display: float = 1.0 / 32.0) -> SweepReport:
    """For each modulus: x = ceil(q^theta), the weighted-sum ratio |S|/x over
    (y, y+x], and the reference envelope (1/q1 + q^2/(q1 x^2))^c."""
    rows = []
    for q in sorted(qs):
        fq = FactoredModulus.of(q)
        x = math.ceil(q ** theta)
        yv = _resolve_y(y, q)
        region = IntervalProgression(yv, x)
        s_abs = abs(weighted_sum(dfao, f, fq, region))
        q1 = squarefree_cofactor(f, fq, dfao.base)
        bound = (1.0 / q1 + q * q / (q1 * float(x) * x)) ** c_display
        rows.append((q, x, yv, s_abs, s_abs / x, q1, bound))
    return SweepReport(
        columns=("q", "x", "y", "abs", "ratio", "q1", "bound"),
        rows=rows,
        metadata={"f": str(f), "automaton": dfao.name or "dfao",
                  "theta": theta, "c_display": c_display},
    )
