"""Exact complex arithmetic on finite sums of roots of unity.

A Cyclotomic value is a formal rational combination  sum_i c_i * e(t_i)
with e(t) = exp(2*pi*i*t), c_i in Q and t_i in Q mod 1.  Phases are
canonicalized into [0, 1/2) through e(t + 1/2) = -e(t), so products,
conjugates and sums built along different groupings of the same terms land
in the same representation; equality of representations is then meaningful
(it can never be spuriously true) and is exactly the "bit-for-bit" notion
the regrouping identities need.  Rational extraction uses Ramanujan sums
over Galois orbits (on the raw histogram for count-backed sums) and returns
None when the stored form does not decide the question.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

import numpy as np

Rational = Union[int, Fraction]

_HALF = Fraction(1, 2)
_TWO_PI = 2.0 * math.pi


def _trial_factor(n: int) -> dict:
    """Prime factorization by trial division (fine for the modest moduli here)."""
    out: dict = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _moebius(n: int) -> int:
    f = _trial_factor(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def _euler_phi(n: int) -> int:
    out = n
    for p in _trial_factor(n):
        out = out // p * (p - 1)
    return out


class Cyclotomic:
    """Immutable exact sum of rational multiples of roots of unity."""

    __slots__ = ("_terms", "_counts", "_counts_mod")

    def __init__(self, terms: Optional[dict] = None):
        # terms: phase Fraction in [0,1) -> nonzero Fraction coefficient,
        # already folded (no phase 0 other than the rational slot, no 1/2).
        self._terms = {} if terms is None else terms
        self._counts = None
        self._counts_mod = 0

    # -- construction -------------------------------------------------

    @staticmethod
    def zero() -> "Cyclotomic":
        return Cyclotomic({})

    @staticmethod
    def one() -> "Cyclotomic":
        return Cyclotomic({Fraction(0): Fraction(1)})

    @staticmethod
    def from_rational(c: Rational) -> "Cyclotomic":
        c = Fraction(c)
        return Cyclotomic({Fraction(0): c} if c else {})

    @staticmethod
    def from_phase(t: Rational, coeff: Rational = 1) -> "Cyclotomic":
        """coeff * e(t)."""
        out = Cyclotomic({})
        out._add_term(Fraction(t), Fraction(coeff))
        return out

    @staticmethod
    def root_of_unity(a: int, m: int) -> "Cyclotomic":
        """e(a/m)."""
        if m <= 0:
            raise ValueError("order must be positive")
        return Cyclotomic.from_phase(Fraction(a, m))

    @staticmethod
    def from_terms(pairs: Iterable) -> "Cyclotomic":
        out = Cyclotomic({})
        for t, c in pairs:
            out._add_term(Fraction(t), Fraction(c))
        return out

    @staticmethod
    def from_int_histogram(modulus: int, hist, scale: Rational = 1) -> "Cyclotomic":
        """sum over a of hist[a] * scale * e(a/modulus); hist is a mapping or array."""
        out = Cyclotomic({})
        scale = Fraction(scale)
        items = hist.items() if hasattr(hist, "items") else enumerate(hist)
        for a, c in items:
            if c:
                out._add_term(Fraction(int(a), modulus), c * scale)
        return out

    @staticmethod
    def _from_counts(modulus: int, counts: np.ndarray) -> "Cyclotomic":
        """Lazy variant backed by an integer count per phase a/modulus."""
        out = Cyclotomic(None)
        out._terms = None
        out._counts = counts
        out._counts_mod = modulus
        return out

    # -- internals ----------------------------------------------------

    def _add_term(self, t: Fraction, c: Fraction) -> None:
        if not c:
            return
        t %= 1
        if t >= _HALF:
            t, c = t - _HALF, -c
        cur = self._terms.get(t)
        new = c if cur is None else cur + c
        if new:
            self._terms[t] = new
        elif cur is not None:
            del self._terms[t]

    def _materialize(self) -> dict:
        if self._terms is None:
            terms: dict = {}
            m = self._counts_mod
            tmp = Cyclotomic(terms)
            for a, c in enumerate(self._counts):
                if c:
                    tmp._add_term(Fraction(int(a), m), Fraction(int(c)))
            self._terms = terms
            self._counts = None
        return self._terms

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        out = Cyclotomic(dict(self._materialize()))
        for t, c in other._materialize().items():
            out._add_term(t, c)
        return out

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic({t: -c for t, c in self._materialize().items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Cyclotomic.zero()
            return Cyclotomic({t: v * c for t, v in self._materialize().items()})
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._materialize(), other._materialize()
        if len(a) > len(b):
            a, b = b, a
        out = Cyclotomic({})
        for t1, c1 in a.items():
            for t2, c2 in b.items():
                out._add_term(t1 + t2, c1 * c2)
        return out

    __rmul__ = __mul__

    def conjugate(self) -> "Cyclotomic":
        out = Cyclotomic({})
        for t, c in self._materialize().items():
            out._add_term(-t, c)
        return out

    # -- queries --------------------------------------------------------

    def is_zero(self) -> bool:
        if self._terms is None:
            return not self._counts.any()
        return not self._terms

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self._materialize() == other._materialize()

    def __hash__(self):
        return hash(frozenset(self._materialize().items()))

    def iter_terms(self) -> Iterator:
        """Yield (phase, coefficient) pairs; phase 0 carries the rational part."""
        return iter(self._materialize().items())

    def unit_phase(self) -> Optional[Fraction]:
        """Phase t if the value is exactly e(t) or -e(t) (as e(t +- 1/2)); None otherwise.
        Zero also returns None."""
        terms = self._materialize()
        if len(terms) != 1:
            return None
        (t, c), = terms.items()
        if c == 1:
            return t
        if c == -1:
            return (t + _HALF) % 1
        return None

    def to_complex(self) -> complex:
        if self._terms is None:
            m = self._counts_mod
            idx = np.nonzero(self._counts)[0]
            if idx.size == 0:
                return 0j
            ang = (_TWO_PI / m) * idx
            w = self._counts[idx].astype(np.float64)
            return complex(np.dot(w, np.cos(ang)), np.dot(w, np.sin(ang)))
        terms = self._terms
        if len(terms) > 512:
            t = np.array([float(k) for k in terms], dtype=np.float64)
            c = np.array([float(v) for v in terms.values()], dtype=np.float64)
            ang = _TWO_PI * t
            return complex(np.dot(c, np.cos(ang)), np.dot(c, np.sin(ang)))
        re = math.fsum(float(c) * math.cos(_TWO_PI * float(t))
                       for t, c in terms.items())
        im = math.fsum(float(c) * math.sin(_TWO_PI * float(t))
                       for t, c in terms.items())
        return complex(re, im)

    def __complex__(self):
        return self.to_complex()

    def __abs__(self):
        return abs(self.to_complex())

    def exact_rational(self) -> Optional[Fraction]:
        """The exact rational value, when the stored form decides it.

        Works whenever the coefficient vector over e(a/L) is constant on the
        Galois orbits {a : gcd(a, L) = d} (each orbit sums to a Ramanujan sum
        mu(L/d)).  Returns None otherwise -- which means "undecided here",
        not "irrational".
        """
        if self._terms is None:
            m = self._counts_mod
            counts = self._counts
            g = np.gcd(np.arange(m, dtype=np.int64), m) if m > 1 else np.zeros(1, dtype=np.int64)
            total = Fraction(0)
            if m == 1:
                return Fraction(int(counts[0]))
            for d in sorted(set(int(v) for v in np.unique(g))):
                vals = counts[g == d]
                first = int(vals[0])
                if not (vals == first).all():
                    return None
                if first:
                    total += Fraction(first) * _moebius(m // d)
            return total
        terms = self._materialize()
        if not terms:
            return Fraction(0)
        # undo the half-turn canonicalization: negative coefficients move back
        # to phase t + 1/2, giving an all-positive vector of e(a/L) entries
        unfolded = {}
        for t, c in terms.items():
            if c < 0:
                t, c = (t + _HALF) % 1, -c
            unfolded[t] = c
        rat = unfolded.pop(Fraction(0), Fraction(0))
        if not unfolded:
            return rat
        lcm = 1
        for t in unfolded:
            lcm = lcm * t.denominator // math.gcd(lcm, t.denominator)
        by_class: dict = {}
        for t, c in unfolded.items():
            a = t.numerator * (lcm // t.denominator)
            d = math.gcd(a, lcm)
            by_class.setdefault(d, []).append(c)
        total = rat
        for d, coeffs in by_class.items():
            first = coeffs[0]
            if any(c != first for c in coeffs):
                return None
            if len(coeffs) != _euler_phi(lcm // d):
                # missing entries of the orbit are zero coefficients
                return None
            total += first * _moebius(lcm // d)
        return total

    def __repr__(self):
        terms = self._materialize()
        if not terms:
            return "Cyclotomic(0)"
        bits = []
        for t in sorted(terms):
            c = terms[t]
            bits.append(f"{c}" if t == 0 else f"{c}*e({t})")
        return "Cyclotomic(" + " + ".join(bits) + ")"


def as_exact(value) -> Optional[Cyclotomic]:
    """Coerce ints, Fractions and Cyclotomics to Cyclotomic; None for floats."""
    if isinstance(value, Cyclotomic):
        return value
    if isinstance(value, (int, Fraction)):
        return Cyclotomic.from_rational(value)
    if isinstance(value, bool):
        return Cyclotomic.from_rational(int(value))
    return None


def phase_to_complex(t: Optional[Fraction]) -> complex:
    """e(t) for a rational phase, 0 for the pole marker None."""
    if t is None:
        return 0j
    return complex(math.cos(_TWO_PI * float(t)), math.sin(_TWO_PI * float(t)))
