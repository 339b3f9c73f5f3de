"""Digit cocycles, the matrix van der Corput inequality, carry-property
violation counting, and the exact stage decomposition of weighted sums into
two-point correlations.

A ScalarTransducer is a synchronizing base-k automaton whose edges carry
exact roots of unity; the product of edge weights along the digit word of n
is a unit-modulus cocycle T.  decompose_weyl replays the regrouping of a
weighted sum S_0 through stages S_1..S_5 by direct enumeration and verifies
every regrouping identity exactly, returning the synchronization- and
carry-failure sets that bound the error terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .automata import Dfao, base_digits, find_synchronizing_word, sync_failure_count
from .budget import BudgetError, enumeration_budget
from .exact import Cyclotomic, as_exact

StageValue = Union[Cyclotomic, complex]


class ScalarTransducer:
    """Synchronizing DFAO with a unit-complex weight per transition."""

    def __init__(self, dfao: Dfao, weight_phases: Sequence[Sequence[Fraction]]):
        if len(weight_phases) != dfao.n_states:
            raise ValueError("one weight row per state required")
        rows = []
        denom = 1
        for row in weight_phases:
            if len(row) != dfao.base:
                raise ValueError("one weight per digit required")
            frow = tuple(Fraction(w) % 1 for w in row)
            for w in frow:
                denom = denom * w.denominator // math.gcd(denom, w.denominator)
            rows.append(frow)
        word = find_synchronizing_word(dfao)
        if word is None:
            raise ValueError("underlying automaton is not synchronizing")
        self.dfao = dfao
        self.weight_phases = tuple(rows)
        self.weight_order = denom
        self.sync_word = word

    @property
    def base(self) -> int:
        return self.dfao.base

    @property
    def initial(self) -> int:
        return self.dfao.initial

    def weight_index(self) -> np.ndarray:
        """Phase numerators mod weight_order, shape (states, base)."""
        D = self.weight_order
        return np.array([[int(w * D) for w in row] for row in self.weight_phases],
                        dtype=np.int64)

    def T_phase(self, state: int, digits: Sequence[int]) -> Fraction:
        """Phase of the ordered weight product along the path from state."""
        total = Fraction(0)
        trans = self.dfao.transitions
        for d in digits:
            total += self.weight_phases[state][d]
            state = trans[state][d]
        return total % 1

    def T(self, state: int, digits: Sequence[int]) -> Cyclotomic:
        return Cyclotomic.from_phase(self.T_phase(state, digits))

    def value_phase(self, n: int) -> Fraction:
        return self.T_phase(self.initial, base_digits(n, self.base))

    def tables(self, limit: int) -> Tuple[np.ndarray, np.ndarray]:
        """(state, phase-index) DP tables over [0, limit) read from the start."""
        k = self.base
        D = self.weight_order
        widx = self.weight_index()
        st = np.empty(limit, dtype=np.int32)
        val = np.empty(limit, dtype=np.int64)
        st[0] = self.initial
        val[0] = 0
        delta = self.dfao._delta_flat()
        lo = 1
        while lo < limit:
            hi = min(lo * k, limit)
            ns = np.arange(lo, hi)
            parent = ns // k
            dig = ns % k
            ps = st[parent]
            st[lo:hi] = delta[ps * k + dig]
            val[lo:hi] = (val[parent] + widx[ps, dig]) % D
            lo = hi
        return st, val

    def __repr__(self):
        return (f"<ScalarTransducer states={self.dfao.n_states} "
                f"base={self.base} weight_order={self.weight_order}>")


def thue_morse_transducer() -> ScalarTransducer:
    """One-state base-2 cocycle with T(n) = (-1)^(binary digit sum)."""
    dfao = Dfao(2, [[0, 0]], [Fraction(1)], name="thue_morse")
    return ScalarTransducer(dfao, [[Fraction(0), Fraction(1, 2)]])


def digit_sum_transducer(k: int, m: int) -> ScalarTransducer:
    """One-state cocycle with T(n) = e(digit sum of n / m) in base k."""
    dfao = Dfao(k, [[0] * k], [Fraction(1)], name=f"digit_sum({k},{m})")
    return ScalarTransducer(dfao, [[Fraction(d % m, m) for d in range(k)]])


def constant_transducer(dfao: Dfao) -> ScalarTransducer:
    """All weights 1 on an existing synchronizing automaton."""
    return ScalarTransducer(dfao, [[Fraction(0)] * dfao.base] * dfao.n_states)


def truncated_T(tr: ScalarTransducer, n: int, mu: int) -> Cyclotomic:
    """T on the digit word of n truncated to the lowest mu digits."""
    if mu < 0:
        raise ValueError("mu must be non-negative")
    return Cyclotomic.from_phase(tr.value_phase(n % tr.base ** mu))


# ---------------------------------------------------------------------------
# van der Corput inequality (matrix form)


@dataclass
class VdcCheck:
    lhs: float
    rhs: float
    slack: float


def vdc_inequality_check(Z, R: float, k: int = 1) -> VdcCheck:
    """Check ||sum Z(n)||_F^2 <= ((x + k(R-1) + 1)/R) * sum_{|r|<R} (1-|r|/R)
    * sum_n tr(Z(n+kr)^H Z(n)) on concrete data.

    Z is a sequence of d x d matrices (scalars allowed).  Raises
    ArithmeticError if the inequality fails beyond float noise; that would
    mean a genuine bug, the bound holds for arbitrary matrices.
    """
    if R < 1 or k < 1:
        raise ValueError("need R >= 1 and k >= 1")
    arr = np.asarray(Z, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1, 1)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ValueError("Z must be a sequence of square matrices")
    x = arr.shape[0]
    lhs = float(np.linalg.norm(arr.sum(axis=0)) ** 2)
    total = 0.0
    r_max = int(math.ceil(R)) - 1
    for r in range(-r_max, r_max + 1):
        shift = k * r
        if abs(shift) >= x:
            continue
        if shift >= 0:
            corr = np.sum(np.conj(arr[shift:]) * arr[:x - shift])
        else:
            corr = np.sum(np.conj(arr[:x + shift]) * arr[-shift:])
        total += (1.0 - abs(r) / R) * corr.real
    rhs = (x + k * (R - 1) + 1) / R * total
    slack = rhs - lhs
    if slack < -1e-9 * max(1.0, rhs):
        raise ArithmeticError(f"van der Corput inequality violated: {lhs} > {rhs}")
    return VdcCheck(lhs, rhs, slack)


# ---------------------------------------------------------------------------
# carry-property violations


def carry_violation_count(tr: ScalarTransducer, lam: int, alpha: int, rho: int,
                          r: int = 0) -> int:
    """#{l in [0, k^lam) : some (n1, n2) in [0, k^alpha)^2 has the full
    two-point product differ from the one truncated to alpha+rho digits},
    arguments shifted by r; full enumeration (vectorized, not shortcut)."""
    if not (0 <= rho < lam):
        raise ValueError("need 0 <= rho < lam")
    if alpha < 0 or r < 0:
        raise ValueError("need alpha >= 0 and r >= 0")
    k = tr.base
    if k ** (lam + 2 * alpha) > enumeration_budget():
        raise BudgetError(f"k^(lam+2*alpha) = {k}^{lam + 2 * alpha} exceeds "
                          "the enumeration budget")
    ka = k ** alpha
    L = k ** lam
    trunc_mod = k ** (alpha + rho)
    top = (L - 1) * ka + 2 * (ka - 1) + r + 1
    _, val = tr.tables(max(top, trunc_mod))
    dev = (val - val[np.arange(len(val)) % trunc_mod]) % tr.weight_order

    violated = np.zeros(L, dtype=bool)
    chunk = max(1, 4_000_000 // (ka * ka))
    for lo in range(0, L, chunk):
        hi = min(lo + chunk, L)
        A = (np.arange(lo, hi)[:, None] * ka + np.arange(ka)[None, :] + r)
        base_dev = dev[A]
        bad = np.zeros(hi - lo, dtype=bool)
        for n2 in range(1, ka):
            bad |= (dev[A + n2] != base_dev).any(axis=1)
        violated[lo:hi] = bad
    return int(violated.sum())


def eta_fit(dfao: Dfao, x: Optional[int] = None,
            lams: Optional[Sequence[int]] = None) -> Optional[float]:
    """Least-squares decay exponent of sync-failure counts: count ~ x k^(-eta lam).

    None when there are fewer than two positive counts (e.g. a perfectly
    synchronizing one-state machine)."""
    k = dfao.base
    if x is None:
        x = k ** 12
    if lams is None:
        lams = range(1, 9)
    pts = []
    for lam in lams:
        if k ** lam > x:
            break
        c = sync_failure_count(dfao, 0, x, lam)
        if c > 0:
            pts.append((lam, math.log(c / x, k)))
    if len(pts) < 2:
        return None
    xs = np.array([p[0] for p in pts], dtype=float)
    ys = np.array([p[1] for p in pts], dtype=float)
    slope = np.polyfit(xs, ys, 1)[0]
    return max(0.0, -float(slope))


# ---------------------------------------------------------------------------
# the stage decomposition


@dataclass
class WeylReport:
    exact: bool
    M: int
    R: int
    weight_order: int
    s0: StageValue
    s0_reconstructed: StageValue
    identity_s0: bool
    sync_failures: int
    identity_s1: bool
    identity_s3: bool
    identity_s4: bool
    carry_failures: Dict[int, int]
    s1: Dict[Tuple[int, int], StageValue]
    s2: Dict[Tuple[int, int], StageValue]
    s3: Dict[Tuple[int, int], StageValue]
    s4: Dict[Tuple[int, int, int], StageValue]
    s5: Dict[Tuple[int, int], StageValue]
    vdc_rows: List[Tuple[int, int, float, float, float]]
    eta_used: Optional[float]
    comparator: float
    s0_abs: float

    @property
    def comparator_exceeds(self) -> bool:
        return self.comparator >= self.s0_abs

    @property
    def identities_ok(self) -> bool:
        return (self.identity_s0 and self.identity_s1 and self.identity_s3
                and self.identity_s4)

    def rows(self) -> List[Tuple]:
        out: List[Tuple] = []
        for name, table in (("S1", self.s1), ("S2", self.s2), ("S3", self.s3),
                            ("S4", self.s4), ("S5", self.s5)):
            for key in sorted(table):
                z = complex(table[key])
                out.append((name, ":".join(str(i) for i in key),
                            z.real, z.imag, abs(z)))
        z = complex(self.s0)
        out.insert(0, ("S0", "-", z.real, z.imag, abs(z)))
        return out


def _classify_g(values: List) -> Tuple[bool, Optional[List[Optional[Fraction]]]]:
    """Exact mode needs every g value to be zero or a pure root of unity."""
    phases: List[Optional[Fraction]] = []
    for v in values:
        ex = as_exact(v)
        if ex is None:
            return False, None
        if ex.is_zero():
            phases.append(None)
            continue
        t = ex.unit_phase()
        if t is None:
            return False, None
        phases.append(t)
    return True, phases


def _group_hist(buckets: np.ndarray, phases: np.ndarray, mod: int) -> Dict[int, Dict[int, int]]:
    """bucket -> {phase numerator -> count}, skipping the pole marker -1."""
    key = buckets.astype(np.int64) * (mod + 1) + (phases + 1)
    uniq, cnt = np.unique(key, return_counts=True)
    out: Dict[int, Dict[int, int]] = {}
    for u, c in zip(uniq.tolist(), cnt.tolist()):
        b, ph = divmod(u, mod + 1)
        if ph == 0:
            continue
        out.setdefault(b, {})[ph - 1] = c
    return out


def decompose_weyl(tr: ScalarTransducer, tau: Callable[[Cyclotomic, int], object],
                   g: Callable[[int], object], y: int, x: int,
                   lam1: int, lam2: int,
                   eta: Union[None, float, str] = "fit") -> WeylReport:
    """Replay the regrouping of S_0 = sum a_n g(n) into correlation sums,
    a_n = tau(T(q0,(n)_k), delta(q0,(n)_k)).

    Verifies, term by term: S_0 against the tau-weighted S_1 table; S_1
    against the mod-M regrouping of S_2 up to the explicit synchronization
    failure set; S_3 against the character expansion of S_2; S_4 against the
    truncated-cocycle combination of S_5 up to the explicit carry failure
    set.  When g returns zeros or exact roots of unity and tau returns exact
    values, every identity is checked in exact phase arithmetic; otherwise
    the stages are complex and the identities are checked to 1e-9 relative.
    The van der Corput inequality is checked on each S_3 sequence, and the
    comparator x M^-eta + sum_m sqrt((x/(RM)) sum |S_5|) is reported next
    to |S_0|.
    """
    k = tr.base
    M = k ** lam1
    R = k ** lam2
    RM2 = R * M * M
    if y < 0 or x < 1:
        raise ValueError("need y >= 0 and x >= 1")
    if RM2 > x / 10:
        raise ValueError("need R*M^2 <= x/10")
    D = tr.weight_order
    S = tr.dfao.n_states
    top = y + x + (R - 1) * M + 1
    st, val = tr.tables(max(top, RM2 + R * M + 1))
    ns = np.arange(y + 1, y + x + 1, dtype=np.int64)

    g_values = [g(int(n)) for n in range(y + 1, y + x + (R - 1) * M + 1)]
    exact, g_phases = _classify_g(g_values)
    tau_table: Dict[Tuple[int, int], object] = {}
    for j in range(D):
        sigma = Cyclotomic.root_of_unity(j, D)
        for q in range(S):
            ex = as_exact(tau(sigma, q))
            if ex is None:
                exact = False
            tau_table[(j, q)] = ex if ex is not None else complex(tau(sigma, q))

    j_n = val[ns]
    q_n = st[ns]
    m_n = ns % M
    mprime_n = ns % RM2
    st_m = st[np.arange(M)]
    trunc_q = st[(ns % M)]
    sync_mask = q_n != trunc_q
    sync_failures = int(sync_mask.sum())

    if exact:
        Lg = 1
        for t in g_phases:
            if t is not None:
                Lg = Lg * t.denominator // math.gcd(Lg, t.denominator)
        gph_all = np.array([-1 if t is None else int(t * Lg) for t in g_phases],
                           dtype=np.int64)
        LL = Lg * D // math.gcd(Lg, D)
        gz_all = np.where(
            gph_all >= 0,
            np.exp(2j * np.pi * np.where(gph_all >= 0, gph_all, 0) / Lg), 0j)
    else:
        gz_all = np.array([complex(v) for v in g_values])
        tau_table = {key: complex(v) for key, v in tau_table.items()}

    def gp(narr: np.ndarray) -> np.ndarray:
        return gph_all[narr - (y + 1)]

    def gz(narr: np.ndarray) -> np.ndarray:
        return gz_all[narr - (y + 1)]

    g_n = gp(ns) if exact else None
    z_n = gz(ns)

    if exact:
        same = lambda a, b: a == b
        zero = Cyclotomic.zero()
        root = Cyclotomic.root_of_unity
    else:
        scale = max(1.0, float(np.abs(z_n).sum()))
        same = lambda a, b: abs(complex(a) - complex(b)) <= 1e-9 * scale
        zero = 0j
        root = lambda a, m: complex(np.exp(2j * np.pi * (a % m) / m))

    # ---- S_0 directly, and S_1 per (weight value, end state)
    if exact:
        pairs: List[Tuple[Fraction, Fraction]] = []
        for i in range(x):
            if g_n[i] < 0:
                continue
            tv = tau_table[(int(j_n[i]), int(q_n[i]))]
            gt = Fraction(int(g_n[i]), Lg)
            for t, c in tv.iter_terms():
                pairs.append((t + gt, c))
        s0: StageValue = Cyclotomic.from_terms(pairs)
        s1 = {(b // S, b % S): Cyclotomic.from_int_histogram(Lg, h)
              for b, h in _group_hist(j_n * S + q_n, g_n, Lg).items()}
    else:
        tauc = np.array([[complex(tau_table[(j, q)]) for q in range(S)]
                         for j in range(D)])
        s0 = complex(np.sum(tauc[j_n, q_n] * z_n))
        acc = np.zeros((D, S), dtype=complex)
        np.add.at(acc, (j_n, q_n), z_n)
        s1 = {(j, q): acc[j, q] for j in range(D) for q in range(S)
              if acc[j, q] != 0}
    s0_rec = zero
    for (j, q), v in s1.items():
        s0_rec = s0_rec + tau_table[(j, q)] * v
    identity_s0 = same(s0, s0_rec)

    # ---- S_2 per (residue mod M, weight value); S_1 from S_2 + sync failures
    if exact:
        s2 = {(b // D, b % D): Cyclotomic.from_int_histogram(Lg, h)
              for b, h in _group_hist(m_n * D + j_n, g_n, Lg).items()}
        corr: Dict[Tuple[int, int], List] = {}
        for i in np.nonzero(sync_mask)[0]:
            if g_n[i] < 0:
                continue
            gt = Fraction(int(g_n[i]), Lg)
            corr.setdefault((int(j_n[i]), int(q_n[i])), []).append((gt, Fraction(1)))
            corr.setdefault((int(j_n[i]), int(trunc_q[i])), []).append((gt, Fraction(-1)))
        corr_val = {key: Cyclotomic.from_terms(terms) for key, terms in corr.items()}
    else:
        acc = np.zeros((M, D), dtype=complex)
        np.add.at(acc, (m_n, j_n), z_n)
        s2 = {(m, j): acc[m, j] for m in range(M) for j in range(D)
              if acc[m, j] != 0}
        corr_val = {}
        for i in np.nonzero(sync_mask)[0]:
            zi = z_n[i]
            jq1 = (int(j_n[i]), int(q_n[i]))
            jq2 = (int(j_n[i]), int(trunc_q[i]))
            corr_val[jq1] = corr_val.get(jq1, 0j) + zi
            corr_val[jq2] = corr_val.get(jq2, 0j) - zi
    identity_s1 = True
    for j in range(D):
        for q in range(S):
            main = zero
            for m in range(M):
                if st_m[m] == q and (m, j) in s2:
                    main = main + s2[(m, j)]
            main = main + corr_val.get((j, q), zero)
            if not same(main, s1.get((j, q), zero)):
                identity_s1 = False

    # ---- S_3 per (residue, character), against the character expansion of S_2
    s3: Dict[Tuple[int, int], StageValue] = {}
    for t in range(D):
        if exact:
            comb = np.where(g_n >= 0,
                            (t * j_n % D * (LL // D) + g_n * (LL // Lg)) % LL,
                            np.int64(-1))
            for m, h in _group_hist(m_n, comb, LL).items():
                s3[(m, t)] = Cyclotomic.from_int_histogram(LL, h)
        else:
            wz = np.exp(2j * np.pi * (t * j_n % D) / D)
            acc = np.zeros(M, dtype=complex)
            np.add.at(acc, m_n, wz * z_n)
            for m in range(M):
                if acc[m] != 0:
                    s3[(m, t)] = acc[m]
    identity_s3 = True
    for m in range(M):
        for t in range(D):
            rhs = zero
            for j in range(D):
                if (m, j) in s2:
                    rhs = rhs + root(t * j, D) * s2[(m, j)]
            if not same(rhs, s3.get((m, t), zero)):
                identity_s3 = False

    # ---- S_4 / S_5 per shift r, with the carry failure sets
    s4: Dict[Tuple[int, int, int], StageValue] = {}
    s5: Dict[Tuple[int, int], StageValue] = {}
    carry_failures: Dict[int, int] = {}
    identity_s4 = True
    for r in range(R):
        shift = r * M
        j2 = val[ns + shift]
        dval = (j_n - j2) % D
        vt = (val[mprime_n] - val[(mprime_n + shift) % RM2]) % D
        fail_mask = dval != vt
        carry_failures[r] = int(fail_mask.sum())
        dvt_table = (val[np.arange(RM2)] - val[(np.arange(RM2) + shift) % RM2]) % D
        if exact:
            g2 = gp(ns + shift)
            pole = (g_n < 0) | (g2 < 0)
            gc = np.where(pole, np.int64(-1), (g_n - g2) % Lg)
            for b, h in _group_hist(mprime_n, gc, Lg).items():
                s5[(b, r)] = Cyclotomic.from_int_histogram(Lg, h)
        else:
            zc = z_n * np.conj(gz(ns + shift))
            acc5 = np.zeros(RM2, dtype=complex)
            np.add.at(acc5, mprime_n, zc)
            for mp in range(RM2):
                if acc5[mp] != 0:
                    s5[(mp, r)] = acc5[mp]
        for t in range(D):
            if exact:
                comb = np.where(gc >= 0,
                                (t * dval % D * (LL // D) + gc * (LL // Lg)) % LL,
                                np.int64(-1))
                for m, h in _group_hist(m_n, comb, LL).items():
                    s4[(m, t, r)] = Cyclotomic.from_int_histogram(LL, h)
                fail_corr: Dict[int, List] = {}
                for i in np.nonzero(fail_mask)[0]:
                    if gc[i] < 0:
                        continue
                    gt = Fraction(int(gc[i]), Lg)
                    m = int(m_n[i])
                    fail_corr.setdefault(m, []).append(
                        ((Fraction(t * int(dval[i]), D) + gt) % 1, Fraction(1)))
                    fail_corr.setdefault(m, []).append(
                        ((Fraction(t * int(vt[i]), D) + gt) % 1, Fraction(-1)))
                corr4 = {m: Cyclotomic.from_terms(terms)
                         for m, terms in fail_corr.items()}
            else:
                wq = np.exp(2j * np.pi * (t * dval % D) / D)
                acc4 = np.zeros(M, dtype=complex)
                np.add.at(acc4, m_n, wq * zc)
                for m in range(M):
                    if acc4[m] != 0:
                        s4[(m, t, r)] = acc4[m]
                corr4 = {}
                wt_q = np.exp(2j * np.pi * (t * vt % D) / D)
                bad = np.nonzero(fail_mask)[0]
                for i in bad:
                    m = int(m_n[i])
                    corr4[m] = corr4.get(m, 0j) + (wq[i] - wt_q[i]) * zc[i]
            for m in range(M):
                rhs = zero
                for mp in range(m, RM2, M):
                    if (mp, r) in s5:
                        w = root(t * int(dvt_table[mp]), D)
                        rhs = rhs + w * s5[(mp, r)]
                rhs = rhs + corr4.get(m, zero)
                if not same(rhs, s4.get((m, t, r), zero)):
                    identity_s4 = False

    # ---- van der Corput on each S_3 sequence (shift unit M, window R)
    vdc_rows: List[Tuple[int, int, float, float, float]] = []
    for t in range(D):
        wz = np.exp(2j * np.pi * (t * j_n % D) / D)
        for m in range(M):
            Z = np.where(m_n == m, z_n * wz, 0j)
            chk = vdc_inequality_check(Z, R=float(R), k=M)
            vdc_rows.append((m, t, chk.lhs, chk.rhs, chk.slack))

    eta_used = eta_fit(tr.dfao) if eta == "fit" else eta
    comp = 0.0 if eta_used is None else x * M ** (-float(eta_used))
    for m in range(M):
        inner = 0.0
        for (mp, r), v in s5.items():
            if mp % M == m:
                inner += abs(complex(v))
        comp += math.sqrt(x / (R * M) * inner)
    s0_abs = abs(complex(s0))

    return WeylReport(
        exact=exact, M=M, R=R, weight_order=D,
        s0=s0, s0_reconstructed=s0_rec, identity_s0=identity_s0,
        sync_failures=sync_failures, identity_s1=identity_s1,
        identity_s3=identity_s3, identity_s4=identity_s4,
        carry_failures=carry_failures,
        s1=s1, s2=s2, s3=s3, s4=s4, s5=s5,
        vdc_rows=vdc_rows, eta_used=eta_used,
        comparator=comp, s0_abs=s0_abs,
    )
