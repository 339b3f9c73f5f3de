"""Deterministic finite automata with output (base-k digit readers).

Machines read the standard base-k representation of n most-significant
digit first; n = 0 is the empty word.  Evaluation, truncated evaluation,
strong-connectivity analysis, synchronizing words, synchronization-failure
counting and the exact block regrouping over residues mod k^sigma all live
here, together with the small zoo of standard example automata and a
line-oriented text format.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exact import Cyclotomic, as_exact

OutputValue = Union[int, Fraction, Cyclotomic, complex, float]


def base_digits(n: int, k: int) -> List[int]:
    """Digits of n in base k, most significant first; [] for n = 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out: List[int] = []
    while n:
        out.append(n % k)
        n //= k
    out.reverse()
    return out


class Dfao:
    """Deterministic finite automaton with an output value per state."""

    def __init__(self, base: int, transitions: Sequence[Sequence[int]],
                 outputs: Sequence[OutputValue], initial: int = 0,
                 name: Optional[str] = None, _check_initial_loop: bool = True):
        if base < 2:
            raise ValueError("base must be >= 2")
        trans = tuple(tuple(int(t) for t in row) for row in transitions)
        n_states = len(trans)
        if n_states == 0:
            raise ValueError("need at least one state")
        for row in trans:
            if len(row) != base:
                raise ValueError("transition table must cover every digit")
            for t in row:
                if not 0 <= t < n_states:
                    raise ValueError(f"transition target {t} out of range")
        if len(outputs) != n_states:
            raise ValueError("one output per state required")
        if not 0 <= initial < n_states:
            raise ValueError("initial state out of range")
        if _check_initial_loop and trans[initial][0] != initial:
            raise ValueError("digit 0 must fix the initial state")
        self.base = base
        self.transitions = trans
        self.initial = initial
        self.name = name
        self.outputs = tuple(self._norm_output(v) for v in outputs)
        self._delta = None

    @staticmethod
    def _norm_output(v: OutputValue):
        exact = as_exact(v)
        return exact if exact is not None else complex(v)

    @property
    def n_states(self) -> int:
        return len(self.transitions)

    @property
    def outputs_exact(self) -> bool:
        return all(isinstance(v, Cyclotomic) for v in self.outputs)

    def _delta_flat(self) -> np.ndarray:
        if self._delta is None:
            self._delta = np.array(
                [t for row in self.transitions for t in row], dtype=np.int32)
        return self._delta

    # -- evaluation -----------------------------------------------------

    def walk(self, state: int, digits: Sequence[int]) -> int:
        trans = self.transitions
        for d in digits:
            state = trans[state][d]
        return state

    def state_at(self, n: int, start: Optional[int] = None) -> int:
        return self.walk(self.initial if start is None else start,
                         base_digits(n, self.base))

    def evaluate(self, n: int):
        """Output value at n (digits fed most-significant first; n=0 reads nothing)."""
        return self.outputs[self.state_at(n)]

    def evaluate_truncated(self, n: int, lam: int):
        """Output after reading only the lowest lam digits, i.e. at n mod k^lam."""
        if lam < 0:
            raise ValueError("lam must be non-negative")
        return self.evaluate(n % self.base ** lam)

    def state_table(self, limit: int, start: Optional[int] = None) -> np.ndarray:
        """st[n] = state after reading (n)_k from start, for all n < limit."""
        delta = self._delta_flat()
        k = self.base
        st = np.empty(limit, dtype=np.int32)
        if limit == 0:
            return st
        st[0] = self.initial if start is None else start
        lo = 1
        while lo < limit:
            hi = min(lo * k, limit)
            ns = np.arange(lo, hi)
            st[lo:hi] = delta[st[ns // k] * k + ns % k]
            lo = hi
        return st

    def states_at(self, ns: np.ndarray, start: Optional[int] = None) -> np.ndarray:
        """Vectorized state_at; builds a DP table when the range is dense enough."""
        ns = np.asarray(ns, dtype=np.int64)
        if ns.size == 0:
            return np.empty(0, dtype=np.int32)
        top = int(ns.max()) + 1
        digit_cost = ns.size * max(1, int(math.log(max(top, 2), self.base)) + 1)
        if top <= max(1 << 16, 4 * digit_cost):
            return self.state_table(top, start)[ns]
        s0 = self.initial if start is None else start
        return np.array([self.walk(s0, base_digits(int(n), self.base)) for n in ns],
                        dtype=np.int32)

    # -- text format ------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"dfao v1 base={self.base} states={self.n_states} initial={self.initial}"]
        for i, v in enumerate(self.outputs):
            if isinstance(v, Cyclotomic):
                r = v.exact_rational()
            else:
                r = None
            if r is not None:
                lines.append(f"state {i} out=r:{r.numerator}/{r.denominator}")
            else:
                z = complex(v)
                lines.append(f"state {i} out=c:{z.real!r},{z.imag!r}")
        for i, row in enumerate(self.transitions):
            for d, t in enumerate(row):
                lines.append(f"t {i} {d} {t}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str, name: Optional[str] = None) -> "Dfao":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty automaton file")
        head = lines[0].split()
        if len(head) != 5 or head[0] != "dfao" or head[1] != "v1":
            raise ValueError(f"bad header {lines[0]!r}")
        opts = dict(part.split("=", 1) for part in head[2:])
        base, n_states, initial = int(opts["base"]), int(opts["states"]), int(opts["initial"])
        outputs: List[Optional[OutputValue]] = [None] * n_states
        trans: List[List[Optional[int]]] = [[None] * base for _ in range(n_states)]
        for ln in lines[1:]:
            parts = ln.split()
            if parts[0] == "state":
                if len(parts) != 3 or not parts[2].startswith("out="):
                    raise ValueError(f"bad state line {ln!r}")
                idx = int(parts[1])
                val = parts[2][4:]
                if val.startswith("r:"):
                    num, den = val[2:].split("/")
                    outputs[idx] = Fraction(int(num), int(den))
                elif val.startswith("c:"):
                    re_s, im_s = val[2:].split(",")
                    outputs[idx] = complex(float(re_s), float(im_s))
                else:
                    raise ValueError(f"bad output value {val!r}")
            elif parts[0] == "t":
                if len(parts) != 4:
                    raise ValueError(f"bad transition line {ln!r}")
                frm, dig, to = int(parts[1]), int(parts[2]), int(parts[3])
                if not 0 <= dig < base:
                    raise ValueError(f"digit out of range in {ln!r}")
                trans[frm][dig] = to
            else:
                raise ValueError(f"unrecognized line {ln!r}")
        for i, row in enumerate(trans):
            for d, t in enumerate(row):
                if t is None:
                    raise ValueError(f"missing transition for state {i}, digit {d}")
        if any(v is None for v in outputs):
            raise ValueError("missing state output line")
        return Dfao(base, trans, outputs, initial, name=name)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_text())

    @staticmethod
    def load(path) -> "Dfao":
        with open(path, "r", encoding="utf-8") as fh:
            return Dfao.from_text(fh.read(), name=str(path))

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<Dfao{tag} base={self.base} states={self.n_states}>"


# ---------------------------------------------------------------------------
# strong connectivity


@dataclass
class ComponentDecomposition:
    components: Tuple[Tuple[int, ...], ...]
    component_of: Tuple[int, ...]
    is_final: Tuple[bool, ...]
    component_sequences: Dict[int, Dfao]

    def final_states(self) -> frozenset:
        return frozenset(s for s, c in enumerate(self.component_of)
                         if self.is_final[c])


def strongly_connected_components(dfao: Dfao) -> ComponentDecomposition:
    """Tarjan SCC over all digit edges, plus final-component bookkeeping.

    A component is final when no transition leaves it; each state of a final
    component yields a re-rooted sequence automaton with the same outputs.
    """
    n = dfao.n_states
    k = dfao.base
    trans = dfao.transitions
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: List[int] = []
    comp_of = [-1] * n
    comps: List[List[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while pi < k:
                w = trans[v][pi]
                pi += 1
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp_of[w] = len(comps)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])

    is_final = []
    for ci, comp in enumerate(comps):
        closed = all(comp_of[trans[s][d]] == ci for s in comp for d in range(k))
        is_final.append(closed)

    sequences: Dict[int, Dfao] = {}
    for ci, comp in enumerate(comps):
        if not is_final[ci]:
            continue
        for s in comp:
            sequences[s] = Dfao(k, trans, dfao.outputs, initial=s,
                                name=f"{dfao.name or 'dfao'}@{s}",
                                _check_initial_loop=False)
    return ComponentDecomposition(
        components=tuple(tuple(c) for c in comps),
        component_of=tuple(comp_of),
        is_final=tuple(is_final),
        component_sequences=sequences,
    )


# ---------------------------------------------------------------------------
# synchronization


def find_synchronizing_word(dfao: Dfao) -> Optional[Tuple[int, ...]]:
    """A word collapsing every state to one, or None if none exists.

    Classic pair-collapsing: BFS (backwards from already-merged pairs) gives
    a merging word for every mergeable pair; greedily applying them shrinks
    the state set.  The result is validated, not minimal.
    """
    n, k = dfao.n_states, dfao.base
    trans = dfao.transitions
    if n == 1:
        return ()

    def pid(p: int, q: int) -> int:
        return p * n + q if p < q else q * n + p

    step: Dict[int, Tuple[int, Optional[int]]] = {}
    queue: deque = deque()
    preds: Dict[int, List[Tuple[int, int]]] = {}
    for p in range(n):
        for q in range(p + 1, n):
            cur = pid(p, q)
            for d in range(k):
                a, b = trans[p][d], trans[q][d]
                if a == b:
                    if cur not in step:
                        step[cur] = (d, None)
                        queue.append(cur)
                else:
                    preds.setdefault(pid(a, b), []).append((cur, d))
    while queue:
        cur = queue.popleft()
        for src, d in preds.get(cur, ()):  # predecessors merge one step later
            if src not in step:
                step[src] = (d, cur)
                queue.append(src)

    current = frozenset(range(n))
    word: List[int] = []
    while len(current) > 1:
        it = sorted(current)
        key: Optional[int] = pid(it[0], it[1])
        if key not in step:
            return None
        while key is not None:
            d, key = step[key]
            word.append(d)
            current = frozenset(trans[s][d] for s in current)
    end = {dfao.walk(s, word) for s in range(n)}
    if len(end) != 1:
        raise AssertionError("pair collapsing produced an invalid word")
    return tuple(word)


def sync_failure_count(dfao: Dfao, y: int, x: int, lam: int,
                       workers: int = 1,
                       _dense_limit: int = 100_000_000) -> int:
    """#{n in (y, y+x] : some start state reads (n)_k and (n)_k truncated to
    lam digits into different states}; direct enumeration over all starts."""
    if y < 0 or x < 1 or lam < 0:
        raise ValueError("need y >= 0, x >= 1, lam >= 0")
    k = dfao.base
    if k ** lam > x:
        raise ValueError("lam exceeds floor(log_k(x))")
    n_top = y + x + 1
    kl = k ** lam
    if n_top <= _dense_limit // max(dfao.n_states, 1):
        ns = np.arange(y + 1, y + x + 1, dtype=np.int64)
        low = ns % kl
        mism = np.zeros(x, dtype=bool)
        for s in range(dfao.n_states):
            st = dfao.state_table(n_top, start=s)
            mism |= st[ns] != st[low]
        return int(mism.sum())
    # fallback for huge offsets: plain digit walks, optionally in worker threads
    def count_chunk(lo: int, hi: int) -> int:
        c = 0
        for m in range(lo, hi):
            full = [dfao.walk(s, base_digits(m, k)) for s in range(dfao.n_states)]
            trun = [dfao.walk(s, base_digits(m % kl, k)) for s in range(dfao.n_states)]
            c += full != trun
        return c
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        bounds = np.linspace(y + 1, y + x + 1, workers + 1, dtype=np.int64)
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return sum(ex.map(count_chunk, bounds[:-1], bounds[1:]))
    return count_chunk(y + 1, y + x + 1)


# ---------------------------------------------------------------------------
# block regrouping over residues mod k^sigma


@dataclass
class BlockRow:
    r: int
    in_final_set: bool
    entry_state: int


@dataclass
class BlockDecomposition:
    total: Union[Cyclotomic, complex]
    direct_total: Union[Cyclotomic, complex]
    rows: List[BlockRow]
    sigma: int

    @property
    def exact(self) -> bool:
        return isinstance(self.total, Cyclotomic)


def block_decompose_sum(dfao: Dfao, g: Callable[[int], object], y: int, x: int,
                        sigma: int) -> BlockDecomposition:
    """Regroup sum over (y, y+x] of a_n g(n) as n = r*K + n', K = k^sigma.

    Every block is evaluated by reading (r)_k from the initial state and then
    the sigma-digit zero-padded word of n', which reproduces a_n exactly; the
    per-r rows record whether r lands every state in a final component and
    which entry state the block sequence uses.  The regrouped total is checked
    against the direct sum before returning.
    """
    k = dfao.base
    K = k ** sigma
    if K > x:
        raise ValueError("k^sigma must not exceed x")
    decomp = strongly_connected_components(dfao)
    final_states = decomp.final_states()

    # state after the sigma-digit padded word of n', from every start
    delta = dfao._delta_flat()
    pad = np.arange(dfao.n_states, dtype=np.int32).reshape(-1, 1)
    for _ in range(sigma):
        m = np.arange(pad.shape[1] * k)
        pad = delta[pad[:, m // k] * k + m % k]

    n_all = np.arange(y + 1, y + x + 1, dtype=np.int64)
    g_vals = [g(int(n)) for n in n_all]
    exact_g = [as_exact(v) for v in g_vals]
    exact_mode = dfao.outputs_exact and all(v is not None for v in exact_g)
    gv = exact_g if exact_mode else [complex(v) for v in g_vals]

    rows: List[BlockRow] = []
    pairs: List[Tuple] = []
    float_terms: List[complex] = []
    for r in range((y + 1) // K, (y + x) // K + 1):
        digits_r = base_digits(r, k)
        entry = dfao.walk(dfao.initial, digits_r)
        in_R = all(dfao.walk(s, digits_r) in final_states
                   for s in range(dfao.n_states))
        rows.append(BlockRow(r, in_R, entry))
        lo = max(0, y + 1 - r * K)
        hi = min(K - 1, y + x - r * K)
        states = pad[entry, lo:hi + 1]
        for off, st in enumerate(states):
            idx = r * K + lo + off - (y + 1)
            out_v = dfao.outputs[st]
            if exact_mode:
                pairs.extend((out_v * gv[idx]).iter_terms())
            else:
                float_terms.append(complex(out_v) * gv[idx])

    if exact_mode:
        total: Union[Cyclotomic, complex] = Cyclotomic.from_terms(pairs)
        direct_pairs: List[Tuple] = []
        for i, n in enumerate(n_all):
            direct_pairs.extend((dfao.evaluate(int(n)) * gv[i]).iter_terms())
        direct: Union[Cyclotomic, complex] = Cyclotomic.from_terms(direct_pairs)
        if total != direct:
            raise AssertionError("block regrouping failed to match the direct sum")
    else:
        total = complex(math.fsum(t.real for t in float_terms),
                        math.fsum(t.imag for t in float_terms))
        dts = [complex(dfao.evaluate(int(n))) * gv[i] for i, n in enumerate(n_all)]
        direct = complex(math.fsum(t.real for t in dts),
                         math.fsum(t.imag for t in dts))
        if abs(total - direct) > 1e-12 * max(1.0, abs(direct)):
            raise AssertionError("block regrouping failed to match the direct sum")
    return BlockDecomposition(total, direct, rows, sigma)


# ---------------------------------------------------------------------------
# standard example automata


def thue_morse_even(base: int = 2) -> Dfao:
    """0/1 indicator of even binary digit sum (the evil numbers)."""
    if base != 2:
        raise ValueError("thue_morse_even is a base-2 machine")
    return Dfao(2, [[0, 1], [1, 0]], [Fraction(1), Fraction(0)],
                name="thue_morse_even")


def digit_sum_mod(k: int, m: int) -> Dfao:
    """Tracks the base-k digit sum mod m; outputs the root of unity e(s/m)."""
    if m < 1:
        raise ValueError("m must be positive")
    trans = [[(s + d) % m for d in range(k)] for s in range(m)]
    outs = [Cyclotomic.root_of_unity(s, m) for s in range(m)]
    return Dfao(k, trans, outs, name=f"digit_sum_mod({k},{m})")


def rudin_shapiro() -> Dfao:
    """(-1)^(number of '11' blocks in binary); four states (prev digit, parity)."""
    # state = 2*parity + prev
    trans = []
    for s in range(4):
        parity, prev = divmod(s, 2)
        row = []
        for d in (0, 1):
            new_par = parity ^ (prev == 1 and d == 1)
            row.append(2 * new_par + d)
        trans.append(row)
    outs = [Fraction(1), Fraction(1), Fraction(-1), Fraction(-1)]
    return Dfao(2, trans, outs, name="rudin_shapiro")


def block_11() -> Dfao:
    """0/1 indicator of containing the block '11' in binary (absorbing accept)."""
    trans = [[0, 1], [0, 2], [2, 2]]
    return Dfao(2, trans, [Fraction(0), Fraction(0), Fraction(1)], name="block_11")


def constant_one(base: int = 2) -> Dfao:
    return Dfao(base, [[0] * base], [Fraction(1)], name="constant_one")


def builtin_sequences(name: str, **params) -> Dfao:
    """Construct one of the standard automata by name."""
    table = {
        "thue_morse_even": thue_morse_even,
        "rudin_shapiro": rudin_shapiro,
        "digit_sum_mod": digit_sum_mod,
        "block_11": block_11,
        "constant_one": constant_one,
    }
    if name not in table:
        raise ValueError(f"unknown builtin sequence {name!r}")
    return table[name](**params)
