import random
from fractions import Fraction

import numpy as np
import pytest

from autoexp.automata import (Dfao, base_digits, block_11, block_decompose_sum,
                              builtin_sequences, constant_one, digit_sum_mod,
                              find_synchronizing_word, rudin_shapiro,
                              strongly_connected_components, sync_failure_count,
                              thue_morse_even)
from autoexp.exact import Cyclotomic

ONE = Cyclotomic.from_rational(1)
ZERO = Cyclotomic.from_rational(0)


def random_dfao(rng, base=None, n_states=None, max_states=5):
    k = base or rng.choice((2, 2, 3, 4))
    n = n_states or rng.randrange(1, max_states)
    trans = [[rng.randrange(n) for _ in range(k)] for _ in range(n)]
    trans[0][0] = 0
    outs = [Fraction(rng.randrange(-2, 3)) for _ in range(n)]
    return Dfao(k, trans, outs)


# -- construction and evaluation ----------------------------------------------


def test_validation():
    with pytest.raises(ValueError):
        Dfao(1, [[0]], [1])
    with pytest.raises(ValueError):
        Dfao(2, [[0]], [1])  # missing digit column
    with pytest.raises(ValueError):
        Dfao(2, [[0, 1]], [1])  # target out of range
    with pytest.raises(ValueError):
        Dfao(2, [[1, 0], [0, 1]], [1, 0])  # digit 0 must fix the start


def test_thue_morse_examples():
    tm = thue_morse_even()
    assert tm.evaluate(0) == ONE
    assert tm.evaluate(3) == ONE
    got = [tm.evaluate(n) for n in range(1, 8)]
    want = [ZERO, ZERO, ONE, ZERO, ONE, ONE, ZERO]
    assert got == want


def test_truncated_evaluation():
    tm = thue_morse_even()
    assert tm.evaluate_truncated(5, 2) == ZERO  # 5 mod 4 = 1, odd digit sum
    assert tm.evaluate_truncated(5, 0) == tm.evaluate(0)
    rng = random.Random(2)
    for _ in range(100):
        d = random_dfao(rng)
        lam = rng.randrange(0, 5)
        n = rng.randrange(0, d.base ** lam) if lam else 0
        assert d.evaluate_truncated(n, lam) == d.evaluate(n)


def test_leading_zero_invariance():
    rng = random.Random(4)
    for _ in range(1000):
        d = random_dfao(rng)
        n = rng.randrange(0, 10 ** 4)
        pad = rng.randrange(0, 4)
        digits = [0] * pad + base_digits(n, d.base)
        assert d.outputs[d.walk(d.initial, digits)] == d.evaluate(n)


def test_state_table_matches_walks():
    rng = random.Random(6)
    for _ in range(20):
        d = random_dfao(rng)
        table = d.state_table(300)
        for n in range(0, 300, 13):
            assert table[n] == d.state_at(n)
        for s in range(d.n_states):
            t2 = d.state_table(100, start=s)
            for n in (0, 1, 17, 99):
                assert t2[n] == d.walk(s, base_digits(n, d.base))


# -- builtins ------------------------------------------------------------------


def test_builtins():
    assert constant_one().evaluate(12345) == ONE
    ds = digit_sum_mod(2, 2)
    tm_sign = [1, -1, -1, 1, -1, 1, 1, -1]
    for n, want in enumerate(tm_sign):
        assert ds.evaluate(n) == Cyclotomic.from_rational(want)
    rs = rudin_shapiro()
    rs_vals = [1, 1, 1, -1, 1, 1, -1, 1]
    for n, want in enumerate(rs_vals):
        assert rs.evaluate(n) == Cyclotomic.from_rational(want)
    b11 = block_11()
    assert b11.evaluate(3) == ONE and b11.evaluate(5) == ZERO
    assert builtin_sequences("thue_morse_even").name == "thue_morse_even"
    with pytest.raises(ValueError):
        builtin_sequences("no_such_thing")


# -- strong connectivity ---------------------------------------------------------


def test_scc_strongly_connected():
    dec = strongly_connected_components(thue_morse_even())
    assert len(dec.components) == 1 and dec.is_final == (True,)
    assert set(dec.component_sequences) == {0, 1}


def test_scc_block_11():
    # {q0, q1} are mutually reachable (q0 -1-> q1 -0-> q0), so two components
    dec = strongly_connected_components(block_11())
    assert len(dec.components) == 2
    assert sum(dec.is_final) == 1
    final_comp = dec.is_final.index(True)
    assert dec.components[final_comp] == (2,)
    # re-rooted sequence from the absorbing state is constantly 1
    seq = dec.component_sequences[2]
    assert all(seq.evaluate(n) == ONE for n in range(10))


def test_scc_chain():
    chain = Dfao(2, [[0, 1], [1, 1]], [Fraction(0), Fraction(1)])
    dec = strongly_connected_components(chain)
    assert len(dec.components) == 2
    finals = {dec.components[i][0] for i, f in enumerate(dec.is_final) if f}
    assert finals == {1}


# -- synchronization --------------------------------------------------------------


def test_synchronizing_words():
    word = find_synchronizing_word(block_11())
    ends = {block_11().walk(s, word) for s in range(3)}
    assert len(ends) == 1
    assert find_synchronizing_word(thue_morse_even()) is None
    assert find_synchronizing_word(constant_one()) == ()


def test_synchronizing_word_random_validity():
    rng = random.Random(8)
    found = 0
    for _ in range(200):
        d = random_dfao(rng)
        w = find_synchronizing_word(d)
        if w is None:
            continue
        found += 1
        assert len({d.walk(s, w) for s in range(d.n_states)}) == 1
    assert found > 50


def test_sync_failure_count_one_state():
    assert sync_failure_count(constant_one(), 0, 256, 3) == 0


def test_sync_failure_count_range_error():
    with pytest.raises(ValueError):
        sync_failure_count(block_11(), 0, 100, 7)  # 2^7 > 100


def test_sync_failure_count_lambda_zero():
    # lam = 0: truncated word is empty, mismatch iff some state moves
    d = block_11()
    cnt = sync_failure_count(d, 0, 64, 0)
    direct = 0
    for n in range(1, 65):
        digs = base_digits(n, 2)
        direct += any(d.walk(s, digs) != s for s in range(3))
    assert cnt == direct


def test_sync_failure_count_pinned(pins):
    assert sync_failure_count(block_11(), 0, 1024, 4) == pins["sync_block11_x1024_lam4"]


def test_sync_failure_monotone_in_lambda():
    d = block_11()
    counts = [sync_failure_count(d, 0, 4096, lam) for lam in range(1, 11)]
    assert all(a >= b for a, b in zip(counts, counts[1:]))


def test_sync_failure_workers_fallback_agrees():
    d = block_11()
    want = sync_failure_count(d, 5, 500, 3)
    direct = 0
    for n in range(6, 506):
        digs = base_digits(n, 2)
        trun = base_digits(n % 8, 2)
        direct += any(d.walk(s, digs) != d.walk(s, trun) for s in range(3))
    assert want == direct
    # the walk-based fallback (with and without worker threads) must agree
    assert sync_failure_count(d, 5, 500, 3, _dense_limit=1) == direct
    assert sync_failure_count(d, 5, 500, 3, workers=3, _dense_limit=1) == direct


# -- block regrouping ---------------------------------------------------------------


def test_block_decompose_exact_and_classified():
    b11 = block_11()
    res = block_decompose_sum(b11, lambda n: 1, 0, 256, 3)
    assert res.exact
    assert res.total == res.direct_total
    # r in the final set iff reading r from every state lands in the absorbing
    # component; for block_11 that means binary r contains '11'
    for row in res.rows:
        want = "11" in format(row.r, "b") if row.r else False
        assert row.in_final_set == want


def test_block_decompose_strongly_connected_all_final():
    res = block_decompose_sum(thue_morse_even(), lambda n: 1, 0, 64, 2)
    assert all(row.in_final_set for row in res.rows)


def test_block_decompose_matches_direct_sum_random():
    rng = random.Random(12)
    for _ in range(200):
        d = random_dfao(rng)
        sigma = rng.randrange(1, 3)
        K = d.base ** sigma
        x = rng.randrange(K, K + 200)
        y = rng.randrange(0, 60)
        if rng.random() < 0.5:
            g = lambda n: Fraction(n % 5, 3)
        else:
            g = lambda n: complex(np.cos(n), np.sin(n))
        res = block_decompose_sum(d, g, y, x, sigma)
        if res.exact:
            assert res.total == res.direct_total
        else:
            assert abs(res.total - res.direct_total) <= 1e-12 * max(
                1.0, abs(res.direct_total))


def test_block_decompose_requires_small_block():
    with pytest.raises(ValueError):
        block_decompose_sum(thue_morse_even(), lambda n: 1, 0, 3, 2)


# -- text format -----------------------------------------------------------------


def test_text_round_trip(tmp_path):
    for d in (thue_morse_even(), block_11(), rudin_shapiro(), digit_sum_mod(3, 3)):
        path = tmp_path / "m.dfao"
        d.save(path)
        d2 = Dfao.load(path)
        assert d2.base == d.base and d2.transitions == d.transitions
        for n in range(20):
            assert abs(complex(d2.evaluate(n)) - complex(d.evaluate(n))) < 1e-12


def test_text_format_exact_for_rational_outputs(tmp_path):
    d = thue_morse_even()
    d2 = Dfao.from_text(d.to_text())
    assert d2.outputs == d.outputs


def test_text_rejects_missing_transition():
    text = ("dfao v1 base=2 states=2 initial=0\n"
            "state 0 out=r:1/1\nstate 1 out=r:0/1\n"
            "t 0 0 0\nt 0 1 1\nt 1 0 1\n")
    with pytest.raises(ValueError):
        Dfao.from_text(text)


def test_text_rejects_bad_header_and_lines():
    with pytest.raises(ValueError):
        Dfao.from_text("dfao v2 base=2 states=1 initial=0\n")
    with pytest.raises(ValueError):
        Dfao.from_text("dfao v1 base=2 states=1 initial=0\nstate 0 out=r:1/1\n"
                       "t 0 0 0\nt 0 1 0\nbogus line\n")
