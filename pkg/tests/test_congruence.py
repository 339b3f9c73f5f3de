import math
import random
from fractions import Fraction

import pytest

import oracles
from autoexp.automata import Dfao, constant_one, thue_morse_even
from autoexp.budget import BudgetError
from autoexp.congruence import (ValueHistogram, brute_force_count,
                                count_solutions, cyclic_convolve,
                                value_histogram)
from autoexp.modring import parse_rational_function

INV_X = parse_rational_function("1/X")
IDENT = parse_rational_function("X")


def test_histogram_identity_map():
    h = value_histogram(constant_one(), IDENT, 7)
    assert h.counts == (1,) * 7 and h.support_size == 7


def test_histogram_inverse_map():
    h = value_histogram(constant_one(), INV_X, 7)
    # n = 7 is the pole; 1..6 biject onto their inverses
    assert h.counts[0] == 0 and h.support_size == 6
    assert all(h.counts[m] == 1 for m in range(1, 7))


def test_histogram_evil_matches_oracle():
    h = value_histogram(thue_morse_even(), INV_X, 101)
    want, support = oracles.histogram_evil_inv(101)
    assert list(h.counts) == want and h.support_size == support


def test_histogram_rejects_non_indicator():
    bad = Dfao(2, [[0, 1], [1, 0]], [Fraction(1), Fraction(-1)])
    with pytest.raises(ValueError):
        value_histogram(bad, IDENT, 5)


def test_histogram_strict_poles():
    with pytest.raises(ValueError):
        value_histogram(constant_one(), INV_X, 7, strict_poles=True)


def test_convolution_identity_and_uniform():
    q = 9
    h = value_histogram(constant_one(), IDENT, q)
    delta = ValueHistogram(q, (1,) + (0,) * (q - 1), 1)
    assert cyclic_convolve(h, delta).counts == h.counts
    ones = ValueHistogram(q, (1,) * q, q)
    assert cyclic_convolve(ones, ones).counts == (q,) * q


def test_convolution_matches_direct_double_loop():
    rng = random.Random(3)
    for _ in range(40):
        q = 12
        c1 = [rng.randrange(0, 9) for _ in range(q)]
        c2 = [rng.randrange(0, 9) for _ in range(q)]
        h1 = ValueHistogram(q, tuple(c1), sum(c1))
        h2 = ValueHistogram(q, tuple(c2), sum(c2))
        out = cyclic_convolve(h1, h2)
        direct = [sum(c1[j] * c2[(m - j) % q] for j in range(q)) for m in range(q)]
        assert list(out.counts) == direct


def test_convolution_handles_large_exact_counts():
    q = 5
    big = 10 ** 12
    h = ValueHistogram(q, (big, 1, 0, 0, 0), big + 1)
    out = cyclic_convolve(h, h)
    assert out.counts[0] == big * big
    assert out.counts[1] == 2 * big


def test_convolution_modulus_mismatch():
    with pytest.raises(ValueError):
        cyclic_convolve(ValueHistogram(3, (1, 0, 0), 1),
                        ValueHistogram(4, (1, 0, 0, 0), 1))


def test_count_solutions_exact_equidistribution():
    with pytest.warns(UserWarning):  # linear f triggers the advisory warning
        res = count_solutions([IDENT], constant_one(), 11, 4)
    assert res.n_solutions == 1
    assert res.main_term == Fraction(11, 11)


def test_count_solutions_two_inverses():
    # pairs of units with inv(a) + inv(b) = 0 mod 7: b = -a, six pairs
    import warnings
    res = count_solutions([INV_X, INV_X], constant_one(), 7, 0)
    assert res.n_solutions == 6


def test_count_warns_on_linear():
    with pytest.warns(UserWarning):
        count_solutions([IDENT, INV_X], constant_one(), 7, 0)


def test_count_matches_brute_force_random():
    rng = random.Random(5)
    fracs = [INV_X, parse_rational_function("(X^2+1)/X"),
             parse_rational_function("X^3")]
    sets = [constant_one(), thue_morse_even()]
    checked = 0
    while checked < 50:
        r = rng.randrange(1, 4)
        q = rng.choice((7, 11, 13, 31, 101)) if r <= 2 else rng.choice((7, 11, 13, 31))
        fs = [rng.choice(fracs) for _ in range(r)]
        s = rng.choice(sets)
        m = rng.randrange(0, q)
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            assert count_solutions(fs, s, q, m).n_solutions == \
                brute_force_count(fs, s, q, m)
        checked += 1


def test_brute_force_budget():
    with pytest.raises(BudgetError):
        brute_force_count([INV_X] * 5, constant_one(), 101, 0)


def test_brute_force_empty_set():
    empty = Dfao(2, [[0, 0]], [Fraction(0)])
    assert brute_force_count([INV_X], empty, 11, 3) == 0
    assert count_solutions([INV_X], empty, 11, 3).n_solutions == 0


def test_total_mass_conservation():
    rng = random.Random(7)
    for _ in range(20):
        q = rng.choice((5, 7, 11))
        fs = [INV_X, parse_rational_function("X^3")]
        total = sum(count_solutions(fs, thue_morse_even(), q, m).n_solutions
                    for m in range(q))
        supports = count_solutions(fs, thue_morse_even(), q, 0).support_sizes
        assert total == math.prod(supports)


def test_permutation_invariance():
    fs = [INV_X, parse_rational_function("X^3"),
          parse_rational_function("(X^2+1)/X")]
    for m in (0, 1, 5):
        a = count_solutions(fs, thue_morse_even(), 31, m).n_solutions
        b = count_solutions(list(reversed(fs)), thue_morse_even(), 31, m).n_solutions
        assert a == b


def test_translation_covariance():
    # replacing f_1 by f_1 + c shifts the target by c
    c = 3
    f_shift = INV_X + Fraction(c)
    base = [INV_X, parse_rational_function("X^3")]
    shifted = [f_shift, parse_rational_function("X^3")]
    for m in (0, 2, 9):
        a = count_solutions(base, thue_morse_even(), 31, m).n_solutions
        b = count_solutions(shifted, thue_morse_even(), 31, m + c).n_solutions
        assert a == b


def test_composite_modulus_allowed():
    res = count_solutions([INV_X, INV_X], constant_one(), 15, 1)
    assert res.n_solutions == brute_force_count([INV_X, INV_X], constant_one(), 15, 1)
