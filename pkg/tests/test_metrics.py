import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from noisysft import robinson as rb
from noisysft.errors import BudgetExceeded, Inconsistency, InvalidInput
from noisysft.grid import Configuration
from noisysft.metrics import (agreement_counts, best_alignment_distance, besicovitch_periodic,
                              bumpy_mismatch_density, hamming_distance)
from noisysft.noise import flip_process, sample_noise

words = st.lists(st.integers(0, 2), min_size=1, max_size=7)


def test_hamming_frozen():
    r = hamming_distance([0, 1, 1, 0], [0, 0, 1, 1])
    assert r.distance == Fraction(1, 2) and r.mismatches == 2 and r.window_cells == 4
    with pytest.raises(InvalidInput):
        hamming_distance([0, 1], [0, 1, 1])
    with pytest.raises(InvalidInput):
        hamming_distance(np.zeros((1, 0)), np.zeros((1, 0)))


def test_besicovitch_frozen():
    assert besicovitch_periodic(np.array([[0, 1]]), np.array([[1, 0]])) == 0
    assert besicovitch_periodic(np.array([[0]]), np.array([[1]])) == 1
    assert besicovitch_periodic(np.array([[0, 0, 1]]), np.array([[0, 1]])) == Fraction(1, 2)
    with pytest.raises(BudgetExceeded):
        besicovitch_periodic(np.zeros((1, 97), int), np.zeros((1, 89), int), budget=100)


@given(words, words)
def test_besicovitch_metric_laws(a, b):
    A, B = np.array([a]), np.array([b])
    d = besicovitch_periodic(A, B)
    assert d == besicovitch_periodic(B, A)
    assert 0 <= d <= 1
    assert besicovitch_periodic(A, A) == 0
    assert besicovitch_periodic(A, np.roll(A, 1, axis=1)) == 0


@given(words, words, words)
def test_besicovitch_triangle(a, b, c):
    A, B, C = (np.array([x]) for x in (a, b, c))
    assert besicovitch_periodic(A, C) <= besicovitch_periodic(A, B) + besicovitch_periodic(B, C)


@given(words, words)
def test_fft_agreements_match_direct_count(a, b):
    A, B = np.array([a * len(b)]), np.array([b * len(a)])
    got = agreement_counts(A, B)
    want = [int((A == np.roll(B, -k, axis=1)).sum()) for k in range(A.shape[1])]
    assert got[0].tolist() == want


def test_best_alignment_2d():
    a = Configuration(np.array([[0, 1], [1, 1]]), 2, "periodic", 2)
    b = Configuration(np.array([[1, 1], [1, 0]]), 2, "periodic", 2)
    d, k = best_alignment_distance(a, b)
    assert d == 0 and k == (1, 1)
    with pytest.raises(InvalidInput):
        best_alignment_distance(Configuration(np.array([[0]]), 2, "free", 2), a)


def test_bumpy_mismatch():
    ref = rb.build_macro_tile(rb.MacroTileSpec("red_black", 4))
    assert bumpy_mismatch_density(ref, ref, "red_black") == 0
    out, _ = flip_process(ref, sample_noise(15, 15, 1.0, 0), 4, seed=0)
    d = bumpy_mismatch_density(out, ref, "red_black")
    # at full noise every cell is inside a flippable tile at every scale
    assert 0 < d <= Fraction(64, 225)
    other = rb.build_macro_tile(rb.MacroTileSpec("vanilla", 4))
    with pytest.raises(Inconsistency):
        bumpy_mismatch_density(other, ref, "red_black")
