import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisysft.errors import BudgetExceeded, InvalidInput
from noisysft.grid import ForbiddenSet, Pattern
from noisysft.measures import (BernoulliProduct, MetricSpec, MixtureMeasure, PeriodicMeasure,
                               certify_le, coupling_delta_min, covering_word, cylinder_prob,
                               delta_mass, dplus_truncated, dyadic_weights,
                               l1_on_window, mk_choice, n_of_delta, pair_measure, phi_threshold,
                               project, stability_witness, window_law, window_lp)
from noisysft.metrics import besicovitch_periodic

GOLDEN = ForbiddenSet(2, (Pattern.word("11", 2),), None, 1)
words = st.text("01", min_size=1, max_size=6)


def test_frozen_values():
    assert PeriodicMeasure.word("011").distribution(1) == {(0, 1): F(1, 3), (1, 0): F(1, 3),
                                                            (1, 1): F(1, 3)}
    assert cylinder_prob(BernoulliProduct(F(1, 4)), Pattern.word("10")) == F(3, 16)
    assert l1_on_window(BernoulliProduct(F(1, 4)), BernoulliProduct(F(1, 2)), 1) == F(5, 8)
    assert [n_of_delta(x) for x in (1, F(1, 2), F(1, 8))] == [2, 3, 5]
    assert mk_choice(F(1, 2), 2, 1) == (3, 1535, 1544, F(1, 128))
    assert phi_threshold(F(1, 64), 1, 2, 1, 8) == 1
    assert delta_mass(Pattern.word("0110"), Pattern.word("0011")) == F(1, 2)


def test_zero_one_distance_encloses_four_thirds():
    zero, one = PeriodicMeasure.word("0"), PeriodicMeasure.word("1")
    for n in range(10):
        lo, hi = dplus_truncated(zero, one, MetricSpec(1, n))
        assert lo <= F(4, 3) <= hi


def test_brute_force_window_l1():
    # independent route: enumerate every word of the window
    mu = MixtureMeasure(((F(1, 3), PeriodicMeasure.word("01")),
                         (F(2, 3), PeriodicMeasure.word("0"))))
    nu = BernoulliProduct(F(1, 3))
    for n in range(4):
        tot = sum(abs(cylinder_prob(mu, Pattern(np.array([w]), 2, 1))
                      - cylinder_prob(nu, Pattern(np.array([w]), 2, 1)))
                  for w in itertools.product((0, 1), repeat=n + 1))
        assert l1_on_window(mu, nu, n) == tot


@given(words, words)
@settings(max_examples=40)
def test_dplus_symmetric_and_zero_on_shift(a, b):
    mu, nu = PeriodicMeasure.word(a), PeriodicMeasure.word(b)
    spec = MetricSpec(1, 4)
    assert dplus_truncated(mu, nu, spec) == dplus_truncated(nu, mu, spec)
    assert dplus_truncated(mu, PeriodicMeasure.word(a[1:] + a[0]), spec)[0] == 0


def test_certify_decides():
    zero, one = PeriodicMeasure.word("0"), PeriodicMeasure.word("1")
    ok, n, (lo, hi) = certify_le(zero, one, 2)
    assert ok is True and hi <= 2
    ok, n, (lo, hi) = certify_le(zero, one, 1)
    assert ok is False and lo > 1
    assert certify_le(zero, one, F(4, 3), max_rank=6)[0] is None


def test_dyadic_weights_and_covering_word():
    assert dyadic_weights({(0,): F(1, 3), (1,): F(2, 3)}, 3) == {(0,): 3, (1,): 5}
    w = covering_word(BernoulliProduct(F(1, 4)), 1, 3)
    assert "".join(map(str, w.cells[0])) == "0000000000010110"
    with pytest.raises(BudgetExceeded):
        covering_word(BernoulliProduct(F(1, 4)), 1, 30, budget=1000)


@given(st.integers(1, 4), st.integers(0, 6), st.integers(0, 2**16))
def test_dyadic_weights_sum_and_accuracy(m, k, s):
    rng = random.Random(s)
    keys = list(itertools.product((0, 1), repeat=m))
    raw = [rng.randint(0, 9) for _ in keys]
    if not sum(raw):
        raw[0] = 1
    law = {w: F(x, sum(raw)) for w, x in zip(keys, raw)}
    wt = dyadic_weights(law, k)
    assert sum(wt.values()) == 2**k
    assert all(abs(wt.get(w, 0) - law[w] * 2**k) < 1 for w in keys)


def test_covering_word_law_is_close():
    mu = PeriodicMeasure.word("0010")
    w = covering_word(mu, 1, 4)
    assert window_law(mu, 1) == {(0, 0): F(1, 2), (0, 1): F(1, 4), (1, 0): F(1, 4)}
    assert l1_on_window(PeriodicMeasure(w), mu, 1) < F(1, 4)


def test_projection_and_pairs():
    lam = pair_measure(Pattern.word("01"), Pattern.word("11"))
    assert lam.alphabet_size == 4
    assert project(lam, 2).base == Pattern.word("01")
    with pytest.raises(InvalidInput):
        pair_measure(Pattern.word("01"), Pattern.word("1"))


def test_coupling_routes():
    a, b = Pattern.word("01"), Pattern.word("0")
    assert coupling_delta_min(a, b) == F(1, 2)
    assert coupling_delta_min(a, b, "window-lp") == F(1, 2)
    with pytest.raises(InvalidInput):
        coupling_delta_min(a, b, "guess")


@given(words, words)
@settings(max_examples=30)
def test_window_lp_below_exact(a, b):
    pa, pb = Pattern.word(a), Pattern.word(b)
    lb, val, cpl = window_lp(PeriodicMeasure(pa), PeriodicMeasure(pb), 2)
    assert lb <= besicovitch_periodic(pa, pb)
    assert lb <= F(val).limit_denominator(1 << 20) + F(1, 10**6)
    m1, m2 = cpl.marginals()
    assert abs(float(sum(m1.values())) - 1) < 1e-6


def test_witness():
    full = ForbiddenSet(2, (), None, 1)
    assert str(stability_witness(full, F(1, 2), F(1, 4), F(1, 4), F(1, 8))) == "holds"
    assert str(stability_witness(GOLDEN, F(1, 2), F(1, 4), F(1, 4), F(1, 8))) == "holds"
    v = stability_witness(GOLDEN, F(1, 2), F(1, 4), F(1, 4), F(1, 8), budget=10)
    assert v.status == "inconclusive" and v.layer == "enumeration"
    with pytest.raises(InvalidInput):
        stability_witness(GOLDEN, F(1, 2), F(1, 4), F(1, 8), F(1, 4))


def test_measure_errors():
    with pytest.raises(InvalidInput):
        MetricSpec(F(1, 2), 3)
    with pytest.raises(InvalidInput):
        n_of_delta(0)
    with pytest.raises(InvalidInput):
        dplus_truncated(PeriodicMeasure.word("0"), PeriodicMeasure.word("0", 3), MetricSpec())
