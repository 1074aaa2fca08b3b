import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from noisysft import robinson as rb
from noisysft.bounds import (besicovitch_bound, check_lemma, construction_constants,
                             min_Dk_bruteforce, outside_red, p1_density, polynomial_rate,
                             r_sequence, rate_table, real_argmin_k)
from noisysft.errors import InvalidInput


def test_frozen_constants():
    e = construction_constants("enhanced", 3)
    assert (e.p, e.C, e.rho) == (16, 7, F(15, 64))
    p = construction_constants("p1", 1)
    assert (p.p, p.C, p.rho) == (16, 7, F(24, 49))
    assert besicovitch_bound(construction_constants("enhanced", 2), F(1, 1000)) == F(899, 80)
    assert p1_density(1) == F(24, 49) and outside_red(1) == 24
    assert rate_table("p1", [1], [F(1, 10)]) == [("p1", 1, F(1, 10), F(1130256, 245))]


@pytest.mark.parametrize("n", [1, 2])
def test_recurrence_matches_generated_tiling(n):
    # second route: count cells outside Red squares of a real macro-tile
    c = rb.build_macro_tile(rb.MacroTileSpec("red_black", 2 * n + 1))
    assert rb.census(c, "red_black").outside_red_count == outside_red(n)


def test_rate_frozen():
    r = polynomial_rate(4, F(1, 2))
    assert r.theta == 0.5 and abs(r.exponent - 1 / 3) < 1e-15
    assert abs(r.constant - 3.7797631496846193) < 1e-12
    b = r.bound(F(1, 100))
    assert abs(float(b.a) - r.constant * 0.01 ** (1 / 3)) < 1e-12 and b.a <= b.b
    assert min_Dk_bruteforce(4, F(1, 2), F(1, 1000), 1, 20) == (F(189, 1000), 3)
    assert abs(real_argmin_k(4, F(1, 2), F(1, 1000)) - 2.988594761554029) < 1e-12


@given(st.integers(5, 64), st.integers(1, 99), st.integers(1, 4), st.integers(1, 999))
def test_lemma_holds_where_valid(a4, b100, K, e):
    alpha, beta = F(a4, 4), F(b100, 100)
    top = F(float(polynomial_rate(alpha, beta).validity(K).a))
    eps = top * F(e, 1000)
    if eps <= 0:
        return
    c = check_lemma(alpha, beta, eps, K, 40)
    if c.valid is True:
        assert c.holds is True
        assert c.argmin >= K


@given(st.integers(1, 12))
def test_recurrence_sandwich(n):
    rn = r_sequence(n)[-1]
    assert rn >= 4 ** (n + 1) * (4**n - 3**n)
    assert (2 ** (2 * n + 1) - 1) ** 2 - rn <= 4 * 12**n


def test_errors():
    for bad in ((1, F(1, 2)), (4, 1), (4, 0)):
        with pytest.raises(InvalidInput):
            polynomial_rate(*bad)
    with pytest.raises(InvalidInput):
        construction_constants("p9", 1)
    with pytest.raises(InvalidInput):
        r_sequence(0)
    with pytest.raises(InvalidInput):
        besicovitch_bound(construction_constants("p1", 1), 2)
    assert math.isfinite(polynomial_rate(16, F(3, 4)).exponent)
