import math

import numpy as np
import pytest

from noisysft import robinson as rb
from noisysft.errors import InvalidInput
from noisysft.grid import check_local_admissibility
from noisysft.noise import (clear_violations, flip_process, flip_statistics, flip_trials,
                            mismatch_lower_bound, residual, sample_noise, trial_seeds)


def test_noise_is_deterministic_and_read_only():
    a = sample_noise(20, 10, 0.3, 7)
    b = sample_noise(20, 10, 0.3, 7)
    assert a.bits.shape == (10, 20)
    assert np.array_equal(a.bits, b.bits)
    assert not np.array_equal(a.bits, sample_noise(20, 10, 0.3, 8).bits)
    with pytest.raises(ValueError):
        a.bits[0, 0] = True
    assert sample_noise(5, 5, 0, 1).popcount == 0
    assert sample_noise(5, 5, 1, 1).popcount == 25


def test_noise_density():
    nf = sample_noise(300, 300, 0.2, 3)
    p = nf.popcount / 90000
    assert abs(p - 0.2) < 4 * math.sqrt(0.2 * 0.8 / 90000)


def test_noise_errors():
    with pytest.raises(InvalidInput):
        sample_noise(3, 3, 1.5, 0)
    with pytest.raises(InvalidInput):
        sample_noise(-1, 3, 0.5, 0)


@pytest.mark.parametrize("variant", ["red_black", "enhanced_four_colour"])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_flips_only_break_edges_under_noise(variant, seed):
    ts = rb.build_tileset(variant)
    # the enhanced variant swaps Blue and Green, so it needs a Blue regime
    ca = {"transition_level": 3, "regime": "Bl"} if variant != "red_black" else None
    ref = rb.build_macro_tile(rb.MacroTileSpec(variant, 5, "NE", ca))
    nf = sample_noise(ref.width, ref.height, 0.6, seed)
    out, log = flip_process(ref, nf, 5, 2, seed, variant)
    assert (out.cells != ref.cells).any()
    assert clear_violations(out, ts.forbidden, nf) == []
    assert check_local_admissibility(out, ts.forbidden)  # some edges do break
    # bumpy lattice is unchanged
    assert np.array_equal(ts.kinds[out.cells], ts.kinds[ref.cells])


def test_no_noise_no_flip():
    ref = rb.build_macro_tile(rb.MacroTileSpec("red_black", 4))
    out, log = flip_process(ref, sample_noise(15, 15, 0, 0), 4)
    assert out == ref
    assert not any(e.flippable for e in log.events)
    assert [len(log.at(L)) for L in log.levels()] == [16, 4, 1]


def test_flip_errors():
    ref = rb.build_macro_tile(rb.MacroTileSpec("red_black", 3))
    with pytest.raises(InvalidInput):
        flip_process(ref, sample_noise(7, 7, 0.5, 0), 4)
    with pytest.raises(InvalidInput):
        flip_process(ref, sample_noise(5, 5, 0.5, 0), 3)
    with pytest.raises(InvalidInput):
        flip_process(rb.build_macro_tile(rb.MacroTileSpec("vanilla", 3)),
                     sample_noise(7, 7, 0.5, 0), 3, variant="vanilla")


def test_trials_reproducible_and_statistics():
    ref, runs = flip_trials(0.5, 4, 20, seed=11)
    _, again = flip_trials(0.5, 4, 20, seed=11)
    assert [r.seed for r in runs] == trial_seeds(11, 20)
    assert all(a.flipped == b.flipped for a, b in zip(runs, again))
    stats = flip_statistics([r.log for r in runs], 0.5)
    assert sorted(stats) == [2, 3, 4]
    s2 = stats[2]
    assert s2.tiles == 16 * 20
    assert abs(s2.z_flippable) < 4
    assert s2.flippable_rate == s2.flippable / s2.tiles
    with pytest.raises(InvalidInput):
        flip_statistics([], 0.5)


def test_residual_and_bound():
    assert residual(0.5, 2, 5) == pytest.approx(0.75**4)
    assert mismatch_lower_bound(0.5, 2, 5) == pytest.approx((1 - 0.75**4) / 8)
    assert mismatch_lower_bound(0, 2, 5) == 0
