from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisysft import robinson as rb
from noisysft.errors import BudgetExceeded, Inconsistency, InvalidInput
from noisysft.grid import Configuration, check_local_admissibility


@pytest.mark.parametrize("variant,size", [("vanilla", 32), ("red_black", 60),
                                          ("enhanced_four_colour", 180)])
def test_alphabet_sizes_and_realised(variant, size):
    ts = rb.build_tileset(variant)
    assert ts.size == size
    # every tile of the closed alphabet occurs in some generated macro-tile
    assert rb.realised_tiles(variant, 5) == set(ts.tiles)


@given(st.sampled_from(rb.VARIANTS), st.data())
def test_rotation_and_reflection_laws(variant, data):
    ts = rb.build_tileset(variant)
    t = data.draw(st.sampled_from(ts.tiles))
    r = t
    for _ in range(4):
        r = rb.rotate(r)
    assert r == t
    assert rb.reflect(rb.reflect(t)) == t
    assert rb.rotate(t) in ts.index
    if variant != "enhanced_four_colour":
        assert rb.reflect(t) in ts.index


def test_closure_is_idempotent():
    for v in rb.VARIANTS:
        tiles = rb.build_tileset(v).tiles
        assert set(rb.closure(tiles, v != "enhanced_four_colour")) == set(tiles)


@given(st.sampled_from(rb.VARIANTS), st.integers(1, 5), st.sampled_from(sorted(rb.ORIENTATIONS)))
@settings(max_examples=30)
def test_macro_tiles_admissible(variant, n, o):
    ts = rb.build_tileset(variant)
    c = rb.build_macro_tile(rb.MacroTileSpec(variant, n, o))
    assert c.cells.shape == (2**n - 1, 2**n - 1)
    assert not check_local_admissibility(c, ts.forbidden)
    assert int((ts.kinds[c.cells] == rb.BUMPY).sum()) == 4 ** (n - 1)


def test_census_frozen_values():
    c = rb.build_macro_tile(rb.MacroTileSpec("red_black", 4))
    cen = rb.census(c, "red_black")
    assert cen.size_side == 15
    assert cen.bumpy_count == {"K": 64}
    assert cen.red_square_count == {5: 4}
    assert cen.outside_red_count == 125
    counts = [sum(rb.census(rb.build_macro_tile(rb.MacroTileSpec("red_black", n)),
                            "red_black").red_square_count.values()) for n in (3, 4, 5)]
    assert counts == [1, 4, 17]


def test_bumpy_density():
    assert rb.bumpy_density(3) == Fraction(16, 49)


def test_single_tile_corruption_is_detected():
    ts = rb.build_tileset("red_black")
    c = rb.build_macro_tile(rb.MacroTileSpec("red_black", 3))
    cells = c.cells.copy()
    cells[3, 3] = (cells[3, 3] + 1) % ts.size
    assert check_local_admissibility(Configuration(cells, ts.size, "free", 2), ts.forbidden)


def test_flip_regions_geometry():
    for L in (2, 3, 4):
        regs = rb.tile_regions(4, "NE", L)
        assert len(regs) == 4 ** (4 - L)
        for reg in regs:
            r0, r1, c0, c1 = reg.bounds
            assert r1 - r0 + 1 == 2**L - 1
            for r, c in reg.designated + reg.excluded:
                assert r0 <= r <= r1 and c0 <= c <= c1
    with pytest.raises(InvalidInput):
        rb.tile_regions(3, "NE", 1)


def test_errors():
    with pytest.raises(InvalidInput):
        rb.MacroTileSpec("plain", 3)
    with pytest.raises(InvalidInput):
        rb.MacroTileSpec("vanilla", 0)
    with pytest.raises(InvalidInput):
        rb.MacroTileSpec("vanilla", 2, "UP")
    with pytest.raises(BudgetExceeded):
        rb.build_macro_tile(rb.MacroTileSpec("vanilla", 12), max_cells=1000)
    with pytest.raises(Inconsistency):
        rb.build_tileset("vanilla").id_of(next(t for t in rb.build_tileset("red_black").tiles
                                              if t not in rb.build_tileset("vanilla").index))
