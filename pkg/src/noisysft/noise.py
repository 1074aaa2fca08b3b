"""Bernoulli noise and the colour-flip process on Red-Black macro-tiles.

An L-tile (L >= 2) is flippable when both of its designated crossing cells
are obscured.  A flip exchanges the colours of every cell of the tile except
the thick-arm cells past the designated ones; the designated cells change
colour on both sides, so the only broken edges are their outer edges, which
touch an obscured cell.  Scales are processed in increasing order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput
from .grid import Configuration, ForbiddenSet, check_local_admissibility

NOISE_STREAM, COIN_STREAM = 0, 1


@dataclass(frozen=True, eq=False)
class NoiseField:
    bits: np.ndarray
    epsilon: float
    seed: int | None = None

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=bool)
        b.setflags(write=False)
        object.__setattr__(self, "bits", b)

    @property
    def height(self):
        return self.bits.shape[0]

    @property
    def width(self):
        return self.bits.shape[1]

    @property
    def popcount(self):
        return int(self.bits.sum())


def streams(seed: int, n: int = 2):
    """Independent generators spawned from one seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def sample_noise(width: int, height: int, eps: float, seed: int) -> NoiseField:
    if not 0 <= eps <= 1:
        raise InvalidInput("eps must lie in [0, 1]")
    if width < 0 or height < 0:
        raise InvalidInput("negative size")
    rng = streams(seed)[NOISE_STREAM]
    return NoiseField(rng.random((height, width)) < eps, float(eps), seed)


@dataclass(frozen=True)
class FlipEvent:
    level: int
    anchor: tuple  # tile centre (row, col)
    flippable: bool
    flipped: bool


@dataclass
class FlipLog:
    events: list = field(default_factory=list)
    scales_processed: int = 0
    start_scale: int = 2

    def at(self, level):
        return [e for e in self.events if e.level == level]

    def levels(self):
        return sorted({e.level for e in self.events})


def _swap_table(ts, variant):
    from .robinson import SWAP_BG, SWAP_RB

    swap = SWAP_RB if variant == "red_black" else SWAP_BG
    table = np.arange(ts.size)
    for i, t in enumerate(ts.tiles):
        k, *edges = t
        new = (k,) + tuple((io, th, side, swap.get(c1, c1), c2) for io, th, side, c1, c2 in edges)
        table[i] = ts.index.get(new, -1)
    return table


def flip_process(c: Configuration, noise: NoiseField, max_scale: int, start_scale: int = 2,
                 seed: int = 0, variant: str = "red_black", orientation: str = "NE"):
    """Apply the flip construction to a macro-tile of ``variant``."""
    from .robinson import build_tileset, tile_regions

    if variant not in ("red_black", "enhanced_four_colour"):
        raise InvalidInput(f"no flip structure for variant {variant!r}")
    n = int(round(math.log2(c.width + 1)))
    if c.width != c.height or 2**n - 1 != c.width:
        raise InvalidInput("configuration is not a macro-tile")
    if noise.bits.shape != c.cells.shape:
        raise InvalidInput("noise field and configuration differ in size")
    if start_scale < 2 or max_scale > n:
        raise InvalidInput(f"scales must lie in [2, {n}]")
    ts = build_tileset(variant)
    table = _swap_table(ts, variant)
    cells = c.cells.copy()
    coin = streams(seed)[COIN_STREAM]
    log = FlipLog(scales_processed=max_scale, start_scale=start_scale)
    bits = noise.bits
    for L in range(start_scale, max_scale + 1):
        regions = tile_regions(n, orientation, L)
        coins = coin.random(len(regions)) < 0.5
        for reg, heads in zip(regions, coins):
            flippable = all(bits[r, cc] for r, cc in reg.designated)
            flipped = bool(flippable and heads)
            log.events.append(FlipEvent(L, reg.centre, bool(flippable), flipped))
            if not flipped:
                continue
            r0, r1, c0, c1 = reg.bounds
            block = cells[r0:r1 + 1, c0:c1 + 1]
            keep = [(r, cc, cells[r, cc]) for r, cc in reg.excluded]
            new = table[block]
            if (new < 0).any():
                raise InvalidInput("flip leaves the alphabet; not a flippable structure")
            cells[r0:r1 + 1, c0:c1 + 1] = new
            for r, cc, v in keep:
                cells[r, cc] = v
    return c.with_cells(cells), log


def clear_violations(c: Configuration, F: ForbiddenSet, noise: NoiseField) -> list:
    """Forbidden-pattern matches whose cells are all unobscured."""
    from .measures import _support_clear

    clear = ~noise.bits
    return [v for v in check_local_admissibility(c, F) if _support_clear(v, F, clear)]


@dataclass(frozen=True)
class ScaleStats:
    level: int
    tiles: int
    flippable: int
    flipped: int
    flippable_rate: float
    flip_rate: float | None
    z_flippable: float | None
    z_flip: float | None


def _z(k, n, p):
    if n == 0:
        return None
    var = n * p * (1 - p)
    if var == 0:
        return None if k == n * p else math.inf
    return (k - n * p) / math.sqrt(var)


def flip_statistics(logs, eps) -> dict:
    """Per-scale rates and z-scores against eps^2 and 1/2.  ``logs`` is a
    FlipLog or a list of them; undefined z-scores are None."""
    if isinstance(logs, FlipLog):
        logs = [logs]
    events = [e for lg in logs for e in lg.events]
    if not events:
        raise InvalidInput("empty flip log")
    out = {}
    p = float(eps) ** 2
    for L in sorted({e.level for e in events}):
        ev = [e for e in events if e.level == L]
        n = len(ev)
        k = sum(e.flippable for e in ev)
        f = sum(e.flipped for e in ev)
        out[L] = ScaleStats(L, n, k, f, k / n, f / k if k else None,
                            _z(k, n, p), _z(f, k, 0.5))
    return out


def residual(eps, start_scale: int, max_scale: int) -> float:
    """Probability that a cell is never inside a flippable tile."""
    return (1 - float(eps) ** 2) ** (max_scale - start_scale + 1)


@dataclass(frozen=True)
class FlipTrial:
    index: int
    seed: int
    noise: NoiseField
    flipped: Configuration
    log: FlipLog


def trial_seeds(seed: int, trials: int) -> list[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(trials)]


def flip_trials(eps, scale: int, trials: int, seed: int, variant: str = "red_black",
                orientation: str = "NE", start_scale: int = 2):
    """Reference macro-tile and independent seeded flip trials over it."""
    from .robinson import MacroTileSpec, build_macro_tile

    if trials < 1:
        raise InvalidInput("trials must be at least 1")
    ref = build_macro_tile(MacroTileSpec(variant, scale, orientation))
    out = []
    for i, s in enumerate(trial_seeds(seed, trials)):
        nf = sample_noise(ref.width, ref.height, eps, s)
        flipped, log = flip_process(ref, nf, scale, start_scale, s, variant, orientation)
        out.append(FlipTrial(i, s, nf, flipped, log))
    return ref, out


def mismatch_lower_bound(eps, start_scale: int, max_scale: int) -> float:
    """(1/8) (1 - residual): expected bumpy-mismatch density lower bound."""
    return (1 - residual(eps, start_scale, max_scale)) / 8
