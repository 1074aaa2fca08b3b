"""Hamming distances, alignment-minimised distances and the exact
Besicovitch distance between periodic orbit measures.

For two periodic orbit measures every ergodic joining is the uniform
measure on the orbit of a pair (x, sigma_k y); the joining infimum of the
disagreement mass is therefore a minimum over relative shifts k taken on
the lcm torus, and only shifts modulo gcd of the periods are distinct.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, Inconsistency, InvalidInput
from .grid import Configuration, Pattern

DEFAULT_TORUS_BUDGET = 1 << 24


@dataclass(frozen=True)
class HammingResult:
    distance: Fraction
    window_cells: int
    mismatches: int


class DisagreementEvent:
    """The event {x_0 != y_0} on the product alphabet."""

    @staticmethod
    def indicator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a != b


def _cells(x) -> np.ndarray:
    if isinstance(x, (Pattern, Configuration)):
        return x.cells
    a = np.asarray(x, dtype=np.int64)
    return a[None, :] if a.ndim == 1 else a


def hamming_distance(u, v) -> HammingResult:
    a, b = _cells(u), _cells(v)
    if a.shape != b.shape:
        raise InvalidInput(f"window mismatch: {a.shape} vs {b.shape}")
    for x, y in ((u, v), (v, u)):
        if hasattr(x, "alphabet_size") and hasattr(y, "alphabet_size") \
                and x.alphabet_size != y.alphabet_size:
            raise InvalidInput("alphabet mismatch")
    if a.size == 0:
        raise InvalidInput("empty window")
    mism = int(np.count_nonzero(a != b))
    return HammingResult(Fraction(mism, a.size), int(a.size), mism)


def _torus(a, b, budget):
    (h1, w1), (h2, w2) = a.shape, b.shape
    H, W = math.lcm(h1, h2), math.lcm(w1, w2)
    gh, gw = math.gcd(h1, h2), math.gcd(w1, w2)
    work = H * W * gh * gw
    if work > budget:
        raise BudgetExceeded(f"shift search needs {work} cell comparisons, budget {budget}",
                             layer="torus", needed=work, budget=budget)
    return np.tile(a, (H // h1, W // w1)), np.tile(b, (H // h2, W // w2)), gh, gw


def best_alignment_distance(c1: Configuration, c2: Configuration,
                            budget: int = DEFAULT_TORUS_BUDGET):
    """min over k of the per-period Hamming distance between c1 and
    sigma_k c2; the lexicographically smallest achieving k is reported."""
    if not (c1.periodic and c2.periodic):
        raise InvalidInput("best_alignment_distance needs periodic configurations")
    A, B, gh, gw = _torus(c1.cells, c2.cells, budget)
    best, arg = None, None
    for dr in range(gh):
        for dc in range(gw):
            m = int(np.count_nonzero(A != np.roll(B, (-dr, -dc), axis=(0, 1))))
            if best is None or m < best:
                best, arg = m, (dr, dc)
    shift = (arg[1],) if c1.dim == 1 else arg
    return Fraction(best, A.size), shift


def agreement_counts(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Agreements between a and every cyclic shift of b on a common torus,
    via per-symbol circular cross-correlation."""
    fa = None
    total = np.zeros(a.shape)
    for s in np.union1d(np.unique(a), np.unique(b)):
        x = (a == s).astype(float)
        y = (b == s).astype(float)
        fa = np.fft.fft2(x)
        total += np.real(np.fft.ifft2(np.conj(fa) * np.fft.fft2(y)))
    counts = np.rint(total)
    if np.max(np.abs(total - counts), initial=0.0) > 0.25:
        raise Inconsistency("correlation rounding error too large")
    return counts.astype(np.int64)


def besicovitch_periodic(w1, w2, budget: int = DEFAULT_TORUS_BUDGET) -> Fraction:
    """d_B(<w1>, <w2>) for box patterns read as periodic tiles."""
    a, b = _cells(w1), _cells(w2)
    if a.size == 0 or b.size == 0:
        raise InvalidInput("empty pattern")
    A, B, _, _ = _torus(a, b, budget)
    agree = agreement_counts(A, B)
    return Fraction(int(A.size - agree.max()), A.size)


def bumpy_colours(c: Configuration, variant: str) -> np.ndarray:
    """Per-cell colour of bumpy corners, -1 elsewhere."""
    from .robinson import BUMPY, build_tileset

    ts = build_tileset(variant)
    col = np.array([max(e[3] for e in t[1:]) if t[0] == BUMPY else -1 for t in ts.tiles])
    if c.alphabet_size != ts.size:
        raise Inconsistency("configuration is not over the tileset alphabet",
                            {"alphabet_size": c.alphabet_size, "tileset": ts.size})
    return col[c.cells]


def bumpy_mismatch_density(flipped: Configuration, reference: Configuration,
                           variant: str) -> Fraction:
    """Density of cells that are bumpy corners in both configurations and
    carry different colours.

    The bumpy-corner lattice of the two inputs must coincide (same macro-tile
    frame); a configuration drawn from the noisy process keeps the lattice
    of its reference, so the identity is the aligning shift."""
    if flipped.cells.shape != reference.cells.shape:
        raise InvalidInput("configurations differ in size")
    a = bumpy_colours(flipped, variant)
    b = bumpy_colours(reference, variant)
    if not np.array_equal(a >= 0, b >= 0):
        raise Inconsistency("bumpy-corner lattices differ; cannot align")
    mism = int(np.count_nonzero((a >= 0) & (a != b)))
    return Fraction(mism, a.size)
