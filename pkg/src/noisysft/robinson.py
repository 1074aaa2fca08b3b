"""Robinson-family tilesets and hierarchical macro-tiles.

Coordinate convention (frozen; everything else derives from it)
---------------------------------------------------------------
An n-macro-tile has side s = 2^n - 1, indexed [row, col] with row 0 on top.
The level of a row is ``v2(row + 1) + 1`` (same for columns).  A cell whose
row and column levels agree is the centre of an L-tile (L = 1: a bumpy
corner); otherwise it lies on the arm of the centre of the larger level.

Every centre emits four arrows.  The two arms pointing towards the parent
centre (the "inward" arms) are thick: they are the edges of the level-L
square, whose corners are the four L-centres of an (L+1)-tile and whose
side is 2^L + 1.  The two outward arms are thin.  An arm runs until it meets
a perpendicular line of higher level, where it ends as a pair of side arrows.
Side arrows are thick exactly when the line they come from has level L - 1.

Edge labels record the arrow crossing the edge: direction, thickness, an
interior side for thick arrows (where the square lies) and, for the
enhanced tileset, a dotted/dashed style on thin arrows telling whether the
parent centre lies to the left (dotted) or right (dashed) of the arrow.
Only thick lines carry colours.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import BudgetExceeded, Inconsistency, InvalidInput
from .grid import ClassPattern, Configuration, EdgeRules, ForbiddenSet

N, E, S, W = 0, 1, 2, 3
DIRS = "NESW"
OPP = (S, W, N, E)
DELTA = {N: (-1, 0), E: (0, 1), S: (1, 0), W: (0, -1)}

NONE, BLACK, RED, BLUE, GREEN = 0, 1, 2, 3, 4
COLOUR_NAMES = {NONE: "-", BLACK: "K", RED: "R", BLUE: "Bl", GREEN: "G"}
COLOUR_CODES = {"K": BLACK, "black": BLACK, "R": RED, "red": RED,
                "Bl": BLUE, "blue": BLUE, "G": GREEN, "green": GREEN}
SWAP_RB = {RED: BLACK, BLACK: RED}
SWAP_BG = {BLUE: GREEN, GREEN: BLUE}

NOSTYLE, DOT, DASH = -1, 5, 6
BUMPY, CROSS, ARM = 0, 1, 2
KIND_NAMES = ("bumpy", "cross", "arm")

ORIENTATIONS = {"NE": (N, E), "NW": (N, W), "SE": (S, E), "SW": (S, W)}
VARIANTS = ("vanilla", "red_black", "enhanced_four_colour")

# Tiles are tuples (kind, edge_N, edge_E, edge_S, edge_W) with
# edge = (io, thick, side, colour, colour2); io is 1 for an outgoing arrow.


def _rot_edge(e):
    io, th, side, c1, c2 = e
    return (io, th, (side + 1) % 4 if th else side, c1, c2)


def rotate(tile):
    """Quarter turn clockwise."""
    k, *edges = tile
    out = [None] * 4
    for d in range(4):
        out[(d + 1) % 4] = _rot_edge(edges[d])
    return (k, *out)


_MIRROR = {N: N, S: S, E: W, W: E}


def reflect(tile):
    """Mirror through the vertical axis (east <-> west); flips chirality."""
    k, *edges = tile
    out = [None] * 4
    for d in range(4):
        io, th, side, c1, c2 = edges[d]
        if th:
            side = _MIRROR[side]
        elif side in (DOT, DASH):
            side = DOT + DASH - side
        out[_MIRROR[d]] = (io, th, side, c1, c2)
    return (k, *out)


def closure(tiles, reflections=True):
    seen = []
    index = set()
    for t in tiles:
        images = []
        x = t
        for _ in range(4):
            images.append(x)
            if reflections:
                images.append(reflect(x))
            x = rotate(x)
        for im in images:
            if im not in index:
                index.add(im)
                seen.append(im)
    return seen


def _style(perp, adir):
    return DOT if perp == (adir + 3) % 4 else DASH


def tile_name(tile) -> str:
    k, *edges = tile
    parts = []
    for d, (io, th, side, c1, c2) in zip(DIRS, edges):
        s = d + (">" if io else "<") + ("T" if th else "t")
        if th:
            s += DIRS[side]
        elif side != NOSTYLE:
            s += "." if side == DOT else "-"
        if c1:
            s += COLOUR_NAMES[c1]
        if c2:
            s += "/" + COLOUR_NAMES[c2]
        parts.append(s)
    return KIND_NAMES[k] + "[" + ",".join(parts) + "]"


# ---------------------------------------------------------------------------
# base tiles in the canonical frame: centres have their parent to the
# south-east, arms carry their principal arrow eastwards.


def _centre(kind, col, styled):
    sn = _style(E, N) if styled else NOSTYLE
    sw = _style(S, W) if styled else NOSTYLE
    return (kind, (1, 0, sn, 0, 0), (1, 1, S, col, 0), (1, 1, E, col, 0), (1, 0, sw, 0, 0))


def _arm(p_thick, s_thick, *, p_in=0, p_out=None, p_side=S, s_col=0, p_parent=S,
         s_parent=E, styled=False):
    """Eastward arm.  p_side: interior of a thick principal; p_parent:
    parent side of a thin principal; s_parent: parent side of thin sides."""
    p_out = p_in if p_out is None else p_out
    if p_thick:
        west = (0, 1, p_side, p_in, 0)
        east = (1, 1, p_side, p_out, 0)
    else:
        st = _style(p_parent, E) if styled else NOSTYLE
        west = (0, 0, st, 0, 0)
        east = (1, 0, st, 0, 0)
    if s_thick:
        north = (0, 1, W, s_col, 0)
        south = (0, 1, W, s_col, 0)
    else:
        north = (0, 0, _style(s_parent, S) if styled else NOSTYLE, 0, 0)
        south = (0, 0, _style(s_parent, N) if styled else NOSTYLE, 0, 0)
    return (ARM, north, east, south, west)


def base_tiles(variant: str) -> list:
    if variant == "vanilla":
        return [_centre(BUMPY, 0, False), _centre(CROSS, 0, False),
                _arm(1, 1), _arm(1, 0), _arm(0, 1), _arm(0, 0)]
    if variant == "red_black":
        out = []
        for c in (BLACK, RED):
            out.append(_centre(BUMPY, c, False))
        for c in (BLACK, RED):
            out.append(_centre(CROSS, c, False))
        for c in (BLACK, RED):
            out.append(_arm(1, 1, p_in=c, s_col=SWAP_RB[c]))
        for c in (BLACK, RED):
            out.append(_arm(1, 0, p_in=c))
        for c in (BLACK, RED):
            out.append(_arm(0, 1, s_col=c))
        out.append(_arm(0, 0))
        return out
    if variant == "enhanced_four_colour":
        colours = (BLACK, RED, BLUE, GREEN)
        out = [_centre(BUMPY, BLACK, True)]
        out += [_centre(CROSS, c, True) for c in colours]
        crossings = [(RED, RED, BLACK), (BLACK, BLACK, RED), (BLUE, BLUE, GREEN),
                     (GREEN, GREEN, BLUE), (BLACK, BLUE, RED), (BLACK, GREEN, RED)]
        for p_in, p_out, sc in crossings:
            for side in (S, N):
                out.append(_arm(1, 1, p_in=p_in, p_out=p_out, p_side=side, s_col=sc, styled=True))
        for c in colours:
            for side in (S, N):
                for sp in (E, W):
                    out.append(_arm(1, 0, p_in=c, p_side=side, s_parent=sp, styled=True))
        for c in colours:
            for pp in (S, N):
                out.append(_arm(0, 1, s_col=c, p_parent=pp, styled=True))
        for pp in (S, N):
            for sp in (E, W):
                out.append(_arm(0, 0, p_parent=pp, s_parent=sp, styled=True))
        return out
    raise InvalidInput(f"unknown tileset variant {variant!r}")


# ---------------------------------------------------------------------------
# tilesets


def edge_label(tile, d):
    """Normalised label of edge d: equal labels on both sides of an edge."""
    io, th, side, c1, c2 = tile[1 + d]
    adir = d if io else OPP[d]
    return (adir, th, side, c1, c2)


@dataclass(eq=False)
class Tileset:
    variant: str
    tiles: list
    forbidden: ForbiddenSet
    index: dict = field(repr=False, default_factory=dict)
    n_base: int = 0

    @property
    def size(self):
        return len(self.tiles)

    @property
    def names(self):
        return tuple(tile_name(t) for t in self.tiles)

    def id_of(self, tile):
        try:
            return self.index[tile]
        except KeyError:
            raise Inconsistency(f"tile {tile_name(tile)} is not in the {self.variant} alphabet",
                                {"tile": tile}) from None

    @property
    def kinds(self):
        return np.array([t[0] for t in self.tiles], dtype=np.int64)

    def colours(self, channel=1):
        """Per-tile set of colours on thick edges, as a bit mask 1 << colour."""
        out = np.zeros(self.size, dtype=np.int64)
        for i, t in enumerate(self.tiles):
            for e in t[1:]:
                c = e[2 + channel]
                if c:
                    out[i] |= 1 << c
        return out


def corner_patterns(is_bumpy: np.ndarray) -> list:
    """Forbidden 2x2 windows with zero or at least two bumpy corners."""
    pats = []
    for subset in range(16):
        if bin(subset).count("1") == 1:
            continue
        m = np.zeros((2, 2, is_bumpy.size), dtype=bool)
        for pos in range(4):
            i, j = divmod(pos, 2)
            m[i, j] = is_bumpy if subset >> pos & 1 else ~is_bumpy
        pats.append(ClassPattern(m, 2, f"corner:{subset:04b}"))
    return pats


def make_tileset(variant, tiles, n_base=0, extra_patterns=(), extra_families=()):
    tiles = list(tiles)
    index = {t: i for i, t in enumerate(tiles)}
    if len(index) != len(tiles):
        raise Inconsistency("duplicate tiles in alphabet")
    labels: dict = {}

    def lab(t, d):
        return labels.setdefault(edge_label(t, d), len(labels))

    east = np.array([lab(t, E) for t in tiles])
    west = np.array([lab(t, W) for t in tiles])
    south = np.array([lab(t, S) for t in tiles])
    north = np.array([lab(t, N) for t in tiles])
    is_bumpy = np.array([t[0] == BUMPY for t in tiles])
    pats = corner_patterns(is_bumpy) + list(extra_patterns)
    fams = ("corner",) * 12 + tuple(extra_families)
    F = ForbiddenSet(len(tiles), tuple(pats), EdgeRules(east, west, south, north), 2, fams)
    return Tileset(variant, tiles, F, index, n_base)


@lru_cache(maxsize=None)
def build_tileset(variant: str) -> Tileset:
    base = base_tiles(variant)
    reflections = variant != "enhanced_four_colour"
    return make_tileset(variant, closure(base, reflections), len(base))


# ---------------------------------------------------------------------------
# colour schemes


@dataclass(frozen=True)
class ColourScheme:
    """Colour of each thick line as a function of its level.

    ``base`` is the level-1 (bumpy corner) colour; levels alternate.  For the
    enhanced tileset a transition level T (odd) switches the level-T square
    to ``regime`` (Blue or Green) past the crossing with the Red square it
    surrounds, and levels above T alternate Blue/Green.
    """

    kind: str = "none"  # none | alternate | enhanced
    base: int = BLACK
    transition: int | None = None
    regime: int = BLUE

    def colour(self, level: int, seg: int) -> int:
        if self.kind == "none":
            return NONE
        if self.kind == "alternate":
            swap = SWAP_BG if self.base in SWAP_BG else SWAP_RB
            return self.base if level % 2 == 1 else swap[self.base]
        T = self.transition
        if T is None or level < T:
            return BLACK if level % 2 else RED
        if level == T:
            return BLACK if seg < 2 ** (T - 2) else self.regime
        return self.regime if (level - T) % 2 == 0 else SWAP_BG[self.regime]

    def table(self, n: int) -> np.ndarray:
        width = 2 ** max(n - 1, 0) + 1
        out = np.zeros((n + 2, width), dtype=np.int64)
        for L in range(1, n + 1):
            for j in range(width):
                out[L, j] = self.colour(L, j)
        return out


def scheme_for(variant: str, colour_assignment: dict | None = None) -> ColourScheme:
    ca = dict(colour_assignment or {})
    if variant == "vanilla":
        if ca:
            raise InvalidInput("the vanilla tileset has no colours to assign")
        return ColourScheme("none")
    if variant == "red_black":
        base = COLOUR_CODES.get(str(ca.pop("bumpy", "K")))
        if base not in (RED, BLACK) or ca:
            raise InvalidInput("red_black colour_assignment accepts only bumpy=R|K")
        return ColourScheme("alternate", base)
    if variant == "enhanced_four_colour":
        T = ca.pop("transition_level", None)
        regime = COLOUR_CODES.get(str(ca.pop("regime", "Bl")))
        if ca or regime not in (BLUE, GREEN):
            raise InvalidInput("enhanced colour_assignment accepts transition_level and regime=Bl|G")
        if T is not None and (T < 3 or T % 2 == 0):
            raise InvalidInput("the transition level must be odd and at least 3")
        return ColourScheme("enhanced", BLACK, T, regime)
    raise InvalidInput(f"unknown tileset variant {variant!r}")


# ---------------------------------------------------------------------------
# geometry


def _v2plus1(x):
    low = x & -x
    return np.log2(low).astype(np.int64) + 1


@dataclass(frozen=True, eq=False)
class Geometry:
    """Per-cell structural data of an n-macro-tile (arrays of shape (4, s, s)
    for edges, (s, s) for cells)."""

    n: int
    orientation: str
    kind: np.ndarray
    level: np.ndarray
    io: np.ndarray
    thick: np.ndarray
    perp: np.ndarray
    elevel: np.ndarray
    seg: np.ndarray
    adir: np.ndarray

    @property
    def side(self):
        return self.kind.shape[0]


def _parents(rows, cols, L, n, orientation):
    vin = np.where((rows >> L) % 2 == 0, S, N)
    hin = np.where((cols >> L) % 2 == 0, E, W)
    top = L == n
    ov, oh = ORIENTATIONS[orientation]
    return np.where(top, ov, vin), np.where(top, oh, hin)


@lru_cache(maxsize=32)
def geometry(n: int, orientation: str = "NE") -> Geometry:
    if n < 1:
        raise InvalidInput("macro-tile scale must be at least 1")
    if orientation not in ORIENTATIONS:
        raise InvalidInput(f"unknown orientation {orientation!r}")
    s = 2 ** n - 1
    R, C = np.meshgrid(np.arange(s), np.arange(s), indexing="ij")
    Lr, Lc = _v2plus1(R + 1), _v2plus1(C + 1)
    L = np.maximum(Lr, Lc)
    centre = Lr == Lc
    horiz = Lr > Lc
    vert = Lc > Lr
    half = np.left_shift(1, L - 1)
    # centre of the line each cell lies on
    cr = np.where(vert, (R >> L << L) + half - 1, R)
    cc = np.where(horiz, (C >> L << L) + half - 1, C)
    vin, hin = _parents(cr, cc, L, n, orientation)
    kind = np.where(centre, np.where(L == 1, BUMPY, CROSS), ARM)

    shape = (4, s, s)
    io = np.zeros(shape, np.int64)
    thick = np.zeros(shape, np.int64)
    perp = np.zeros(shape, np.int64)
    elevel = np.zeros(shape, np.int64)
    seg = np.zeros(shape, np.int64)
    adir = np.zeros(shape, np.int64)

    away = np.where(horiz, np.where(C > cc, E, W), np.where(R > cr, S, N))
    dist = np.where(horiz, np.abs(C - cc), np.abs(R - cr))
    back = (away + 2) % 4
    l_side = np.minimum(Lr, Lc)
    s_half = np.left_shift(1, np.maximum(l_side - 1, 0))
    hpar = np.where((C >> l_side) % 2 == 0, E, W)
    vpar = np.where((R >> l_side) % 2 == 0, S, N)

    for d in range(4):
        vertical_d = d in (N, S)
        perp_c = hin if vertical_d else vin
        # centres
        m = centre
        io[d][m] = 1
        thick[d][m] = ((vin == d) | (hin == d))[m]
        perp[d][m] = perp_c[m]
        elevel[d][m] = L[m]
        adir[d][m] = d
        # principal arrow of arms
        pthick = (vin == away) | (hin == away)
        pperp = np.where((away == N) | (away == S), hin, vin)
        m = ~centre & (away == d)
        io[d][m] = 1
        thick[d][m] = pthick[m]
        perp[d][m] = pperp[m]
        elevel[d][m] = L[m]
        seg[d][m] = dist[m]
        adir[d][m] = d
        m = ~centre & (back == d)
        thick[d][m] = pthick[m]
        perp[d][m] = pperp[m]
        elevel[d][m] = L[m]
        seg[d][m] = dist[m] - 1
        adir[d][m] = away[m]
        # side arrows
        m = horiz if vertical_d else vert
        thick[d][m] = (l_side == L - 1)[m]
        perp[d][m] = (hpar if vertical_d else vpar)[m]
        elevel[d][m] = l_side[m]
        seg[d][m] = (s_half - 1)[m]
        adir[d][m] = OPP[d]
    for a in (kind, L, io, thick, perp, elevel, seg, adir):
        a.setflags(write=False)
    return Geometry(n, orientation, kind, L, io, thick, perp, elevel, seg, adir)


def tile_keys(geo: Geometry, scheme: ColourScheme, styled: bool,
              scheme2: ColourScheme | None = None) -> np.ndarray:
    """(s, s, 21) integer array of tile tuples, flattened."""
    s = geo.side
    table = scheme.table(geo.n)
    keys = np.zeros((s, s, 21), dtype=np.int64)
    keys[..., 0] = geo.kind
    for d in range(4):
        th = geo.thick[d].astype(bool)
        if styled:
            style = np.where(geo.perp[d] == (geo.adir[d] + 3) % 4, DOT, DASH)
        else:
            style = np.full((s, s), NOSTYLE)
        side = np.where(th, geo.perp[d], style)
        col = np.where(th, table[geo.elevel[d], geo.seg[d]], NONE)
        col2 = np.zeros((s, s), np.int64)
        if scheme2 is not None:
            col2 = np.where(th, scheme2.table(geo.n)[geo.elevel[d], geo.seg[d]], NONE)
        base = 1 + 5 * d
        keys[..., base] = geo.io[d]
        keys[..., base + 1] = th
        keys[..., base + 2] = side
        keys[..., base + 3] = col
        keys[..., base + 4] = col2
    return keys


def key_to_tile(row) -> tuple:
    row = [int(x) for x in row]
    return (row[0],) + tuple(tuple(row[1 + 5 * d:6 + 5 * d]) for d in range(4))


def keys_to_ids(keys: np.ndarray, lookup) -> np.ndarray:
    """Map a key array to symbol ids through ``lookup(tile) -> id``."""
    s0, s1, k = keys.shape
    flat = keys.reshape(-1, k)
    uniq, inv = np.unique(flat, axis=0, return_inverse=True)
    ids = np.array([lookup(key_to_tile(u)) for u in uniq], dtype=np.int64)
    return ids[inv.reshape(-1)].reshape(s0, s1)


# ---------------------------------------------------------------------------
# macro-tiles


@dataclass(frozen=True)
class MacroTileSpec:
    variant: str
    scale: int
    orientation: str = "NE"
    colour_assignment: dict | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidInput(f"unknown tileset variant {self.variant!r}")
        if self.orientation not in ORIENTATIONS:
            raise InvalidInput(f"unknown orientation {self.orientation!r}")
        if self.scale < 1:
            raise InvalidInput("macro-tile scale must be at least 1")


DEFAULT_MAX_CELLS = 1 << 20


def build_macro_tile(spec: MacroTileSpec, max_cells: int = DEFAULT_MAX_CELLS) -> Configuration:
    side = 2 ** spec.scale - 1
    if side * side > max_cells:
        raise BudgetExceeded(f"{side}x{side} macro-tile exceeds the cell budget {max_cells}",
                             layer="memory", needed=side * side, budget=max_cells)
    ts = build_tileset(spec.variant)
    scheme = scheme_for(spec.variant, spec.colour_assignment)
    geo = geometry(spec.scale, spec.orientation)
    keys = tile_keys(geo, scheme, spec.variant == "enhanced_four_colour")
    ids = keys_to_ids(keys, ts.id_of)
    return Configuration(ids, ts.size, "free", 2)


def realised_tiles(variant: str, max_scale: int = 6) -> set:
    """Every tile occurring in some generated macro-tile up to max_scale."""
    ts = build_tileset(variant)
    found = set()
    if variant == "vanilla":
        schemes = [None]
    elif variant == "red_black":
        schemes = [{"bumpy": "K"}, {"bumpy": "R"}]
    else:
        schemes = [None] + [{"transition_level": T, "regime": r}
                            for T in range(3, max_scale + 1, 2) for r in ("Bl", "G")]
    for n in range(1, max_scale + 1):
        for o in ORIENTATIONS:
            for ca in schemes:
                if ca and ca.get("transition_level", 0) > n:
                    continue
                c = build_macro_tile(MacroTileSpec(variant, n, o, ca))
                found.update(ts.tiles[i] for i in np.unique(c.cells))
    return found


# ---------------------------------------------------------------------------
# hierarchy helpers shared with the flip process and the compiler


def level_centres(n: int, L: int):
    """Centres (row, col) of all L-tiles inside an n-macro-tile."""
    step = 2 ** L
    first = 2 ** (L - 1) - 1
    pos = range(first, 2 ** n - 1, step)
    return [(r, c) for r in pos for c in pos]


def inward_dirs(n: int, orientation: str, L: int, r: int, c: int):
    if L == n:
        return ORIENTATIONS[orientation]
    return (S if (r >> L) % 2 == 0 else N, E if (c >> L) % 2 == 0 else W)


@dataclass(frozen=True)
class TileRegion:
    level: int
    centre: tuple
    bounds: tuple  # (r0, r1, c0, c1), inclusive
    designated: tuple  # the two bi-coloured crossing cells
    excluded: tuple  # thick-arm cells past the designated ones


def tile_regions(n: int, orientation: str, L: int) -> list[TileRegion]:
    """L-tiles of an n-macro-tile with their designated crossing cells."""
    if not 2 <= L <= n:
        raise InvalidInput(f"level {L} has no designated cells in a {n}-macro-tile")
    out = []
    half = 2 ** (L - 1) - 1
    k = 2 ** (L - 2)
    for r, c in level_centres(n, L):
        vin, hin = inward_dirs(n, orientation, L, r, c)
        des, exc = [], []
        for d in (vin, hin):
            dr, dc = DELTA[d]
            des.append((r + dr * k, c + dc * k))
            exc.extend((r + dr * j, c + dc * j) for j in range(k + 1, half + 1))
        out.append(TileRegion(L, (r, c), (r - half, r + half, c - half, c + half),
                              tuple(des), tuple(exc)))
    return out


# ---------------------------------------------------------------------------
# census


@dataclass(frozen=True)
class StructuralCensus:
    size_side: int
    bumpy_count: dict
    red_square_sides: tuple
    red_square_count: dict
    outside_red_count: int

    @property
    def bumpy_total(self):
        return sum(self.bumpy_count.values())


def red_squares(c: Configuration, ts: Tileset, colour: int = RED) -> list:
    """Complete square outlines of the given colour as (r0, c0, side)."""
    from scipy import ndimage

    has = (ts.colours() >> colour) & 1
    mask = has[c.cells].astype(bool)
    lab, k = ndimage.label(mask)
    out = []
    for i, sl in enumerate(ndimage.find_objects(lab), start=1):
        h = sl[0].stop - sl[0].start
        w = sl[1].stop - sl[1].start
        comp = lab[sl] == i
        if h != w or h < 2:
            continue
        ring = np.ones((h, w), dtype=bool)
        ring[1:-1, 1:-1] = False
        if np.array_equal(comp, ring):
            out.append((sl[0].start, sl[1].start, h))
    return sorted(out)


def census(c: Configuration, variant: str) -> StructuralCensus:
    ts = build_tileset(variant)
    kinds = ts.kinds[c.cells]
    bumpy = kinds == BUMPY
    counts = {}
    bcol = np.array([max(e[3] for e in t[1:]) for t in ts.tiles])  # thick-edge colour
    for col in np.unique(bcol[c.cells][bumpy]):
        counts[COLOUR_NAMES[int(col)]] = int((bcol[c.cells][bumpy] == col).sum())
    squares = red_squares(c, ts) if variant != "vanilla" else []
    covered = np.zeros(c.cells.shape, dtype=bool)
    per_side = {}
    for r0, c0, side in squares:
        covered[r0:r0 + side, c0:c0 + side] = True
        per_side[side] = per_side.get(side, 0) + 1
    return StructuralCensus(
        size_side=c.width,
        bumpy_count=counts,
        red_square_sides=tuple(sorted(per_side)),
        red_square_count=per_side,
        outside_red_count=int((~covered).sum()),
    )


def bumpy_density(n: int) -> Fraction:
    return Fraction(4 ** (n - 1), (2 ** n - 1) ** 2)


def structural_constants(variant: str, n: int):
    from .bounds import construction_constants

    which = {"enhanced_four_colour": "enhanced", "enhanced": "enhanced", "p1": "p1"}.get(variant)
    if which is None:
        raise InvalidInput(f"no structural constants for variant {variant!r}")
    return construction_constants(which, n)
