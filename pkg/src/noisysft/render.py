"""Static rendering of configurations to raster (PPM, PNG) and SVG.

One cell is a cell_px x cell_px block.  The colour channel paints a cell by
its most significant thick-line colour (Red, Blue, Green, Black), thin-only
cells grey and bumpy corners dark grey.  The symbol channel paints by
symbol id.  Overlays are drawn in reserved colours so that they can be
counted back from the image.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from PIL import Image

from .errors import InvalidInput
from .grid import Configuration

PALETTE = {
    "background": (255, 255, 255),
    "thin": (200, 200, 200),
    "bumpy": (120, 120, 120),
    "K": (0, 0, 0),
    "R": (220, 30, 30),
    "Bl": (40, 80, 220),
    "G": (30, 160, 60),
    "noise": (255, 0, 255),
    "flip": (255, 200, 0),
    "square": (255, 120, 0),
    "patch": (150, 230, 255),
}
OVERLAYS = ("noise", "flips", "red_squares", "patches")
CHANNELS = ("colour", "symbol")
PRIORITY = ("R", "Bl", "G", "K")


@dataclass(frozen=True)
class RenderStyle:
    cell_px: int = 4
    channel: str = "colour"
    palette: dict = field(default_factory=lambda: dict(PALETTE))
    symbol_colours: tuple | None = None  # rgb per symbol id for the symbol channel
    overlays: frozenset = frozenset()

    def __post_init__(self):
        if self.cell_px < 1:
            raise InvalidInput("cell_px must be positive")
        if self.channel not in CHANNELS:
            raise InvalidInput(f"unknown channel {self.channel!r}")
        bad = set(self.overlays) - set(OVERLAYS)
        if bad:
            raise InvalidInput(f"unknown overlays {sorted(bad)}")
        object.__setattr__(self, "overlays", frozenset(self.overlays))


def _rgb(style, key):
    try:
        return style.palette[key]
    except KeyError:
        raise InvalidInput(f"unmapped channel value {key!r}") from None


def _structural(tileset):
    """(structural tiles, map from symbol id to structural id)."""
    if hasattr(tileset, "s_of"):  # compiled tileset
        return tileset.structural.tiles, tileset.s_of
    return tileset.tiles, np.arange(len(tileset.tiles))


def colour_table(tileset, style: RenderStyle) -> np.ndarray:
    from .robinson import BUMPY, COLOUR_NAMES

    tiles, s_of = _structural(tileset)
    base = np.zeros((len(tiles), 3), dtype=np.uint8)
    for i, t in enumerate(tiles):
        names = {COLOUR_NAMES[e[3]] for e in t[1:] if e[1] and e[3]}
        key = next((k for k in PRIORITY if k in names), None)
        if key is None:
            key = "bumpy" if t[0] == BUMPY else "thin"
        base[i] = _rgb(style, key)
    return base[s_of]


def symbol_table(alphabet_size: int, style: RenderStyle) -> np.ndarray:
    if style.symbol_colours is not None:
        if len(style.symbol_colours) < alphabet_size:
            raise InvalidInput(f"symbol colours cover {len(style.symbol_colours)} of "
                               f"{alphabet_size} symbols")
        return np.array(style.symbol_colours[:alphabet_size], dtype=np.uint8).reshape(-1, 3)
    if alphabet_size > 256:
        raise InvalidInput("default symbol palette covers at most 256 symbols")
    g = np.linspace(255, 0, max(alphabet_size, 2)).round().astype(np.uint8)[:alphabet_size]
    return np.repeat(g[:, None], 3, axis=1)


def render_config(c: Configuration, style: RenderStyle = RenderStyle(), tileset=None,
                  noise=None, flip_log=None, squares=None, patches=None) -> np.ndarray:
    """(H*px, W*px, 3) uint8 raster."""
    if c.dim != 2:
        raise InvalidInput("rendering needs a 2D configuration")
    if style.channel == "colour":
        if tileset is None:
            raise InvalidInput("the colour channel needs the tileset")
        if len(_structural(tileset)[1]) != c.alphabet_size:
            raise InvalidInput("tileset and configuration alphabets differ")
        table = colour_table(tileset, style)
    else:
        table = symbol_table(c.alphabet_size, style)
    img = table[c.cells]
    if "patches" in style.overlays and patches is not None:
        img[np.asarray(patches, dtype=bool)] = _rgb(style, "patch")
    if "red_squares" in style.overlays and squares is not None:
        for r0, c0, s in squares:
            r1, c1 = r0 + s - 1, c0 + s - 1
            for sl in (np.s_[r0, c0:c1 + 1], np.s_[r1, c0:c1 + 1],
                       np.s_[r0:r1 + 1, c0], np.s_[r0:r1 + 1, c1]):
                img[sl] = _rgb(style, "square")
    if "flips" in style.overlays and flip_log is not None:
        for e in flip_log.events:
            if e.flipped:
                img[e.anchor] = _rgb(style, "flip")
    if "noise" in style.overlays and noise is not None:
        bits = noise.bits if hasattr(noise, "bits") else np.asarray(noise, dtype=bool)
        if bits.shape != c.cells.shape:
            raise InvalidInput("noise field and configuration differ in size")
        img[bits] = _rgb(style, "noise")
    px = style.cell_px
    return np.ascontiguousarray(np.repeat(np.repeat(img, px, axis=0), px, axis=1))


def write_image(path, img: np.ndarray) -> None:
    """PPM or PNG by suffix."""
    path = str(path)
    fmt = "PPM" if path.endswith(".ppm") else "PNG" if path.endswith(".png") else None
    if fmt is None:
        raise InvalidInput("image path must end in .ppm or .png")
    Image.fromarray(img, "RGB").save(path, format=fmt)


def read_image(path) -> np.ndarray:
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"))


def to_svg(img: np.ndarray, cell_px: int) -> str:
    """Vector form of a raster: one rect per cell, row-major."""
    h, w = img.shape[0] // cell_px, img.shape[1] // cell_px
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * cell_px}" '
           f'height="{h * cell_px}" shape-rendering="crispEdges">']
    for r in range(h):
        for c in range(w):
            R, G, B = (int(x) for x in img[r * cell_px, c * cell_px])
            out.append(f'<rect x="{c * cell_px}" y="{r * cell_px}" width="{cell_px}" '
                       f'height="{cell_px}" fill="#{R:02x}{G:02x}{B:02x}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def count_colour(img: np.ndarray, rgb, cell_px: int = 1) -> int:
    """Number of cells painted exactly rgb (sampled at cell corners)."""
    sub = img[::cell_px, ::cell_px]
    return int(np.all(sub == np.array(rgb, dtype=np.uint8), axis=-1).sum())


def square_outlines(img: np.ndarray, rgb, cell_px: int = 1) -> list:
    """Square ring components of the given colour, in cell units."""
    from scipy import ndimage

    mask = np.all(img[::cell_px, ::cell_px] == np.array(rgb, dtype=np.uint8), axis=-1)
    lab, _ = ndimage.label(mask)
    out = []
    for i, sl in enumerate(ndimage.find_objects(lab), start=1):
        h, w = sl[0].stop - sl[0].start, sl[1].stop - sl[1].start
        ring = np.ones((h, w), dtype=bool)
        ring[1:-1, 1:-1] = False
        if h == w and h >= 2 and np.array_equal(lab[sl] == i, ring):
            out.append((sl[0].start, sl[1].start, h))
    return sorted(out)
