"""Configurations, windows, patterns, forbidden sets and admissibility scans.

Everything is stored as 2-D integer arrays; a 1-D object is a single row.
Symbols are dense ids ``0..|A|-1``.  A pattern cell may also be the
wildcard ``WILDCARD`` (matches anything) or, for class patterns, an
arbitrary set of symbols given as a boolean mask.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import _accel
from .errors import AlphabetMismatch, BoundaryModeError, BudgetExceeded, InvalidInput

WILDCARD = -1
FORMAT_VERSION = 1


@dataclass(frozen=True)
class Window:
    dim: int
    kind: str  # "U" for [0,n]^d, "B" for [-n,n]^d
    n: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise InvalidInput("only dimensions 1 and 2 are implemented")
        if self.kind not in ("U", "B"):
            raise InvalidInput(f"unknown window kind {self.kind!r}")
        if self.n < 0:
            raise InvalidInput("window scale must be non-negative")

    @property
    def side(self) -> int:
        return self.n + 1 if self.kind == "U" else 2 * self.n + 1

    @property
    def size(self) -> int:
        return self.side ** self.dim

    @property
    def shape(self) -> tuple[int, int]:
        return (1, self.side) if self.dim == 1 else (self.side, self.side)

    @property
    def origin(self) -> int:
        """Coordinate of array index 0 along each axis."""
        return 0 if self.kind == "U" else -self.n

    def contains(self, other: "Window") -> bool:
        lo, hi = self.origin, self.origin + self.side - 1
        olo, ohi = other.origin, other.origin + other.side - 1
        return self.dim == other.dim and lo <= olo and ohi <= hi


def U(n: int, dim: int = 1) -> Window:
    return Window(dim, "U", n)


def B(n: int, dim: int = 1) -> Window:
    return Window(dim, "B", n)


@dataclass(frozen=True)
class Alphabet:
    names: tuple[str, ...]

    @classmethod
    def of_size(cls, k: int) -> "Alphabet":
        return cls(tuple(str(i) for i in range(k)))

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InvalidInput(f"symbol {name!r} not in alphabet") from None

    def __len__(self):
        return len(self.names)


def _as_cells(cells) -> np.ndarray:
    a = np.asarray(cells, dtype=np.int64)
    if a.ndim == 1:
        a = a[None, :]
    if a.ndim != 2:
        raise InvalidInput("cells must be a 1-D or 2-D array")
    return a


@dataclass(frozen=True, eq=False)
class Pattern:
    """A finite pattern on a box; WILDCARD cells match any symbol."""

    cells: np.ndarray
    alphabet_size: int
    dim: int = 1

    def __post_init__(self):
        a = _as_cells(self.cells)
        a.setflags(write=False)
        object.__setattr__(self, "cells", a)
        if a.size and (a.max() >= self.alphabet_size or a.min() < WILDCARD):
            raise InvalidInput("pattern cell outside the alphabet")

    @classmethod
    def word(cls, text: str, alphabet_size: int = 2) -> "Pattern":
        """1-D pattern from a string of digits, '*' for the wildcard."""
        return cls(np.array([[WILDCARD if ch == "*" else int(ch) for ch in text]]),
                   alphabet_size, 1)

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape

    @property
    def scale(self) -> int:
        """Smallest k with the bounding box inside U(k)."""
        h, w = self.shape
        return max(h, w) - 1

    @property
    def window(self) -> Window:
        return Window(self.dim, "U", self.scale)

    def mask(self) -> np.ndarray:
        h, w = self.shape
        m = np.zeros((h, w, self.alphabet_size), dtype=bool)
        for i in range(h):
            for j in range(w):
                s = self.cells[i, j]
                if s == WILDCARD:
                    m[i, j, :] = True
                else:
                    m[i, j, s] = True
        return m

    def key(self):
        return (self.dim, self.shape, tuple(self.cells.ravel().tolist()))

    def __eq__(self, other):
        return isinstance(other, Pattern) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.shape[0] == 1 and self.alphabet_size <= 10:
            return "Pattern.word(%r)" % "".join("*" if s < 0 else str(s) for s in self.cells[0])
        return f"Pattern(shape={self.shape}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class ClassPattern:
    """Pattern whose cells are symbol sets: a union of concrete patterns."""

    masks: np.ndarray  # (h, w, |A|) bool
    dim: int = 2
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.masks, dtype=bool)
        m.setflags(write=False)
        object.__setattr__(self, "masks", m)

    @property
    def alphabet_size(self):
        return self.masks.shape[2]

    @property
    def shape(self):
        return self.masks.shape[:2]

    @property
    def scale(self):
        return max(self.shape) - 1

    def mask(self):
        return self.masks


@dataclass(frozen=True, eq=False)
class EdgeRules:
    """Edge matching: east[a] must equal west[b] for b right of a, likewise
    south/north vertically.  Equivalent to one class pattern per label."""

    east: np.ndarray
    west: np.ndarray
    south: np.ndarray
    north: np.ndarray

    def __post_init__(self):
        for name in ("east", "west", "south", "north"):
            a = np.ascontiguousarray(getattr(self, name), dtype=np.int64)
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def h_labels(self):
        return np.unique(self.east)

    @property
    def v_labels(self):
        return np.unique(self.south)

    def class_patterns(self) -> list[ClassPattern]:
        out = []
        for lab in self.h_labels:
            m = np.zeros((1, 2, self.east.size), dtype=bool)
            m[0, 0] = self.east == lab
            m[0, 1] = self.west != lab
            out.append(ClassPattern(m, 2, f"edge-h:{lab}"))
        for lab in self.v_labels:
            m = np.zeros((2, 1, self.south.size), dtype=bool)
            m[0, 0] = self.south == lab
            m[1, 0] = self.north != lab
            out.append(ClassPattern(m, 2, f"edge-v:{lab}"))
        return out


class Violation(NamedTuple):
    offset: tuple[int, ...]
    pattern_index: int


@dataclass(frozen=True, eq=False)
class ForbiddenSet:
    alphabet_size: int
    patterns: tuple = ()
    edges: EdgeRules | None = None
    dim: int = 2
    families: tuple = ()  # optional per-pattern rule-family tag

    def __post_init__(self):
        object.__setattr__(self, "patterns", tuple(self.patterns))
        for p in self.patterns:
            if p.alphabet_size != self.alphabet_size:
                raise AlphabetMismatch("pattern alphabet differs from forbidden set alphabet")
        if self.edges is not None and self.edges.east.size != self.alphabet_size:
            raise AlphabetMismatch("edge rules sized for a different alphabet")

    @property
    def bounding_k(self) -> int:
        ks = [p.scale for p in self.patterns]
        if self.edges is not None:
            ks.append(1)
        return max(ks, default=0)

    @property
    def n_patterns(self) -> int:
        n = len(self.patterns)
        if self.edges is not None:
            n += len(self.edges.h_labels) + len(self.edges.v_labels)
        return n

    def all_patterns(self) -> list:
        out = list(self.patterns)
        if self.edges is not None:
            out += self.edges.class_patterns()
        return out

    def _mask_stack(self):
        cached = self.__dict__.get("_stack")
        if cached is None:
            pats = self.patterns
            hmax = max((p.shape[0] for p in pats), default=1)
            wmax = max((p.shape[1] for p in pats), default=1)
            masks = np.zeros((len(pats), hmax, wmax, self.alphabet_size), dtype=bool)
            dims = np.zeros((len(pats), 2), dtype=np.int64)
            for i, p in enumerate(pats):
                h, w = p.shape
                masks[i, :h, :w] = p.mask()
                dims[i] = (h, w)
            cached = (masks, dims)
            self.__dict__["_stack"] = cached
        return cached


@dataclass(frozen=True, eq=False)
class Configuration:
    cells: np.ndarray
    alphabet_size: int
    boundary: str = "free"
    dim: int = 2
    names: tuple | None = None

    def __post_init__(self):
        a = _as_cells(self.cells)
        a.setflags(write=False)
        object.__setattr__(self, "cells", a)
        if self.boundary not in ("free", "periodic"):
            raise InvalidInput(f"unknown boundary mode {self.boundary!r}")
        if a.size and (a.min() < 0 or a.max() >= self.alphabet_size):
            raise InvalidInput("configuration symbol outside the alphabet")

    @classmethod
    def word(cls, text: str, alphabet_size: int = 2, boundary: str = "free"):
        return cls(np.array([[int(ch) for ch in text]]), alphabet_size, boundary, 1)

    @property
    def height(self):
        return self.cells.shape[0]

    @property
    def width(self):
        return self.cells.shape[1]

    @property
    def periodic(self):
        return self.boundary == "periodic"

    def with_cells(self, cells):
        return Configuration(cells, self.alphabet_size, self.boundary, self.dim, self.names)

    def __eq__(self, other):
        return (isinstance(other, Configuration) and self.boundary == other.boundary
                and self.alphabet_size == other.alphabet_size
                and np.array_equal(self.cells, other.cells))

    def __hash__(self):
        return hash((self.boundary, self.alphabet_size, self.cells.tobytes()))


# ---------------------------------------------------------------------------
# operations


def _shift_tuple(k, dim):
    k = tuple(int(x) for x in np.atleast_1d(k))
    if len(k) != dim:
        raise InvalidInput(f"shift vector must have length {dim}")
    return (0, k[0]) if dim == 1 else k


def shift_config(c: Configuration, k) -> Configuration:
    """sigma_k: the returned configuration reads c at offset +k (mod period)."""
    if not c.periodic:
        raise BoundaryModeError("shift_config needs a periodic configuration")
    dr, dc = _shift_tuple(k, c.dim)
    return c.with_cells(np.roll(c.cells, (-dr, -dc), axis=(0, 1)))


def _check_alphabet(c: Configuration, F: ForbiddenSet):
    if c.alphabet_size != F.alphabet_size:
        raise AlphabetMismatch(
            f"configuration alphabet {c.alphabet_size} != forbidden set alphabet {F.alphabet_size}")


def _offset(r, c, dim):
    return (int(c),) if dim == 1 else (int(r), int(c))


def check_local_admissibility(c: Configuration, F: ForbiddenSet) -> list[Violation]:
    """Every (offset, pattern) match; wrapping iff c is periodic.

    Results are sorted by pattern index, then row-major offset.
    """
    _check_alphabet(c, F)
    out = []
    if F.patterns:
        masks, dims = F._mask_stack()
        hits = _accel.scan_masks(c.cells, masks, dims, c.periodic)
        out.extend(Violation(_offset(r, cc, c.dim), int(p)) for p, r, cc in hits)
    if F.edges is not None:
        e = F.edges
        hb, vb = _accel.edge_mismatch(c.cells, e.east, e.west, e.south, e.north, c.periodic)
        base = len(F.patterns)
        hl = e.h_labels
        vl = e.v_labels
        if len(hb):
            idx = np.searchsorted(hl, e.east[c.cells[hb[:, 0], hb[:, 1]]])
            out.extend(Violation(_offset(r, cc, c.dim), base + int(i))
                       for (r, cc), i in zip(hb, idx))
        if len(vb):
            idx = np.searchsorted(vl, e.south[c.cells[vb[:, 0], vb[:, 1]]])
            out.extend(Violation(_offset(r, cc, c.dim), base + len(hl) + int(i))
                       for (r, cc), i in zip(vb, idx))
    out.sort(key=lambda v: (v.pattern_index, v.offset))
    return out


def is_admissible(c: Configuration, F: ForbiddenSet) -> bool:
    return not check_local_admissibility(c, F)


def count_occurrences(p, c: Configuration) -> int:
    """Offsets in one fundamental domain (periodic) or fully inside (free)
    where the pattern matches."""
    if p.alphabet_size != c.alphabet_size:
        raise AlphabetMismatch("pattern and configuration alphabets differ")
    ph, pw = p.shape
    if not c.periodic and (ph > c.height or pw > c.width):
        raise InvalidInput("pattern larger than a free-boundary configuration")
    if ph == 0 or pw == 0:
        return c.height * c.width if c.periodic else (c.height + 1 - ph) * (c.width + 1 - pw)
    return _accel.count_mask(c.cells, p.mask(), c.periodic)


def all_words(alphabet_size: int, shape: tuple[int, int], budget: int | None = None):
    """Every pattern array of the given shape, in lexicographic order."""
    n_cells = shape[0] * shape[1]
    total = alphabet_size ** n_cells
    if budget is not None and total > budget:
        raise BudgetExceeded(f"{total} patterns exceed the enumeration budget {budget}",
                             layer="enumeration", needed=total, budget=budget)
    if n_cells == 0:
        return np.zeros((1,) + tuple(shape), dtype=np.int64)
    grid = np.array(list(itertools.product(range(alphabet_size), repeat=n_cells)), dtype=np.int64)
    return grid.reshape((total,) + tuple(shape))


def embed_forbidden_set(F: ForbiddenSet, k: int, budget: int = 1 << 20) -> ForbiddenSet:
    """Forbidden set on U(k) listing every w in A^{U(k)} containing a pattern of F."""
    if k < F.bounding_k:
        raise InvalidInput(f"k={k} below the bounding scale {F.bounding_k}")
    shape = U(k, F.dim).shape
    words = all_words(F.alphabet_size, shape, budget)
    pats = F.all_patterns()
    hmax = max((p.shape[0] for p in pats), default=1)
    wmax = max((p.shape[1] for p in pats), default=1)
    masks = np.zeros((len(pats), hmax, wmax, F.alphabet_size), dtype=bool)
    dims = np.zeros((len(pats), 2), dtype=np.int64)
    for i, p in enumerate(pats):
        masks[i, :p.shape[0], :p.shape[1]] = p.mask()
        dims[i] = p.shape
    keep = []
    for w in words:
        if len(pats) and len(_accel.scan_masks(w, masks, dims, False)):
            keep.append(Pattern(w, F.alphabet_size, F.dim))
    return ForbiddenSet(F.alphabet_size, tuple(keep), None, F.dim)


# ---------------------------------------------------------------------------
# structured text serialisation


def _cell_token(x):
    return "*" if x == WILDCARD else str(int(x))


def _mask_token(m):
    if m.all():
        return "*"
    ids = np.flatnonzero(m)
    if len(ids) == 1:
        return str(int(ids[0]))
    return "{" + ",".join(str(int(i)) for i in ids) + "}"


def dumps_configuration(c: Configuration) -> str:
    lines = [f"# noisysft configuration v{FORMAT_VERSION}",
             f"dim {c.dim}", f"width {c.width}", f"height {c.height}",
             f"boundary {c.boundary}", f"alphabet {c.alphabet_size}"]
    names = c.names or tuple(str(i) for i in range(c.alphabet_size))
    lines += [f"{i} {n}" for i, n in enumerate(names)]
    lines.append("cells")
    lines += [" ".join(str(int(x)) for x in row) for row in c.cells]
    return "\n".join(lines) + "\n"


def _header(lines, expected):
    head = lines[0].strip()
    if not head.startswith(f"# noisysft {expected} v"):
        raise InvalidInput(f"not a noisysft {expected} file")
    version = int(head.rsplit("v", 1)[1])
    if version != FORMAT_VERSION:
        raise InvalidInput(f"unsupported format version {version}")


def loads_configuration(text: str) -> Configuration:
    lines = text.splitlines()
    _header(lines, "configuration")
    kv = {}
    i = 1
    while not lines[i].startswith("alphabet"):
        key, val = lines[i].split(None, 1)
        kv[key] = val
        i += 1
    k = int(lines[i].split()[1])
    names = tuple(lines[i + 1 + j].partition(" ")[2] for j in range(k))
    i += 1 + k
    if lines[i].strip() != "cells":
        raise InvalidInput("missing cells section")
    h, w = int(kv["height"]), int(kv["width"])
    rows = [list(map(int, lines[i + 1 + r].split())) for r in range(h)]
    cells = np.array(rows, dtype=np.int64).reshape(h, w)
    default = tuple(str(j) for j in range(k))
    return Configuration(cells, k, kv["boundary"], int(kv["dim"]),
                         None if names == default else names)


def dumps_forbidden(F: ForbiddenSet, names: Sequence[str] | None = None, tag: str = "") -> str:
    lines = [f"# noisysft forbidden v{FORMAT_VERSION}", f"dim {F.dim}", f"variant {tag or '-'}",
             f"alphabet {F.alphabet_size}"]
    names = names or [str(i) for i in range(F.alphabet_size)]
    lines += [f"{i} {n}" for i, n in enumerate(names)]
    lines.append(f"patterns {len(F.patterns)}")
    for idx, p in enumerate(F.patterns):
        h, w = p.shape
        fam = F.families[idx] if idx < len(F.families) else "-"
        lines.append(f"pattern {h} {w} {fam}")
        if isinstance(p, Pattern):
            lines += [" ".join(_cell_token(x) for x in row) for row in p.cells]
        else:
            lines += [" ".join(_mask_token(p.masks[i, j]) for j in range(w)) for i in range(h)]
    if F.edges is not None:
        e = F.edges
        lines.append("edges")
        for name in ("east", "west", "south", "north"):
            lines.append(name + " " + " ".join(str(int(x)) for x in getattr(e, name)))
    lines.append("end")
    return "\n".join(lines) + "\n"


def _parse_mask_token(tok, k):
    m = np.zeros(k, dtype=bool)
    if tok == "*":
        m[:] = True
    elif tok.startswith("{"):
        ids = [int(x) for x in tok[1:-1].split(",") if x]
        m[ids] = True
    else:
        m[int(tok)] = True
    return m


def loads_forbidden(text: str) -> tuple[ForbiddenSet, tuple[str, ...], str]:
    lines = text.splitlines()
    _header(lines, "forbidden")
    dim = int(lines[1].split()[1])
    tag = lines[2].split()[1]
    k = int(lines[3].split()[1])
    names = tuple(lines[4 + j].partition(" ")[2] for j in range(k))
    i = 4 + k
    n_pat = int(lines[i].split()[1])
    i += 1
    pats, fams = [], []
    for _ in range(n_pat):
        _, h, w, fam = lines[i].split()
        h, w = int(h), int(w)
        rows = [lines[i + 1 + r].split() for r in range(h)]
        i += 1 + h
        fams.append(fam)
        if all(t == "*" or t.lstrip("-").isdigit() for row in rows for t in row):
            cells = np.array([[WILDCARD if t == "*" else int(t) for t in row] for row in rows])
            pats.append(Pattern(cells, k, dim))
        else:
            masks = np.array([[_parse_mask_token(t, k) for t in row] for row in rows])
            pats.append(ClassPattern(masks, dim))
    edges = None
    if lines[i].strip() == "edges":
        arrs = {}
        for j in range(4):
            parts = lines[i + 1 + j].split()
            arrs[parts[0]] = np.array([int(x) for x in parts[1:]], dtype=np.int64)
        edges = EdgeRules(**arrs)
        i += 5
    if lines[i].strip() != "end":
        raise InvalidInput("forbidden set file is truncated")
    return ForbiddenSet(k, tuple(pats), edges, dim, tuple(fams)), names, tag
