"""Compiler from Turing machines to simulation tilesets.

A compiled tile is a pair (structural tile, machine tile).  The structural
layer is the enhanced Robinson tileset (p1), or its Red-Black skeleton with a
parallel Blue-Green bit on every thick line (s1, p2).  The machine layer is
a Wang tileset whose admissible tilings inside every Red square are exactly
the bounded space-time diagrams of the machine:

* Red cells are square borders.  Each side of a Red cell is ``A`` (the Red
  line continues through it), ``I`` (faces the square interior) or ``O``.
* Every square sends "blocked" bits inwards along rows and columns; a cell
  forwards them and a Red cell sets them.  A row or column is free when no
  inner Red square crosses it, i.e. when both bits read 0.
* Free row x free column cells are computation cells, cells on a single free
  line relay its payload, other cells carry no payload.  Time flows north.
* The bottom border writes the initial tape and a token puts the head,
  in the initial state, on the first free column.  The top border ORs the
  halting flags from left to right into a scan bit that must equal the ring
  bit at the top-right corner.  The ring bit is constant along the border.
* The left and right borders are walls: a move into a wall leaves the head
  in place.

Horizon: a square with 2^n + 1 free rows performs 2^n + 1 transitions; the
top border sees the state after the last one.

Layer rules tying the two layers: (p1) the two Black to Blue/Green transition
tiles require ring = 1; (s1, p2) a Red line whose Blue-Green bit is Green
requires ring = 0, so a halting machine freezes the bit on Blue.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..errors import BudgetExceeded, Inconsistency, InvalidInput
from ..grid import ClassPattern, Configuration, EdgeRules, ForbiddenSet, check_local_admissibility
from .. import robinson as rb
from .machine import BLANK, TuringMachine, bounded_trace, simulate_tm
from .toeplitz import DOLLARS, readonly_tape_view, wrapper_machine

VARIANTS = ("p1", "s1", "p2")
PLAIN = "PPPP"
DEFAULT_ALPHABET_BUDGET = 1 << 21
CERT_HEADER = "# noisysft certificate v1"

WALL = "wall"
NOHEAD = ("h",)
BLANK_LABEL = "blank"


# ---------------------------------------------------------------------------
# structural layer


def struct_role(tile) -> str:
    """Per-direction role string (N, E, S, W) of a structural tile."""
    red = [d for d in range(4) if tile[1 + d][1] and tile[1 + d][3] == rb.RED]
    if not red:
        return PLAIN
    inner = {tile[1 + d][2] for d in red}
    return "".join("A" if d in red else "I" if d in inner else "O" for d in range(4))


@lru_cache(maxsize=None)
def bluegreen_structural(max_scale: int = 6) -> rb.Tileset:
    """Red-Black enhanced skeleton with a Blue-Green bit alternating by level,
    as realised in macro-tiles up to max_scale."""
    base = rb.scheme_for("enhanced_four_colour")
    found = set()
    for n in range(1, max_scale + 1):
        for o in rb.ORIENTATIONS:
            for b in (rb.BLUE, rb.GREEN):
                keys = rb.tile_keys(rb.geometry(n, o), base, True, rb.ColourScheme("alternate", b))
                flat = np.unique(keys.reshape(-1, keys.shape[-1]), axis=0)
                found.update(rb.key_to_tile(k) for k in flat)
    tiles = sorted(found)
    return rb.make_tileset("bluegreen", tiles, 0)


def structural_tileset(variant: str) -> rb.Tileset:
    if variant == "p1":
        return rb.build_tileset("enhanced_four_colour")
    if variant in ("s1", "p2"):
        return bluegreen_structural()
    raise InvalidInput(f"unknown compiled variant {variant!r}")


def _is_transition(tile) -> bool:
    cols = {e[3] for e in tile[1:] if e[1]}
    return rb.RED in cols and rb.BLACK in cols and bool(cols & {rb.BLUE, rb.GREEN})


def _is_green_red(tile) -> bool:
    return any(e[1] and e[3] == rb.RED and e[4] == rb.GREEN for e in tile[1:])


# ---------------------------------------------------------------------------
# machine layer


def _row(sl, sr, p=None):
    return ("r", sl, sr, p)


def _col(sb, st, p=None):
    return ("c", sb, st, p)


def _along(ring, aux=None):
    return ("A", ring, aux)


@dataclass(frozen=True)
class MachineLayer:
    tiles: tuple  # (role, N, E, S, W)
    index: dict = field(repr=False)
    ring: np.ndarray  # -1 for tiles without a ring bit
    h_payloads: tuple
    v_payloads: tuple


def _comp_tiles(M: TuringMachine, vp):
    """(N, E, S, W) payload quadruples of computation cells."""
    out = []
    quiet = (WALL, NOHEAD)
    for a, q in vp:
        s = (a, q)
        if q is not None:
            if q in M.halting:
                out += [((a, q), e, s, w) for w in quiet for e in quiet]
                continue
            q2, b, m = M.step(q, a)
            if m == "R":
                out += [((b, None), ("h", q2, "R"), s, w) for w in quiet]
                out += [((b, q2), WALL, s, w) for w in quiet]
            else:
                out += [((b, None), e, s, ("h", q2, "L")) for e in quiet]
                out += [((b, q2), e, s, WALL) for e in quiet]
            continue
        for q2 in M.states:
            out += [((a, q2), e, s, ("h", q2, "R")) for e in quiet]
            out += [((a, q2), ("h", q2, "L"), s, w) for w in quiet]
        out += [((a, None), e, s, w) for w in quiet for e in quiet]
    return out


def _border_tiles(sig: str, M: TuringMachine, inputs, vp):
    """Machine tiles for a Red cell with role string sig."""
    A = [d for d in range(4) if sig[d] == "A"]
    I = [d for d in range(4) if sig[d] == "I"]
    O = [d for d in range(4) if sig[d] == "O"]
    N, E, S, W = rb.N, rb.E, rb.S, rb.W
    out = []

    def o_label(d, x):
        return {W: _row(x, 1), E: _row(1, x), N: _col(1, x), S: _col(x, 1)}[d]

    def outer_choices():
        yield {d: BLANK_LABEL for d in O}
        for xs in itertools.product((0, 1), repeat=len(O)):
            yield {d: o_label(d, x) for d, x in zip(O, xs)}

    for ring in (0, 1):
        inner = []  # dicts of A and I labels
        if len(I) == 1:
            d = I[0]
            for x in (0, 1):
                if d == E:
                    inner.append({E: _row(0, x, WALL if x == 0 else None),
                                  N: _along(ring), S: _along(ring)})
                elif d == W:
                    inner.append({W: _row(x, 0, WALL if x == 0 else None),
                                  N: _along(ring), S: _along(ring)})
                elif d == N:
                    for t in (0, 1):
                        if x == 1:
                            inner.append({N: _col(0, 1), W: _along(ring, ("t", t)),
                                          E: _along(ring, ("t", t))})
                            continue
                        for a in inputs:
                            v = (a, M.initial if t == 0 else None)
                            inner.append({N: _col(0, 0, v), W: _along(ring, ("t", t)),
                                          E: _along(ring, ("t", 1))})
                else:
                    for sc in (0, 1):
                        if x == 1:
                            inner.append({S: _col(1, 0), W: _along(ring, ("s", sc)),
                                          E: _along(ring, ("s", sc))})
                            continue
                        for v in vp:
                            h = int(sc or (v[1] in M.halting))
                            inner.append({S: _col(0, 0, v), W: _along(ring, ("s", sc)),
                                          E: _along(ring, ("s", h))})
        elif not I and len(A) == 2:
            a = set(A)
            if a == {N, E}:
                inner.append({N: _along(ring), E: _along(ring, ("t", 0))})
            elif a == {N, W}:
                inner.append({N: _along(ring), W: _along(ring, ("t", 1))})
            elif a == {S, E}:
                inner.append({S: _along(ring), E: _along(ring, ("s", 0))})
            elif a == {S, W}:
                inner.append({S: _along(ring), W: _along(ring, ("s", ring))})
            else:
                raise Inconsistency(f"unexpected corner role {sig}")
        else:
            raise Inconsistency(f"unexpected Red cell role {sig}")
        for part in inner:
            for outer in outer_choices():
                lab = {**part, **outer}
                out.append((sig, lab[N], lab[E], lab[S], lab[W]))
    return out


def machine_layer(M: TuringMachine, roles, inputs=(BLANK,)) -> MachineLayer:
    syms = M.tape_alphabet
    vp = tuple((a, q) for a in syms for q in (None,) + M.states)
    hp = (WALL, NOHEAD) + tuple(("h", q, m) for q in M.states for m in ("R", "L"))
    tiles = [(PLAIN, BLANK_LABEL, BLANK_LABEL, BLANK_LABEL, BLANK_LABEL)]
    for sl, sr, sb, st in itertools.product((0, 1), repeat=4):
        rf, cf = sl == sr == 0, sb == st == 0
        if not rf and not cf:
            tiles.append((PLAIN, _col(sb, st), _row(sl, sr), _col(sb, st), _row(sl, sr)))
        elif rf and not cf:
            tiles += [(PLAIN, _col(sb, st), _row(0, 0, h), _col(sb, st), _row(0, 0, h))
                      for h in hp]
        elif cf and not rf:
            tiles += [(PLAIN, _col(0, 0, v), _row(sl, sr), _col(0, 0, v), _row(sl, sr))
                      for v in vp]
        else:
            tiles += [(PLAIN, _col(0, 0, n), _row(0, 0, e), _col(0, 0, s), _row(0, 0, w))
                      for n, e, s, w in _comp_tiles(M, vp)]
    for sig in sorted(set(roles) - {PLAIN}):
        tiles += _border_tiles(sig, M, inputs, vp)
    tiles = tuple(dict.fromkeys(tiles))
    index = {t: i for i, t in enumerate(tiles)}
    ring = np.array([_ring_of(t) for t in tiles], dtype=np.int64)
    return MachineLayer(tiles, index, ring, hp, vp)


def _ring_of(t):
    for lab in t[1:]:
        if isinstance(lab, tuple) and lab[0] == "A":
            return lab[1]
    return -1


# ---------------------------------------------------------------------------
# compiled tileset


@dataclass(eq=False)
class CompiledTileset:
    variant: str
    machine: TuringMachine  # the user machine
    simulated: TuringMachine  # machine run in the squares (wrapper for p2)
    structural: rb.Tileset
    layer: MachineLayer
    forbidden: ForbiddenSet
    s_of: np.ndarray  # compiled id -> structural id (the projection to A_R)
    m_of: np.ndarray  # compiled id -> machine id
    pair_index: np.ndarray  # (|A_R|, |A_M|) -> compiled id or -1
    families: tuple  # rule family per pattern index, edge classes included
    roles: tuple

    @property
    def size(self):
        return int(self.s_of.size)

    @property
    def layer_map(self):
        return self.s_of

    def projection_alphabet(self) -> set:
        return {self.structural.tiles[i] for i in np.unique(self.s_of)}

    @property
    def tileset(self) -> rb.Tileset:
        ts = self.__dict__.get("_ts")
        if ts is None:
            tiles = list(zip(self.s_of.tolist(), self.m_of.tolist()))
            ts = rb.Tileset(f"compiled-{self.variant}", tiles, self.forbidden,
                            {t: i for i, t in enumerate(tiles)}, 0)
            self.__dict__["_ts"] = ts
        return ts

    def name(self, cid: int) -> str:
        s, m = int(self.s_of[cid]), int(self.m_of[cid])
        return f"{rb.tile_name(self.structural.tiles[s])}|{_machine_name(self.layer.tiles[m])}"

    def family_of(self, pattern_index: int) -> str:
        return self.families[pattern_index]

    def certificate(self) -> str:
        lines = [CERT_HEADER, f"variant {self.variant}", f"machine {self.machine.name}",
                 f"alphabet {self.size}", f"structural {self.structural.size}",
                 f"machine_tiles {len(self.layer.tiles)}",
                 "alphabet-rule layer-role: structural and machine roles agree"]
        e = self.forbidden.edges
        labels = ([f"h:{int(x)}" for x in e.h_labels] + [f"v:{int(x)}" for x in e.v_labels])
        pats = [p.label for p in self.forbidden.patterns] + labels
        lines.append(f"patterns {len(self.families)}")
        lines += [f"{i} {fam} {lab}" for i, (fam, lab) in enumerate(zip(self.families, pats))]
        lines.append("end")
        return "\n".join(lines) + "\n"


def _machine_name(t) -> str:
    return repr(t)


def compile_tm(variant: str, M: TuringMachine, budget: int = DEFAULT_ALPHABET_BUDGET
               ) -> CompiledTileset:
    if variant not in VARIANTS:
        raise InvalidInput(f"unknown compiled variant {variant!r}")
    ts = structural_tileset(variant)
    roles = tuple(struct_role(t) for t in ts.tiles)
    if variant == "p2":
        sim = wrapper_machine(M)
        inputs = tuple(M.input_alphabet) + (BLANK,) + DOLLARS
    else:
        sim = M
        inputs = (BLANK,)
    layer = machine_layer(sim, roles, inputs)
    m_roles = [t[0] for t in layer.tiles]
    by_role_s: dict = {}
    by_role_m: dict = {}
    for i, r in enumerate(roles):
        by_role_s.setdefault(r, []).append(i)
    for i, r in enumerate(m_roles):
        by_role_m.setdefault(r, []).append(i)
    missing = set(by_role_s) - set(by_role_m)
    if missing:
        raise Inconsistency("structural roles without machine tiles", {"roles": sorted(missing)})
    total = sum(len(v) * len(by_role_m[r]) for r, v in by_role_s.items())
    if total > budget:
        raise BudgetExceeded(f"compiled alphabet needs {total} tiles, budget {budget}",
                             layer="alphabet", needed=total, budget=budget)
    s_parts, m_parts = [], []
    for r in sorted(by_role_s):
        s, m = np.meshgrid(by_role_s[r], by_role_m[r], indexing="ij")
        s_parts.append(s.ravel())
        m_parts.append(m.ravel())
    s_of = np.concatenate(s_parts).astype(np.int64)
    m_of = np.concatenate(m_parts).astype(np.int64)
    pair_index = np.full((ts.size, len(layer.tiles)), -1, dtype=np.int64)
    pair_index[s_of, m_of] = np.arange(s_of.size)

    hlab: dict = {}
    vlab: dict = {}
    mE = np.array([hlab.setdefault(t[2], len(hlab)) for t in layer.tiles])
    mW = np.array([hlab.setdefault(t[4], len(hlab)) for t in layer.tiles])
    mN = np.array([vlab.setdefault(t[1], len(vlab)) for t in layer.tiles])
    mS = np.array([vlab.setdefault(t[3], len(vlab)) for t in layer.tiles])
    e = ts.forbidden.edges
    nh, nv = len(hlab), len(vlab)
    edges = EdgeRules(e.east[s_of] * nh + mE[m_of], e.west[s_of] * nh + mW[m_of],
                      e.south[s_of] * nv + mS[m_of], e.north[s_of] * nv + mN[m_of])

    pats, fams = [], []
    is_bumpy = np.array([t[0] == rb.BUMPY for t in ts.tiles])[s_of]
    for p in rb.corner_patterns(is_bumpy):
        pats.append(p)
        fams.append("corner")
    ring = layer.ring[m_of]
    if variant == "p1":
        trans = np.array([_is_transition(t) for t in ts.tiles])[s_of]
        pats.append(ClassPattern((trans & (ring == 0))[None, None, :], 2, "transition:ring=0"))
        fams.append("transition")
    else:
        green = np.array([_is_green_red(t) for t in ts.tiles])[s_of]
        pats.append(ClassPattern((green & (ring == 1))[None, None, :], 2, "freeze:green-ring=1"))
        fams.append("freeze")
    F = ForbiddenSet(int(s_of.size), tuple(pats), edges, 2, tuple(fams))
    families = tuple(fams) + ("edge-match",) * (len(edges.h_labels) + len(edges.v_labels))
    return CompiledTileset(variant, M, sim, ts, layer, F, s_of, m_of, pair_index, families,
                           roles)


# ---------------------------------------------------------------------------
# constructive macro-tiles


@dataclass(frozen=True)
class SquareInfo:
    r0: int
    c0: int
    side: int
    free_rows: tuple  # bottom to top
    free_cols: tuple  # left to right
    tape: tuple
    halted: bool
    ring: int
    trace: tuple = field(repr=False, default=())

    @property
    def scale(self):
        return (len(self.free_cols) - 1).bit_length() - 1


@dataclass(frozen=True)
class SimulationMacroTile:
    config: Configuration
    structural: Configuration
    machine_ids: np.ndarray
    squares: tuple  # SquareInfo, largest first
    choices: dict


def _choices(ct: CompiledTileset, choices: dict | None):
    ch = dict(choices or {})
    out = {"orientation": ch.pop("orientation", "NE")}
    if out["orientation"] not in rb.ORIENTATIONS:
        raise InvalidInput(f"unknown orientation {out['orientation']!r}")
    if ct.variant == "p1":
        t = ch.pop("transition", None)
        if t not in (None, "Bl", "G"):
            raise InvalidInput("transition must be None, 'Bl' or 'G'")
        out["transition"] = t
    else:
        b = ch.pop("border", None)
        if b not in (None, "Bl", "G"):
            raise InvalidInput("border must be None, 'Bl' or 'G'")
        out["border"] = b
    if ct.variant == "p2":
        u = tuple(ch.pop("input", ()))
        for a in u:
            if a not in ct.machine.input_alphabet and a != BLANK:
                raise InvalidInput(f"input letter {a!r} not in the machine alphabet")
        out["input"] = u
    if ch:
        raise InvalidInput(f"unknown choices {sorted(ch)}")
    return out


def _initial_tape(ct, width, u):
    if ct.variant != "p2":
        return (BLANK,) * width
    scale = (width - 1).bit_length() - 1
    return readonly_tape_view(u, scale)


def halts_within_horizon(ct: CompiledTileset, n: int, u=()) -> bool:
    tape = _initial_tape(ct, 2 ** n + 1, u)
    return simulate_tm(ct.simulated, tape if ct.variant == "p2" else (), 2 ** n + 1).halted


def build_simulation_macrotile(ct: CompiledTileset, n: int, choices: dict | None = None,
                               max_cells: int = rb.DEFAULT_MAX_CELLS) -> SimulationMacroTile:
    """The (2n+1)-macro-tile with its machine layer, built without search.
    Choices contradicting the machine's behaviour are rejected."""
    ch = _choices(ct, choices)
    halted = halts_within_horizon(ct, n, ch.get("input", ()))
    if ct.variant == "p1" and ch["transition"] and not halted:
        raise InvalidInput(f"transition requested at scale {n} but the machine does not "
                           f"halt within {2 ** n + 1} steps")
    if ct.variant != "p1":
        if ch["border"] == "G" and halted:
            raise InvalidInput("Green border requested but the machine halts: frozen on Blue")
        if ch["border"] is None:
            ch["border"] = "Bl" if halted else "G"
    return _assemble(ct, n, ch, max_cells)


def _assemble(ct, n, ch, max_cells=rb.DEFAULT_MAX_CELLS) -> SimulationMacroTile:
    if n < 1:
        raise InvalidInput("simulation scale must be at least 1")
    scale = 2 * n + 1
    side = 2 ** scale - 1
    if side * side > max_cells:
        raise BudgetExceeded(f"{side}x{side} macro-tile exceeds the cell budget {max_cells}",
                             layer="memory", needed=side * side, budget=max_cells)
    geo = rb.geometry(scale, ch["orientation"])
    ts = ct.structural
    if ct.variant == "p1":
        T = scale if ch["transition"] else None
        scheme = rb.ColourScheme("enhanced", rb.BLACK, T, rb.COLOUR_CODES[ch["transition"] or "Bl"])
        keys = rb.tile_keys(geo, scheme, True)
    else:
        border = rb.COLOUR_CODES[ch["border"]]
        scheme2 = rb.ColourScheme("alternate", rb.SWAP_BG[border])
        keys = rb.tile_keys(geo, rb.scheme_for("enhanced_four_colour"), True, scheme2)
    sid = rb.keys_to_ids(keys, ts.id_of)
    struct = Configuration(sid, ts.size, "free", 2)
    mid, squares = _machine_ids(ct, sid, ch)
    cid = ct.pair_index[sid, mid]
    if (cid < 0).any():
        r, c = map(int, np.argwhere(cid < 0)[0])
        raise Inconsistency("structural and machine roles disagree",
                            {"cell": (r, c), "structural": rb.tile_name(ts.tiles[sid[r, c]]),
                             "machine": ct.layer.tiles[mid[r, c]]})
    return SimulationMacroTile(Configuration(cid, ct.size, "free", 2), struct, mid,
                               tuple(squares), ch)


def _machine_ids(ct, sid, ch):
    ts = ct.structural
    s = sid.shape[0]
    role_codes = np.array(ct.roles, dtype=object)
    roles = role_codes[sid]
    red = roles != PLAIN
    squares = rb.red_squares(Configuration(sid, ts.size, "free", 2), ts)
    covered = np.zeros_like(red)
    for r0, c0, sd in squares:
        covered[r0:r0 + sd, c0:c0 + sd] |= True
    ring_mask = np.zeros_like(red)
    for r0, c0, sd in squares:
        ring_mask[r0, c0:c0 + sd] = ring_mask[r0 + sd - 1, c0:c0 + sd] = True
        ring_mask[r0:r0 + sd, c0] = ring_mask[r0:r0 + sd, c0 + sd - 1] = True
    if not np.array_equal(ring_mask, red):
        raise Inconsistency("Red cells do not form complete squares")
    squares = sorted(squares, key=lambda q: -q[2])
    H = np.full((s, s + 1), None, dtype=object)  # H[r, c + 1]: edge east of (r, c)
    V = np.full((s + 1, s), None, dtype=object)  # V[r, c]: edge north of (r, c)
    H[:] = BLANK_LABEL
    V[:] = BLANK_LABEL
    sim = ct.simulated
    top = squares[0][2] if squares else 0
    infos = []
    for r0, c0, sd in squares:
        r1, c1 = r0 + sd - 1, c0 + sd - 1
        inner = red[r0 + 1:r1, c0 + 1:c1]
        frows = [r0 + 1 + i for i in range(sd - 2) if not inner[i].any()][::-1]
        fcols = [c0 + 1 + j for j in range(sd - 2) if not inner[:, j].any()]
        width, steps = len(fcols), len(frows)
        tape = _initial_tape(ct, width, ch.get("input", ()))
        trace = bounded_trace(sim, tape, steps)
        scan = int(trace[-1].state in sim.halting)
        ring = scan
        if ct.variant == "p1" and ch["transition"] and sd == top:
            ring = 1
        if ct.variant != "p1" and ch["border"] == "G":
            ring = 0
        infos.append(SquareInfo(r0, c0, sd, tuple(frows), tuple(fcols), tuple(tape),
                                bool(scan), ring, tuple(trace)))
        # row signals: edges east of columns c0 .. c1 - 1 on interior rows
        ored = np.zeros((sd - 2, sd), dtype=bool)
        ored[:, 1:-1] = inner
        sl = np.logical_or.accumulate(ored, axis=1)[:, :-1]  # red in (c0, c]
        sr = np.logical_or.accumulate(ored[:, ::-1], axis=1)[:, ::-1][:, 1:]  # red in [c+1, c1)
        colpos = {c: j for j, c in enumerate(fcols)}
        rowpos = {r: i for i, r in enumerate(frows)}
        for i in range(sd - 2):
            r = r0 + 1 + i
            free = r in rowpos
            for k in range(sd - 1):
                c = c0 + k
                p = _h_payload(trace, rowpos[r], fcols, c, sim) if free else None
                H[r, c + 1] = _row(int(sl[i, k]), int(sr[i, k]), p)
        # column signals: edges north of rows r0 + 1 .. r1 on interior columns
        ored = np.zeros((sd, sd - 2), dtype=bool)
        ored[1:-1, :] = inner
        st = np.logical_or.accumulate(ored, axis=0)[:-1, :]  # red in (r0, r - 1]
        sb = np.logical_or.accumulate(ored[::-1, :], axis=0)[::-1, :][1:, :]  # red in [r, r1)
        for j in range(sd - 2):
            c = c0 + 1 + j
            free = c in colpos
            below = 0
            for k in range(sd - 1, 0, -1):  # edge north of row r0 + k
                r = r0 + k
                if r in rowpos:
                    below += 1
                p = None
                if free:
                    row = trace[below]
                    jj = colpos[c]
                    p = (row.tape[jj], row.state if row.head == jj else None)
                V[r, c] = _col(int(sb[k - 1, j]), int(st[k - 1, j]), p)
        # along labels
        tok = sc = 0
        last = trace[-1]
        for c in range(c0, c1):
            if c in colpos:
                tok = 1
                jj = colpos[c]
                sc |= int(last.head == jj and last.state in sim.halting)
            H[r1, c + 1] = _along(ring, ("t", tok))
            H[r0, c + 1] = _along(ring, ("s", sc))
        for r in range(r0 + 1, r1 + 1):
            V[r, c0] = _along(ring)
            V[r, c1] = _along(ring)
    index = ct.layer.index
    mid = np.empty((s, s), dtype=np.int64)
    cache: dict = {}
    for r in range(s):
        for c in range(s):
            t = (roles[r, c], V[r, c], H[r, c + 1], V[r + 1, c], H[r, c])
            i = cache.get(t)
            if i is None:
                i = index.get(t)
                if i is None:
                    i = _repair(t, index)
                cache[t] = i
            mid[r, c] = i
    return mid, infos


def _repair(t, index):
    """A top-right corner whose scan disagrees with a forced ring keeps the
    ring value; the mismatch then shows on its west edge."""
    role, n, e, s, w = t
    if isinstance(w, tuple) and w[0] == "A" and w[2] and w[2][0] == "s":
        fixed = (role, n, e, s, _along(w[1], ("s", w[1])))
        if fixed in index:
            return index[fixed]
    raise Inconsistency("machine layer has no tile for a derived cell", {"tile": t})


def _h_payload(trace, i, fcols, c, sim):
    left = sum(1 for x in fcols if x <= c) - 1
    right = left + 1
    if left < 0 or right >= len(fcols):
        return WALL
    row = trace[i]
    if row.move is None or not row.moved:
        return NOHEAD
    nxt = trace[i + 1].state
    if row.move == "R" and row.head == left:
        return ("h", nxt, "R")
    if row.move == "L" and row.head == right:
        return ("h", nxt, "L")
    return NOHEAD


# ---------------------------------------------------------------------------
# behaviour


@dataclass(frozen=True)
class ScaleBehaviour:
    n: int
    horizon: int
    halted_within_horizon: bool
    transition_admissible: bool | None = None
    freeze_active: bool | None = None


def horizon(n: int) -> int:
    return 2 ** n + 1


def verify_scale_behaviour(ct: CompiledTileset, n: int, u=()) -> ScaleBehaviour:
    """Cross-check direct simulation against admissibility of the transition
    (p1) or Green (s1, p2) choice in the constructive macro-tile."""
    halted = halts_within_horizon(ct, n, u)
    base = {"input": tuple(u)} if ct.variant == "p2" else {}
    plain = _assemble(ct, n, _choices(ct, {**base, **({} if ct.variant == "p1" else
                                                     {"border": "Bl"})}))
    bad = check_local_admissibility(plain.config, ct.forbidden)
    if bad:
        raise Inconsistency("constructive macro-tile is not admissible",
                            {"n": n, "violations": bad[:5]})
    if ct.variant == "p1":
        forced = _assemble(ct, n, _choices(ct, {"transition": "Bl"}))
        ok = not check_local_admissibility(forced.config, ct.forbidden)
        if ok != halted:
            raise Inconsistency("transition admissibility disagrees with simulation",
                                {"n": n, "halted": halted, "admissible": ok})
        return ScaleBehaviour(n, horizon(n), halted, transition_admissible=ok)
    green = _assemble(ct, n, _choices(ct, {**base, "border": "G"}))
    frozen = bool(check_local_admissibility(green.config, ct.forbidden))
    if frozen != halted:
        raise Inconsistency("freeze disagrees with simulation",
                            {"n": n, "halted": halted, "frozen": frozen})
    return ScaleBehaviour(n, horizon(n), halted, freeze_active=frozen)


def projection(ct: CompiledTileset, c: Configuration) -> Configuration:
    """Erase the machine layer and the Blue-Green bit: an enhanced Robinson
    configuration."""
    enh = rb.build_tileset("enhanced_four_colour")
    table = np.array([enh.index.get(_strip2(t), -1) for t in ct.structural.tiles])
    ids = table[ct.s_of[c.cells]]
    if (ids < 0).any():
        raise Inconsistency("projection leaves the enhanced alphabet")
    return Configuration(ids, enh.size, c.boundary, 2)


def _strip2(t):
    return (t[0],) + tuple((io, th, side, c1, 0) for io, th, side, c1, _ in t[1:])


def transition_cells(ct: CompiledTileset, c: Configuration) -> np.ndarray:
    trans = np.array([_is_transition(t) for t in ct.structural.tiles])
    return trans[ct.s_of[c.cells]]


def border_bluegreen(ct: CompiledTileset, mt: SimulationMacroTile) -> set:
    """Blue-Green values carried by Red edges of the macro-tile."""
    out = set()
    for i in np.unique(mt.structural.cells):
        for e in ct.structural.tiles[i][1:]:
            if e[1] and e[3] == rb.RED:
                out.add(rb.COLOUR_NAMES[e[4]])
    return out


def diagram(mt: SimulationMacroTile, ct: CompiledTileset, square: int = 0) -> list:
    """Space-time rows (bottom first) read back from the machine layer: the
    south payload of every computation cell, plus the top border input."""
    info = mt.squares[square]
    rows = []
    for r in info.free_rows:
        row = []
        for c in info.free_cols:
            t = ct.layer.tiles[mt.machine_ids[r, c]]
            row.append(t[3][3])
        rows.append(tuple(row))
    top = []
    for c in info.free_cols:
        t = ct.layer.tiles[mt.machine_ids[info.r0, c]]
        top.append(t[3][3])
    rows.append(tuple(top))
    return rows
