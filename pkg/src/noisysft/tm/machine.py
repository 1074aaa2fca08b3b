"""Single-tape Turing machines on a semi-infinite ribbon.

The ribbon starts at cell 0; a left move on cell 0 leaves the head in
place.  Halting states have no transitions and a halted machine keeps its
configuration forever.

Text format (one directive per line, '#' starts a comment only at the start
of a line, tokens are whitespace separated)::

    # noisysft turing machine v1
    name bb2
    states A B H
    input 1
    tape # 1
    initial A
    halting H
    A # -> B 1 R
    ...
    end

``#`` is the blank.  Tokens starting with ``$`` are reserved for the
Toeplitz channel and rejected in user alphabets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InvalidInput

BLANK = "#"
DOLLAR_SIGMA, DOLLAR_BLANK = "$S", "$#"
RESERVED = (BLANK, DOLLAR_SIGMA, DOLLAR_BLANK)
MOVES = ("L", "R")
FORMAT_HEADER = "# noisysft turing machine v1"


@dataclass(frozen=True, eq=False)
class TuringMachine:
    states: tuple
    input_alphabet: tuple
    tape_alphabet: tuple
    transitions: dict  # (q, a) -> (q', b, move)
    initial: str
    halting: frozenset
    name: str = "M"
    allow_reserved: bool = False  # set by internal constructions only
    _key: tuple = field(init=False, repr=False, default=())

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "input_alphabet", tuple(self.input_alphabet))
        object.__setattr__(self, "tape_alphabet", tuple(self.tape_alphabet))
        object.__setattr__(self, "halting", frozenset(self.halting))
        object.__setattr__(self, "transitions", dict(self.transitions))
        self._validate()
        key = (self.states, self.input_alphabet, self.tape_alphabet, self.initial,
               tuple(sorted(self.halting)), tuple(sorted(self.transitions.items())))
        object.__setattr__(self, "_key", key)

    def _validate(self):
        Q, G = set(self.states), set(self.tape_alphabet)
        if len(Q) != len(self.states) or len(G) != len(self.tape_alphabet):
            raise InvalidInput("duplicate states or symbols")
        if BLANK not in G:
            raise InvalidInput("the tape alphabet must contain the blank '#'")
        for a in self.input_alphabet:
            if self.allow_reserved:
                break
            if a in RESERVED or a.startswith("$"):
                raise InvalidInput(f"input symbol {a!r} collides with a reserved symbol")
            if a not in G:
                raise InvalidInput(f"input symbol {a!r} missing from the tape alphabet")
        for a in G:
            if a.startswith("$") and not self.allow_reserved:
                raise InvalidInput(f"tape symbol {a!r} collides with a reserved symbol")
        if self.initial not in Q:
            raise InvalidInput(f"unknown initial state {self.initial!r}")
        if not self.halting <= Q:
            raise InvalidInput("halting states must be states")
        for (q, a), (q2, b, m) in self.transitions.items():
            if q in self.halting:
                raise InvalidInput(f"halting state {q!r} has a transition")
            if q not in Q or q2 not in Q or a not in G or b not in G or m not in MOVES:
                raise InvalidInput(f"malformed transition {q} {a} -> {q2} {b} {m}")
        for q in self.states:
            if q in self.halting:
                continue
            for a in self.tape_alphabet:
                if (q, a) not in self.transitions:
                    raise InvalidInput(f"transition table not total: missing ({q}, {a})")

    def __eq__(self, other):
        return isinstance(other, TuringMachine) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def step(self, q, a):
        return self.transitions[(q, a)]


# ---------------------------------------------------------------------------
# text format


def dumps_machine(M: TuringMachine) -> str:
    lines = [FORMAT_HEADER, f"name {M.name}", "states " + " ".join(M.states),
             "input " + " ".join(M.input_alphabet), "tape " + " ".join(M.tape_alphabet),
             f"initial {M.initial}", "halting " + " ".join(sorted(M.halting))]
    for q in M.states:
        for a in M.tape_alphabet:
            if (q, a) in M.transitions:
                q2, b, m = M.transitions[(q, a)]
                lines.append(f"{q} {a} -> {q2} {b} {m}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def loads_machine(text: str) -> TuringMachine:
    lines = [ln.strip() for ln in text.splitlines()]
    if not lines or lines[0] != FORMAT_HEADER:
        raise InvalidInput("not a noisysft turing machine v1 file")
    kv, trans = {}, {}
    for ln in lines[1:]:
        if not ln or ln.startswith("# "):
            continue
        if ln == "end":
            break
        tok = ln.split()
        if "->" in tok:
            if len(tok) != 6 or tok[2] != "->":
                raise InvalidInput(f"malformed transition line {ln!r}")
            q, a, _, q2, b, m = tok
            if (q, a) in trans:
                raise InvalidInput(f"duplicate transition for ({q}, {a})")
            trans[(q, a)] = (q2, b, m)
        else:
            kv[tok[0]] = tok[1:]
    try:
        return TuringMachine(kv["states"], kv.get("input", []), kv["tape"], trans,
                             kv["initial"][0], kv.get("halting", []),
                             (kv.get("name") or ["M"])[0])
    except (KeyError, IndexError) as exc:
        raise InvalidInput(f"missing directive {exc}") from None


# ---------------------------------------------------------------------------
# simulation


@dataclass(frozen=True)
class SimResult:
    halted: bool
    steps: int  # transitions performed
    tape: tuple  # visited prefix of the ribbon
    head: int
    state: str

    @property
    def status(self):
        return "halted" if self.halted else "running"


def _word(u) -> tuple:
    return tuple(u) if not isinstance(u, tuple) else u


def simulate_tm(M: TuringMachine, u=(), max_steps: int = 1000) -> SimResult:
    """Run M on input u for at most max_steps transitions."""
    if max_steps < 0:
        raise InvalidInput("max_steps must be non-negative")
    u = _word(u)
    for a in u:
        if a not in M.tape_alphabet:
            raise InvalidInput(f"input symbol {a!r} not in the tape alphabet")
    tape = list(u) or [BLANK]
    head, q, t = 0, M.initial, 0
    while q not in M.halting and t < max_steps:
        q, tape[head], m = M.step(q, tape[head])
        if m == "R":
            head += 1
            if head == len(tape):
                tape.append(BLANK)
        elif head > 0:
            head -= 1
        t += 1
    return SimResult(q in M.halting, t, tuple(tape), head, q)


@dataclass(frozen=True)
class TraceRow:
    tape: tuple
    head: int
    state: str
    move: str | None  # move taken from this row to the next, None if halted
    moved: bool  # False when the move hit a wall


def bounded_trace(M: TuringMachine, tape, steps: int) -> list[TraceRow]:
    """Configurations 0..steps on a ribbon of fixed width with walls at both
    ends; a move into a wall leaves the head in place."""
    tape = list(_word(tape))
    width = len(tape)
    if width < 1:
        raise InvalidInput("the ribbon needs at least one cell")
    head, q = 0, M.initial
    rows = []
    for _ in range(steps + 1):
        if q in M.halting:
            rows.append(TraceRow(tuple(tape), head, q, None, False))
            continue
        q2, b, m = M.step(q, tape[head])
        nxt = head + (1 if m == "R" else -1)
        moved = 0 <= nxt < width
        rows.append(TraceRow(tuple(tape), head, q, m, moved))
        tape[head] = b
        head = nxt if moved else head
        q = q2
    return rows


# ---------------------------------------------------------------------------
# sample machines


def _machine(name, states, tape, table, halting, inputs=()):
    trans = {}
    for row in table.split(";"):
        q, a, q2, b, m = row.split()
        trans[(q, a)] = (q2, b, m)
    return TuringMachine(states, inputs, tape, trans, states[0], halting, name)


def never_halting() -> TuringMachine:
    """Walks right forever."""
    return _machine("loop_right", ("A",), ("#", "1"), "A # A 1 R;A 1 A 1 R", ())


def bouncer() -> TuringMachine:
    """Never halts: marks cell 0, then sweeps back and forth over a growing
    block of 1s."""
    return _machine("bouncer", ("A", "B", "C", "D"), ("#", "1", "e"),
                    "A # B e R;A 1 B e R;A e B e R;B # C 1 L;B 1 B 1 R;B e B e R;"
                    "C # C # L;C 1 C 1 L;C e D e R;D # C 1 L;D 1 D 1 R;D e D e R", ())


def immediate_halt() -> TuringMachine:
    return TuringMachine(("H",), (), ("#", "1"), {}, "H", ("H",), "halt0")


def count_right(k: int) -> TuringMachine:
    """Moves right k times, writing 1s, then halts after exactly k steps."""
    if k < 1:
        raise InvalidInput("k must be at least 1")
    states = tuple(f"c{i}" for i in range(k)) + ("H",)
    trans = {}
    for i in range(k):
        for a in ("#", "1"):
            trans[(states[i], a)] = (states[i + 1], "1", "R")
    return TuringMachine(states, (), ("#", "1"), trans, states[0], ("H",), f"count{k}")


def busy_beaver_2() -> TuringMachine:
    return _machine("bb2", ("A", "B", "H"), ("#", "1"),
                    "A # B 1 R;A 1 B 1 L;B # A 1 L;B 1 H 1 R", ("H",))


def busy_beaver_3() -> TuringMachine:
    return _machine("bb3", ("A", "B", "C", "H"), ("#", "1"),
                    "A # B 1 R;A 1 H 1 R;B # C # R;B 1 B 1 R;C # C 1 L;C 1 A 1 L", ("H",))


def accept_ones() -> TuringMachine:
    """Halts iff the input word is a (possibly empty) block of 1s followed by
    a blank; loops on any other letter.  Input alphabet {1, 0}."""
    return _machine("ones", ("A", "L", "H"), ("#", "0", "1"),
                    "A # H # R;A 1 A 1 R;A 0 L 0 R;L # L # R;L 0 L 0 R;L 1 L 1 R",
                    ("H",), inputs=("0", "1"))


def sample_machines() -> dict:
    out = {m.name: m for m in (never_halting(), bouncer(), immediate_halt(),
                               busy_beaver_2(), busy_beaver_3())}
    for k in (1, 9, 12, 17, 18):
        m = count_right(k)
        out[m.name] = m
    return out
