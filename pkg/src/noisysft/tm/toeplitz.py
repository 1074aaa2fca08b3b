"""Toeplitz encoding of an input word and the decode-then-simulate wrapper.

Words are tuples of tokens; a plain string is read one character per
letter.  Inputs shorter than the requested scale are padded with the blank.

The wrapper machine W(M) reads the letters at positions 2^(k-1) - 1 of its
initial tape, which hold u_1, u_2, ... for a Toeplitz-encoded input.  The
k-th letter is copied to cell k - 1 and the read position is doubled with a
unary tick sweep (about 4^k steps).  Reading a $-symbol parks the machine
in an idle loop; reading the blank ends the decoding and M runs on the
decoded prefix, raw cells reading as blank.
"""

from __future__ import annotations

from ..errors import InvalidInput
from .machine import BLANK, DOLLAR_BLANK, DOLLAR_SIGMA, TuringMachine

DOLLARS = (DOLLAR_SIGMA, DOLLAR_BLANK)


def _word(u) -> tuple:
    return tuple(u)


def padded(u, n: int) -> tuple:
    u = _word(u)
    return u + (BLANK,) * max(0, n - len(u))


def toeplitz_prefix(u, n: int) -> tuple:
    """w_n = w_{n-1} u_n w_{n-1}, w_0 empty."""
    if n < 0:
        raise InvalidInput("n must be non-negative")
    u = padded(u, n)
    w: tuple = ()
    for k in range(n):
        w = w + (u[k],) + w
    return w


def dollar_for(letter) -> str:
    """Black channels carry $# after a blank and $S after a letter."""
    return DOLLAR_BLANK if letter == BLANK else DOLLAR_SIGMA


def readonly_tape_view(u, n: int) -> tuple:
    """w_{n-1} $ $ w_{n-1} u_n, the $-symbols typed by u_n."""
    if n < 1:
        raise InvalidInput("the view is defined for n >= 1")
    u = padded(u, n)
    w = toeplitz_prefix(u, n - 1)
    d = dollar_for(u[n - 1])
    return w + (d, d) + w + (u[n - 1],)


def show(word) -> str:
    """Untyped rendering: both $-symbols print as '$'."""
    return "".join("$" if a in DOLLARS else a for a in word)


def decode_view(view) -> tuple[str, tuple]:
    """Reference decoder: ('done', u), ('idle', prefix) or ('short', prefix)."""
    view = _word(view)
    got = []
    k = 1
    while True:
        p = 2 ** (k - 1) - 1
        if p >= len(view):
            return "short", tuple(got)
        a = view[p]
        if a in DOLLARS:
            return "idle", tuple(got)
        if a == BLANK:
            return "done", tuple(got)
        got.append(a)
        k += 1


# ---------------------------------------------------------------------------
# wrapper machine

FLAGS = ("s", "t", "p")  # start cell, tick, pointer


def sym(base: str, flags=frozenset()) -> str:
    f = "".join(x for x in FLAGS if x in flags)
    return base + ("|" + f if f else "")


def parse_sym(s: str):
    base, _, f = s.partition("|")
    return base, frozenset(f)


def decoded(g: str) -> str:
    return "D:" + g


def wrapper_machine(M: TuringMachine) -> TuringMachine:
    sigma = tuple(M.input_alphabet)
    raw = sigma + (BLANK, DOLLAR_SIGMA, DOLLAR_BLANK)
    bases = raw + tuple(decoded(g) for g in M.tape_alphabet)
    flagsets = [frozenset(x for i, x in enumerate(FLAGS) if m >> i & 1) for m in range(8)]
    tape = tuple(sym(b, f) for b in bases for f in flagsets)
    mstate = {q: "m:" + q for q in M.states}
    states = ["init", "read", "ret", "back", "tl", "gr1", "gr2", "gr2L", "gl", "clr",
              "fwd", "fwd2", "idle"]
    states += [f"put:{b}" for b in sigma] + [f"put2:{b}" for b in sigma]
    states += [mstate[q] for q in M.states]
    halting = {mstate[q] for q in M.halting}
    T = {}

    def rule(q, base, flags, q2, base2, flags2, move):
        T[(q, sym(base, flags))] = (q2, sym(base2, flags2), move)

    for b in bases:
        for f in flagsets:
            is_dec = b.startswith("D:")
            for q in states:
                if q not in halting:
                    rule(q, b, f, "idle", b, f, "L")  # default, overwritten below
            rule("init", b, f, "read", b, f | {"s"}, "L")
            if b in DOLLARS:
                rule("read", b, f, "idle", b, f, "L")
            elif b == BLANK or is_dec:
                rule("read", b, f, "ret", b, f - {"p"}, "L")
            else:
                rule("read", b, f, f"put:{b}", b, f | {"p"}, "L")
            rule("ret", b, f, mstate[M.initial] if "s" in f else "ret", b, f, "L")
            for a in sigma:
                if "s" not in f:
                    rule(f"put:{a}", b, f, f"put:{a}", b, f, "L")
                elif is_dec:
                    rule(f"put:{a}", b, f, f"put2:{a}", b, f, "R")
                else:
                    rule(f"put:{a}", b, f, "tl", decoded(a), f, "L")
                if is_dec:
                    rule(f"put2:{a}", b, f, f"put2:{a}", b, f, "R")
                else:
                    rule(f"put2:{a}", b, f, "back", decoded(a), f, "L")
            rule("back", b, f, "tl" if "s" in f else "back", b, f, "L")
            if "t" in f:
                rule("tl", b, f, "tl", b, f, "R")
            else:
                rule("tl", b, f, "gr2L" if "p" in f else "gr1", b, f | {"t"}, "R")
            rule("gr1", b, f, "gr2" if "p" in f else "gr1", b, f, "R")
            if "t" in f:
                rule("gr2", b, f, "gr2", b, f, "R")
                rule("gr2L", b, f, "gr2L", b, f, "R")
            else:
                rule("gr2", b, f, "gl", b, f | {"t"}, "L")
                rule("gr2L", b, f, "clr", b, f | {"p"}, "L")
            rule("gl", b, f, "tl" if "s" in f else "gl", b, f, "L")
            rule("clr", b, f, "fwd" if "s" in f else "clr", b, f - {"t", "p"},
                 "R" if "s" in f else "L")
            rule("fwd", b, f, "fwd2" if "p" in f else "fwd", b, f, "L" if "p" in f else "R")
            rule("fwd2", b, f, "read", b, f, "R")
            g = b[2:] if is_dec else BLANK
            for q in M.states:
                if q in M.halting:
                    continue
                q2, w, mv = M.step(q, g)
                rule(mstate[q], b, f, mstate[q2], decoded(w), f, mv)
    inputs = sigma + DOLLARS
    return TuringMachine(tuple(states), inputs, tape, T, "init", halting,
                         f"wrap_{M.name}", allow_reserved=True)

