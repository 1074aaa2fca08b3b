import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisysft.errors import InvalidInput
from noisysft.tm.machine import (BLANK, TuringMachine, accept_ones, bounded_trace, bouncer,
                                 busy_beaver_2, busy_beaver_3, count_right, dumps_machine,
                                 immediate_halt, loads_machine, never_halting, sample_machines,
                                 simulate_tm)
from noisysft.tm.toeplitz import (decode_view, dollar_for, readonly_tape_view, show,
                                  toeplitz_prefix, wrapper_machine)


def reference_run(M, u, max_steps):
    """Second simulator: sparse dict tape, no shared code with simulate_tm."""
    tape = dict(enumerate(u))
    head, q = 0, M.initial
    for t in range(max_steps):
        if q in M.halting:
            return True, t, tape
        q, tape[head], m = M.transitions[(q, tape.get(head, BLANK))]
        head = head + 1 if m == "R" else max(head - 1, 0)
    return q in M.halting, max_steps, tape


def test_golden_step_counts():
    got = {name: (r.halted, r.steps) for name, m in sample_machines().items()
           for r in [simulate_tm(m, (), 200)]}
    assert got == {"loop_right": (False, 200), "bouncer": (False, 200), "halt0": (True, 0),
                   "bb2": (True, 4), "bb3": (True, 6), "count1": (True, 1),
                   "count9": (True, 9), "count12": (True, 12), "count17": (True, 17),
                   "count18": (True, 18)}
    assert simulate_tm(busy_beaver_3(), (), 200).tape == ("1", "1", "1")


@pytest.mark.parametrize("make", [never_halting, bouncer, immediate_halt, busy_beaver_2,
                                  busy_beaver_3, accept_ones, lambda: count_right(5)])
@pytest.mark.parametrize("steps", [0, 1, 3, 17, 64])
def test_second_simulator_agrees(make, steps):
    M = make()
    for u in ("", "1", "0", "110", "0111"):
        if any(a not in M.tape_alphabet for a in u):
            continue
        r = simulate_tm(M, u, steps)
        halted, t, tape = reference_run(M, u, steps)
        assert (r.halted, r.steps) == (halted, t)
        assert all(tape.get(i, BLANK) == a for i, a in enumerate(r.tape))


def test_accept_ones():
    M = accept_ones()
    assert simulate_tm(M, "11", 50).steps == 3
    for u in itertools.product("01", repeat=4):
        assert simulate_tm(M, u, 50).halted == ("0" not in u)


def test_bounded_trace_walls():
    rows = bounded_trace(never_halting(), "###", 4)
    assert [r.head for r in rows] == [0, 1, 2, 2, 2]
    assert [r.moved for r in rows] == [True, True, False, False, False]
    rows = bounded_trace(immediate_halt(), "#", 2)
    assert all(r.move is None for r in rows)
    with pytest.raises(InvalidInput):
        bounded_trace(bouncer(), "", 1)


@pytest.mark.parametrize("M", list(sample_machines().values()) + [accept_ones()])
def test_format_round_trip(M):
    N = loads_machine(dumps_machine(M))
    assert N == M and N.name == M.name


def test_machine_errors():
    with pytest.raises(InvalidInput):  # reserved input symbol
        TuringMachine(("A",), ("$S",), ("#", "$S"), {}, "A", ("A",))
    with pytest.raises(InvalidInput):  # non-total table
        TuringMachine(("A", "H"), (), ("#", "1"), {("A", "#"): ("H", "1", "R")}, "A", ("H",))
    with pytest.raises(InvalidInput):  # no blank
        TuringMachine(("H",), (), ("1",), {}, "H", ("H",))
    with pytest.raises(InvalidInput):
        loads_machine("name x\n")
    with pytest.raises(InvalidInput):
        simulate_tm(busy_beaver_2(), "2", 5)
    with pytest.raises(InvalidInput):
        count_right(0)


def test_toeplitz_examples():
    assert show(toeplitz_prefix("a", 1)) == "a"
    assert show(toeplitz_prefix("ab", 2)) == "aba"
    assert show(toeplitz_prefix("abc", 3)) == "abacaba"
    assert [show(readonly_tape_view("abc", n)) for n in (1, 2, 3)] == ["$$a", "a$$ab",
                                                                        "aba$$abac"]
    assert readonly_tape_view("ab", 3)[3] == dollar_for(BLANK) != dollar_for("a")


@given(st.text("01", max_size=4), st.integers(1, 5))
@settings(max_examples=40)
def test_wrapper_matches_reference_decoder(u, n):
    M = accept_ones()
    W = wrapper_machine(M)
    view = readonly_tape_view(u, n)
    status, prefix = decode_view(view)
    r = simulate_tm(W, view, 20000)
    if status == "done":
        assert r.halted == simulate_tm(M, prefix, 100).halted
    else:
        assert not r.halted
