"""Fixture machines shared across the QTM and compiler tests.

All three are unidirectional and well-formed: their (state, symbol) pair
map, with the move direction attached to each target state, is a unitary,
so the compiled per-cell matrix must be unitary as well.
"""

import math

from qcasim.qtm import QtmSpec

R = 1.0 / math.sqrt(2.0)


def right_mover() -> QtmSpec:
    """Deterministic: swaps blank <-> 'a' under the head, moving right forever."""
    return QtmSpec(
        alphabet=("b", "a"),
        blank="b",
        states=("q0", "qf"),
        q0="q0",
        qf="qf",
        delta={
            ("q0", "b", "a", "q0", "R"): 1.0,
            ("q0", "a", "b", "q0", "R"): 1.0,
        },
    )


def coin_machine() -> QtmSpec:
    """One balanced branch: writes 'A' or 'B' at cell 0, then drifts right.

    The branch continuations write distinct symbols, and the remaining
    (state, symbol) pairs are completed to a permutation so the whole pair
    map is unitary.
    """
    delta = {
        ("q0", "b", "A", "qA", "R"): R,
        ("q0", "b", "B", "qB", "R"): R,
        ("qA", "A", "A", "qA", "R"): R,
        ("qA", "A", "B", "qB", "R"): -R,
        ("q0", "A", "A", "q0", "R"): 1.0,
        ("q0", "B", "B", "q0", "R"): 1.0,
        ("qA", "b", "b", "qA", "R"): 1.0,
        ("qA", "B", "B", "qA", "R"): 1.0,
        ("qB", "b", "b", "qB", "R"): 1.0,
        ("qB", "A", "A", "qB", "R"): 1.0,
        ("qB", "B", "b", "q0", "R"): 1.0,
    }
    return QtmSpec(
        alphabet=("b", "A", "B"),
        blank="b",
        states=("q0", "qA", "qB", "qf"),
        q0="q0",
        qf="qf",
        delta=delta,
    )


def walk_machine() -> QtmSpec:
    """Three balanced-coin steps, then a stamp step that writes 'a' where the
    walker sits and releases two drones.

    The walker interferes with itself before stamping, so the mass of 'a' at
    cell 1 after four steps is 5/8: strictly above the 3/8 a classical
    random walk would give.  Stamped tapes are frozen afterwards.
    """
    delta = {}
    for k in range(3):
        delta[(f"qR{k}", "b", "b", f"qR{k + 1}", "R")] = R
        delta[(f"qR{k}", "b", "b", f"qL{k + 1}", "L")] = R
        delta[(f"qL{k}", "b", "b", f"qR{k + 1}", "R")] = R
        delta[(f"qL{k}", "b", "b", f"qL{k + 1}", "L")] = -R
    delta[("qR3", "b", "a", "dR", "R")] = R
    delta[("qR3", "b", "a", "dL", "L")] = R
    delta[("qL3", "b", "a", "dR", "R")] = R
    delta[("qL3", "b", "a", "dL", "L")] = -R
    delta[("dR", "b", "b", "dR", "R")] = 1.0
    delta[("dL", "b", "b", "dL", "L")] = 1.0
    for k in range(4):
        delta[(f"qR{k}", "a", "a", f"qR{k}", "R")] = 1.0
        delta[(f"qL{k}", "a", "a", f"qL{k}", "L")] = 1.0
    delta[("dR", "a", "b", "qR0", "R")] = 1.0
    delta[("dL", "a", "b", "qL0", "L")] = 1.0
    states = tuple(f"qR{k}" for k in range(4)) + tuple(
        f"qL{k}" for k in range(4)
    ) + ("dR", "dL", "qf")
    return QtmSpec(
        alphabet=("b", "a"), blank="b", states=states, q0="qR0", qf="qf", delta=delta
    )


def simple_coin() -> QtmSpec:
    """Two same-write branches; fine for single-step tests but not well-formed."""
    return QtmSpec(
        alphabet=("b", "a"),
        blank="b",
        states=("q0", "qA", "qB", "qf"),
        q0="q0",
        qf="qf",
        delta={
            ("q0", "b", "a", "qA", "R"): R,
            ("q0", "b", "b", "qB", "R"): R,
        },
    )


ALL_COMPILER_FIXTURES = {
    "right_mover": right_mover,
    "coin_machine": coin_machine,
    "walk_machine": walk_machine,
}
