"""Compile a unidirectional quantum Turing machine into a partitioned QCA.

Cell states are triples (left slot, tape symbol, right slot).  The tape
symbol is the machine's tape content; the slots carry the head marker: a
state entered by moving left rides in left slots (which the routing step
shifts left each step), a state entered by moving right rides in right
slots (shifted right).  The per-cell matrix executes one machine transition
exactly when a marker arrives over a cell, writing the new symbol in place
and emitting the successor marker in the slot for its travel direction, so
one automaton step simulates one machine step.

The matrix is identity on every cell state the transition rules do not
touch (pure tape cells, parked final-state markers with no outgoing
transitions would instead produce a zero column and fail the unitarity
gate, which correctly rejects machines whose step operator loses mass).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import pqca, qtm
from .gates import is_unitary
from .pqca import PqcaSpec
from .qca import Config, config_from_label, config_label
from .superposition import Superposition, Tolerance
from .qtm import QtmConfig, QtmSpec

HASH = "#"

COMPILE_TOL = Tolerance(eps_norm=1e-9, eps_unitary=1e-10, eps_drop=1e-14)


class CompileError(ValueError):
    """The machine cannot be compiled (or its compiled matrix is not unitary)."""


def split_states(spec: QtmSpec) -> tuple[frozenset[str], frozenset[str]]:
    """Partition machine states by the direction through which they are entered.

    States that never appear as transition targets default to the
    right-moving class; any consistent choice works because such states
    never acquire a marker during evolution.  Stay moves have no slot to
    ride in and are rejected.
    """
    directions = qtm.entry_directions(spec)
    if qtm.STAY in directions.values():
        stay = sorted(q for q, d in directions.items() if d == qtm.STAY)
        raise CompileError(
            f"states {stay} are entered with a stay move; the construction "
            "only places markers moving left or right"
        )
    k_l = {q for q, d in directions.items() if d == qtm.LEFT}
    k_r = {q for q in spec.states if q not in k_l}
    return frozenset(k_l), frozenset(k_r)


@dataclass(frozen=True)
class CompiledPqca:
    """Compilation result: the automaton plus the acceptance bookkeeping."""

    spec: PqcaSpec
    k_l: frozenset[str]
    k_r: frozenset[str]
    k_a: int
    accept_symbols: tuple[str, ...]
    source: QtmSpec

    def accept_states(self) -> set[tuple]:
        """Composite states whose tape symbol is accepting."""
        return {
            s for s in self.spec.states() if s[1] in self.accept_symbols
        }


def compile_qtm(
    machine: QtmSpec,
    k_a: int = 0,
    accept_symbols: Sequence[str] = (),
    tol: Tolerance = COMPILE_TOL,
) -> CompiledPqca:
    """Build the simulating automaton and verify its matrix is unitary."""
    k_l, k_r = split_states(machine)
    if HASH in machine.states or HASH in machine.alphabet:
        raise CompileError(f"{HASH!r} must not appear in the machine (it marks empty slots)")

    left_slots = (HASH,) + tuple(sorted(k_l))
    right_slots = (HASH,) + tuple(sorted(k_r))
    parts = (left_slots, tuple(machine.alphabet), right_slots)
    quiescent = (HASH, machine.blank, HASH)
    states = list(itertools.product(*parts))
    index = {s: i for i, s in enumerate(states)}

    matrix = np.eye(len(states), dtype=complex)

    def marker_state(q: str, sym: str) -> tuple:
        return (q, sym, HASH) if q in k_l else (HASH, sym, q)

    # A marker cell whose (state, symbol) pair has outgoing transitions gets a
    # fully rule-defined column; every other cell state keeps its identity
    # column.  A transition that lands on a dead (state, symbol) pair then
    # collides with that pair's identity column and fails the unitarity gate.
    for q in machine.states:
        for sym in machine.alphabet:
            if machine.branches(q, sym):
                matrix[:, index[marker_state(q, sym)]] = 0
    for (q, read, write, q2, move), amp in machine.delta.items():
        src = index[marker_state(q, read)]
        dst = index[(q2, write, HASH) if move == qtm.LEFT else (HASH, write, q2)]
        matrix[dst, src] = amp

    if not is_unitary(matrix, tol):
        dev = matrix.conj().T @ matrix - np.eye(len(states))
        bad = np.unravel_index(np.argmax(np.abs(dev)), dev.shape)
        raise CompileError(
            "compiled matrix is not unitary (worst column pair "
            f"{states[bad[0]]} / {states[bad[1]]}, defect {abs(dev[bad]):.3e}); "
            "the source machine is not well-formed"
        )
    spec = PqcaSpec(parts=parts, offsets=(1, 0, -1), matrix=matrix, quiescent=quiescent)
    return CompiledPqca(
        spec=spec,
        k_l=k_l,
        k_r=k_r,
        k_a=k_a,
        accept_symbols=tuple(accept_symbols),
        source=machine,
    )


def embed(config: QtmConfig, compiled: CompiledPqca) -> Config:
    """Map a machine configuration onto the automaton lattice.

    Cell n carries (#, tape symbol at n, #); the head state rides one cell
    away from the head in its travel direction (right-entered states at
    head-1, left-entered at head+1) so that the next routing step delivers
    it onto the head cell exactly when the matrix fires.
    """
    state, head, tape = config
    machine = compiled.source
    symbols = dict(tape)
    marker_cell = head - 1 if state in compiled.k_r else head + 1
    cells: dict[int, tuple] = {}
    for cell, sym in symbols.items():
        cells[cell] = (HASH, sym, HASH)
    mid = symbols.get(marker_cell, machine.blank)
    if state in compiled.k_r:
        cells[marker_cell] = (HASH, mid, state)
    else:
        cells[marker_cell] = (state, mid, HASH)
    return tuple(
        sorted((c, s) for c, s in cells.items() if s != compiled.spec.quiescent)
    )


def acceptance_probability_pqca(
    compiled: CompiledPqca,
    initial: Config,
    steps: int,
    tol: Tolerance = COMPILE_TOL,
) -> float:
    """Run the automaton and sum mass where cell k_a holds an accepting symbol."""
    state = Superposition.basis(config_label(initial))
    for _ in range(steps):
        state = pqca.pqca_step(state, compiled.spec, tol)
    accept = set(compiled.accept_symbols)
    total = 0.0
    for label, amp in state.items():
        cfg = dict(config_from_label(label))
        sym = cfg.get(compiled.k_a, compiled.spec.quiescent)[1]
        if sym in accept:
            total += abs(amp) ** 2
    return total


@dataclass(frozen=True)
class EquivalenceReport:
    p_qtm: float
    p_pqca: float
    delta: float
    steps: int

    def to_json(self) -> dict:
        return {"p_qtm": self.p_qtm, "p_pqca": self.p_pqca, "delta": self.delta}


def equivalence_check(
    machine: QtmSpec,
    input_symbols: Sequence[str],
    steps: int,
    k: int,
    accept_symbols: Sequence[str],
    tol: Tolerance = COMPILE_TOL,
) -> EquivalenceReport:
    """Acceptance probability of the machine vs. its compiled automaton.

    Both engines run exactly `steps` steps (the construction has no
    slowdown factor), so the probabilities must agree up to rounding.
    """
    p_qtm = qtm.acceptance_probability(machine, input_symbols, steps, k, accept_symbols, tol)
    compiled = compile_qtm(machine, k_a=k, accept_symbols=accept_symbols, tol=tol)
    start = embed(qtm.initial_config(machine, input_symbols), compiled)
    p_pqca = acceptance_probability_pqca(compiled, start, steps, tol)
    return EquivalenceReport(p_qtm, p_pqca, abs(p_qtm - p_pqca), steps)
