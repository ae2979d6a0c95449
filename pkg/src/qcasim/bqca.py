"""Block-partitioned QCA: two-qubit gates on alternating pairs of a chain.

On even steps the gate hits pairs (0,1), (2,3), ...; on odd steps pairs
(1,2), (3,4), ...; an unpaired edge qubit idles.  The chain is open (no
wraparound).  `run_schedule` evolves the sparse register; `circuit_oracle`
recomputes the same dynamics through a dense state vector and explicit gate
embeddings as an independent reference path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .gates import Gate, QubitRegister, apply, is_unitary
from .superposition import DEFAULT_TOL, Tolerance

ChainState = QubitRegister


@dataclass(frozen=True)
class BqcaSpec:
    """Chain length plus the two-qubit gate applied at each time step."""

    n: int
    schedule: tuple[Gate, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("chain needs at least one qubit")
        object.__setattr__(self, "schedule", tuple(self.schedule))
        for g in self.schedule:
            if g.arity != 2:
                raise ValueError("scheduled gates must act on two qubits")
            if not is_unitary(g):
                raise ValueError("scheduled gates must be unitary")


def step_pairs(n: int, t: int) -> list[tuple[int, int]]:
    """The disjoint qubit pairs updated at step t."""
    start = 0 if t % 2 == 0 else 1
    return [(i, i + 1) for i in range(start, n - 1, 2)]


def bqca_step(state: ChainState, gate: Gate, t: int, tol: Tolerance = DEFAULT_TOL) -> ChainState:
    """Apply one gate to every pair of the step-t pairing; edges idle."""
    if gate.arity != 2:
        raise ValueError("block rule must be a two-qubit gate")
    if t < 0:
        raise ValueError("step index must be nonnegative")
    for a, b in step_pairs(state.n, t):
        state = apply(state, gate, [a, b], tol)
    return state


def qgca_step(
    state: ChainState,
    gates_by_slot: Sequence[Gate],
    t: int,
    tol: Tolerance = DEFAULT_TOL,
) -> ChainState:
    """Position-dependent variant: one fixed gate per pair slot."""
    pairs = step_pairs(state.n, t)
    if len(gates_by_slot) != len(pairs):
        raise ValueError(
            f"step {t} has {len(pairs)} pair slots but {len(gates_by_slot)} gates were given"
        )
    for g in gates_by_slot:
        if g.arity != 2:
            raise ValueError("slot gates must act on two qubits")
        if not is_unitary(g):
            raise ValueError("slot gates must be unitary")
    for (a, b), g in zip(pairs, gates_by_slot):
        state = apply(state, g, [a, b], tol)
    return state


def run_schedule(
    state: ChainState, spec: BqcaSpec, tol: Tolerance = DEFAULT_TOL
) -> tuple[ChainState, list[ChainState]]:
    """Apply schedule[t] at step t; returns the final state and the full trace."""
    if state.n != spec.n:
        raise ValueError("state size does not match the spec")
    trace = [state]
    for t, gate in enumerate(spec.schedule):
        state = bqca_step(state, gate, t, tol)
        trace.append(state)
    return state, trace


def circuit_oracle(
    state: ChainState, spec: BqcaSpec, tol: Tolerance = DEFAULT_TOL
) -> ChainState:
    """Same dynamics on a dense 2**n vector; reference for equivalence tests."""
    if state.n != spec.n:
        raise ValueError("state size does not match the spec")
    if spec.n > 12:
        raise ValueError("dense oracle is limited to 12 qubits")
    vec = state.to_dense()
    for t, gate in enumerate(spec.schedule):
        for a, b in step_pairs(spec.n, t):
            vec = _kernels.apply_gate_statevector(vec, gate.matrix, (a, b), spec.n)
    return QubitRegister.from_dense(vec, spec.n, tol)
