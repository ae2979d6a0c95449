"""Partitioned quantum cellular automata.

Each cell state is a tuple of sub-cell states.  A step is a classical
sub-cell routing (part k of the new cell comes from part k of the neighbor
at offset k) followed by one fixed matrix applied independently at every
cell.  Unitarity of the whole evolution reduces to unitarity of that
per-cell matrix, which is what `check_unitary` tests.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import gates
from .errors import EnumerationLimitError, SpecFormatError
from .qca import (
    Config,
    QcaSpec,
    config_from_label,
    config_label,
    make_config,
)
from .superposition import DEFAULT_TOL, Superposition, Tolerance, accumulate

CompositeState = tuple


@dataclass(frozen=True)
class PqcaSpec:
    """Sub-cell state sets, routing offsets, per-cell matrix, quiescent state.

    `matrix[t, s]` is the amplitude with which the routed cell state with
    index s turns into the state with index t; state indexing follows
    itertools.product over the part state sets.  The matrix must fix the
    quiescent state so that finite configurations stay finite.
    """

    parts: tuple[tuple, ...]
    offsets: tuple[int, ...]
    matrix: np.ndarray
    quiescent: CompositeState

    def __post_init__(self) -> None:
        parts = tuple(tuple(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "offsets", tuple(int(n) for n in self.offsets))
        object.__setattr__(self, "quiescent", tuple(self.quiescent))
        if len(parts) != len(self.offsets):
            raise ValueError("need exactly one offset per sub-cell part")
        states = self.states()
        dim = len(states)
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (dim, dim):
            raise ValueError(f"matrix shape {m.shape} does not match {dim} states")
        object.__setattr__(self, "matrix", m)
        if self.quiescent not in self.index():
            raise ValueError("quiescent state must be a valid composite state")
        lam = self.index()[self.quiescent]
        col = np.zeros(dim)
        col[lam] = 1.0
        if not (np.allclose(m[:, lam], col) and np.allclose(m[lam, :], col)):
            raise ValueError("matrix must fix the quiescent state exactly")

    def states(self) -> list[CompositeState]:
        return list(itertools.product(*self.parts))

    def index(self) -> dict[CompositeState, int]:
        return {s: i for i, s in enumerate(self.states())}


def permute_step(config: Config, spec: PqcaSpec) -> Config:
    """The routing step: new cell i's part k = old cell (i + offset_k)'s part k."""
    lookup = dict(config)
    candidates = {c - n for c, _ in config for n in spec.offsets}
    out = []
    for cell in sorted(candidates):
        state = tuple(
            lookup.get(cell + n, spec.quiescent)[k]
            for k, n in enumerate(spec.offsets)
        )
        if state != spec.quiescent:
            out.append((cell, state))
    return tuple(out)


def inverse_permute_step(config: Config, spec: PqcaSpec) -> Config:
    """Undo the routing (used to verify it is a bijection)."""
    lookup = dict(config)
    candidates = {c + n for c, _ in config for n in spec.offsets}
    out = []
    for cell in sorted(candidates):
        state = tuple(
            lookup.get(cell - n, spec.quiescent)[k]
            for k, n in enumerate(spec.offsets)
        )
        if state != spec.quiescent:
            out.append((cell, state))
    return tuple(out)


def pqca_step(
    state: Superposition, spec: PqcaSpec, tol: Tolerance = DEFAULT_TOL
) -> Superposition:
    """Route sub-cells, then apply the per-cell matrix at every cell."""
    index = spec.index()
    states = spec.states()
    columns: dict[int, list[tuple[CompositeState, complex]]] = {}
    for s in range(len(states)):
        nz = [
            (states[t], complex(spec.matrix[t, s]))
            for t in range(len(states))
            if spec.matrix[t, s] != 0
        ]
        columns[s] = nz
    parts: list[tuple[str, complex]] = []
    for label, amp in state.items():
        routed = permute_step(config_from_label(label), spec)
        cells = [c for c, _ in routed]
        options = [columns[index[s]] for _, s in routed]
        for choice in itertools.product(*options):
            branch_amp = amp
            support = []
            for cell, (target, a) in zip(cells, choice):
                branch_amp *= a
                if target != spec.quiescent:
                    support.append((cell, target))
            parts.append((config_label(tuple(support)), branch_amp))
    return accumulate(parts, tol)


def run_steps(
    initial: Config, spec: PqcaSpec, steps: int, tol: Tolerance = DEFAULT_TOL
) -> list[Superposition]:
    trace = [Superposition.basis(config_label(initial))]
    for _ in range(steps):
        trace.append(pqca_step(trace[-1], spec, tol))
    return trace


def check_unitary(spec: PqcaSpec, tol: Tolerance = DEFAULT_TOL) -> bool:
    """The routing is always a bijection, so unitarity reduces to the matrix."""
    return gates.is_unitary(spec.matrix, tol)


def as_qca(spec: PqcaSpec, guard: int = 1 << 22) -> QcaSpec:
    """Flatten routing plus per-cell matrix into a plain QCA rule table.

    The flattened rule reads the k-th part of the neighbor at offset k, so a
    single evolution step of the result matches one pqca_step exactly.
    """
    states = spec.states()
    index = spec.index()
    r = len(spec.offsets)
    if len(states) ** r > guard:
        raise EnumerationLimitError("flattened rule table exceeds the guard")
    delta: dict[tuple[tuple, CompositeState], complex] = {}
    for nbhd in itertools.product(states, repeat=r):
        routed = tuple(nbhd[k][k] for k in range(r))
        col = index[routed]
        for t, target in enumerate(states):
            amp = spec.matrix[t, col]
            if amp != 0:
                delta[(nbhd, target)] = complex(amp)
    return QcaSpec(
        states=tuple(states),
        quiescent=spec.quiescent,
        neighborhood=spec.offsets,
        delta=delta,
    )


# -- the 9-state pair-splitting example ------------------------------------------


def epr_spec() -> PqcaSpec:
    """The 9-state automaton whose evolution keeps two oppositely moving
    particle pairs in an exact two-term superposition.

    Left and right sub-cells range over {0, +, -}, the middle sub-cell is
    always 0.  The per-cell matrix is the identity except on the pair
    {(-,0,+), (+,0,-)}, where it is a 2x2 block with -1/sqrt(2) on the
    (-,0,+) diagonal and +1/sqrt(2) elsewhere.
    """
    side = ("0", "+", "-")
    parts = (side, ("0",), side)
    offsets = (1, 0, -1)
    lam = ("0", "0", "0")
    states = list(itertools.product(*parts))
    index = {s: i for i, s in enumerate(states)}
    m = np.eye(len(states), dtype=complex)
    minus_plus = index[("-", "0", "+")]
    plus_minus = index[("+", "0", "-")]
    r = 1.0 / math.sqrt(2.0)
    m[minus_plus, minus_plus] = -r
    m[minus_plus, plus_minus] = r
    m[plus_minus, minus_plus] = r
    m[plus_minus, plus_minus] = r
    return PqcaSpec(parts=parts, offsets=offsets, matrix=m, quiescent=lam)


def epr_initial() -> Config:
    """The worked example's starting configuration: a split pair at cells -1, +1."""
    return ((-1, ("0", "0", "-")), (1, ("+", "0", "0")))


# -- spec file format --------------------------------------------------------------


def spec_to_json(spec: PqcaSpec) -> dict:
    return {
        "parts": [list(p) for p in spec.parts],
        "offsets": list(spec.offsets),
        "quiescent": list(spec.quiescent),
        "U": [
            [{"re": v.real, "im": v.imag} for v in row]
            for row in spec.matrix
        ],
    }


def spec_from_json(obj: dict) -> PqcaSpec:
    try:
        rows = [[complex(e["re"], e.get("im", 0.0)) for e in row] for row in obj["U"]]
        return PqcaSpec(
            parts=tuple(tuple(p) for p in obj["parts"]),
            offsets=tuple(obj["offsets"]),
            matrix=np.array(rows, dtype=complex),
            quiescent=tuple(obj["quiescent"]),
        )
    except (KeyError, TypeError) as exc:
        raise SpecFormatError(f"malformed PQCA spec: {exc}") from exc
