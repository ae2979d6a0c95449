"""One-dimensional quantum cellular automata with quiescent backgrounds.

A spec is a state set with a distinguished quiescent state, a neighborhood
of integer offsets, and a complex amplitude table mapping (neighborhood
states, target state) to an amplitude.  Configurations assign a state to
every cell of the integer line but differ from quiescent at finitely many
cells; superpositions of configurations evolve by summing transition
amplitudes, each of which is a product of per-cell table entries over the
finite window where anything can change.

Validity checking implements the local probability and quiescent stability
conditions exactly, plus bounded-window orthonormality certificates for
well-formedness (injectivity) and unitarity.  The windowed checks are
necessary conditions parameterized by window size, not full decisions: the
published decision procedures are cited in the literature without enough
detail to reproduce, so this module reports "certified on windows up to n"
and nothing stronger.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import EnumerationLimitError, SpecFormatError
from .superposition import DEFAULT_TOL, Superposition, Tolerance, accumulate

State = object
Config = tuple[tuple[int, State], ...]

AMP_SLACK = 1e-9  # fp headroom on the |amplitude| <= 1 table invariant


@dataclass(frozen=True)
class QcaSpec:
    """The quadruple: states, quiescent state, neighborhood, amplitude table.

    `delta` maps ((q_1, ..., q_r), target) to a complex amplitude; absent
    entries are zero.  Construction enforces quiescent stability and the
    per-entry magnitude bound unless `unchecked=True`, which exists so the
    validity checkers can be pointed at deliberately broken specs.
    """

    states: tuple
    quiescent: State
    neighborhood: tuple[int, ...]
    delta: Mapping[tuple[tuple, State], complex]
    unchecked: bool = False

    def __post_init__(self) -> None:
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "neighborhood", tuple(int(n) for n in self.neighborhood))
        if self.quiescent not in states:
            raise ValueError("quiescent state must belong to the state set")
        if not self.neighborhood:
            raise ValueError("neighborhood must be nonempty")
        table = {}
        r = len(self.neighborhood)
        for (nbhd, target), amp in self.delta.items():
            amp = complex(amp)
            if amp == 0:
                continue
            if len(nbhd) != r:
                raise ValueError(f"neighborhood tuple {nbhd!r} has wrong length")
            table[(tuple(nbhd), target)] = amp
        object.__setattr__(self, "delta", table)
        by_nbhd: dict[tuple, list[tuple[State, complex]]] = {}
        for (nbhd, target), amp in table.items():
            by_nbhd.setdefault(nbhd, []).append((target, amp))
        for options in by_nbhd.values():
            options.sort(key=lambda kv: _state_key(kv[0]))
        object.__setattr__(self, "_by_nbhd", by_nbhd)
        if not self.unchecked:
            self._validate()

    def _validate(self) -> None:
        for (nbhd, target), amp in self.delta.items():
            if abs(amp) > 1 + AMP_SLACK:
                raise ValueError(
                    f"amplitude {amp} for {nbhd!r}->{target!r} exceeds magnitude 1"
                )
        lam = (self.quiescent,) * len(self.neighborhood)
        for q in self.states:
            expected = 1.0 if q == self.quiescent else 0.0
            if self.amp(lam, q) != expected:
                raise ValueError(
                    "quiescent stability violated: an all-quiescent neighborhood "
                    f"maps to {q!r} with amplitude {self.amp(lam, q)}"
                )

    @property
    def radius(self) -> int:
        return max(abs(n) for n in self.neighborhood)

    def amp(self, nbhd: tuple, target: State) -> complex:
        return self.delta.get((tuple(nbhd), target), 0j)

    def targets_for(self, nbhd: tuple) -> list[tuple[State, complex]]:
        """Nonzero-amplitude target states for a neighborhood tuple."""
        return self._by_nbhd.get(tuple(nbhd), [])  # type: ignore[attr-defined]


def _state_key(s: State) -> str:
    return json.dumps(s, separators=(",", ":"), default=list)


# -- configurations ------------------------------------------------------------


def make_config(support: Mapping[int, State], spec: QcaSpec) -> Config:
    """Canonical form of a finite configuration (quiescent cells dropped)."""
    items = []
    for cell, state in support.items():
        if state == spec.quiescent:
            continue
        if state not in spec.states:
            raise ValueError(f"state {state!r} not in the spec's state set")
        items.append((int(cell), state))
    return tuple(sorted(items))


def config_state(config: Config, cell: int, spec: QcaSpec) -> State:
    for c, s in config:
        if c == cell:
            return s
    return spec.quiescent


def config_label(config: Config) -> str:
    return json.dumps([[c, s] for c, s in config], separators=(",", ":"), default=list)


def config_from_label(label: str) -> Config:
    return tuple((int(c), _untuple(s)) for c, s in json.loads(label))


def _untuple(v):
    return tuple(_untuple(x) for x in v) if isinstance(v, list) else v


def shift_config(config: Config, offset: int) -> Config:
    return tuple((c + offset, s) for c, s in config)


def _active_cells(config: Config, spec: QcaSpec) -> list[int]:
    """Cells whose neighborhood meets the support (everything else is inert)."""
    cells = set()
    for c, _ in config:
        for n in spec.neighborhood:
            cells.add(c - n)
    return sorted(cells)


def _neighborhood_tuple(config: Config, cell: int, spec: QcaSpec) -> tuple:
    lookup = dict(config)
    return tuple(lookup.get(cell + n, spec.quiescent) for n in spec.neighborhood)


# -- evolution ------------------------------------------------------------------


def transition_amplitude(c1: Config, c2: Config, spec: QcaSpec) -> complex:
    """Product of per-cell table entries over the active window.

    The window consists of cells whose neighborhood meets the support of c1
    plus the support of c2; all other factors equal 1 by quiescent
    stability, so the formally infinite product is evaluated exactly.
    """
    lookup1 = dict(c1)
    window = set(_active_cells(c1, spec))
    window.update(c for c, _ in c2)
    lookup2 = dict(c2)
    amp = 1.0 + 0j
    for cell in window:
        nbhd = tuple(lookup1.get(cell + n, spec.quiescent) for n in spec.neighborhood)
        amp *= spec.amp(nbhd, lookup2.get(cell, spec.quiescent))
        if amp == 0:
            return 0j
    return amp


def successors(
    c1: Config, spec: QcaSpec, guard: int = 1 << 24
) -> list[tuple[Config, complex]]:
    """All configurations reachable from c1 with nonzero amplitude.

    Requires quiescent stability (otherwise the successor set is infinite):
    only cells in the active window can change, and each branches over the
    nonzero targets of its neighborhood tuple.
    """
    cells = _active_cells(c1, spec)
    lookup = dict(c1)
    per_cell: list[list[tuple[State, complex]]] = []
    total = 1
    for cell in cells:
        nbhd = tuple(lookup.get(cell + n, spec.quiescent) for n in spec.neighborhood)
        options = spec.targets_for(nbhd)
        if not options:
            return []
        per_cell.append(options)
        total *= len(options)
        if total > guard:
            raise EnumerationLimitError(
                f"successor expansion exceeds {guard} branches"
            )
    results = []
    for choice in itertools.product(*per_cell):
        amp = 1.0 + 0j
        support = []
        for cell, (state, a) in zip(cells, choice):
            amp *= a
            if state != spec.quiescent:
                support.append((cell, state))
        results.append((tuple(support), amp))
    return results


def evolve(
    state: Superposition,
    spec: QcaSpec,
    tol: Tolerance = DEFAULT_TOL,
    guard: int = 1 << 24,
) -> Superposition:
    """One global step: out[c] = sum over input terms c' of amp * alpha(c', c).

    The caller is responsible for having verified the spec (local
    probability + quiescent stability); under those conditions the norm is
    preserved up to floating error.  Terms are pruned only after the full
    accumulation so cancelling branches combine first.
    """
    state.require_normalized(tol)
    parts: list[tuple[str, complex]] = []
    for label, amp in state.items():
        config = config_from_label(label)
        for succ, a in successors(config, spec, guard):
            parts.append((config_label(succ), amp * a))
    return accumulate(parts, tol)


def run_steps(
    initial: Config,
    spec: QcaSpec,
    steps: int,
    tol: Tolerance = DEFAULT_TOL,
) -> list[Superposition]:
    """Trace of `steps` evolution steps starting from a basis configuration."""
    trace = [Superposition.basis(config_label(initial))]
    for _ in range(steps):
        trace.append(evolve(trace[-1], spec, tol))
    return trace


# -- validity checks -------------------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    defect: float
    witness: object = None
    note: str = ""


def check_local_probability(
    spec: QcaSpec, tol: Tolerance = DEFAULT_TOL, guard: int = 1 << 22
) -> CheckReport:
    """For every neighborhood tuple, target amplitudes must have unit mass."""
    r = len(spec.neighborhood)
    if len(spec.states) ** r > guard:
        raise EnumerationLimitError("neighborhood tuple space exceeds the guard")
    worst = 0.0
    worst_tuple = None
    for nbhd in itertools.product(spec.states, repeat=r):
        mass = math.fsum(abs(a) ** 2 for _, a in spec.targets_for(nbhd))
        dev = abs(mass - 1.0)
        if dev > worst:
            worst, worst_tuple = dev, nbhd
    return CheckReport(worst <= tol.eps_unitary, worst, worst_tuple)


def check_quiescent_stability(spec: QcaSpec) -> CheckReport:
    """Exact check that an all-quiescent neighborhood fixes the quiescent state."""
    lam = (spec.quiescent,) * len(spec.neighborhood)
    for q in spec.states:
        expected = 1.0 if q == spec.quiescent else 0.0
        got = spec.amp(lam, q)
        if got != expected:
            return CheckReport(False, abs(got - expected), (lam, q))
    return CheckReport(True, 0.0)


def _window_operator(spec: QcaSpec, window: int, guard: int):
    """Sparse evolution matrix for sources supported in [0, window).

    Returns (matrix, source configs, target labels).  Rows range over every
    configuration reachable from some source; by quiescent stability those
    all have support inside the radius-expanded window.
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    n_src = len(spec.states) ** window
    if n_src > guard:
        raise EnumerationLimitError(
            f"{len(spec.states)}^{window} source configurations exceed the guard"
        )
    sources: list[Config] = []
    tgt_index: dict[str, int] = {}
    rows: list[int] = []
    cols: list[int] = []
    data: list[complex] = []
    for j, assignment in enumerate(itertools.product(spec.states, repeat=window)):
        src = tuple(
            (cell, s) for cell, s in enumerate(assignment) if s != spec.quiescent
        )
        sources.append(src)
        for succ, amp in successors(src, spec, guard):
            label = config_label(succ)
            i = tgt_index.setdefault(label, len(tgt_index))
            rows.append(i)
            cols.append(j)
            data.append(amp)
    shape = (max(len(tgt_index), 1), len(sources))
    matrix = sp.coo_matrix((data, (rows, cols)), shape=shape, dtype=complex).tocsr()
    return matrix, sources, list(tgt_index)


def _gram_defect(gram: sp.spmatrix, size: int) -> tuple[float, tuple[int, int] | None]:
    """Largest deviation of a sparse Gram matrix from the identity."""
    g = gram.tocoo()
    worst, witness = 0.0, None
    seen_diag = np.zeros(size, dtype=bool)
    for i, j, v in zip(g.row, g.col, g.data):
        dev = abs(v - 1.0) if i == j else abs(v)
        if i == j:
            seen_diag[i] = True
        if dev > worst:
            worst, witness = dev, (int(i), int(j))
    for i in range(size):
        if not seen_diag[i] and 1.0 > worst:
            worst, witness = 1.0, (i, i)
            break
    return worst, witness


def check_well_formed_window(
    spec: QcaSpec,
    window: int,
    tol: Tolerance = DEFAULT_TOL,
    guard: int = 1 << 22,
) -> CheckReport:
    """Column-orthonormality certificate over a bounded source window.

    Columns of the evolution operator restricted to sources supported in
    [0, window) are exact columns of the full operator, so a failure here is
    a definite violation of well-formedness; success certifies injectivity
    on this window only.
    """
    matrix, sources, _ = _window_operator(spec, window, guard)
    gram = (matrix.conj().T @ matrix).tocoo()
    worst, pair = _gram_defect(gram, len(sources))
    witness = None
    if pair is not None and worst > tol.eps_unitary:
        witness = (sources[pair[0]], sources[pair[1]])
    return CheckReport(worst <= tol.eps_unitary, worst, witness,
                       note=f"columns over sources in [0,{window})")


def check_unitary_window(
    spec: QcaSpec,
    window: int,
    tol: Tolerance = DEFAULT_TOL,
    guard: int = 1 << 22,
) -> CheckReport:
    """Column and row orthonormality over the bounded window.

    Rows range over every configuration supported in the radius-expanded
    target window; a configuration there that no in-window source reaches is
    a zero row and fails the check.  Genuinely shifting automata therefore
    fail at the window boundary even when the infinite operator is unitary:
    this is a bounded certificate, strongest for trivial (per-cell) specs
    whose target window equals the source window.
    """
    matrix, sources, targets = _window_operator(spec, window, guard)
    col_gram = (matrix.conj().T @ matrix).tocoo()
    col_worst, col_pair = _gram_defect(col_gram, len(sources))
    if col_worst > tol.eps_unitary:
        witness = (sources[col_pair[0]], sources[col_pair[1]]) if col_pair else None
        return CheckReport(False, col_worst, witness, note="column check failed")
    lo = -max(spec.neighborhood)
    hi = window - min(spec.neighborhood)
    expected = len(spec.states) ** (hi - lo)
    if len(targets) < expected:
        witness = _find_unreached(spec, lo, hi, set(targets))
        return CheckReport(
            False, 1.0, witness,
            note=f"{expected - len(targets)} expanded-window configurations are never reached",
        )
    gram = (matrix @ matrix.conj().T).tocoo()
    worst, pair = _gram_defect(gram, len(targets))
    witness = None
    if pair is not None and worst > tol.eps_unitary:
        witness = (config_from_label(targets[pair[0]]), config_from_label(targets[pair[1]]))
    return CheckReport(worst <= tol.eps_unitary, worst, witness,
                       note=f"rows over targets in [{lo},{hi})")


def _find_unreached(spec: QcaSpec, lo: int, hi: int, reached: set[str], cap: int = 1 << 18):
    for count, assignment in enumerate(itertools.product(spec.states, repeat=hi - lo)):
        if count >= cap:
            return None
        cfg = tuple(
            (lo + i, s) for i, s in enumerate(assignment) if s != spec.quiescent
        )
        if config_label(cfg) not in reached:
            return cfg
    return None


def check_trivial_unitary(spec: QcaSpec, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Unitarity criterion for trivial (self-neighborhood) specs.

    Checks sum over targets q of delta(q1, q) * conj(delta(q2, q)) against
    the identity.  The conjugate is required for complex tables (without it
    even diag(1, i) would fail), so it is applied here.
    """
    if spec.neighborhood != (0,):
        raise ValueError("criterion applies to trivial specs only (neighborhood {0})")
    n = len(spec.states)
    d = np.zeros((n, n), dtype=complex)
    for i, q1 in enumerate(spec.states):
        for j, q in enumerate(spec.states):
            d[i, j] = spec.amp((q1,), q)
    dev = d @ d.conj().T - np.eye(n)
    return float(np.max(np.abs(dev))) <= tol.eps_unitary


def trivial_spec_from_unitary(matrix: np.ndarray, unchecked: bool = False) -> QcaSpec:
    """Quiescent-extended trivial spec for an m x m per-cell operator.

    States are 0..m with 0 as the fresh quiescent state; state i >= 1 maps
    to state j with amplitude matrix[j-1, i-1].
    """
    m = np.asarray(matrix, dtype=complex)
    size = m.shape[0]
    delta: dict[tuple[tuple, State], complex] = {((0,), 0): 1.0 + 0j}
    for src in range(size):
        for dst in range(size):
            if m[dst, src] != 0:
                delta[((src + 1,), dst + 1)] = complex(m[dst, src])
    return QcaSpec(
        states=tuple(range(size + 1)),
        quiescent=0,
        neighborhood=(0,),
        delta=delta,
        unchecked=unchecked,
    )


# -- spec file format -------------------------------------------------------------


def spec_to_json(spec: QcaSpec) -> dict:
    entries = []
    for (nbhd, target), amp in sorted(
        spec.delta.items(), key=lambda kv: (_state_key(kv[0][0]), _state_key(kv[0][1]))
    ):
        entries.append(
            {
                "nbhd": [list(s) if isinstance(s, tuple) else s for s in nbhd],
                "target": list(target) if isinstance(target, tuple) else target,
                "re": amp.real,
                "im": amp.imag,
            }
        )
    return {
        "states": [list(s) if isinstance(s, tuple) else s for s in spec.states],
        "quiescent": list(spec.quiescent) if isinstance(spec.quiescent, tuple) else spec.quiescent,
        "neighborhood": list(spec.neighborhood),
        "delta": entries,
    }


def spec_from_json(obj: dict, unchecked: bool = False) -> QcaSpec:
    try:
        delta = {
            (
                tuple(_untuple(s) for s in entry["nbhd"]),
                _untuple(entry["target"]),
            ): complex(entry["re"], entry.get("im", 0.0))
            for entry in obj["delta"]
        }
        return QcaSpec(
            states=tuple(_untuple(s) for s in obj["states"]),
            quiescent=_untuple(obj["quiescent"]),
            neighborhood=tuple(obj["neighborhood"]),
            delta=delta,
            unchecked=unchecked,
        )
    except (KeyError, TypeError) as exc:
        raise SpecFormatError(f"malformed QCA spec: {exc}") from exc
