"""Quantum Turing machines.

A machine is a tape alphabet with a blank, a state set with initial and
final states, and a sparse complex transition table over (state, read,
write, next state, move).  Configurations are (machine state, head cell,
finite tape content); superpositions of configurations evolve by branching
over the nonzero transitions.

Halting convention: configurations in the final state are fixed points of
the step map.  Acceptance is defined at an exact step count: the squared
amplitude mass on configurations whose distinguished tape cell holds an
accepting symbol.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import EnumerationLimitError, SpecFormatError
from .superposition import DEFAULT_TOL, Superposition, Tolerance, accumulate

LEFT, STAY, RIGHT = "L", "S", "R"
_MOVE_OFFSET = {LEFT: -1, STAY: 0, RIGHT: 1}

TransitionKey = tuple[str, str, str, str, str]  # (q, read, write, q2, move)


@dataclass(frozen=True)
class QtmSpec:
    """The machine quintuple with a sparse amplitude table."""

    alphabet: tuple[str, ...]
    blank: str
    states: tuple[str, ...]
    q0: str
    qf: str
    delta: Mapping[TransitionKey, complex]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "states", tuple(self.states))
        if self.blank not in self.alphabet:
            raise ValueError("blank symbol must be in the alphabet")
        if self.q0 not in self.states or self.qf not in self.states:
            raise ValueError("initial and final states must be in the state set")
        table: dict[TransitionKey, complex] = {}
        for key, amp in self.delta.items():
            q, read, write, q2, move = key
            amp = complex(amp)
            if amp == 0:
                continue
            if q not in self.states or q2 not in self.states:
                raise ValueError(f"transition {key} uses an unknown state")
            if read not in self.alphabet or write not in self.alphabet:
                raise ValueError(f"transition {key} uses an unknown symbol")
            if move not in _MOVE_OFFSET:
                raise ValueError(f"transition {key} uses an unknown move")
            if abs(amp) > 1 + 1e-9:
                raise ValueError(f"transition {key} amplitude exceeds magnitude 1")
            table[(q, read, write, q2, move)] = amp
        object.__setattr__(self, "delta", table)
        by_source: dict[tuple[str, str], list[tuple[str, str, str, complex]]] = {}
        for (q, read, write, q2, move), amp in table.items():
            by_source.setdefault((q, read), []).append((write, q2, move, amp))
        for branches in by_source.values():
            branches.sort()
        object.__setattr__(self, "_by_source", by_source)

    def branches(self, state: str, read: str) -> list[tuple[str, str, str, complex]]:
        """(write, next state, move, amplitude) for the nonzero transitions."""
        return self._by_source.get((state, read), [])  # type: ignore[attr-defined]


# -- configurations ----------------------------------------------------------------

Tape = tuple[tuple[int, str], ...]
QtmConfig = tuple[str, int, Tape]


def make_qtm_config(state: str, head: int, tape: Mapping[int, str], spec: QtmSpec) -> QtmConfig:
    clean = tuple(sorted((int(c), s) for c, s in tape.items() if s != spec.blank))
    return (state, int(head), clean)


def initial_config(spec: QtmSpec, input_symbols: Sequence[str]) -> QtmConfig:
    """Input written on cells 0.., head on cell 0, machine in the initial state."""
    tape = {i: s for i, s in enumerate(input_symbols) if s != spec.blank}
    for s in input_symbols:
        if s not in spec.alphabet:
            raise ValueError(f"input symbol {s!r} not in the alphabet")
    return make_qtm_config(spec.q0, 0, tape, spec)


def config_label(config: QtmConfig) -> str:
    state, head, tape = config
    return json.dumps([state, head, [list(t) for t in tape]], separators=(",", ":"))


def config_from_label(label: str) -> QtmConfig:
    state, head, tape = json.loads(label)
    return (state, int(head), tuple((int(c), s) for c, s in tape))


def tape_symbol(config: QtmConfig, cell: int, spec: QtmSpec) -> str:
    for c, s in config[2]:
        if c == cell:
            return s
    return spec.blank


def step_config(config: QtmConfig, spec: QtmSpec) -> list[tuple[QtmConfig, complex]]:
    """One-step branches of a basis configuration (final state is a fixed point)."""
    state, head, tape = config
    if state == spec.qf:
        return [(config, 1.0 + 0j)]
    read = tape_symbol(config, head, spec)
    out = []
    for write, q2, move, amp in spec.branches(state, read):
        new_tape = dict(tape)
        if write == spec.blank:
            new_tape.pop(head, None)
        else:
            new_tape[head] = write
        cfg = (q2, head + _MOVE_OFFSET[move], tuple(sorted(new_tape.items())))
        out.append((cfg, amp))
    return out


def qtm_step(state: Superposition, spec: QtmSpec, tol: Tolerance = DEFAULT_TOL) -> Superposition:
    """One global step over a superposition of configurations.

    Configurations whose (state, read) pair has no transitions simply vanish;
    the windowed audit reports such machines through norm drift.
    """
    parts: list[tuple[str, complex]] = []
    for label, amp in state.items():
        for cfg, a in step_config(config_from_label(label), spec):
            parts.append((config_label(cfg), amp * a))
    return accumulate(parts, tol)


def run(spec: QtmSpec, input_symbols: Sequence[str], steps: int,
        tol: Tolerance = DEFAULT_TOL) -> list[Superposition]:
    """Trace of the machine from the standard initial configuration."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    trace = [Superposition.basis(config_label(initial_config(spec, input_symbols)))]
    for _ in range(steps):
        trace.append(qtm_step(trace[-1], spec, tol))
    return trace


def acceptance_probability(
    spec: QtmSpec,
    input_symbols: Sequence[str],
    steps: int,
    k: int,
    accept_symbols: Sequence[str],
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """Mass on configurations whose cell k holds an accepting symbol after `steps`."""
    accept = set(accept_symbols)
    final = run(spec, input_symbols, steps, tol)[-1]
    return math.fsum(
        abs(amp) ** 2
        for label, amp in final.items()
        if tape_symbol(config_from_label(label), k, spec) in accept
    )


# -- structural checks ----------------------------------------------------------------


def is_unidirectional(spec: QtmSpec) -> tuple[bool, tuple | None]:
    """Whether every state is entered from a single move direction."""
    direction: dict[str, str] = {}
    for (q, read, write, q2, move), _ in spec.delta.items():
        if q2 in direction and direction[q2] != move:
            return False, (q2, direction[q2], move)
        direction[q2] = move
    return True, None


def entry_directions(spec: QtmSpec) -> dict[str, str]:
    """Move direction through which each state is entered (unidirectional specs)."""
    ok, witness = is_unidirectional(spec)
    if not ok:
        raise ValueError(f"machine is not unidirectional: state {witness[0]!r} "
                         f"is entered via both {witness[1]} and {witness[2]}")
    return {q2: move for (_, _, _, q2, move) in spec.delta}


@dataclass(frozen=True)
class AuditReport:
    ok: bool
    column_defect: float
    witness: object
    max_drift: float
    domain_size: int


def check_well_formed_window(
    spec: QtmSpec,
    tape_window: int,
    steps: int = 0,
    tol: Tolerance = DEFAULT_TOL,
    guard: int = 1 << 22,
) -> AuditReport:
    """Bounded audit of one-step orthonormality plus multi-step norm drift.

    The certificate domain is every configuration confined to tape cells
    [0, tape_window) whose single-step branches all keep the head inside the
    window; columns of the step map over that domain must be orthonormal.
    This is a bounded certificate, not a full well-formedness decision.
    """
    w = tape_window
    total = (len(spec.alphabet) ** w) * w * len(spec.states)
    if total > guard:
        raise EnumerationLimitError(f"{total} window configurations exceed the guard")
    domain: list[QtmConfig] = []
    for content in itertools.product(spec.alphabet, repeat=w):
        tape = tuple((i, s) for i, s in enumerate(content) if s != spec.blank)
        for head in range(w):
            for state in spec.states:
                cfg = (state, head, tape)
                branches = step_config(cfg, spec)
                if all(0 <= c[1] < w for c, _ in branches):
                    domain.append(cfg)
    by_target: dict[str, list[tuple[int, complex]]] = {}
    for j, cfg in enumerate(domain):
        for succ, amp in step_config(cfg, spec):
            by_target.setdefault(config_label(succ), []).append((j, amp))
    gram: dict[tuple[int, int], complex] = {}
    for hits in by_target.values():
        for j1, a1 in hits:
            for j2, a2 in hits:
                if j1 <= j2:
                    key = (j1, j2)
                    gram[key] = gram.get(key, 0j) + a1.conjugate() * a2
    worst, witness = 0.0, None
    for j in range(len(domain)):
        dev = abs(gram.get((j, j), 0j) - 1.0)
        if dev > worst:
            worst, witness = dev, (domain[j], domain[j])
    for (j1, j2), v in gram.items():
        if j1 != j2 and abs(v) > worst:
            worst, witness = abs(v), (domain[j1], domain[j2])
    max_drift = 0.0
    for cfg in domain:
        state = Superposition.basis(config_label(cfg))
        for _ in range(steps):
            state = qtm_step(state, spec, tol)
        max_drift = max(max_drift, abs(state.norm_sq() - 1.0))
    ok = worst <= tol.eps_unitary and max_drift <= tol.eps_norm
    return AuditReport(ok, worst, witness, max_drift, len(domain))


# -- spec file format -------------------------------------------------------------------


def spec_to_json(spec: QtmSpec) -> dict:
    entries = [
        {"q": q, "read": read, "write": write, "q2": q2, "move": move,
         "re": amp.real, "im": amp.imag}
        for (q, read, write, q2, move), amp in sorted(spec.delta.items())
    ]
    return {
        "alphabet": list(spec.alphabet),
        "blank": spec.blank,
        "states": list(spec.states),
        "q0": spec.q0,
        "qf": spec.qf,
        "delta": entries,
    }


def spec_from_json(obj: dict) -> QtmSpec:
    try:
        delta = {
            (e["q"], e["read"], e["write"], e["q2"], e["move"]): complex(
                e["re"], e.get("im", 0.0)
            )
            for e in obj["delta"]
        }
        return QtmSpec(
            alphabet=tuple(obj["alphabet"]),
            blank=obj["blank"],
            states=tuple(obj["states"]),
            q0=obj["q0"],
            qf=obj["qf"],
            delta=delta,
        )
    except (KeyError, TypeError) as exc:
        raise SpecFormatError(f"malformed QTM spec: {exc}") from exc
