"""Classical cellular automata.

Covers elementary (radius-1 binary) rules with their 8-bit numbering,
general one- and two-dimensional automata with explicit rule tables, finite
(sparse) and periodic (ring/torus) configurations, and a brute-force
bijectivity check on rings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import EnumerationLimitError, SpecFormatError

Coord = int | tuple[int, ...]

# Paper demo metadata only: class labels for four showcase rules.
WOLFRAM_DEMO_CLASSES = {254: 1, 170: 2, 30: 3, 110: 4}


@dataclass(frozen=True)
class EcaRule:
    """An elementary rule, numbered 0-255.

    Bit i of the number is the output for the 3-cell pattern whose value is
    i = left*4 + center*2 + right (pattern 111 is the most significant bit).
    """

    number: int

    def __post_init__(self) -> None:
        if not 0 <= self.number <= 255:
            raise ValueError(f"rule number {self.number} outside [0, 255]")

    def output(self, left: int, center: int, right: int) -> int:
        return (self.number >> ((left << 2) | (center << 1) | right)) & 1

    def table(self) -> np.ndarray:
        """uint8[8] lookup indexed by the 3-bit pattern value."""
        return np.array([(self.number >> p) & 1 for p in range(8)], dtype=np.uint8)

    @property
    def has_quiescent_zero(self) -> bool:
        """Whether the all-zero background is stable (required on the line)."""
        return self.output(0, 0, 0) == 0

    @classmethod
    def from_table(cls, outputs: Mapping[tuple[int, int, int], int]) -> "EcaRule":
        number = 0
        for (l, c, r), out in outputs.items():
            if out:
                number |= 1 << ((l << 2) | (c << 1) | r)
        return cls(number)

    def to_spec(self) -> "CaSpec":
        delta = {
            (l, c, r): self.output(l, c, r)
            for l in (0, 1) for c in (0, 1) for r in (0, 1)
        }
        quiescent = 0 if self.has_quiescent_zero else None
        return CaSpec(d=1, states=(0, 1), neighborhood=(-1, 0, 1), delta=delta,
                      quiescent=quiescent)


@dataclass(frozen=True)
class CaSpec:
    """General automaton: dimension, state set, offsets, total rule table.

    The delta table is keyed by tuples of neighbor states in the order the
    offsets appear in `neighborhood`.
    """

    d: int
    states: tuple[int, ...]
    neighborhood: tuple[Coord, ...]
    delta: Mapping[tuple, int]
    quiescent: int | None = None

    def __post_init__(self) -> None:
        if self.d not in (1, 2):
            raise ValueError("supported dimensions are 1 and 2")
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "neighborhood", tuple(self.neighborhood))
        if self.quiescent is not None:
            key = (self.quiescent,) * len(self.neighborhood)
            if self.delta.get(key) != self.quiescent:
                raise ValueError("declared quiescent state is not preserved by the rule")

    def rule_output(self, nbhd: tuple) -> int:
        try:
            return self.delta[nbhd]
        except KeyError:
            raise SpecFormatError(f"rule table has no entry for neighborhood {nbhd}") from None

    @property
    def radius(self) -> int:
        def mag(n: Coord) -> int:
            return abs(n) if isinstance(n, int) else max(abs(x) for x in n)
        return max(mag(n) for n in self.neighborhood)

    def check_total(self) -> bool:
        """Whether delta is defined on every tuple of states."""
        return all(
            nbhd in self.delta
            for nbhd in itertools.product(self.states, repeat=len(self.neighborhood))
        )


@dataclass(frozen=True)
class FiniteConfig:
    """Sparse configuration: quiescent everywhere except the stored support."""

    support: Mapping[Coord, int] = field(default_factory=dict)
    quiescent: int = 0

    def __post_init__(self) -> None:
        clean = {z: s for z, s in self.support.items() if s != self.quiescent}
        object.__setattr__(self, "support", clean)

    def state(self, z: Coord) -> int:
        return self.support.get(z, self.quiescent)

    def cells(self) -> list[Coord]:
        return sorted(self.support)

    def translated(self, offset: Coord) -> "FiniteConfig":
        if isinstance(offset, int):
            moved = {z + offset: s for z, s in self.support.items()}
        else:
            moved = {
                tuple(zi + oi for zi, oi in zip(z, offset)): s
                for z, s in self.support.items()
            }
        return FiniteConfig(moved, self.quiescent)


@dataclass(frozen=True)
class PeriodicConfig:
    """Dense configuration on a ring (d=1) or torus (d=2)."""

    cells: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.cells, dtype=np.int64)
        if arr.ndim not in (1, 2) or min(arr.shape) < 1:
            raise ValueError("period lengths must all be at least 1")
        object.__setattr__(self, "cells", arr)

    @property
    def period(self) -> tuple[int, ...]:
        return self.cells.shape


def _neighbor(z: Coord, n: Coord) -> Coord:
    if isinstance(z, int):
        return z + n  # type: ignore[operator]
    return tuple(zi + ni for zi, ni in zip(z, n))  # type: ignore[arg-type]


def eca_step(config: FiniteConfig | PeriodicConfig, rule: EcaRule):
    """One synchronous update of an elementary rule."""
    if isinstance(config, PeriodicConfig):
        if config.cells.ndim != 1:
            raise ValueError("elementary rules are one-dimensional")
        if set(np.unique(config.cells)) - {0, 1}:
            raise ValueError("elementary rules require binary states")
        row = _kernels.eca_history(config.cells.astype(np.uint8), rule.table(), 1, True)[1]
        return PeriodicConfig(row)
    if set(config.support.values()) - {1} or config.quiescent != 0:
        raise ValueError("elementary rules require binary states with quiescent 0")
    if not rule.has_quiescent_zero:
        raise ValueError(
            f"rule {rule.number} maps an all-zero neighborhood to 1; "
            "finite-support stepping is undefined (use a ring)"
        )
    if not config.support:
        return FiniteConfig({}, 0)
    grid = spacetime(config, rule, steps=1)
    origin = min(config.support) - 1
    return FiniteConfig({origin + i: 1 for i, v in enumerate(grid[1]) if v}, 0)


def spacetime(config: FiniteConfig, rule: EcaRule, steps: int) -> np.ndarray:
    """uint8[steps+1, width] history of a finite seed on the line.

    The width covers the light cone: support extent plus `steps` margin on
    each side, so column 0 corresponds to cell min(support) - steps.
    """
    if not rule.has_quiescent_zero:
        raise ValueError(f"rule {rule.number} has no stable zero background")
    cells = sorted(config.support)
    if not cells:
        return np.zeros((steps + 1, 1), dtype=np.uint8)
    lo, hi = cells[0], cells[-1]
    width = (hi - lo + 1) + 2 * steps
    row0 = np.zeros(max(width, 1), dtype=np.uint8)
    for z in cells:
        row0[z - lo + steps] = 1
    return _kernels.eca_history(row0, rule.table(), steps, False)


def ca_step(config: FiniteConfig | PeriodicConfig, spec: CaSpec):
    """One synchronous update under a general rule table."""
    if isinstance(config, PeriodicConfig):
        return _ca_step_periodic(config, spec)
    if spec.quiescent is None:
        raise ValueError("finite-support stepping requires a quiescent state")
    if config.quiescent != spec.quiescent:
        raise ValueError("configuration and spec disagree on the quiescent state")
    for s in config.support.values():
        if s not in spec.states:
            raise ValueError(f"cell state {s!r} not in the spec's state set")
    candidates: set[Coord] = set()
    for z in config.support:
        for n in spec.neighborhood:
            candidates.add(_neighbor(z, tuple(-x for x in n) if not isinstance(n, int) else -n))
    out: dict[Coord, int] = {}
    for z in candidates:
        nbhd = tuple(config.state(_neighbor(z, n)) for n in spec.neighborhood)
        s = spec.rule_output(nbhd)
        if s != spec.quiescent:
            out[z] = s
    return FiniteConfig(out, spec.quiescent)


def _ca_step_periodic(config: PeriodicConfig, spec: CaSpec) -> PeriodicConfig:
    arr = config.cells
    if arr.ndim != spec.d:
        raise ValueError("configuration dimension does not match the spec")
    out = np.empty_like(arr)
    if spec.d == 1:
        (length,) = arr.shape
        for i in range(length):
            nbhd = tuple(int(arr[(i + n) % length]) for n in spec.neighborhood)
            out[i] = spec.rule_output(nbhd)
    else:
        rows, cols = arr.shape
        for i in range(rows):
            for j in range(cols):
                nbhd = tuple(
                    int(arr[(i + ni) % rows, (j + nj) % cols])
                    for ni, nj in spec.neighborhood
                )
                out[i, j] = spec.rule_output(nbhd)
    return PeriodicConfig(out)


def run_trace(config, rule_or_spec, steps: int) -> list:
    """[config, step(config), ..., step^steps(config)]."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    step = eca_step if isinstance(rule_or_spec, EcaRule) else ca_step
    trace = [config]
    for _ in range(steps):
        trace.append(step(trace[-1], rule_or_spec))
    return trace


def is_reversible_on_ring(
    rule_or_spec: EcaRule | CaSpec,
    ring_size: int,
    guard: int = 1 << 24,
) -> tuple[bool, tuple[tuple, tuple] | None]:
    """Brute-force injectivity of the global map on all ring configurations.

    Returns (True, None) when the map is a bijection of the finite ring
    space, else (False, (c1, c2)) with two distinct configurations sharing an
    image.  This certifies a necessary condition for reversibility on the
    line; it is reported per ring size, not as a general decision.
    """
    spec = rule_or_spec.to_spec() if isinstance(rule_or_spec, EcaRule) else rule_or_spec
    if spec.d != 1:
        raise ValueError("ring check is one-dimensional")
    total = len(spec.states) ** ring_size
    if total > guard:
        raise EnumerationLimitError(
            f"{len(spec.states)}^{ring_size} configurations exceed the guard {guard}"
        )
    offsets = [int(n) for n in spec.neighborhood]
    seen: dict[tuple, tuple] = {}
    for cfg in itertools.product(spec.states, repeat=ring_size):
        image = tuple(
            spec.rule_output(tuple(cfg[(i + n) % ring_size] for n in offsets))
            for i in range(ring_size)
        )
        if image in seen:
            return False, (seen[image], cfg)
        seen[image] = cfg
    return True, None


def classify_demo(rule: int) -> int:
    """Class label for the four showcase rules (fixed lookup, no classifier)."""
    try:
        return WOLFRAM_DEMO_CLASSES[rule]
    except KeyError:
        raise ValueError(f"rule {rule} is not in the demo set {sorted(WOLFRAM_DEMO_CLASSES)}") from None


# -- Game of Life -------------------------------------------------------------

MOORE = tuple(
    (i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)
)
VON_NEUMANN = ((-1, 0), (0, -1), (0, 0), (0, 1), (1, 0))


def life_spec() -> CaSpec:
    """Conway's Game of Life as an explicit 512-entry rule table."""
    center_index = MOORE.index((0, 0))
    delta = {}
    for nbhd in itertools.product((0, 1), repeat=9):
        alive = nbhd[center_index]
        neighbors = sum(nbhd) - alive
        if alive:
            delta[nbhd] = 1 if neighbors in (2, 3) else 0
        else:
            delta[nbhd] = 1 if neighbors == 3 else 0
    return CaSpec(d=2, states=(0, 1), neighborhood=MOORE, delta=delta, quiescent=0)


LIFE_PATTERNS: dict[str, frozenset[tuple[int, int]]] = {
    "blinker": frozenset({(-1, 0), (0, 0), (1, 0)}),
    "block": frozenset({(0, 0), (0, 1), (1, 0), (1, 1)}),
    "glider": frozenset({(0, 1), (1, 2), (2, 0), (2, 1), (2, 2)}),
}


# -- rendering ----------------------------------------------------------------

def render_rows(grid: np.ndarray, off: str = ".", on: str = "#") -> list[str]:
    """Text lines for a binary 2-D array (rows = time or lattice rows)."""
    return ["".join(on if v else off for v in row) for row in np.asarray(grid)]


def render_finite_2d(config: FiniteConfig, bounds=None) -> np.ndarray:
    """Binary snapshot of a 2-D finite configuration over a bounding box."""
    if bounds is None:
        if not config.support:
            return np.zeros((1, 1), dtype=np.uint8)
        rows = [z[0] for z in config.support]
        cols = [z[1] for z in config.support]
        bounds = (min(rows), max(rows), min(cols), max(cols))
    r0, r1, c0, c1 = bounds
    grid = np.zeros((r1 - r0 + 1, c1 - c0 + 1), dtype=np.uint8)
    for (i, j), s in config.support.items():
        if r0 <= i <= r1 and c0 <= j <= c1:
            grid[i - r0, j - c0] = 1 if s else 0
    return grid


def to_pbm(grid: np.ndarray) -> str:
    """Plain PBM (P1) image of a binary array."""
    arr = np.asarray(grid)
    lines = [f"P1", f"{arr.shape[1]} {arr.shape[0]}"]
    lines += [" ".join("1" if v else "0" for v in row) for row in arr]
    return "\n".join(lines) + "\n"


# -- spec file format ---------------------------------------------------------

def spec_to_json(spec: CaSpec) -> dict:
    return {
        "dimension": spec.d,
        "states": list(spec.states),
        "neighborhood": [list(n) if not isinstance(n, int) else n for n in spec.neighborhood],
        "quiescent": spec.quiescent,
        "table": [
            {"nbhd": list(k), "out": v} for k, v in sorted(spec.delta.items())
        ],
    }


def spec_from_json(obj: dict) -> CaSpec:
    try:
        d = int(obj["dimension"])
        nbhd = tuple(
            tuple(n) if isinstance(n, list) else int(n) for n in obj["neighborhood"]
        )
        delta = {tuple(e["nbhd"]): e["out"] for e in obj["table"]}
        return CaSpec(
            d=d,
            states=tuple(obj["states"]),
            neighborhood=nbhd,
            delta=delta,
            quiescent=obj.get("quiescent"),
        )
    except (KeyError, TypeError) as exc:
        raise SpecFormatError(f"malformed CA spec: {exc}") from exc
