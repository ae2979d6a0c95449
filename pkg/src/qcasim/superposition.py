"""Sparse superpositions over arbitrary basis labels.

A superposition is an immutable finite map from basis labels to complex
amplitudes.  Labels are opaque strings supplied by each model (bitstrings,
encoded lattice configurations, encoded machine configurations); this module
never interprets them.  All iteration is in sorted label order so that any
emitted trace is byte-stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

__all__ = [
    "Tolerance",
    "NormalizationError",
    "Superposition",
]


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared across the engines.

    eps_norm bounds acceptable deviation of a state norm from 1, eps_unitary
    bounds deviation of operator checks from exact orthonormality, and
    eps_drop is the squared-magnitude threshold below which stored terms are
    discarded.
    """

    eps_norm: float = 1e-9
    eps_unitary: float = 1e-9
    eps_drop: float = 1e-14

    def __post_init__(self) -> None:
        if not (self.eps_norm > 0 and self.eps_unitary > 0 and self.eps_drop > 0):
            raise ValueError("tolerances must be strictly positive")
        if not self.eps_drop < self.eps_norm:
            raise ValueError("eps_drop must be smaller than eps_norm")


DEFAULT_TOL = Tolerance()


class NormalizationError(ValueError):
    """Raised when an operation requires a unit-norm state and got none."""


def _check_finite(label: str, amp: complex) -> None:
    if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
        raise ValueError(f"non-finite amplitude {amp!r} for label {label!r}")


class Superposition:
    """Immutable sparse map from basis labels to complex amplitudes."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[str, complex] | Iterable[tuple[str, complex]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        store: dict[str, complex] = {}
        for label, amp in items:
            amp = complex(amp)
            _check_finite(label, amp)
            if amp != 0:
                store[label] = store.get(label, 0j) + amp
        self._terms = {k: store[k] for k in sorted(store)}

    @classmethod
    def basis(cls, label: str) -> "Superposition":
        """The basis state |label> with amplitude 1."""
        return cls({label: 1.0 + 0j})

    # -- container protocol -------------------------------------------------

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[str]:
        return iter(self._terms)

    def __contains__(self, label: str) -> bool:
        return label in self._terms

    def __getitem__(self, label: str) -> complex:
        return self._terms.get(label, 0j)

    def items(self) -> Iterator[tuple[str, complex]]:
        """Terms in sorted label order."""
        return iter(self._terms.items())

    def labels(self) -> list[str]:
        return list(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Superposition):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {v!r}" for k, v in self._terms.items())
        return f"Superposition({{{inner}}})"

    # -- linear-algebra operations ------------------------------------------

    def norm_sq(self) -> float:
        """Sum of squared amplitude magnitudes over stored terms."""
        return math.fsum(abs(a) ** 2 for a in self._terms.values())

    def inner_product(self, other: "Superposition") -> complex:
        """<self|other>, conjugate-linear in self."""
        if len(self._terms) > len(other._terms):
            return other.inner_product(self).conjugate()
        return sum(
            (a.conjugate() * other._terms[label]
             for label, a in self._terms.items() if label in other._terms),
            0j,
        )

    def scaled(self, factor: complex) -> "Superposition":
        return Superposition({k: factor * v for k, v in self._terms.items()})

    def prune(self, tol: Tolerance = DEFAULT_TOL) -> "Superposition":
        """Drop terms with squared magnitude below tol.eps_drop."""
        return Superposition(
            {k: v for k, v in self._terms.items() if abs(v) ** 2 >= tol.eps_drop}
        )

    def normalized(self, tol: Tolerance = DEFAULT_TOL) -> "Superposition":
        n = self.norm_sq()
        if n < tol.eps_drop:
            raise NormalizationError("cannot normalize a (numerically) zero vector")
        return self.scaled(1.0 / math.sqrt(n))

    def require_normalized(self, tol: Tolerance = DEFAULT_TOL) -> None:
        n = self.norm_sq()
        if abs(n - 1.0) > tol.eps_norm:
            raise NormalizationError(f"state norm_sq is {n}, expected 1 within {tol.eps_norm}")

    def measure(
        self,
        partition: Callable[[str], object],
        tol: Tolerance = DEFAULT_TOL,
    ) -> list[tuple[object, float, "Superposition"]]:
        """Projective measurement along a label partition.

        `partition` maps every stored label to an outcome tag.  Returns
        (tag, probability, renormalized post-state) for each outcome with
        nonzero probability, sorted by the string form of the tag.  The input
        must be normalized; outcome probabilities sum to 1 within eps_norm.
        """
        self.require_normalized(tol)
        groups: dict[object, dict[str, complex]] = {}
        for label, amp in self._terms.items():
            groups.setdefault(partition(label), {})[label] = amp
        results = []
        for tag in sorted(groups, key=str):
            sub = groups[tag]
            prob = math.fsum(abs(a) ** 2 for a in sub.values())
            if prob < tol.eps_drop:
                continue
            scale = 1.0 / math.sqrt(prob)
            post = Superposition({k: v * scale for k, v in sub.items()}).prune(tol)
            results.append((tag, prob, post))
        return results

    # -- serialization -------------------------------------------------------

    def to_json_terms(self) -> list[dict[str, object]]:
        """JSON-ready term list, sorted by label."""
        return [
            {"label": k, "re": v.real, "im": v.imag} for k, v in self._terms.items()
        ]

    @classmethod
    def from_json_terms(cls, terms: list[dict]) -> "Superposition":
        return cls({t["label"]: complex(t["re"], t["im"]) for t in terms})


def accumulate(parts: Iterable[tuple[str, complex]], tol: Tolerance = DEFAULT_TOL) -> Superposition:
    """Sum weighted contributions into a superposition, pruning afterwards.

    Pruning happens only after all contributions are merged so that
    cancelling pairs are not lost mid-accumulation.
    """
    acc: dict[str, complex] = {}
    for label, amp in parts:
        acc[label] = acc.get(label, 0j) + amp
    return Superposition(acc).prune(tol)
