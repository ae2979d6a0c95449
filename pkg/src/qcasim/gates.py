"""Qubit registers and the small named gate set.

Gates are explicit matrices (column j = image of basis state j).  Registers
hold a sparse superposition over bitstring labels; qubit 0 is the leftmost
character of the label and the most significant bit of any dense index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .superposition import DEFAULT_TOL, Superposition, Tolerance

SQRT_HALF = math.sqrt(0.5)

_NAMED: dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    # Printed matrix convention: |0> -> |1>, |1> -> -|0>.
    "Y": np.array([[0, -1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * SQRT_HALF,
    "T": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
}


@dataclass(frozen=True)
class Gate:
    """A k-qubit operator as a dense 2**k x 2**k matrix."""

    arity: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        dim = 1 << self.arity
        m = np.asarray(self.matrix, dtype=complex)
        if self.arity < 1 or m.shape != (dim, dim):
            raise ValueError(f"matrix shape {m.shape} does not match arity {self.arity}")
        object.__setattr__(self, "matrix", m)

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "matrix": [
                [{"re": v.real, "im": v.imag} for v in row] for row in self.matrix
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Gate":
        rows = [[complex(e["re"], e["im"]) for e in row] for row in obj["matrix"]]
        return cls(int(obj["arity"]), np.array(rows, dtype=complex))


def named_gate(name: str) -> Gate:
    """One of the library gates: I, X, Y, Z, H, T, CNOT."""
    try:
        m = _NAMED[name]
    except KeyError:
        raise ValueError(f"unknown gate name {name!r}") from None
    return Gate(1 if m.shape[0] == 2 else 2, m.copy())


def tensor(a: Gate, b: Gate) -> Gate:
    """Tensor product; entries follow the block formula (a acts on the high bits)."""
    return Gate(a.arity + b.arity, np.kron(a.matrix, b.matrix))


def is_unitary(g: Gate | np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Max-entry deviation of G†G from the identity, compared to eps_unitary."""
    m = g.matrix if isinstance(g, Gate) else np.asarray(g, dtype=complex)
    dev = m.conj().T @ m - np.eye(m.shape[0])
    return float(np.max(np.abs(dev))) <= tol.eps_unitary


@dataclass(frozen=True)
class QubitRegister:
    """n qubits as a sparse superposition over length-n bitstrings."""

    n: int
    state: Superposition

    def __post_init__(self) -> None:
        for label in self.state:
            if len(label) != self.n or set(label) - {"0", "1"}:
                raise ValueError(f"label {label!r} is not a length-{self.n} bitstring")

    @classmethod
    def basis(cls, bits: str) -> "QubitRegister":
        return cls(len(bits), Superposition.basis(bits))

    @classmethod
    def zero(cls, n: int) -> "QubitRegister":
        return cls.basis("0" * n)

    def amplitude(self, bits: str) -> complex:
        return self.state[bits]

    def to_dense(self) -> np.ndarray:
        """Dense 2**n vector (index = label read as a binary number)."""
        vec = np.zeros(1 << self.n, dtype=complex)
        for label, amp in self.state.items():
            vec[int(label, 2)] = amp
        return vec

    @classmethod
    def from_dense(cls, vec: np.ndarray, n: int, tol: Tolerance = DEFAULT_TOL) -> "QubitRegister":
        terms = {
            format(i, f"0{n}b"): complex(a)
            for i, a in enumerate(vec)
            if abs(a) ** 2 >= tol.eps_drop
        }
        return cls(n, Superposition(terms))


def apply(
    reg: QubitRegister,
    g: Gate,
    targets: list[int],
    tol: Tolerance = DEFAULT_TOL,
) -> QubitRegister:
    """Apply g to the given qubits (targets[0] = gate's most significant bit)."""
    if len(targets) != g.arity:
        raise ValueError(f"gate arity {g.arity} does not match {len(targets)} targets")
    if len(set(targets)) != len(targets):
        raise ValueError("duplicate target qubits")
    if any(t < 0 or t >= reg.n for t in targets):
        raise ValueError("target qubit index out of range")

    cols: list[list[tuple[int, complex]]] = [
        [(i, g.matrix[i, j]) for i in range(g.matrix.shape[0]) if g.matrix[i, j] != 0]
        for j in range(g.matrix.shape[1])
    ]
    k = g.arity
    acc: dict[str, complex] = {}
    for label, amp in reg.state.items():
        j = 0
        for t in targets:
            j = (j << 1) | (label[t] == "1")
        chars = list(label)
        for i, entry in cols[j]:
            for b, t in enumerate(targets):
                chars[t] = "1" if (i >> (k - 1 - b)) & 1 else "0"
            new_label = "".join(chars)
            acc[new_label] = acc.get(new_label, 0j) + amp * entry
    return QubitRegister(reg.n, Superposition(acc).prune(tol))


def hadamard_all(n: int) -> QubitRegister:
    """The uniform superposition over all 2**n bitstrings."""
    if n < 1:
        raise ValueError("need at least one qubit")
    amp = 1.0 / math.sqrt(1 << n)
    return QubitRegister(
        n, Superposition({format(x, f"0{n}b"): amp for x in range(1 << n)})
    )


def is_product_2q(reg: QubitRegister, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether a 2-qubit state factors into single-qubit states.

    Uses the determinant criterion: the state a00|00> + a01|01> + a10|10> +
    a11|11> is a product iff a00*a11 - a01*a10 vanishes.
    """
    if reg.n != 2:
        raise ValueError("product test is defined for 2-qubit registers")
    a = reg.state
    det = a["00"] * a["11"] - a["01"] * a["10"]
    return abs(det) <= tol.eps_unitary


def factor_2q(reg: QubitRegister) -> tuple[np.ndarray, np.ndarray, float]:
    """Best rank-1 factorization of a 2-qubit state.

    Returns (first-qubit vector, second-qubit vector, residual) where the
    residual is the l2 distance between the state and the reconstruction.
    Used as the independent cross-check for is_product_2q.
    """
    m = reg.to_dense().reshape(2, 2)
    u, s, vh = np.linalg.svd(m)
    left = u[:, 0] * math.sqrt(s[0])
    right = vh[0, :] * math.sqrt(s[0])
    residual = float(np.linalg.norm(m - np.outer(left, right)))
    return left, right, residual


def interferometer(obstacle: bool = False, splitters: int = 2) -> dict[str, float]:
    """Detector probabilities for the beam-splitter experiments.

    The photon path is one qubit (basis state 0 = transmitted arm, ending at
    detector B; basis state 1 = reflected arm, ending at detector A) and each
    half-silvered mirror is a Hadamard splitter.  An obstacle absorbs the
    reflected arm between the two splitters; reported probabilities are then
    conditional on the photon not being absorbed.
    """
    if splitters not in (1, 2):
        raise ValueError("experiment uses one or two splitters")
    h = named_gate("H")
    reg = apply(QubitRegister.basis("0"), h, [0])
    if splitters == 2:
        if obstacle:
            blocked = Superposition({k: v for k, v in reg.state.items() if k == "0"})
            reg = QubitRegister(1, blocked.normalized())
        reg = apply(reg, h, [0])
    return {
        "A": abs(reg.amplitude("1")) ** 2,
        "B": abs(reg.amplitude("0")) ** 2,
    }
