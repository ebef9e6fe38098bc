"""The CHM data model: phase matrices, projections, equivalence, verification.

A complex Hadamard matrix of order n is carried as an n x n array of phases
p_jk in [0, 1) with entries exp(2*pi*i*p_jk); storing phases keeps entries
exactly unimodular through every transformation and through serialization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, ZeroEntry
from .kernel import polar_unitary

__all__ = [
    "PhaseMatrix",
    "EquivalencePair",
    "VerifiedChm",
    "reduce_phases",
    "circular_distance",
    "phases_close",
    "unimodularize",
    "objective_Z",
    "sinkhorn_step",
    "dephase",
    "random_equivalence",
    "apply_equivalence",
    "is_hadamard",
    "butson_order",
]

TWO_PI = 2.0 * np.pi


def reduce_phases(values) -> np.ndarray:
    """Reduce phases into [0, 1); values that round up to exactly 1.0 wrap to 0."""
    r = np.mod(np.asarray(values, dtype=float), 1.0)
    # mod can return 1.0 exactly for tiny negative inputs
    if r.ndim == 0:
        return np.array(0.0) if r == 1.0 else r
    r[r >= 1.0] = 0.0
    return r


def circular_distance(a, b) -> np.ndarray:
    """Distance between phases on the unit circle of circumference 1."""
    d = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) % 1.0
    return np.minimum(d, 1.0 - d)


def phases_close(a, b, tol: float) -> bool:
    """Elementwise circular comparison of two phase arrays."""
    return bool(np.all(circular_distance(a, b) <= tol))


class PhaseMatrix:
    """Square array of phases p_jk in [0, 1); entry (j, k) is exp(2*pi*i*p_jk)."""

    __slots__ = ("phases",)

    def __init__(self, phases):
        p = np.array(phases, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1] or p.shape[0] < 1:
            raise DimensionMismatch(f"phases must form a square matrix, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("phases contain NaN or Inf")
        p = reduce_phases(p)
        p.flags.writeable = False
        object.__setattr__(self, "phases", p)

    def __setattr__(self, name, value):
        raise AttributeError("PhaseMatrix is immutable")

    @property
    def n(self) -> int:
        return self.phases.shape[0]

    def realize(self) -> np.ndarray:
        """Complex matrix exp(2*pi*i*p); every entry has modulus 1 by construction."""
        return np.exp(2j * np.pi * self.phases)

    def transpose(self) -> "PhaseMatrix":
        return PhaseMatrix(self.phases.T)

    def conjugate(self) -> "PhaseMatrix":
        return PhaseMatrix(reduce_phases(-self.phases))

    def __repr__(self):
        return f"PhaseMatrix(n={self.n})"


def unimodularize(m) -> PhaseMatrix:
    """Project a complex matrix onto unimodular entries (keep only the phases)."""
    a = np.asarray(m, dtype=complex)
    mod = np.abs(a)
    if np.any(mod < 1e-300) or not np.all(np.isfinite(mod)):
        raise ZeroEntry("entry modulus underflowed; reseed before projecting")
    return PhaseMatrix(np.angle(a) / TWO_PI)


def objective_Z(m: PhaseMatrix) -> float:
    """Frobenius distance of X X^dagger from N*I for X = realize(m); 0 iff CHM."""
    x = m.realize()
    g = x @ x.conj().T
    g[np.diag_indices_from(g)] -= m.n
    return float(np.linalg.norm(g))


def sinkhorn_step(m) -> np.ndarray:
    """One alternating-projection sweep: unimodularize, then rescale the
    nearest unitary back onto sqrt(N)*U(N)."""
    x = unimodularize(m).realize()
    return np.sqrt(x.shape[0]) * polar_unitary(x)


def dephase(m: PhaseMatrix) -> PhaseMatrix:
    """Equivalent representative whose first row and first column are ones."""
    p = m.phases
    r = reduce_phases(p - p[:, :1] - p[:1, :] + p[0, 0])
    r[0, :] = 0.0
    r[:, 0] = 0.0
    return PhaseMatrix(r)


@dataclass(frozen=True)
class EquivalencePair:
    """Diagonal phase vectors d1, d2 and permutations p1, p2 acting as
    H -> D1 P1 H P2 D2 (phases shift by d1 rowwise, d2 columnwise)."""

    d1: np.ndarray
    d2: np.ndarray
    p1: np.ndarray
    p2: np.ndarray

    def __post_init__(self):
        n = len(self.d1)
        for perm in (self.p1, self.p2):
            if sorted(perm.tolist()) != list(range(n)):
                raise ValueError("p1/p2 must be permutations of 0..n-1")
        if len(self.d2) != n:
            raise DimensionMismatch("d1 and d2 must have equal length")


def random_equivalence(n: int, rng: np.random.Generator) -> EquivalencePair:
    return EquivalencePair(
        d1=reduce_phases(rng.random(n)),
        d2=reduce_phases(rng.random(n)),
        p1=rng.permutation(n),
        p2=rng.permutation(n),
    )


def apply_equivalence(m: PhaseMatrix, e: EquivalencePair) -> PhaseMatrix:
    if len(e.d1) != m.n:
        raise DimensionMismatch(f"equivalence is for order {len(e.d1)}, matrix has order {m.n}")
    p = m.phases[np.ix_(e.p1, e.p2)]
    return PhaseMatrix(p + e.d1[:, None] + e.d2[None, :])


@dataclass(frozen=True)
class VerifiedChm:
    """Outcome of a Hadamard check; `accepted` iff Z(matrix)/n <= tolerance."""

    matrix: PhaseMatrix
    unitarity_residual: float  # objective_Z / n
    tolerance: float
    accepted: bool


def is_hadamard(m: PhaseMatrix, tol: float = 1e-10) -> VerifiedChm:
    """Check H H^dagger = N*I at normalized tolerance Z/n <= tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    residual = objective_Z(m) / m.n
    return VerifiedChm(m, residual, tol, residual <= tol)


def butson_order(m: PhaseMatrix, q_max: int = 2**16, tol: float = 1e-9) -> Optional[int]:
    """Smallest q <= q_max with every phase within tol of a multiple of 1/q.

    Returns None when the matrix is not of Butson type up to q_max.
    """
    if q_max < 2:
        raise ValueError("q_max must be at least 2")
    p = m.phases.ravel()
    chunk = 2048
    for q0 in range(2, q_max + 1, chunk):
        qs = np.arange(q0, min(q0 + chunk, q_max + 1), dtype=float)
        scaled = qs[:, None] * p[None, :]
        err = np.abs(scaled - np.round(scaled))
        hits = np.all(err <= qs[:, None] * tol, axis=1)
        idx = np.flatnonzero(hits)
        if idx.size:
            return int(qs[idx[0]])
    return None
