"""Equivalence-invariant fingerprints: defect, Haagerup set, certificates.

The defect counts first-order entrywise phase deformations that preserve
unitarity, beyond the 2N-1 trivial row/column phase directions; zero defect
certifies an isolated matrix.  The Haagerup set collects all N^4 quartet
products H_jk * H_lm * conj(H_jm) * conj(H_lk).  Both are invariant under
the equivalence relation, so differing values certify inequivalence; equal
values certify nothing.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import PhaseMatrix, dephase, is_hadamard, objective_Z, phases_close, reduce_phases
from .core import butson_order as _butson_order
from .errors import NotHadamard, UnstableCardinality
from .kernel import numerical_rank

__all__ = [
    "InvariantProfile",
    "HaagerupSet",
    "InequivalenceCertificate",
    "require_hadamard",
    "defect",
    "haagerup_set",
    "haagerup_cardinality",
    "symmetric_haagerup_bound",
    "certify_inequivalent",
    "profile",
]

HADAMARD_PRE_TOL = 1e-8
DEFAULT_RANK_TOL = 1e-8
DEFAULT_PHASE_TOL = 1e-8
DEFAULT_BUTSON_QMAX = 2**16
DEFAULT_BUTSON_TOL = 1e-9


@dataclass(frozen=True)
class InvariantProfile:
    """Classification key attached to a verified CHM."""

    defect: int
    haagerup_card: int
    butson_order: Optional[int]
    symmetric: bool
    unitarity_residual: float

    def key(self):
        """Hashable grouping key (ignores the residual, which is noise)."""
        return (self.defect, self.haagerup_card, self.butson_order, self.symmetric)


@dataclass(frozen=True)
class HaagerupSet:
    """Deduplicated quartet products as unit-modulus values with counts."""

    values: np.ndarray  # complex, unit modulus
    phases: np.ndarray  # sorted representatives in [0, 1)
    multiplicities: np.ndarray

    @property
    def cardinality(self) -> int:
        return int(self.phases.size)

    def contains_one(self, tol: float = 1e-8) -> bool:
        d = np.minimum(self.phases, 1.0 - self.phases)
        return bool(np.any(d <= tol))

    def conjugation_closed(self, tol: float = 1e-8) -> bool:
        mirrored = np.sort(reduce_phases(-self.phases))
        diff = np.abs(mirrored - self.phases) % 1.0
        return bool(np.all(np.minimum(diff, 1.0 - diff) <= tol))


def require_hadamard(m: PhaseMatrix, tol: float = HADAMARD_PRE_TOL) -> float:
    """Return the normalized residual, raising NotHadamard above tol."""
    check = is_hadamard(m, tol)
    if not check.accepted:
        raise NotHadamard(
            f"matrix of order {m.n} has unitarity residual {check.unitarity_residual:.3e} > {tol:.1e}"
        )
    return check.unitarity_residual


def defect(m: PhaseMatrix, rank_rel_tol: float = DEFAULT_RANK_TOL) -> int:
    """Dimension of the unitarity-preserving phase deformation space minus
    the 2N-1 trivial directions.

    Builds the real linear system over R in R^{NxN}: for each row pair j < l,
    sum_k H_jk * conj(H_lk) * (R_jk - R_lk) = 0, split into real and
    imaginary parts (N(N-1) rows, N^2 columns); the defect is
    N^2 - (2N-1) - rank.
    """
    require_hadamard(m)
    n = m.n
    x = m.realize()
    rows = np.zeros((n * (n - 1) // 2, n, n), dtype=complex)
    i = 0
    for j in range(n):
        for l in range(j + 1, n):
            w = x[j] * x[l].conj()
            rows[i, j, :] = w
            rows[i, l, :] = -w
            i += 1
    flat = rows.reshape(i, n * n)
    system = np.vstack([flat.real, flat.imag])
    rank = numerical_rank(system, rank_rel_tol)
    d = n * n - (2 * n - 1) - rank
    if d < 0:
        warnings.warn(f"defect rank {rank} exceeds N^2-(2N-1); clamping defect to 0")
        return 0
    return d


def _cluster_circular(phases: np.ndarray, tol: float):
    """Group sorted phases on the circle, cutting at gaps > tol.

    Returns (representatives sorted in [0,1), counts).
    """
    v = np.sort(phases)
    if v.size == 1:
        return v.copy(), np.ones(1, dtype=int)
    gaps = np.append(np.diff(v), v[0] + 1.0 - v[-1])
    cut = int(np.argmax(gaps))
    if gaps[cut] <= tol:
        # all values chain into a single cluster around the circle
        return np.array([v[0]]), np.array([v.size])
    start = (cut + 1) % v.size
    w = np.concatenate([v[start:], v[:start] + 1.0])
    boundaries = np.flatnonzero(np.diff(w) > tol) + 1
    pieces = np.split(w, boundaries)
    reps = reduce_phases(np.array([piece.mean() for piece in pieces]))
    counts = np.array([piece.size for piece in pieces], dtype=int)
    order = np.argsort(reps)
    return reps[order], counts[order]


def _quartet_reps(m: PhaseMatrix, phase_tol: float):
    """Stream the N^4 quartet phases pair-by-pair, clustering as we go."""
    p = m.phases
    reps_parts = []
    count_parts = []
    for j in range(m.n):
        for l in range(m.n):
            d = p[j] - p[l]
            q = reduce_phases(d[:, None] - d[None, :]).ravel()
            r, c = _cluster_circular(q, phase_tol)
            reps_parts.append(r)
            count_parts.append(c)
    merged = np.concatenate(reps_parts)
    weights = np.concatenate(count_parts)
    reps, _ = _cluster_circular(merged, phase_tol)
    # recount against final representatives
    counts = np.zeros(reps.size, dtype=int)
    idx = np.searchsorted(reps, merged)
    idx = np.clip(idx, 0, reps.size - 1)
    left = np.clip(idx - 1, 0, reps.size - 1)
    pick = np.where(
        np.minimum(np.abs(merged - reps[idx]), 1.0 - np.abs(merged - reps[idx]))
        <= np.minimum(np.abs(merged - reps[left]), 1.0 - np.abs(merged - reps[left])),
        idx,
        left,
    )
    np.add.at(counts, pick, weights)
    return reps, counts


def haagerup_set(m: PhaseMatrix, phase_tol: float = DEFAULT_PHASE_TOL) -> HaagerupSet:
    """All N^4 quartet products, clustered circularly at phase_tol."""
    reps, counts = _quartet_reps(m, phase_tol)
    return HaagerupSet(values=np.exp(2j * np.pi * reps), phases=reps, multiplicities=counts)


def haagerup_cardinality(m: PhaseMatrix, phase_tol: float = DEFAULT_PHASE_TOL) -> int:
    """Cardinality of the Haagerup set, with a tolerance-stability guard.

    Raises UnstableCardinality when halving or doubling phase_tol changes
    the count; that indicates the matrix needs re-solving to higher
    precision, not a different tolerance.
    """
    counts = [_quartet_reps(m, t)[0].size for t in (0.5 * phase_tol, phase_tol, 2.0 * phase_tol)]
    if counts[0] != counts[1] or counts[1] != counts[2]:
        raise UnstableCardinality(
            f"Haagerup count varies with tolerance around {phase_tol:.1e}: {counts}"
        )
    return counts[1]


def symmetric_haagerup_bound(n: int) -> int:
    """Upper bound 1 + tau + tau^2, tau = n(n-1)/2, on #Lambda of a symmetric
    dephased matrix of order n."""
    if n < 2:
        raise ValueError("order must be at least 2")
    tau = n * (n - 1) // 2
    return 1 + tau + tau * tau


@dataclass(frozen=True)
class InequivalenceCertificate:
    """One-way certificate: `inequivalent` may be trusted, `Unknown` says nothing."""

    inequivalent: bool
    reason: Optional[str] = None  # "defect" or "haagerup"
    left: Optional[int] = None
    right: Optional[int] = None

    def __str__(self):
        if not self.inequivalent:
            return "Unknown"
        return f"Inequivalent({self.reason}: {self.left} vs {self.right})"


def certify_inequivalent(a: PhaseMatrix, b: PhaseMatrix) -> InequivalenceCertificate:
    """Certify inequivalence from differing defects or Haagerup cardinalities.

    Matching invariants prove nothing, so the fallback verdict is Unknown.
    """
    require_hadamard(a)
    require_hadamard(b)
    da, db = defect(a), defect(b)
    if da != db:
        return InequivalenceCertificate(True, "defect", da, db)
    ca, cb = haagerup_cardinality(a), haagerup_cardinality(b)
    if ca != cb:
        return InequivalenceCertificate(True, "haagerup", ca, cb)
    return InequivalenceCertificate(False)


def is_symmetric_dephased(m: PhaseMatrix, tol: float = 1e-8) -> bool:
    d = dephase(m)
    return phases_close(d.phases, d.phases.T, tol)


def profile(m: PhaseMatrix) -> InvariantProfile:
    """Aggregate invariants for a verified CHM (the dedup/classification key)."""
    residual = require_hadamard(m)
    return InvariantProfile(
        defect=defect(m, DEFAULT_RANK_TOL),
        haagerup_card=haagerup_cardinality(m, DEFAULT_PHASE_TOL),
        butson_order=_butson_order(m, DEFAULT_BUTSON_QMAX, DEFAULT_BUTSON_TOL),
        symmetric=is_symmetric_dephased(m),
        unitarity_residual=residual,
    )
