"""Randomized alternating-projection search for complex Hadamard matrices.

Draw a Gaussian seed, then alternate two projections: onto unimodular
entries and onto sqrt(N) times the nearest unitary.  For orders 6..16
almost every seed lands on a CHM; converged outcomes are dephased and
fingerprinted so a batch search can group what it found.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .core import PhaseMatrix, dephase, objective_Z, sinkhorn_step, unimodularize
from .invariants import InvariantProfile, profile

__all__ = [
    "SinkhornConfig",
    "SinkhornOutcome",
    "SearchResult",
    "random_seed",
    "run",
    "search",
]


@dataclass(frozen=True)
class SinkhornConfig:
    max_iterations: int = 100_000
    z_tol: float = 1e-12
    stall_window: int = 500
    stall_eps: float = 1e-15
    rng_seed: int = 0

    def __post_init__(self):
        if self.z_tol <= 0 or self.stall_window < 1 or self.max_iterations < 1:
            raise ValueError("invalid SinkhornConfig")


@dataclass(frozen=True)
class SinkhornOutcome:
    matrix: PhaseMatrix  # dephased unimodular iterate
    final_z: float
    iterations: int
    converged: bool
    seed_id: int = 0


def _gaussian_seed(n: int, rng: np.random.Generator) -> np.ndarray:
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    # zeros would blow up the unimodularization; redraw them
    for _ in range(100):
        low = np.abs(m) < 1e-12
        if not low.any():
            break
        m[low] = rng.standard_normal(low.sum()) + 1j * rng.standard_normal(low.sum())
    return m

def random_seed(n: int, rng_seed) -> np.ndarray:
    """Deterministic complex Gaussian seed with no near-zero entries."""
    if n < 2:
        raise ValueError("order must be at least 2")
    return _gaussian_seed(n, np.random.default_rng(rng_seed))


def run(seed: np.ndarray, config: SinkhornConfig = SinkhornConfig(), seed_id: int = 0) -> SinkhornOutcome:
    """Iterate projections until Z of the unimodular iterate drops below
    z_tol, the iteration budget runs out, or progress stalls."""
    x = np.asarray(seed, dtype=complex)
    history: List[float] = []
    iterations = 0
    current = unimodularize(x)
    z = objective_Z(current)
    while True:
        history.append(z)
        if z <= config.z_tol:
            return SinkhornOutcome(dephase(current), z, iterations, True, seed_id)
        if iterations >= config.max_iterations:
            break
        if len(history) > config.stall_window:
            if history[-config.stall_window - 1] - z < config.stall_eps:
                break
        x = sinkhorn_step(x)
        iterations += 1
        current = unimodularize(x)
        z = objective_Z(current)
    return SinkhornOutcome(dephase(current), z, iterations, False, seed_id)


@dataclass(frozen=True)
class SearchResult:
    outcomes: List[SinkhornOutcome]  # converged only, sorted by seed_id
    profiles: List[Optional[InvariantProfile]]  # aligned with outcomes
    num_seeds: int

    def groups(self) -> List[Tuple[InvariantProfile, List[int]]]:
        """Outcomes grouped by invariant profile, deterministic order."""
        by_key = {}
        for outcome, prof in zip(self.outcomes, self.profiles):
            if prof is None:
                continue
            by_key.setdefault(prof.key(), (prof, []))[1].append(outcome.seed_id)
        return [by_key[k] for k in sorted(by_key, key=str)]

    @property
    def converged_count(self) -> int:
        return len(self.outcomes)


def search(n: int, num_seeds: int, config: SinkhornConfig = SinkhornConfig(),
           profile_outcomes: bool = True) -> SearchResult:
    """Run num_seeds independent seeds and fingerprint what converged.

    Seeds are derived from (rng_seed, seed_id), so the result is the same
    multiset regardless of evaluation order.
    """
    if not 2 <= n <= 64:
        raise ValueError("order must lie in [2, 64]")
    outcomes = []
    for k in range(num_seeds):
        seed = _gaussian_seed(n, np.random.default_rng([config.rng_seed, k]))
        outcome = run(seed, config, seed_id=k)
        if outcome.converged:
            outcomes.append(outcome)
    outcomes.sort(key=lambda o: o.seed_id)
    profiles = [profile(o.matrix) if profile_outcomes else None for o in outcomes]
    return SearchResult(outcomes=outcomes, profiles=profiles, num_seeds=num_seeds)
