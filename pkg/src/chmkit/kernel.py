"""Dense complex linear-algebra primitives and a damped least-squares solver.

Everything here is a pure function of its inputs; results are deterministic
for fixed arguments on a single platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NonFinite, RankDeficient

__all__ = [
    "SvdResult",
    "SolverConfig",
    "NonlinearSystem",
    "SolveResult",
    "svd",
    "singular_values",
    "polar_unitary",
    "numerical_rank",
    "solve_least_squares",
]

# Smallest singular value (relative to the largest) accepted by the polar
# decomposition before an iterate is declared degenerate.
POLAR_RANK_TOL = 1e-12


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix contains NaN or Inf entries")
    return a


@dataclass(frozen=True)
class SvdResult:
    """Full SVD m = left @ diag(singulars) @ right.conj().T."""

    left: np.ndarray
    singulars: np.ndarray  # nonincreasing, >= 0
    right: np.ndarray


def svd(m) -> SvdResult:
    a = _as_matrix(m)
    u, s, vh = np.linalg.svd(a)
    return SvdResult(left=u, singulars=s, right=vh.conj().T)


def singular_values(m) -> np.ndarray:
    """Singular values of a square matrix, sorted nonincreasing."""
    return np.linalg.svd(_as_matrix(m), compute_uv=False)


def polar_unitary(m) -> np.ndarray:
    """Unitary polar factor of m, the unitary closest to m in Frobenius norm.

    Raises RankDeficient when the smallest singular value falls below
    POLAR_RANK_TOL times the largest, which signals a degenerate iterate
    rather than a recoverable condition.
    """
    a = _as_matrix(m)
    u, s, vh = np.linalg.svd(a)
    if s[0] == 0.0 or s[-1] <= POLAR_RANK_TOL * s[0]:
        raise RankDeficient(
            f"matrix is numerically rank deficient (sigma_min/sigma_max = "
            f"{0.0 if s[0] == 0.0 else s[-1] / s[0]:.3e})"
        )
    return u @ vh


def numerical_rank(m, rel_tol: float = 1e-8) -> int:
    """Number of singular values above rel_tol times the largest one."""
    if not 0.0 < rel_tol < 1.0:
        raise ValueError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    a = np.asarray(m)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix contains NaN or Inf entries")
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))


@dataclass(frozen=True)
class SolverConfig:
    max_iterations: int = 200
    residual_tol: float = 1e-12
    step_tol: float = 3e-16
    damping_init: float = 1e-3
    rng_seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.residual_tol <= 0 or self.step_tol <= 0 or self.damping_init <= 0:
            raise ValueError("tolerances and damping must be positive")


@dataclass(frozen=True)
class NonlinearSystem:
    """A residual map from real vectors of length `arity` to real vectors.

    `jacobian`, when given, returns the (rows x arity) derivative; otherwise
    a forward-difference approximation is used.
    """

    arity: int
    residual: Callable[[np.ndarray], np.ndarray]
    description: str = ""
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None


@dataclass(frozen=True)
class SolveResult:
    solution: np.ndarray
    residual_norm: float
    converged: bool
    iterations: int


def _fd_jacobian(residual, x, r0):
    n = x.size
    J = np.empty((r0.size, n))
    h = np.sqrt(np.finfo(float).eps) * np.maximum(1.0, np.abs(x))
    for i in range(n):
        xp = x.copy()
        xp[i] += h[i]
        J[:, i] = (residual(xp) - r0) / h[i]
    return J


def solve_least_squares(system: NonlinearSystem, start, config: SolverConfig = SolverConfig()) -> SolveResult:
    """Damped (Levenberg-Marquardt) least squares on a NonlinearSystem.

    Non-convergence within max_iterations is reported through
    `converged=False` with the best point found, never raised.
    """
    x = np.array(start, dtype=float).ravel()
    if x.size != system.arity:
        raise ValueError(f"start has length {x.size}, system arity is {system.arity}")

    r = np.asarray(system.residual(x), dtype=float).ravel()
    norm = float(np.linalg.norm(r))
    lam = config.damping_init
    iterations = 0

    for iterations in range(1, config.max_iterations + 1):
        if norm <= config.residual_tol:
            return SolveResult(x, norm, True, iterations - 1)
        if system.jacobian is not None:
            J = np.asarray(system.jacobian(x), dtype=float)
        else:
            J = _fd_jacobian(system.residual, x, r)
        A = J.T @ J
        g = J.T @ r
        diag = np.diag(A).copy()
        diag[diag <= 0.0] = max(diag.max(initial=0.0), 1.0) * 1e-12

        # Inner loop: raise damping until a step reduces the residual.
        step_converged = False
        for _ in range(50):
            try:
                delta = np.linalg.solve(A + lam * np.diag(diag), -g)
            except np.linalg.LinAlgError:
                delta, *_ = np.linalg.lstsq(A + lam * np.diag(diag), -g, rcond=None)
            x_new = x + delta
            r_new = np.asarray(system.residual(x_new), dtype=float).ravel()
            norm_new = float(np.linalg.norm(r_new))
            if norm_new < norm:
                if float(np.linalg.norm(delta)) <= config.step_tol * (1.0 + float(np.linalg.norm(x))):
                    step_converged = True
                x, r, norm = x_new, r_new, norm_new
                lam = max(lam / 3.0, 1e-14)
                break
            lam *= 4.0
            if lam > 1e14:
                step_converged = True
                break
        else:
            step_converged = True
        if step_converged:
            break

    return SolveResult(x, norm, norm <= config.residual_tol, iterations)
