"""Polynomial helpers for the analytic constructions.

Palindromic polynomials (c_j = c_{n-j}) of even degree 2k collapse to degree
k through the substitution y = x + 1/x; roots come back in self-reciprocal
pairs via x^2 - y*x + 1 = 0, which is what turns the printed coefficient
lists into unimodular matrix entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

__all__ = [
    "Polynomial",
    "is_palindromic",
    "palindromic_reduce",
    "palindromic_expand",
    "roots",
    "unimodular_roots_from_reduced",
]

MAX_DEGREE = 64


class NotPalindromic(ValueError):
    pass


class OddDegree(ValueError):
    pass


@dataclass(frozen=True)
class Polynomial:
    """Dense complex coefficients, ascending degree, trailing zeros trimmed."""

    coeffs: tuple

    def __init__(self, coeffs):
        c = [complex(v) for v in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if len(c) - 1 > MAX_DEGREE:
            raise ValueError(f"degree {len(c) - 1} exceeds the supported cap {MAX_DEGREE}")
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"


def is_palindromic(p: Polynomial, tol: float = 1e-10) -> bool:
    c = np.array(p.coeffs)
    scale = np.abs(c).max()
    if scale == 0:
        return True
    return bool(np.all(np.abs(c - c[::-1]) <= tol * scale))


def palindromic_reduce(p: Polynomial) -> Polynomial:
    """Halve the degree of a palindromic p: p(x) = x^k * q(x + 1/x).

    Uses the recurrence S_0 = 2, S_1 = y, S_m = y*S_{m-1} - S_{m-2} for
    x^m + x^{-m} expressed in y.
    """
    if p.degree % 2 != 0:
        raise OddDegree(f"degree {p.degree} is odd")
    if not is_palindromic(p):
        raise NotPalindromic("coefficients are not palindromic")
    k = p.degree // 2
    c = p.coeffs
    q = np.zeros(k + 1, dtype=complex)
    q[0] = c[k]
    s_prev = np.array([2.0 + 0j])  # S_0
    s_cur = np.array([0j, 1.0 + 0j])  # S_1 = y
    for m in range(1, k + 1):
        q[: s_cur.size] += c[k + m] * s_cur
        if m < k:
            s_next = np.zeros(m + 2, dtype=complex)
            s_next[1:] = s_cur  # y * S_m
            s_next[: s_prev.size] -= s_prev
            s_prev, s_cur = s_cur, s_next
    return Polynomial(q)


def palindromic_expand(q: Polynomial) -> Polynomial:
    """Inverse of palindromic_reduce: expand x^k * q(x + 1/x)."""
    k = q.degree
    p = np.zeros(2 * k + 1, dtype=complex)
    for m, a in enumerate(q.coeffs):
        if a == 0:
            continue
        # x^k * (x + 1/x)^m = sum_i C(m, i) x^{k + m - 2i}; shift down so the
        # lowest power x^{k-m} lands at index k - m.
        for i in range(m + 1):
            p[k + m - 2 * i] += a * comb(m, i)
    return Polynomial(p)


def roots(p: Polynomial, tol: float = 1e-8) -> np.ndarray:
    """All complex roots (with multiplicity) via the companion matrix,
    sorted by (real, imag) for determinism.

    Ill-conditioned roots are still returned; callers check residuals
    against tol where it matters.
    """
    if p.degree < 1:
        raise ValueError("constant polynomial has no roots")
    r = np.polynomial.polynomial.polyroots(np.array(p.coeffs))
    order = np.lexsort((r.imag, r.real))
    r = r[order]
    scale = max(abs(c) for c in p.coeffs)
    for root in r:
        bound = tol * (1.0 + abs(root)) ** p.degree * scale
        if abs(p(root)) > bound:
            import warnings

            warnings.warn(f"root {root} has residual {abs(p(root)):.3e} above {bound:.3e}")
    return r


def unimodular_roots_from_reduced(q: Polynomial, imag_tol: float = 1e-9) -> np.ndarray:
    """Unimodular roots x of the palindromic parent of q.

    Each real root y of q with |y| <= 2 lifts to the conjugate pair
    x = y/2 +- i*sqrt(1 - (y/2)^2); only the upper-half representatives are
    returned (conjugates are implied).
    """
    lifted = []
    for y in roots(q):
        if abs(y.imag) > imag_tol or abs(y.real) > 2.0 + imag_tol:
            continue
        half = min(max(y.real / 2.0, -1.0), 1.0)
        lifted.append(complex(half, np.sqrt(max(0.0, 1.0 - half * half))))
    return np.array(lifted)
