"""Gauss quadrature on [0, 1] for the monomial weights ``t^m``.

The weight ``t^m`` on the unit interval is the image of the Jacobi
weight ``(1 + u)^m`` under ``u = 2t - 1``, so the recurrence
coefficients of its orthonormal polynomials follow from the classical
Jacobi ones, and nodes and weights come out of the symmetric
tridiagonal eigenproblem (Golub-Welsch).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

__all__ = ["ConvergenceFailure", "Rule1D", "gauss_rule_01", "recurrence_01"]


class ConvergenceFailure(Exception):
    """The tridiagonal eigensolver failed to converge."""


@dataclass(frozen=True)
class Rule1D:
    """A quadrature rule exact for ``\\int_0^1 p(t) t^m dt`` up to ``degree``."""

    nodes: np.ndarray
    weights: np.ndarray
    weight_exponent: int
    degree: int

    @property
    def n(self) -> int:
        return self.nodes.size


def recurrence_01(m: int, count: int):
    """First ``count`` recurrence coefficients for the weight ``t^m`` on [0, 1].

    Returns ``(a, b, mu0)`` for the orthonormal three-term recurrence

        b[k+1] q_{k+1}(t) = (t - a[k]) q_k(t) - b[k] q_{k-1}(t)

    with ``a`` of length ``count``, ``b`` of length ``count`` (``b[0]``
    unused, set to 0) and ``mu0 = int_0^1 t^m dt``.
    """
    if m < 0:
        raise ValueError("weight exponent must be >= 0")
    if count < 1:
        raise ValueError("need at least one coefficient")
    k = np.arange(count, dtype=float)
    # Jacobi (alpha=0, beta=m) on [-1, 1], then mapped to [0, 1].
    with np.errstate(divide="ignore", invalid="ignore"):
        a_jac = np.where(k == 0, m / (m + 2.0), m * m / ((2 * k + m) * (2 * k + m + 2)))
    kk = np.arange(1, count, dtype=float)
    b_jac = 2 * kk * (kk + m) / ((2 * kk + m) * np.sqrt((2 * kk + m) ** 2 - 1.0))
    a = (1.0 + a_jac) / 2.0
    b = np.zeros(count)
    b[1:] = b_jac / 2.0
    return a, b, 1.0 / (m + 1.0)


def gauss_rule_01(q: int, m: int = 0) -> Rule1D:
    """The ``q``-point Gauss rule for weight ``t^m`` on [0, 1], degree ``2q - 1``."""
    if q < 1:
        raise ValueError("need at least one node")
    a, b, mu0 = recurrence_01(m, q)
    if q == 1:
        nodes = np.array([a[0]])
        weights = np.array([mu0])
    else:
        try:
            vals, vecs = eigh_tridiagonal(a, b[1:])
        except np.linalg.LinAlgError as exc:  # pragma: no cover - scipy rarely fails
            raise ConvergenceFailure(f"eigensolver failed for q={q}, m={m}") from exc
        nodes = vals
        weights = mu0 * vecs[0, :] ** 2
    order = np.argsort(nodes)
    nodes = nodes[order]
    weights = weights[order]
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return Rule1D(nodes, weights, m, 2 * q - 1)
