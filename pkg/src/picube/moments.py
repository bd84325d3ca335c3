"""Moment-matching residual, Jacobian, and LQ-based Newton components.

For a packed iterate ``z`` holding ``n`` nodes with weights, the moment
residual is ``f(z) = Phi(x) w - b`` where ``Phi`` collects orthonormal
basis values at the nodes and ``b`` their exact integrals.  The Jacobian
is factored as ``J = L Q`` (lower-triangular times orthonormal rows) by
a Householder QR of ``J^T``; the economy form yields the minimum-norm
Newton step and the full form an orthonormal basis of the null space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .basis import Basis, basis_for
from .domains import DomainSpec

__all__ = [
    "LQFactors",
    "MomentSystem",
    "RankDeficient",
    "factor_economy",
    "factor_full",
    "newton_components",
]

RANK_TOL = 1e-12


class RankDeficient(Exception):
    """The moment Jacobian lost row rank at the current iterate."""


class MomentSystem:
    """Residual and Jacobian of the moment equations for (domain, degree)."""

    def __init__(self, domain: DomainSpec, degree: int):
        self.domain = domain
        self.degree = degree
        self.basis: Basis = basis_for(domain, degree)
        self.b = self.basis.moments()

    @property
    def size(self) -> int:
        """Number of moment equations."""
        return self.basis.size

    def _split(self, z: np.ndarray):
        d = self.domain.dim
        z = np.asarray(z, dtype=float).reshape(-1)
        if z.size % (d + 1) != 0:
            raise ValueError("packed vector length does not fit the node block size")
        blocks = z.reshape(-1, d + 1)
        return blocks[:, :d], blocks[:, d]

    def residual(self, z: np.ndarray) -> np.ndarray:
        x, w = self._split(z)
        return self.basis.eval(x).T @ w - self.b

    def jacobian(self, z: np.ndarray) -> np.ndarray:
        x, w = self._split(z)
        n = w.size
        d = self.domain.dim
        phi = self.basis.eval(x)
        grad = self.basis.eval_gradient(x)
        J = np.empty((self.size, n * (d + 1)))
        for k in range(n):
            base = k * (d + 1)
            J[:, base : base + d] = w[k] * grad[k]
            J[:, base + d] = phi[k]
        return J


@dataclass(frozen=True)
class LQFactors:
    """``J = L @ Q`` with ``Q Q^T = I``; ``Qhat`` spans the null space of J."""

    L: np.ndarray
    Q: np.ndarray
    Qhat: np.ndarray | None = None


def _check_rank(L: np.ndarray) -> None:
    diag = np.abs(np.diag(L))
    if diag.size and diag.min() < RANK_TOL * diag.max():
        raise RankDeficient(
            f"triangular factor has diagonal ratio {diag.min():.2e}/{diag.max():.2e}"
        )
    if diag.size and diag.max() == 0.0:
        raise RankDeficient("jacobian is identically zero")


def _signfix(L: np.ndarray, Q: np.ndarray):
    # Make diag(L) >= 0 so the factorization is unique and test-friendly.
    sgn = np.where(np.diag(L) < 0.0, -1.0, 1.0)
    return L * sgn[None, :], Q * sgn[:, None]


def factor_economy(J: np.ndarray) -> LQFactors:
    """Economy LQ of a full-row-rank ``M x N`` Jacobian with ``M <= N``."""
    M, N = J.shape
    if M > N:
        raise ValueError(f"economy LQ needs M <= N, got {M} x {N}")
    Qr, R = np.linalg.qr(J.T, mode="reduced")
    L, Q = _signfix(R.T, Qr.T)
    _check_rank(L)
    return LQFactors(L=L, Q=Q)


def factor_full(J: np.ndarray) -> LQFactors:
    """Full LQ: adds ``Qhat`` whose ``N - M`` rows span the null space of J."""
    M, N = J.shape
    if M > N:
        raise ValueError(f"full LQ needs M <= N, got {M} x {N}")
    Qc, R = np.linalg.qr(J.T, mode="complete")
    L, Q = _signfix(R[:M].T, Qc[:, :M].T)
    _check_rank(L)
    return LQFactors(L=L, Q=Q, Qhat=Qc[:, M:].T.copy())


def newton_components(factors: LQFactors, f: np.ndarray, g: np.ndarray):
    """Minimum-norm Newton step for ``J dz = -f`` and projected barrier step.

    Returns ``(dz_f, dz_g)`` where ``dz_f = -Q^T L^{-1} f`` and ``dz_g``
    is minus the projection of ``g`` onto the null space of ``J``.
    """
    y = solve_triangular(factors.L, f, lower=True)
    dz_f = -factors.Q.T @ y
    dz_g = -(g - factors.Q.T @ (factors.Q @ g))
    return dz_f, dz_g
