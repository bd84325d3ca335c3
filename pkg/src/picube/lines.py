"""Exact min-max over a family of lines along the null-space step length.

Moving a feasible iterate by ``dz_f + t dz_g`` changes each face slack
and each weight affinely in ``t``, so feasibility of the whole update is
``max_k (beta_k + t alpha_k) < 0`` over one line per (node, face) pair
and one per weight, with ``beta`` the negated slack after the fixed part
of the step and ``alpha`` the rate along the null-space part.  The
minimizer of the max is found by walking the upper envelope from the
``t = 0`` leader downhill to the first upward intersection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domains import LinearConstraints

__all__ = ["LineFamily", "Unbounded", "build_family", "minmax_t"]

T_MAX = 1e6


class Unbounded(Exception):
    """Every line decreases forever; the min-max has no finite minimizer."""


@dataclass(frozen=True)
class LineFamily:
    """Lines ``m_k(t) = beta_k + t alpha_k``; all <= 0 means feasible."""

    beta: np.ndarray
    alpha: np.ndarray

    def __post_init__(self) -> None:
        beta = np.asarray(self.beta, dtype=float).reshape(-1)
        alpha = np.asarray(self.alpha, dtype=float).reshape(-1)
        if beta.size != alpha.size:
            raise ValueError("beta and alpha must have equal length")
        if beta.size == 0:
            raise ValueError("need at least one line")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "alpha", alpha)

    @property
    def n_lines(self) -> int:
        return self.beta.size

    def envelope(self, t) -> np.ndarray:
        """Upper envelope value(s) at ``t`` (scalar or array)."""
        t = np.asarray(t, dtype=float)
        return (self.beta[:, None] + np.outer(self.alpha, t.reshape(-1))).max(axis=0).reshape(t.shape)


def build_family(
    z: np.ndarray,
    dz_f: np.ndarray,
    dz_g: np.ndarray,
    constraints: LinearConstraints,
    exclude_node: int | None = None,
) -> LineFamily:
    """Feasibility lines for the update ``z + dz_f + t dz_g``.

    Face lines carry ``beta = a.(x + dx_f) - b`` (negated slack after the
    fixed step) and ``alpha = a.dx_g``; weight lines carry
    ``beta = -(w + dw_f)`` and ``alpha = -dw_g``.  ``exclude_node`` drops
    all lines belonging to one node (used when that node is being removed).
    """
    d = constraints.dim
    blocks = np.asarray(z, dtype=float).reshape(-1, d + 1)
    fb = np.asarray(dz_f, dtype=float).reshape(-1, d + 1)
    gb = np.asarray(dz_g, dtype=float).reshape(-1, d + 1)
    x, w = blocks[:, :d], blocks[:, d]
    shifted = x + fb[:, :d]
    beta_faces = shifted @ constraints.A.T - constraints.b[None, :]
    alpha_faces = gb[:, :d] @ constraints.A.T
    beta_w = -(w + fb[:, d])
    alpha_w = -gb[:, d]
    beta = np.hstack([beta_faces, beta_w[:, None]])
    alpha = np.hstack([alpha_faces, alpha_w[:, None]])
    if exclude_node is not None:
        keep = np.ones(len(w), dtype=bool)
        keep[exclude_node] = False
        beta = beta[keep]
        alpha = alpha[keep]
    return LineFamily(beta.reshape(-1), alpha.reshape(-1))


def _leader(beta: np.ndarray, alpha: np.ndarray, t: float) -> int:
    vals = beta + t * alpha
    vmax = vals.max()
    tol = 1e-13 * max(1.0, abs(vmax))
    tied = np.flatnonzero(vals >= vmax - tol)
    # Ties go to the steepest line; equal slopes to the larger intercept.
    order = np.lexsort((beta[tied], alpha[tied]))
    return int(tied[order[-1]])


def minmax_t(family: LineFamily, t_max: float = T_MAX):
    """Minimize ``max_k (beta_k + t alpha_k)`` over ``t >= 0``.

    Returns ``(t, value)``.  The walk visits each line at most once since
    leader slopes strictly increase, so the cost is linear in the number
    of envelope segments after the initial leader scan.
    """
    beta, alpha = family.beta, family.alpha
    t = 0.0
    k = _leader(beta, alpha, t)
    while alpha[k] < 0.0:
        steeper = np.flatnonzero(alpha > alpha[k])
        if steeper.size == 0:
            raise Unbounded("all lines decrease without bound")
        tcross = (beta[steeper] - beta[k]) / (alpha[k] - alpha[steeper])
        ahead = tcross[tcross > t]
        if ahead.size == 0:
            # Steeper lines exist but already crossed: numerically degenerate
            # tie at the current point; the envelope cannot drop further.
            break
        tstar = float(ahead.min())
        if tstar > t_max:
            t = t_max
            break
        t = tstar
        k = _leader(beta, alpha, t)
    value = float((beta + t * alpha).max())
    return t, value
