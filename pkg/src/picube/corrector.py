"""Newton corrector that returns iterates to the moment manifold.

Each iteration combines the minimum-norm Newton step ``dz_f`` for the
moment residual with a null-space step ``dz_g`` along the negated
barrier gradient, choosing the null-space length ``t`` by the exact line
min-max so the update stays strictly feasible.  When no feasible length
exists the Newton part is damped geometrically and the search repeats.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .domains import LinearConstraints, barrier_gradient
from .lines import Unbounded, build_family, minmax_t
from .moments import MomentSystem, RankDeficient, factor_economy, newton_components

__all__ = ["CorrectorConfig", "CorrectorOutcome", "CorrectorStatus", "correct"]


class CorrectorStatus(enum.Enum):
    CONVERGED = "converged"
    INFEASIBLE = "infeasible"
    STALLED = "stalled"
    RANK_DEFICIENT = "rank_deficient"


@dataclass(frozen=True)
class CorrectorConfig:
    tol: float = 1e-14
    max_iters: int = 15
    damping_factor: float = 0.5
    max_damping_steps: int = 20


@dataclass(frozen=True)
class CorrectorOutcome:
    status: CorrectorStatus
    z: np.ndarray
    iterations: int
    residual_norm: float

    @property
    def converged(self) -> bool:
        return self.status is CorrectorStatus.CONVERGED


def _margin(z: np.ndarray, constraints: LinearConstraints, skip: int | None) -> float:
    d = constraints.dim
    blocks = np.asarray(z, dtype=float).reshape(-1, d + 1)
    keep = np.ones(blocks.shape[0], dtype=bool)
    if skip is not None:
        keep[skip] = False
    slack = constraints.slacks(blocks[keep, :d])
    return float(min(slack.min(), blocks[keep, d].min()))


def correct(
    sys: MomentSystem,
    z0: np.ndarray,
    constraints: LinearConstraints,
    config: CorrectorConfig | None = None,
    skip: int | None = None,
) -> CorrectorOutcome:
    """Drive the moment residual of ``z0`` below tolerance, staying interior.

    ``skip`` freezes one node: its coordinates and weight are carried
    unchanged, it contributes no barrier terms or feasibility lines, and
    it is excluded from the Newton unknowns.  The skipped node is the
    caller's to remove.
    """
    cfg = config or CorrectorConfig()
    z = np.array(z0, dtype=float).reshape(-1)
    d = constraints.dim
    if z.size % (d + 1) != 0:
        raise ValueError("packed vector length does not fit the node block size")
    free = np.ones(z.size, dtype=bool)
    if skip is not None:
        free[skip * (d + 1) : (skip + 1) * (d + 1)] = False
    if _margin(z, constraints, skip) <= 0.0:
        f = sys.residual(z)
        return CorrectorOutcome(CorrectorStatus.INFEASIBLE, z, 0, float(np.linalg.norm(f)))

    M = sys.size
    iterations = 0
    for _ in range(cfg.max_iters):
        f = sys.residual(z)
        norm_f = float(np.linalg.norm(f))
        if norm_f <= cfg.tol:
            return CorrectorOutcome(CorrectorStatus.CONVERGED, z, iterations, norm_f)
        g = barrier_gradient(z, constraints, skip)
        J = sys.jacobian(z)[:, free]
        dz_f = np.zeros(z.size)
        dz_g = np.zeros(z.size)
        if M <= J.shape[1]:
            try:
                factors = factor_economy(J)
            except RankDeficient:
                return CorrectorOutcome(CorrectorStatus.RANK_DEFICIENT, z, iterations, norm_f)
            df, dg = newton_components(factors, f, g[free])
            dz_f[free] = df
            if M < J.shape[1]:
                # A square system has no null space; rounding noise in dg
                # would otherwise be amplified by the line search.
                dz_g[free] = dg
        else:
            # More equations than unknowns: plain least squares, no null space.
            dz_f[free] = np.linalg.lstsq(J, -f, rcond=None)[0]

        scale = 1.0
        accepted = False
        for _ in range(cfg.max_damping_steps + 1):
            family = build_family(z, scale * dz_f, dz_g, constraints, exclude_node=skip)
            try:
                t, value = minmax_t(family)
            except Unbounded:
                t, value = 0.0, np.inf
            if value < 0.0:
                accepted = True
                break
            scale *= cfg.damping_factor
        if not accepted:
            return CorrectorOutcome(CorrectorStatus.INFEASIBLE, z, iterations, norm_f)
        z = z + scale * dz_f + t * dz_g
        iterations += 1

    norm_f = float(np.linalg.norm(sys.residual(z)))
    status = CorrectorStatus.CONVERGED if norm_f <= cfg.tol else CorrectorStatus.STALLED
    return CorrectorOutcome(status, z, iterations, norm_f)
