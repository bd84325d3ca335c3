"""Node elimination: null-space predictors plus corrector, one node at a time.

At a converged iterate the full LQ factorization supplies an orthonormal
null-space basis ``Qhat`` of the moment Jacobian.  Writing candidate
steps as ``dz = Qhat^T dy`` keeps the residual zero to first order; the
column ``m_k`` of ``Qhat`` belonging to node ``k``'s weight determines
the cheapest tangent move that cancels that weight, and the remaining
null directions follow the negated barrier gradient to stay clear of
the boundary.  Each feasible candidate is corrected after deleting the
node; among the corrections that converge, the rule with the largest
boundary margin wins.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np

from .corrector import CorrectorConfig, CorrectorStatus, correct
from .domains import LinearConstraints, barrier_gradient, boundary_margin, constraints_of
from .lines import Unbounded, build_family, minmax_t
from .moments import MomentSystem, RankDeficient, factor_full
from .rules import CubatureRule, optimal_node_count, pack, unpack

__all__ = [
    "EliminationReport",
    "EliminationStep",
    "PredictorCandidate",
    "StopReason",
    "eliminate",
    "predictors",
]

log = logging.getLogger(__name__)

DEGENERATE_TOL = 1e-12
DEFAULT_MAX_CANDIDATES = 16


class StopReason(enum.Enum):
    REACHED_OPTIMAL = "reached_optimal"
    NO_FEASIBLE_PREDICTOR = "no_feasible_predictor"
    ALL_CANDIDATES_FAILED = "all_candidates_failed"


@dataclass(frozen=True)
class PredictorCandidate:
    """A proposed tangent step that zeroes node ``node``'s weight."""

    node: int
    dz: np.ndarray
    t: float
    envelope_value: float
    feasible: bool
    step_norm: float
    predicted_z: np.ndarray


@dataclass(frozen=True)
class EliminationStep:
    n_before: int
    attempted: tuple[int, ...]
    winner: int
    corrector_iterations: int
    residual_norm: float
    margin: float
    rule: CubatureRule


@dataclass(frozen=True)
class EliminationReport:
    final_rule: CubatureRule
    stop_reason: StopReason
    steps: tuple[EliminationStep, ...]

    @property
    def n_final(self) -> int:
        return self.final_rule.n


def predictors(
    sys: MomentSystem,
    z: np.ndarray,
    constraints: LinearConstraints,
) -> list[PredictorCandidate]:
    """Tangent elimination candidates for every node of a converged iterate.

    Nodes whose weight direction is degenerate in the null space are
    skipped.  Candidates carry their exact feasibility envelope value;
    callers filter on ``feasible``.
    """
    d = constraints.dim
    z = np.asarray(z, dtype=float).reshape(-1)
    n = z.size // (d + 1)
    factors = factor_full(sys.jacobian(z))
    qhat = factors.Qhat
    if qhat is None or qhat.shape[0] == 0:
        return []
    col_scale = float(np.linalg.norm(qhat, axis=0).max())
    weights = z.reshape(-1, d + 1)[:, d]
    out: list[PredictorCandidate] = []
    for k in range(n):
        m_k = qhat[:, k * (d + 1) + d]
        norm2 = float(m_k @ m_k)
        if np.sqrt(norm2) <= DEGENERATE_TOL * col_scale:
            log.debug("predictor node=%d degenerate weight direction", k)
            continue
        dy_f = -m_k * (weights[k] / norm2)
        g_hat = qhat @ barrier_gradient(z, constraints, skip=k)
        dy_g = -(g_hat - m_k * ((m_k @ g_hat) / norm2))
        dz_f = qhat.T @ dy_f
        dz_g = qhat.T @ dy_g
        family = build_family(z, dz_f, dz_g, constraints, exclude_node=k)
        try:
            t, value = minmax_t(family)
        except Unbounded:
            t, value = 0.0, np.inf
        dz = dz_f + t * dz_g
        out.append(
            PredictorCandidate(
                node=k,
                dz=dz,
                t=t,
                envelope_value=value,
                feasible=bool(value < 0.0),
                step_norm=float(np.linalg.norm(dz)),
                predicted_z=z + dz,
            )
        )
    return out


def _drop_node(z: np.ndarray, node: int, d: int) -> np.ndarray:
    blocks = z.reshape(-1, d + 1)
    return np.delete(blocks, node, axis=0).reshape(-1)


def eliminate(
    sys: MomentSystem,
    seed: CubatureRule,
    constraints: LinearConstraints | None = None,
    config: CorrectorConfig | None = None,
    max_candidates: int | None = None,
) -> EliminationReport:
    """Shrink a rule node by node until the optimal count or a dead end.

    Feasible predictor candidates are tried in order of increasing step
    norm, up to ``max_candidates`` (default ``min(n, 16)``) per step; all
    are corrected and the converged result with the greatest boundary
    margin is kept, ties resolved toward the lowest node index.
    """
    domain = seed.domain
    cons = constraints if constraints is not None else constraints_of(domain)
    cfg = config or CorrectorConfig()
    n_opt = optimal_node_count(domain, seed.degree)
    d = domain.dim
    rule = seed
    steps: list[EliminationStep] = []

    while True:
        n = rule.n
        if n <= n_opt:
            return EliminationReport(rule, StopReason.REACHED_OPTIMAL, tuple(steps))
        z = pack(rule)
        try:
            candidates = predictors(sys, z, cons)
        except RankDeficient:
            log.warning("elimination stopped: jacobian rank-deficient at n=%d", n)
            return EliminationReport(rule, StopReason.ALL_CANDIDATES_FAILED, tuple(steps))
        feasible = sorted(
            (c for c in candidates if c.feasible), key=lambda c: (c.step_norm, c.node)
        )
        if not feasible:
            return EliminationReport(rule, StopReason.NO_FEASIBLE_PREDICTOR, tuple(steps))
        k_max = min(n, DEFAULT_MAX_CANDIDATES) if max_candidates is None else max_candidates
        attempted = []
        survivors = []
        for cand in feasible[:k_max]:
            attempted.append(cand.node)
            z_reduced = _drop_node(cand.predicted_z, cand.node, d)
            outcome = correct(sys, z_reduced, cons, cfg)
            margin = (
                boundary_margin(outcome.z, cons)
                if outcome.status is CorrectorStatus.CONVERGED
                else float("-inf")
            )
            log.info(
                "step=%d n=%d candidate=%d status=%s residual=%.3e margin=%.3e",
                len(steps),
                n,
                cand.node,
                outcome.status.value,
                outcome.residual_norm,
                margin,
            )
            if outcome.status is CorrectorStatus.CONVERGED and margin > 0.0:
                survivors.append((margin, cand.node, outcome))
        if not survivors:
            return EliminationReport(rule, StopReason.ALL_CANDIDATES_FAILED, tuple(steps))
        margin, node, best = max(survivors, key=lambda s: (s[0], -s[1]))
        rule = unpack(best.z, domain, seed.degree)
        steps.append(
            EliminationStep(
                n_before=n,
                attempted=tuple(attempted),
                winner=node,
                corrector_iterations=best.iterations,
                residual_norm=best.residual_norm,
                margin=margin,
                rule=rule,
            )
        )
