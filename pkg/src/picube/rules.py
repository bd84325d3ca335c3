"""Cubature rules: containers, packing, application and verification."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import basis_for
from .domains import DomainSpec, boundary_margin, constraints_of

__all__ = [
    "CubatureRule",
    "DimensionMismatch",
    "VerifyReport",
    "apply_rule",
    "efficiency",
    "optimal_node_count",
    "pack",
    "rule_margin",
    "unpack",
    "verify",
]


class DimensionMismatch(Exception):
    """Packed-vector length does not match the node block size."""


@dataclass(frozen=True)
class CubatureRule:
    """Nodes (n, d) and weights (n,) for a domain, exact up to ``degree``."""

    domain: DomainSpec
    degree: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        nodes = np.atleast_2d(np.asarray(self.nodes, dtype=float))
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if nodes.shape[0] != weights.shape[0]:
            raise ValueError("node and weight counts differ")
        if nodes.shape[1] != self.domain.dim:
            raise ValueError(
                f"nodes have dimension {nodes.shape[1]}, domain needs {self.domain.dim}"
            )
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self) -> int:
        return self.weights.size


def apply_rule(rule: CubatureRule, f) -> float:
    """Approximate ``int_domain f`` as ``sum_j w_j f(x_j)``.

    ``f`` is called once with the full (n, d) node array and must return
    per-node values.
    """
    vals = np.asarray(f(rule.nodes), dtype=float).reshape(-1)
    if vals.size != rule.n:
        raise ValueError("integrand returned a wrong-sized value array")
    return float(rule.weights @ vals)


def pack(rule: CubatureRule) -> np.ndarray:
    """Interleave nodes and weights: block j holds ``(x_j, w_j)``."""
    return np.hstack([rule.nodes, rule.weights[:, None]]).reshape(-1)


def unpack(z: np.ndarray, domain: DomainSpec, degree: int) -> CubatureRule:
    """Inverse of :func:`pack`.  Does not check weight signs or interiority."""
    z = np.asarray(z, dtype=float).reshape(-1)
    d = domain.dim
    if z.size == 0 or z.size % (d + 1) != 0:
        raise DimensionMismatch(
            f"packed length {z.size} is not a positive multiple of {d + 1}"
        )
    blocks = z.reshape(-1, d + 1)
    return CubatureRule(domain, degree, blocks[:, :d].copy(), blocks[:, d].copy())


@dataclass(frozen=True)
class VerifyReport:
    residual_norm: float
    moment_scale: float
    max_weight_violation: float
    max_constraint_violation: float
    min_weight: float
    min_slack: float
    weight_sum_error: float

    @property
    def margin(self) -> float:
        return min(self.min_weight, self.min_slack)

    @property
    def relative_residual(self) -> float:
        return self.residual_norm / self.moment_scale

    def passes(self, tol: float = 1e-12) -> bool:
        """PI quality plus moment residual below ``tol`` relative to ||b||."""
        return (
            self.max_weight_violation == 0.0
            and self.max_constraint_violation == 0.0
            and self.min_weight > 0.0
            and self.min_slack > 0.0
            and self.relative_residual <= tol
        )


def verify(rule: CubatureRule, degree: int | None = None) -> VerifyReport:
    """Moment residual and positivity/interiority diagnostics for a rule."""
    p = rule.degree if degree is None else degree
    basis = basis_for(rule.domain, p)
    cons = constraints_of(rule.domain)
    phi = basis.eval(rule.nodes)
    residual = phi.T @ rule.weights - basis.moments()
    slack = cons.slacks(rule.nodes)
    min_slack = float(slack.min())
    min_weight = float(rule.weights.min())
    return VerifyReport(
        residual_norm=float(np.linalg.norm(residual)),
        moment_scale=float(np.linalg.norm(basis.moments())),
        max_weight_violation=max(0.0, -min_weight),
        max_constraint_violation=max(0.0, -min_slack),
        min_weight=min_weight,
        min_slack=min_slack,
        weight_sum_error=float(abs(rule.weights.sum() - rule.domain.volume)),
    )


def rule_margin(rule: CubatureRule) -> float:
    """Boundary margin of the rule's packed iterate."""
    return boundary_margin(pack(rule), constraints_of(rule.domain))


def optimal_node_count(domain: DomainSpec, degree: int) -> int:
    """Smallest n for which (d+1)n unknowns can match all moments.

    The moment system has ``C(degree + d, d)`` equations and ``d + 1``
    unknowns per node, so the count is the ceiling of their ratio.
    """
    d = domain.dim
    m = math.comb(degree + d, d)
    return -(-m // (d + 1))


def efficiency(domain: DomainSpec, degree: int, n: int) -> float:
    """Ratio of the optimal count to an achieved count (1.0 is optimal)."""
    if n < 1:
        raise ValueError("need at least one node")
    return optimal_node_count(domain, degree) / n
