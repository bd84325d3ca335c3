"""Seed rules: Gauss tensor products, Duffy lifts, and their composition.

Seeds are built one factor at a time.  Cube directions tensor a Gauss-
Legendre rule onto the running product; a simplex of dimension ``k + 1``
comes from a rule on the ``k``-simplex lifted through the Duffy map
``(xi, y) -> (xi, xi y)``, whose Jacobian ``xi^k`` is absorbed into a
Gauss rule for the weight ``t^k``.  With intermediate elimination on,
the running rule is shrunk before every enlargement step, which keeps
node counts low without touching the final elimination the caller runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corrector import CorrectorConfig
from .domains import DomainSpec, Factor
from .eliminator import eliminate
from .gauss1d import gauss_rule_01
from .moments import MomentSystem
from .rules import CubatureRule

__all__ = [
    "SeedPlan",
    "WeightExponentMismatch",
    "build_seed",
    "default_eliminator",
    "interval_rule",
    "naive_node_count",
    "plan_seed",
    "tensor_product",
    "duffy_lift",
]


class WeightExponentMismatch(Exception):
    """The interval rule's weight exponent does not match the lift dimension."""


def _odd(degree: int) -> int:
    if degree < 1:
        raise ValueError("degree must be >= 1")
    return degree if degree % 2 == 1 else degree + 1


def interval_rule(degree: int) -> CubatureRule:
    """Gauss-Legendre rule on [0, 1] with ``floor(degree/2) + 1`` points."""
    q = degree // 2 + 1
    g = gauss_rule_01(q, 0)
    return CubatureRule(
        DomainSpec((Factor("cube", 1),)), g.degree, g.nodes[:, None], g.weights
    )


def tensor_product(a: CubatureRule, b: CubatureRule) -> CubatureRule:
    """Product rule on the product domain; exact to the smaller degree."""
    na, nb = a.n, b.n
    nodes = np.hstack(
        [np.repeat(a.nodes, nb, axis=0), np.tile(b.nodes, (na, 1))]
    )
    weights = np.repeat(a.weights, nb) * np.tile(b.weights, na)
    domain = DomainSpec(a.domain.factors + b.domain.factors)
    return CubatureRule(domain, min(a.degree, b.degree), nodes, weights)


def _is_simplex(domain: DomainSpec, dim: int) -> bool:
    if len(domain.factors) != 1:
        return False
    f = domain.factors[0]
    if dim == 1:
        return f == Factor("cube", 1)
    return f == Factor("simplex", dim)


def duffy_lift(xi_rule, inner: CubatureRule) -> CubatureRule:
    """Lift a ``k``-simplex rule to the ``(k+1)``-simplex via the Duffy map.

    ``xi_rule`` must be a :class:`~picube.gauss1d.Rule1D` for the weight
    ``t^k``; the lifted nodes are ``(xi_i, xi_i * y_j)`` with multiplied
    weights.
    """
    k = inner.domain.dim
    if not _is_simplex(inner.domain, k):
        raise ValueError(f"inner rule must live on a {k}-simplex, got {inner.domain}")
    if xi_rule.weight_exponent != k:
        raise WeightExponentMismatch(
            f"lift to dimension {k + 1} needs weight exponent {k}, "
            f"got {xi_rule.weight_exponent}"
        )
    nq, ni = xi_rule.n, inner.n
    xi = np.repeat(xi_rule.nodes, ni)
    inner_scaled = np.tile(inner.nodes, (nq, 1)) * xi[:, None]
    nodes = np.hstack([xi[:, None], inner_scaled])
    weights = np.repeat(xi_rule.weights, ni) * np.tile(inner.weights, nq)
    domain = DomainSpec((Factor("simplex", k + 1),))
    return CubatureRule(domain, min(xi_rule.degree, inner.degree), nodes, weights)


def default_eliminator(config: CorrectorConfig | None = None, max_candidates: int | None = None):
    """An eliminator handle for intermediate stages: rule in, smaller rule out."""

    def run(rule: CubatureRule) -> CubatureRule:
        sys = MomentSystem(rule.domain, rule.degree)
        report = eliminate(sys, rule, config=config, max_candidates=max_candidates)
        return report.final_rule

    return run


@dataclass(frozen=True)
class SeedPlan:
    """The construction trace a seed build will follow."""

    domain: DomainSpec
    degree: int
    steps: tuple[str, ...]


def _parts(domain: DomainSpec) -> list[Factor]:
    parts: list[Factor] = []
    for f in domain.factors:
        if f.kind == "cube":
            parts.extend(Factor("cube", 1) for _ in range(f.dim))
        else:
            parts.append(f)
    return parts


def _simplex_steps(k: int, q: int, reduce: bool) -> list[str]:
    steps = [f"gauss q={q} m=0 on C1"]
    for j in range(1, k):
        if reduce and j >= 2:
            steps.append(f"eliminate T{j}")
        steps.append(f"duffy m={j} -> T{j + 1}")
    return steps


def plan_seed(domain: DomainSpec, degree: int, eliminate_intermediate: bool = True) -> SeedPlan:
    """Human-readable trace of the steps :func:`build_seed` will take."""
    p = _odd(degree)
    q = (p + 1) // 2
    steps: list[str] = []
    running: DomainSpec | None = None
    for part in _parts(domain):
        if part.kind == "cube":
            part_steps = [f"gauss q={q} m=0 on C1"]
        else:
            part_steps = _simplex_steps(part.dim, q, eliminate_intermediate)
        if running is None:
            steps.extend(part_steps)
            running = DomainSpec((part,))
        else:
            if eliminate_intermediate and running.dim > 1:
                steps.append(f"eliminate {running.label}")
            steps.extend(part_steps)
            if eliminate_intermediate and part.dim > 1:
                steps.append(f"eliminate {part.label}")
            running = DomainSpec(running.factors + (part,))
            steps.append(f"tensor -> {running.label}")
    assert running is not None
    return SeedPlan(domain, p, tuple(steps))


def build_seed(
    domain: DomainSpec,
    degree: int,
    eliminate_intermediate: bool = True,
    eliminator=None,
) -> CubatureRule:
    """Pre-elimination rule for the domain, exact to ``degree`` (rounded odd).

    ``eliminator`` maps a rule to a smaller one; when omitted and
    intermediate elimination is on, a default full elimination pass is
    used at every intermediate stage.  The returned seed is what the
    final elimination starts from, so no trailing elimination happens
    here.
    """
    p = _odd(degree)
    q = (p + 1) // 2
    if eliminate_intermediate and eliminator is None:
        eliminator = default_eliminator()
    reduce_rule = eliminator if eliminate_intermediate else (lambda r: r)

    def shrink(rule: CubatureRule) -> CubatureRule:
        # 1-D Gauss rules are already optimal; skip the no-op pass.
        if rule.domain.dim == 1:
            return rule
        return reduce_rule(rule)

    def simplex_rule(k: int) -> CubatureRule:
        rule = interval_rule(p)
        for j in range(1, k):
            rule = duffy_lift(gauss_rule_01(q, j), shrink(rule))
        return rule

    acc: CubatureRule | None = None
    for part in _parts(domain):
        part_rule = interval_rule(p) if part.kind == "cube" else simplex_rule(part.dim)
        if acc is None:
            acc = part_rule
        else:
            acc = tensor_product(shrink(acc), shrink(part_rule))
    assert acc is not None
    return acc


def naive_node_count(domain: DomainSpec, degree: int) -> int:
    """Node count of the plain tensor/Duffy product seed: ``q^d``."""
    q = (_odd(degree) + 1) // 2
    return q**domain.dim
