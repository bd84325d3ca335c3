"""Shared test utilities: interior iterates and polynomial exactness checks."""

from __future__ import annotations

import itertools

import numpy as np

from picube import CubatureRule, DomainSpec, apply_rule, monomial_moment, pack


def interior_points(domain: DomainSpec, rng: np.random.Generator, count: int) -> np.ndarray:
    """Strictly interior points: box samples, sorted per simplex factor."""
    pts = rng.uniform(0.08, 0.92, size=(count, domain.dim))
    pos = 0
    for f in domain.factors:
        if f.kind == "simplex":
            block = pts[:, pos : pos + f.dim]
            pts[:, pos : pos + f.dim] = -np.sort(-block, axis=1)
        pos += f.dim
    return pts


def interior_iterate(domain: DomainSpec, rng: np.random.Generator, n: int) -> np.ndarray:
    """Packed iterate with interior nodes and weights in [0.1, 1)."""
    nodes = interior_points(domain, rng, n)
    weights = rng.uniform(0.1, 1.0, size=n)
    rule = CubatureRule(domain, 1, nodes, weights)
    return pack(rule)


def exponents_up_to(domain: DomainSpec, degree: int) -> list[tuple[int, ...]]:
    d = domain.dim
    return [
        alpha
        for alpha in itertools.product(range(degree + 1), repeat=d)
        if sum(alpha) <= degree
    ]


def random_poly_relative_error(
    rule: CubatureRule, rng: np.random.Generator, count: int = 200, degree: int | None = None
) -> float:
    """Worst relative quadrature error over random degree-p polynomials.

    Each polynomial has iid uniform [-1, 1] coefficients on the monomials
    of total degree <= p; the error is normalized by sum |c_a| m_a so a
    cancellation-heavy exact value cannot inflate the ratio.
    """
    p = rule.degree if degree is None else degree
    alphas = exponents_up_to(rule.domain, p)
    moments = np.array([monomial_moment(rule.domain, a) for a in alphas])
    # monomial values at the nodes, one column per exponent tuple
    X = np.ones((rule.n, len(alphas)))
    for j, alpha in enumerate(alphas):
        for i, a in enumerate(alpha):
            if a:
                X[:, j] *= rule.nodes[:, i] ** a
    quad = rule.weights @ X
    worst = 0.0
    for _ in range(count):
        c = rng.uniform(-1.0, 1.0, size=len(alphas))
        err = abs(float(quad @ c) - float(moments @ c))
        scale = float(np.abs(c) @ moments)
        worst = max(worst, err / scale)
    return worst


def monomial_integrand(alpha):
    def f(nodes: np.ndarray) -> np.ndarray:
        out = np.ones(nodes.shape[0])
        for i, a in enumerate(alpha):
            if a:
                out *= nodes[:, i] ** a
        return out

    return f


def quadrature_moment(rule: CubatureRule, alpha) -> float:
    return apply_rule(rule, monomial_integrand(alpha))
