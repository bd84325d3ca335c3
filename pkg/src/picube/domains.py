"""Integration domains built from cube and simplex factors.

A domain is a Cartesian product of factors, each either the unit cube
``[0, 1]^k`` or the ordered simplex ``{0 <= x_k <= ... <= x_1 <= 1}``.
Both are polytopes, so the product carries a linear-inequality
description ``A x <= b`` with one block of rows per factor.  All rows
are scaled to unit Euclidean norm so that slacks ``b - A x`` are
genuine point-to-face distances.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BoundaryContact",
    "DomainSpec",
    "Factor",
    "LinearConstraints",
    "barrier_gradient",
    "boundary_margin",
    "constraints_of",
    "cube",
    "parse_domain",
    "simplex",
]


class BoundaryContact(Exception):
    """A node touched or crossed the boundary where the barrier is undefined."""


@dataclass(frozen=True)
class Factor:
    """One Cartesian factor: a ``kind`` of "cube" or "simplex" and its dimension."""

    kind: str
    dim: int

    def __post_init__(self) -> None:
        if self.kind not in ("cube", "simplex"):
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("factor dimension must be >= 1")

    @property
    def volume(self) -> float:
        if self.kind == "cube":
            return 1.0
        return 1.0 / math.factorial(self.dim)

    @property
    def label(self) -> str:
        return ("C" if self.kind == "cube" else "T") + str(self.dim)


def cube(dim: int) -> Factor:
    return Factor("cube", dim)


def simplex(dim: int) -> Factor:
    return Factor("simplex", dim)


def _canonical(factors) -> tuple[Factor, ...]:
    # A 1-dimensional simplex is the unit interval; adjacent cube factors
    # merge into one block so equal domains compare equal however built.
    merged: list[Factor] = []
    for f in factors:
        if f.kind == "simplex" and f.dim == 1:
            f = Factor("cube", 1)
        if merged and f.kind == "cube" and merged[-1].kind == "cube":
            merged[-1] = Factor("cube", merged[-1].dim + f.dim)
        else:
            merged.append(f)
    return tuple(merged)


@dataclass(frozen=True)
class DomainSpec:
    """A product of cube and simplex factors, canonicalized."""

    factors: tuple[Factor, ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise ValueError("domain needs at least one factor")
        object.__setattr__(self, "factors", _canonical(self.factors))

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors)

    @property
    def volume(self) -> float:
        vol = 1.0
        for f in self.factors:
            vol *= f.volume
        return vol

    @property
    def label(self) -> str:
        return "x".join(f.label for f in self.factors)

    def __str__(self) -> str:
        return self.label


_TOKEN = re.compile(r"^([CTct])([0-9]+)$")


def parse_domain(label: str) -> DomainSpec:
    """Parse a label like ``"T2xC1"`` (case-insensitive) into a DomainSpec."""
    factors = []
    for token in label.split("x"):
        m = _TOKEN.match(token.strip())
        if m is None:
            raise ValueError(f"cannot parse domain token {token!r} in {label!r}")
        kind = "cube" if m.group(1).upper() == "C" else "simplex"
        dim = int(m.group(2))
        if dim < 1:
            raise ValueError(f"bad factor dimension in {label!r}")
        factors.append(Factor(kind, dim))
    return DomainSpec(tuple(factors))


@dataclass(frozen=True)
class LinearConstraints:
    """Face inequalities ``A x <= b`` with unit-norm rows."""

    A: np.ndarray
    b: np.ndarray

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    def slacks(self, x: np.ndarray) -> np.ndarray:
        """Distances ``b - A x`` from each point to each face, shape (npts, rows)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return self.b[None, :] - x @ self.A.T


def _cube_rows(k: int):
    rows, rhs = [], []
    for i in range(k):
        lo = np.zeros(k)
        lo[i] = -1.0
        rows.append(lo)
        rhs.append(0.0)
        hi = np.zeros(k)
        hi[i] = 1.0
        rows.append(hi)
        rhs.append(1.0)
    return rows, rhs


def _simplex_rows(k: int):
    # x_1 <= 1, then the ordering chain x_{i+1} <= x_i, then x_k >= 0.
    rows, rhs = [], []
    top = np.zeros(k)
    top[0] = 1.0
    rows.append(top)
    rhs.append(1.0)
    for i in range(k - 1):
        chain = np.zeros(k)
        chain[i] = -1.0 / math.sqrt(2.0)
        chain[i + 1] = 1.0 / math.sqrt(2.0)
        rows.append(chain)
        rhs.append(0.0)
    bottom = np.zeros(k)
    bottom[k - 1] = -1.0
    rows.append(bottom)
    rhs.append(0.0)
    return rows, rhs


def constraints_of(domain: DomainSpec) -> LinearConstraints:
    """Block-diagonal face description of a product domain."""
    d = domain.dim
    blocks = []
    offset = 0
    for f in domain.factors:
        rows, rhs = (_cube_rows if f.kind == "cube" else _simplex_rows)(f.dim)
        for row, r in zip(rows, rhs):
            full = np.zeros(d)
            full[offset : offset + f.dim] = row
            blocks.append((full, r))
        offset += f.dim
    A = np.array([row for row, _ in blocks])
    b = np.array([r for _, r in blocks])
    A.setflags(write=False)
    b.setflags(write=False)
    return LinearConstraints(A, b)


def _split(z: np.ndarray, d: int):
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or z.size % (d + 1) != 0:
        raise ValueError(f"packed vector length {z.size} is not a multiple of {d + 1}")
    blocks = z.reshape(-1, d + 1)
    return blocks[:, :d], blocks[:, d]


def barrier_gradient(
    z: np.ndarray, constraints: LinearConstraints, skip: int | None = None
) -> np.ndarray:
    """Gradient of the log barrier over faces and weights of a packed iterate.

    The barrier sums ``log(1/(b_l - a_l.x_j))`` over faces plus
    ``log(1/w_j)`` per node; its gradient per node is
    ``sum_l a_l/(b_l - a_l.x_j)`` for the coordinates and ``-1/w_j``
    for the weight.  ``skip`` zeroes one node's block and exempts it
    from the positivity requirement.
    """
    d = constraints.dim
    x, w = _split(z, d)
    n = x.shape[0]
    if skip is not None and not 0 <= skip < n:
        raise ValueError(f"skip index {skip} out of range for {n} nodes")
    slack = constraints.slacks(x)
    active = np.ones(n, dtype=bool)
    if skip is not None:
        active[skip] = False
    if np.any(slack[active] <= 0.0) or np.any(w[active] <= 0.0):
        raise BoundaryContact("barrier gradient requested at a non-interior iterate")
    grad = np.zeros((n, d + 1))
    safe = slack.copy()
    safe[~active] = 1.0  # keep the arithmetic finite on the skipped block
    grad[:, :d] = (1.0 / safe) @ constraints.A
    grad[active, d] = -1.0 / w[active]
    if skip is not None:
        grad[skip] = 0.0
    return grad.reshape(-1)


def boundary_margin(z: np.ndarray, constraints: LinearConstraints) -> float:
    """Smallest face distance or weight over all nodes; <= 0 means not interior.

    Weights count on an equal footing with face distances, so the margin
    is positive exactly when the iterate is strictly inside the feasible
    region with strictly positive weights.
    """
    x, w = _split(z, constraints.dim)
    slack = constraints.slacks(x)
    return float(min(slack.min(), w.min()))
