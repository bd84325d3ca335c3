"""Orthonormal polynomial bases on cube/simplex product domains.

Cube directions carry shifted Legendre polynomials.  Each simplex factor
carries a Koornwinder-type basis built recursively in collapsed (Duffy)
coordinates: peeling off the outermost ordered coordinate ``x_1`` of
``{0 <= x_k <= ... <= x_1 <= 1}`` leaves a copy of the lower simplex
scaled by ``x_1``, so the basis member for the level-degree tuple
``(n_1, ..., n_k)`` is a product of Jacobi-weight polynomials

    q_{n_i}^{(m_i)}(x_i / x_{i-1}) * x_{i-1}^{n_i},   m_i = 2 r_i + k - i,

where ``r_i`` is the total degree carried by the deeper levels and
``q^{(m)}`` is orthonormal for the weight ``t^m`` on [0, 1].  The scaled
form is evaluated through a homogenized three-term recurrence that never
divides by a coordinate, so values and gradients stay finite on the
whole closed domain.

A product domain takes the tensor products of its factor bases truncated
to total degree ``p``, ordered by total degree then lexicographically by
the concatenated index tuple.  The first member is the constant
``1/sqrt(vol)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domains import DomainSpec
from .gauss1d import recurrence_01

__all__ = ["Basis", "basis_for", "monomial_moment"]


def _scaled_tables(t: np.ndarray, s: np.ndarray, m: int, nmax: int):
    """Tables of ``Q_n(t, s) = s^n q_n(t/s)`` with q_n orthonormal for ``t^m``.

    Returns ``(Q, Qt, Qs)``, each of shape ``(nmax + 1, len(t))``, holding
    values and partial derivatives with respect to ``t`` and ``s``.  The
    recurrence multiplies through by powers of ``s``, so ``s = 0`` is fine.
    """
    a, b, mu0 = recurrence_01(m, nmax + 1)
    npts = t.shape[0]
    Q = np.zeros((nmax + 1, npts))
    Qt = np.zeros((nmax + 1, npts))
    Qs = np.zeros((nmax + 1, npts))
    Q[0] = 1.0 / math.sqrt(mu0)
    if nmax >= 1:
        Q[1] = (t - a[0] * s) * Q[0] / b[1]
        Qt[1] = Q[0] / b[1]
        Qs[1] = -a[0] * Q[0] / b[1]
    for n in range(1, nmax):
        c = t - a[n] * s
        s2 = s * s
        Q[n + 1] = (c * Q[n] - b[n] * s2 * Q[n - 1]) / b[n + 1]
        Qt[n + 1] = (Q[n] + c * Qt[n] - b[n] * s2 * Qt[n - 1]) / b[n + 1]
        Qs[n + 1] = (
            -a[n] * Q[n] + c * Qs[n] - b[n] * (2.0 * s * Q[n - 1] + s2 * Qs[n - 1])
        ) / b[n + 1]
    return Q, Qt, Qs


def _graded(indices):
    return sorted(indices, key=lambda t: (sum(t), t))


def _simplex_indices(k: int, p: int):
    if k == 0:
        return [()]
    shorter = _simplex_indices(k - 1, p)
    out = []
    for head in range(p + 1):
        for tail in shorter:
            if head + sum(tail) <= p:
                out.append((head,) + tail)
    return _graded(out)


class _CubeAtom:
    """One cube direction: shifted Legendre values and derivatives."""

    dim = 1

    def __init__(self, p: int):
        self.p = p
        self.indices = [(n,) for n in range(p + 1)]

    def tables(self, x: np.ndarray):
        t = x[:, 0]
        Q, Qt, _ = _scaled_tables(t, np.ones_like(t), 0, self.p)
        return Q.T.copy(), Qt.T[:, :, None].copy()


class _SimplexAtom:
    """One ordered-simplex factor of dimension ``k``."""

    def __init__(self, k: int, p: int):
        self.dim = k
        self.p = p
        self.indices = _simplex_indices(k, p)

    def tables(self, x: np.ndarray):
        k, p = self.dim, self.p
        npts = x.shape[0]
        tabs = {}
        for level in range(k):
            t = x[:, level]
            s = x[:, level - 1] if level > 0 else np.ones(npts)
            for r in range(p + 1):
                m = 2 * r + (k - 1 - level)
                tabs[level, r] = _scaled_tables(t, s, m, p - r)
        V = np.empty((npts, len(self.indices)))
        G = np.empty((npts, len(self.indices), k))
        for col, alpha in enumerate(self.indices):
            suffix = [sum(alpha[i + 1 :]) for i in range(k)]
            levels = [tabs[i, suffix[i]][0][alpha[i]] for i in range(k)]
            pre = [np.ones(npts)]
            for i in range(k - 1):
                pre.append(pre[-1] * levels[i])
            suf = [np.ones(npts) for _ in range(k)]
            for i in range(k - 2, -1, -1):
                suf[i] = suf[i + 1] * levels[i + 1]
            V[:, col] = pre[k - 1] * levels[k - 1]
            for j in range(k):
                dt = tabs[j, suffix[j]][1][alpha[j]]
                g = dt * pre[j] * suf[j]
                if j + 1 < k:
                    # x_j also scales the next level, so its Qs term contributes.
                    ds = tabs[j + 1, suffix[j + 1]][2][alpha[j + 1]]
                    g = g + ds * pre[j + 1] * suf[j + 1]
                G[:, col, j] = g
        return V, G


@dataclass
class Basis:
    """Orthonormal basis of polynomials of total degree <= ``degree``."""

    domain: DomainSpec
    degree: int
    indices: list[tuple[int, ...]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise ValueError("degree must be >= 0")
        self._atoms = []
        offset = 0
        for f in self.domain.factors:
            if f.kind == "cube":
                for _ in range(f.dim):
                    self._atoms.append((offset, _CubeAtom(self.degree)))
                    offset += 1
            else:
                self._atoms.append((offset, _SimplexAtom(f.dim, self.degree)))
                offset += f.dim
        self.indices = self._combine()

    def _combine(self):
        combos = [((), 0)]
        for _, atom in self._atoms:
            nxt = []
            for prefix, deg in combos:
                for idx in atom.indices:
                    total = deg + sum(idx)
                    if total <= self.degree:
                        nxt.append((prefix + idx, total))
            combos = nxt
        return _graded([c for c, _ in combos])

    @property
    def size(self) -> int:
        return len(self.indices)

    def _prepare(self, points: np.ndarray):
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if pts.shape[1] != self.domain.dim:
            raise ValueError(
                f"points have dimension {pts.shape[1]}, domain needs {self.domain.dim}"
            )
        return pts, single

    def _atom_columns(self):
        # Map each combined index to the per-atom column numbers.
        cols = []
        pos = 0
        for _, atom in self._atoms:
            lookup = {idx: i for i, idx in enumerate(atom.indices)}
            width = atom.dim
            cols.append(
                np.array([lookup[c[pos : pos + width]] for c in self.indices])
            )
            pos += width
        return cols

    def eval(self, points: np.ndarray) -> np.ndarray:
        """Basis values; shape ``(npts, size)`` or ``(size,)`` for one point."""
        pts, single = self._prepare(points)
        cols = self._atom_columns()
        out = np.ones((pts.shape[0], self.size))
        for (offset, atom), col in zip(self._atoms, cols):
            V, _ = atom.tables(pts[:, offset : offset + atom.dim])
            out *= V[:, col]
        return out[0] if single else out

    def eval_gradient(self, points: np.ndarray) -> np.ndarray:
        """Basis gradients; shape ``(npts, size, d)`` or ``(size, d)``."""
        pts, single = self._prepare(points)
        cols = self._atom_columns()
        npts = pts.shape[0]
        values = []
        grads = []
        for (offset, atom), col in zip(self._atoms, cols):
            V, G = atom.tables(pts[:, offset : offset + atom.dim])
            values.append(V[:, col])
            grads.append(G[:, col, :])
        r = len(self._atoms)
        pre = [np.ones((npts, self.size))]
        for i in range(r - 1):
            pre.append(pre[-1] * values[i])
        suf = [np.ones((npts, self.size)) for _ in range(r)]
        for i in range(r - 2, -1, -1):
            suf[i] = suf[i + 1] * values[i + 1]
        out = np.empty((npts, self.size, self.domain.dim))
        for i, (offset, atom) in enumerate(self._atoms):
            excl = pre[i] * suf[i]
            out[:, :, offset : offset + atom.dim] = grads[i] * excl[:, :, None]
        return out[0] if single else out

    def moments(self) -> np.ndarray:
        """Exact integrals of the basis members: ``(sqrt(vol), 0, ..., 0)``."""
        b = np.zeros(self.size)
        b[0] = math.sqrt(self.domain.volume)
        return b


def basis_for(domain: DomainSpec, degree: int) -> Basis:
    return Basis(domain, degree)


def monomial_moment(domain: DomainSpec, alpha) -> float:
    """Exact integral of the monomial ``x^alpha`` over the domain.

    Cube directions contribute ``1/(alpha_i + 1)``; an ordered simplex of
    dimension ``k`` contributes the product over its coordinates of
    ``1/(suffix_sum_i + k - i)`` where ``suffix_sum_i`` sums the trailing
    exponents from position ``i`` on (0-based).
    """
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != domain.dim:
        raise ValueError("exponent tuple does not match domain dimension")
    if any(a < 0 for a in alpha):
        raise ValueError("exponents must be >= 0")
    value = 1.0
    pos = 0
    for f in domain.factors:
        part = alpha[pos : pos + f.dim]
        if f.kind == "cube":
            for a in part:
                value /= a + 1.0
        else:
            k = f.dim
            for i in range(k):
                value /= sum(part[i:]) + (k - i)
        pos += f.dim
    return value
