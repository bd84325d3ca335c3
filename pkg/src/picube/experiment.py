"""Accuracy experiments: sampled exponential integrands against references.

The test integrand is ``f_a(x) = (exp(a.x) - 1)/(a.x)``, entire in
``a.x`` and therefore well approximated by Gauss-type rules of growing
degree.  Directions ``a`` are drawn once per run from the scaled
hypercube ``[-amp, amp]^d / sqrt(d)`` with a counter-based generator, so
every family and degree sees the same samples and reruns reproduce the
same CSV bit for bit.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass

import numpy as np

from .domains import DomainSpec
from .rules import CubatureRule
from .seeds import build_seed, naive_node_count

__all__ = [
    "ExperimentConfig",
    "ExperimentRow",
    "NoConvergence",
    "integrand_values",
    "read_csv",
    "reference_value",
    "reference_values",
    "run_experiment",
    "sample_directions",
    "write_csv",
]

SERIES_CUTOFF = 1e-6
_SERIES = (1.0, 1 / 2.0, 1 / 6.0, 1 / 24.0, 1 / 120.0, 1 / 720.0)
MAX_REFERENCE_DEGREE = 200


class NoConvergence(Exception):
    """Reference quadrature failed to settle below the requested tolerance."""


@dataclass(frozen=True)
class ExperimentConfig:
    domain: DomainSpec
    degrees: tuple[int, ...]
    samples: int = 1000
    seed: int = 20240813
    amplitude: float = 25.0

    def __post_init__(self) -> None:
        if not self.degrees:
            raise ValueError("need at least one degree")
        if any(p < 1 or p % 2 == 0 for p in self.degrees):
            raise ValueError("experiment degrees must be odd and >= 1")
        if self.samples < 1:
            raise ValueError("need at least one sample")


@dataclass(frozen=True)
class ExperimentRow:
    family: str
    degree: int
    n_points: int
    max_abs_error: float
    max_abs_reference: float


def integrand_values(u: np.ndarray) -> np.ndarray:
    """``(exp(u) - 1)/u`` elementwise, with a 6-term series below 1e-6."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < SERIES_CUTOFF
    safe = np.where(small, 1.0, u)
    out = np.expm1(safe) / safe
    series = np.zeros_like(u)
    for c in reversed(_SERIES):
        series = series * u + c
    return np.where(small, series, out)


def sample_directions(config: ExperimentConfig) -> np.ndarray:
    """The (samples, d) direction matrix shared by all families and degrees."""
    rng = np.random.Generator(np.random.Philox(config.seed))
    d = config.domain.dim
    box = rng.uniform(-config.amplitude, config.amplitude, size=(config.samples, d))
    return box / math.sqrt(d)


def _apply_batch(rule: CubatureRule, A: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Rule values of ``f_a`` for every row ``a`` of A."""
    out = np.empty(A.shape[0])
    for lo in range(0, A.shape[0], chunk):
        hi = min(lo + chunk, A.shape[0])
        U = rule.nodes @ A[lo:hi].T
        out[lo:hi] = rule.weights @ integrand_values(U)
    return out


def reference_values(
    domain: DomainSpec,
    A: np.ndarray,
    start_degree: int,
    rtol: float = 1e-13,
    max_degree: int = MAX_REFERENCE_DEGREE,
) -> np.ndarray:
    """Converged reference integrals of ``f_a`` for every direction row.

    Plain tensor/Duffy rules of degree ``D`` and ``D + 10`` are compared
    and accepted once they agree to ``rtol`` relatively; otherwise ``D``
    grows by tens up to ``max_degree``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    D = max(3, start_degree) | 1  # odd
    current = _apply_batch(_plain_rule(domain, D), A)
    while True:
        nxt = _apply_batch(_plain_rule(domain, D + 10), A)
        scale = np.maximum(np.abs(current), np.abs(nxt))
        ok = np.abs(nxt - current) <= rtol * np.maximum(scale, 1e-300)
        if ok.all():
            return nxt
        if D + 10 > max_degree:
            worst = int(np.argmax(np.abs(nxt - current) / np.maximum(scale, 1e-300)))
            raise NoConvergence(
                f"reference for {domain.label} not settled at degree {D + 10} "
                f"(worst sample {worst})"
            )
        current = nxt
        D += 10


def _plain_rule(domain: DomainSpec, degree: int) -> CubatureRule:
    return build_seed(domain, degree, eliminate_intermediate=False)


def reference_value(domain: DomainSpec, a: np.ndarray, start_degree: int = 40) -> float:
    """Reference integral for a single direction vector."""
    return float(reference_values(domain, np.asarray(a, dtype=float)[None, :], start_degree)[0])


def run_experiment(config: ExperimentConfig, eliminated_rules) -> list[ExperimentRow]:
    """Max absolute errors per (family, degree) against converged references.

    ``eliminated_rules`` maps a degree to the eliminated rule to measure;
    the tensor family always uses the plain product seed.
    """
    A = sample_directions(config)
    refs = reference_values(
        config.domain, A, start_degree=2 * max(config.degrees) + 20
    )
    ref_scale = float(np.abs(refs).max())
    rows: list[ExperimentRow] = []
    for family in ("tensor", "eliminated"):
        for p in config.degrees:
            if family == "tensor":
                rule = _plain_rule(config.domain, p)
            else:
                rule = eliminated_rules(p)
            approx = _apply_batch(rule, A)
            err = float(np.abs(approx - refs).max())
            rows.append(ExperimentRow(family, p, rule.n, err, ref_scale))
    return rows


def write_csv(rows, path: str | os.PathLike) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["family", "degree", "n_points", "max_abs_error", "max_abs_reference"]
        )
        for row in rows:
            writer.writerow(
                [
                    row.family,
                    row.degree,
                    row.n_points,
                    repr(row.max_abs_error),
                    repr(row.max_abs_reference),
                ]
            )


def read_csv(path: str | os.PathLike) -> list[ExperimentRow]:
    rows = []
    with open(path, "r", newline="", encoding="ascii") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                ExperimentRow(
                    rec["family"],
                    int(rec["degree"]),
                    int(rec["n_points"]),
                    float(rec["max_abs_error"]),
                    float(rec["max_abs_reference"]),
                )
            )
    return rows
