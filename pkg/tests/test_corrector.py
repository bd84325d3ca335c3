import numpy as np
import pytest
from numpy.testing import assert_allclose

from picube import (
    CorrectorConfig,
    CorrectorStatus,
    MomentSystem,
    boundary_margin,
    build_seed,
    constraints_of,
    correct,
    eliminate,
    pack,
    parse_domain,
    predictors,
)


def _setup(label, degree):
    domain = parse_domain(label)
    return (
        MomentSystem(domain, degree),
        constraints_of(domain),
        pack(build_seed(domain, degree, eliminate_intermediate=False)),
    )


def test_exact_iterate_converges_immediately():
    system, cons, z = _setup("T2", 5)
    out = correct(system, z, cons)
    assert out.status is CorrectorStatus.CONVERGED
    assert out.converged
    assert out.iterations == 0
    assert_allclose(out.z, z)


def test_recovers_perturbed_weights():
    system, cons, z = _setup("C2", 3)
    z0 = z.copy()
    z0[2::3] += 1e-3
    out = correct(system, z0, cons)
    assert out.status is CorrectorStatus.CONVERGED
    assert out.residual_norm <= 1e-14
    assert boundary_margin(out.z, cons) > 0
    assert np.abs(out.z - z).max() <= 1e-2


def test_recovers_perturbed_nodes(rng):
    system, cons, z = _setup("T2", 5)
    z0 = z + rng.uniform(-1e-3, 1e-3, size=z.size)
    out = correct(system, z0, cons)
    assert out.status is CorrectorStatus.CONVERGED
    assert np.linalg.norm(system.residual(out.z)) <= 1e-14


def test_infeasible_start():
    system, cons, z = _setup("T2", 3)
    z0 = z.copy()
    z0[2] = -0.1  # negative weight
    out = correct(system, z0, cons)
    assert out.status is CorrectorStatus.INFEASIBLE
    assert out.iterations == 0


def test_stalls_when_starved_of_iterations():
    system, cons, z = _setup("T2", 5)
    z0 = z + 1e-2 * np.sin(np.arange(z.size))
    cfg = CorrectorConfig(max_iters=1)
    out = correct(system, z0, cons, cfg)
    assert out.status is CorrectorStatus.STALLED
    assert out.iterations == 1
    assert out.residual_norm > 1e-14


def test_skip_freezes_node(rng):
    system, cons, z = _setup("T2", 5)
    z0 = z + rng.uniform(-1e-4, 1e-4, size=z.size)
    out = correct(system, z0, cons, skip=3)
    assert out.status is CorrectorStatus.CONVERGED
    assert_allclose(out.z[9:12], z0[9:12])  # block 3 untouched
    moved = np.delete(np.arange(z.size), np.arange(9, 12))
    assert np.abs(out.z[moved] - z0[moved]).max() > 0


def test_skip_tolerates_infeasible_frozen_node():
    # A predictor step drives one weight to zero and may push that node
    # slightly outside; skipping it must let the remaining nodes converge.
    system, cons, z = _setup("T2", 5)
    cand = next(
        c
        for c in predictors(system, z, cons)
        if c.feasible and boundary_margin(c.predicted_z, cons) < -1e-6
    )
    z0 = cand.predicted_z
    assert correct(system, z0, cons).status is CorrectorStatus.INFEASIBLE
    out = correct(system, z0, cons, skip=cand.node)
    assert out.status is CorrectorStatus.CONVERGED
    assert np.linalg.norm(system.residual(out.z)) <= 1e-14
    lo = 3 * cand.node
    assert np.array_equal(out.z[lo : lo + 3], z0[lo : lo + 3])
    # every unfrozen node stays strictly interior with positive weight
    assert boundary_margin(np.delete(out.z, slice(lo, lo + 3)), cons) > 0


def test_square_system_endgame(rules, rng):
    # 7 nodes at degree 5 on T2 gives M = N = 21: pure Newton, empty null space
    rule = rules.eliminated("T2", 5)
    assert rule.n == 7
    domain = rule.domain
    system = MomentSystem(domain, 5)
    cons = constraints_of(domain)
    z0 = pack(rule) + rng.uniform(-1e-6, 1e-6, size=21)
    out = correct(system, z0, cons)
    assert out.status is CorrectorStatus.CONVERGED
    assert out.residual_norm <= 1e-14


def test_overdetermined_uses_least_squares():
    # 6 nodes, 21 equations: more equations than unknowns, lstsq branch
    domain = parse_domain("T2")
    system = MomentSystem(domain, 5)
    cons = constraints_of(domain)
    rng = np.random.default_rng(7)
    nodes = np.array([[0.6, 0.2], [0.8, 0.5], [0.3, 0.1], [0.9, 0.2], [0.5, 0.4], [0.7, 0.6]])
    w = np.full(6, 0.5 / 6)
    z0 = np.hstack([nodes, w[:, None]]).reshape(-1)
    out = correct(system, z0, cons, CorrectorConfig(max_iters=5))
    # no PI rule with 6 nodes needs to exist; only the mechanics are checked
    assert out.status in (CorrectorStatus.STALLED, CorrectorStatus.INFEASIBLE, CorrectorStatus.CONVERGED)
    assert out.z.shape == z0.shape


def test_rank_deficient_detected():
    domain = parse_domain("T2")
    system = MomentSystem(domain, 5)
    cons = constraints_of(domain)
    node = np.array([0.6, 0.3])
    z0 = np.hstack([np.tile(node, (7, 1)), np.full((7, 1), 0.5 / 7)]).reshape(-1)
    out = correct(system, z0, cons)
    assert out.status is CorrectorStatus.RANK_DEFICIENT


def test_bad_length_rejected():
    system, cons, _ = _setup("T2", 3)
    with pytest.raises(ValueError):
        correct(system, np.zeros(7), cons)
