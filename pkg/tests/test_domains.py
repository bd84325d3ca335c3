import numpy as np
import pytest
from numpy.testing import assert_allclose

from helpers import interior_points
from picube import (
    BoundaryContact,
    DomainSpec,
    Factor,
    barrier_gradient,
    boundary_margin,
    constraints_of,
    parse_domain,
)

ALL_LABELS = ["C1", "C2", "C3", "C4", "T2", "T3", "T4", "T2xC1", "T2xC2", "T3xC1", "T2xT2"]


def test_parse_labels():
    assert parse_domain("T2").label == "T2"
    assert parse_domain("t2xc1").label == "T2xC1"
    assert parse_domain("T3").dim == 3
    assert parse_domain("T2xC2").dim == 4


def test_volumes():
    assert parse_domain("C3").volume == 1.0
    assert parse_domain("T3").volume == pytest.approx(1.0 / 6.0)
    assert parse_domain("T2xC2").volume == pytest.approx(0.5)
    assert parse_domain("T2xT2").volume == pytest.approx(0.25)


def test_canonicalization():
    # T1 is the unit interval and adjacent cube blocks merge.
    assert parse_domain("T1").label == "C1"
    assert parse_domain("C1xC2").label == "C3"
    assert parse_domain("C1xT1xC1").label == "C3"
    assert parse_domain("T2xC1xC1").label == "T2xC2"
    assert parse_domain("T2xT2").label == "T2xT2"
    assert parse_domain("C1xC1") == parse_domain("C2")


def test_parse_rejects():
    for bad in ["Q2", "T0", "", "T2x", "2T", "Txx2"]:
        with pytest.raises(ValueError):
            parse_domain(bad)
    with pytest.raises(ValueError):
        Factor("ball", 2)
    with pytest.raises(ValueError):
        Factor("cube", 0)
    with pytest.raises(ValueError):
        DomainSpec(())


def test_cube_constraints():
    cons = constraints_of(parse_domain("C1"))
    assert_allclose(cons.A, [[-1.0], [1.0]])
    assert_allclose(cons.b, [0.0, 1.0])
    cons2 = constraints_of(parse_domain("C2"))
    assert cons2.n_rows == 4
    assert cons2.dim == 2


def test_simplex_constraints_t2():
    cons = constraints_of(parse_domain("T2"))
    r = 1.0 / np.sqrt(2.0)
    assert_allclose(cons.A, [[1.0, 0.0], [-r, r], [0.0, -1.0]])
    assert_allclose(cons.b, [1.0, 0.0, 0.0])


def test_product_constraints_block_diagonal():
    cons = constraints_of(parse_domain("T2xC1"))
    assert cons.n_rows == 5
    # T2 rows touch only the first two coordinates, C1 rows only the last.
    assert_allclose(cons.A[:3, 2], 0.0)
    assert_allclose(cons.A[3:, :2], 0.0)
    assert_allclose(cons.A[3:, 2], [-1.0, 1.0])
    assert_allclose(cons.b, [1.0, 0.0, 0.0, 0.0, 1.0])


def test_rows_unit_norm():
    for label in ALL_LABELS:
        cons = constraints_of(parse_domain(label))
        assert_allclose(np.linalg.norm(cons.A, axis=1), 1.0, atol=1e-15)


def test_slack_signs():
    cons = constraints_of(parse_domain("T2"))
    inside = cons.slacks(np.array([0.7, 0.2]))
    assert (inside > 0).all()
    # ordering violated: the chain row goes negative
    outside = cons.slacks(np.array([0.2, 0.7]))
    assert outside.min() < 0
    assert cons.slacks(np.array([1.2, 0.1])).min() < 0


def test_slacks_match_interior_sampling(rng):
    for label in ALL_LABELS:
        domain = parse_domain(label)
        cons = constraints_of(domain)
        pts = interior_points(domain, rng, 50)
        assert cons.slacks(pts).min() > 0


def test_barrier_gradient_c1_frozen():
    # One node at x=1/4 with weight 2: faces give -1/(1/4) + 1/(3/4) = -8/3.
    z = np.array([0.25, 2.0])
    g = barrier_gradient(z, constraints_of(parse_domain("C1")))
    assert_allclose(g, [-8.0 / 3.0, -0.5], rtol=1e-14)


def _barrier_value(z, cons):
    d = cons.dim
    blocks = z.reshape(-1, d + 1)
    slack = cons.slacks(blocks[:, :d])
    return -np.log(slack).sum() - np.log(blocks[:, d]).sum()


@pytest.mark.parametrize("label", ["T2", "C2", "T2xC1", "T3"])
def test_barrier_gradient_matches_fd(label, rng):
    domain = parse_domain(label)
    cons = constraints_of(domain)
    pts = interior_points(domain, rng, 4)
    w = rng.uniform(0.2, 1.0, size=4)
    z = np.hstack([pts, w[:, None]]).reshape(-1)
    g = barrier_gradient(z, cons)
    h = 1e-6
    for i in range(z.size):
        zp, zm = z.copy(), z.copy()
        zp[i] += h
        zm[i] -= h
        fd = (_barrier_value(zp, cons) - _barrier_value(zm, cons)) / (2 * h)
        assert g[i] == pytest.approx(fd, rel=1e-6, abs=1e-8)


def test_barrier_gradient_skip(rng):
    domain = parse_domain("T2")
    cons = constraints_of(domain)
    pts = interior_points(domain, rng, 3)
    z = np.hstack([pts, np.full((3, 1), 0.4)]).reshape(-1)
    g_full = barrier_gradient(z, cons)
    g_skip = barrier_gradient(z, cons, skip=1)
    assert_allclose(g_skip[3:6], 0.0)
    assert_allclose(g_skip[:3], g_full[:3])
    assert_allclose(g_skip[6:], g_full[6:])


def test_barrier_gradient_skip_allows_exterior():
    cons = constraints_of(parse_domain("C1"))
    z = np.array([0.5, 0.3, 1.5, -2.0])  # node 1 outside with negative weight
    with pytest.raises(BoundaryContact):
        barrier_gradient(z, cons)
    g = barrier_gradient(z, cons, skip=1)
    assert_allclose(g[2:], 0.0)
    assert np.isfinite(g).all()


def test_barrier_gradient_boundary_raises():
    cons = constraints_of(parse_domain("C1"))
    with pytest.raises(BoundaryContact):
        barrier_gradient(np.array([0.0, 1.0]), cons)  # on the face
    with pytest.raises(BoundaryContact):
        barrier_gradient(np.array([0.5, 0.0]), cons)  # zero weight
    with pytest.raises(ValueError):
        barrier_gradient(np.array([0.5, 1.0]), cons, skip=5)


def test_boundary_margin():
    cons = constraints_of(parse_domain("C1"))
    z = np.array([0.25, 2.0, 0.9, 0.05])
    assert boundary_margin(z, cons) == pytest.approx(0.05)
    z_bad = np.array([0.25, 2.0, 1.2, 0.5])
    assert boundary_margin(z_bad, cons) == pytest.approx(-0.2)
