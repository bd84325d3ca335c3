import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from picube import (
    ExperimentConfig,
    ExperimentRow,
    NoConvergence,
    build_seed,
    integrand_values,
    naive_node_count,
    parse_domain,
    read_csv,
    reference_value,
    run_experiment,
    sample_directions,
    write_csv,
)
from picube.experiment import reference_values


def test_integrand_special_values():
    u = np.array([1.0, -1.0, 0.0, 30.0])
    vals = integrand_values(u)
    assert_allclose(vals[0], math.e - 1.0, rtol=1e-15)
    assert_allclose(vals[1], 1.0 - 1.0 / math.e, rtol=1e-15)
    assert vals[2] == 1.0
    assert_allclose(vals[3], (math.exp(30.0) - 1.0) / 30.0, rtol=1e-14)


def test_integrand_series_matches_direct_form_at_cutoff():
    # both branches must agree where the switch happens
    for u in (9.9e-7, -9.9e-7, 1.1e-6, -1.1e-6):
        direct = np.expm1(u) / u
        assert_allclose(integrand_values(np.array([u]))[0], direct, rtol=1e-12)


def test_integrand_preserves_shape():
    u = np.linspace(-2.0, 2.0, 12).reshape(3, 4)
    assert integrand_values(u).shape == (3, 4)


def test_sample_directions_reproducible():
    config = ExperimentConfig(parse_domain("C2"), (3,), samples=50)
    A = sample_directions(config)
    assert A.shape == (50, 2)
    bound = config.amplitude / math.sqrt(2)
    assert np.all(np.abs(A) <= bound)
    assert np.array_equal(A, sample_directions(config))
    other = ExperimentConfig(parse_domain("C2"), (3,), samples=50, seed=7)
    assert not np.array_equal(A, sample_directions(other))


def test_reference_value_against_series():
    # int_0^1 (e^{a x} - 1)/(a x) dx = sum_k a^k / ((k+1)! (k+1))
    a = 2.0
    expected = sum(a**k / (math.factorial(k + 1) * (k + 1)) for k in range(40))
    got = reference_value(parse_domain("C1"), np.array([a]))
    assert_allclose(got, expected, rtol=1e-13)


def test_reference_value_zero_direction_gives_volume():
    assert_allclose(reference_value(parse_domain("C2"), np.zeros(2)), 1.0, rtol=1e-14)
    assert_allclose(reference_value(parse_domain("T2"), np.zeros(2)), 0.5, rtol=1e-14)


def test_reference_values_batch_matches_scalar():
    domain = parse_domain("T2")
    A = np.array([[1.0, -2.0], [3.0, 0.5]])
    batch = reference_values(domain, A, start_degree=40)
    for a, ref in zip(A, batch):
        assert_allclose(reference_value(domain, a), ref, rtol=1e-12)


def test_reference_values_raises_without_convergence():
    domain = parse_domain("C2")
    A = np.array([[25.0, 25.0]]) / math.sqrt(2)
    with pytest.raises(NoConvergence):
        reference_values(domain, A, start_degree=3, max_degree=23)


def test_run_experiment_rows():
    domain = parse_domain("C2")
    config = ExperimentConfig(domain, (3, 9), samples=8)

    def stand_in(p):
        return build_seed(domain, p, eliminate_intermediate=False)

    rows = run_experiment(config, stand_in)
    assert [(r.family, r.degree) for r in rows] == [
        ("tensor", 3),
        ("tensor", 9),
        ("eliminated", 3),
        ("eliminated", 9),
    ]
    by_key = {(r.family, r.degree): r for r in rows}
    assert by_key[("tensor", 3)].n_points == naive_node_count(domain, 3)
    assert by_key[("tensor", 9)].n_points == naive_node_count(domain, 9)
    # one shared reference scale, strictly smaller error at higher degree
    assert len({r.max_abs_reference for r in rows}) == 1
    assert by_key[("tensor", 9)].max_abs_error < by_key[("tensor", 3)].max_abs_error
    assert all(r.max_abs_error >= 0 for r in rows)


def test_csv_roundtrip_is_exact(tmp_path):
    rows = [
        ExperimentRow("tensor", 3, 9, 1.2345678901234567e-3, 9.87654321e12),
        ExperimentRow("eliminated", 3, 7, 7.77e-5, 9.87654321e12),
    ]
    path = tmp_path / "rows.csv"
    write_csv(rows, path)
    assert read_csv(path) == rows
    header = path.read_text().splitlines()[0]
    assert header == "family,degree,n_points,max_abs_error,max_abs_reference"


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(degrees=()),
        dict(degrees=(4,)),
        dict(degrees=(-3,)),
        dict(degrees=(3,), samples=0),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        ExperimentConfig(parse_domain("C2"), **kwargs)
