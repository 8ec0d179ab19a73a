import math

import numpy as np
import pytest

from smithbar.core.errors import EvenTupleError, InputError, OutOfRange
from smithbar.genfun.forms import build_Qn
from smithbar.genfun.tuples import (
    GeneratingOracle, GFTuple, OracleGF, QuadraticGF, a_matrix, assemble_F, block_form,
    build_sigma_mt, chi, delta_angles, delta_gf, evaluate_F, evaluate_F_split, gradient_F,
    identity_tuple, inverse_tuple, odd_power_tuple, power_tuple, random_quadratic_tuple,
    rotation_tuple, tuple_from_json, tuple_to_json, v_from_w, w_variables,
)
from smithbar.utils.formatters import read_data_file

from .conftest import sample_path


def random_vector(rng, size):
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def test_identity_at_zero_is_qn():
    sigma = build_sigma_mt(identity_tuple(1, 1), m=2, t=0.0, n0=4)
    assert sigma.n == 1 + 2 * 4
    assert all(np.allclose(f.form.matrix, 0) for f in sigma.entries)
    assert np.allclose(assemble_F(sigma).matrix, build_Qn(9, 1).matrix)


@pytest.mark.parametrize('n,d', [(1, 0), (3, 1), (5, 2)])
def test_identity_tuple_assembles_qn(n, d):
    assert np.allclose(assemble_F(identity_tuple(d, n)).matrix, build_Qn(n, d).matrix)


@pytest.mark.parametrize('m', [1, 2, 3])
def test_delta_angles_stay_in_branch(m):
    for t in np.linspace(-m, m, 97):
        angles = delta_angles(m, float(t), 4)
        assert len(angles) == 4 * m
        assert max(abs(a) for a in angles) < 0.5
        assert sum(angles) == pytest.approx(t)


def test_chi_clamps():
    assert chi(1, 0.5) == 0.5
    assert chi(1, 1.25) == 1.25
    assert chi(1, 3.0) == 1.5
    assert chi(1, -3.0) == -1.5
    assert chi(1, 1.5) == pytest.approx(1.375)


def test_family_is_monotone(rng):
    sigma = random_quadratic_tuple(1, 3, rng, scale=0.5)
    ts = [-0.9, -0.3, 0.2, 0.8]
    forms = [assemble_F(build_sigma_mt(sigma, 1, t, 4)) for t in ts]
    for _ in range(200):
        v = random_vector(rng, forms[0].dim)
        values = [f.evaluate(v) for f in forms]
        assert all(x >= y - 1e-12 for x, y in zip(values, values[1:]))


def test_sigma_mt_ranges():
    eps = identity_tuple(1, 1)
    with pytest.raises(OutOfRange):
        build_sigma_mt(eps, 1, 1.5, 4)
    with pytest.raises(OutOfRange):
        build_sigma_mt(eps, 1, 0.5, 3)
    with pytest.raises(OutOfRange):
        delta_gf(1, 0.5)


def test_assembled_matrix_matches_sum(rng):
    sigma = random_quadratic_tuple(2, 5, rng)
    form = assemble_F(sigma)
    for _ in range(10):
        v = random_vector(rng, sigma.size)
        assert form.evaluate(v) == pytest.approx(evaluate_F(sigma, v), abs=1e-9)


def test_w_variables_split(rng):
    sigma = random_quadratic_tuple(1, 5, rng)
    for _ in range(10):
        v = random_vector(rng, sigma.size)
        w = w_variables(v, sigma.n)
        assert evaluate_F_split(sigma, w) == pytest.approx(evaluate_F(sigma, v), abs=1e-9)
        assert np.allclose(v_from_w(w, sigma.n), v)


def test_change_of_variables_singular_for_even_n():
    assert np.linalg.matrix_rank(a_matrix(2)) == 1
    assert np.linalg.matrix_rank(a_matrix(5)) == 5
    with pytest.raises(EvenTupleError):
        v_from_w(np.zeros(4, dtype=complex), 2)


def test_gradient_matches_finite_differences(rng):
    sigma = random_quadratic_tuple(1, 3, rng)
    v = random_vector(rng, sigma.size)
    g = gradient_F(sigma, v)
    h = 1e-6
    for _ in range(5):
        e = random_vector(rng, sigma.size)
        numeric = (evaluate_F(sigma, v + h * e) - evaluate_F(sigma, v - h * e)) / (2 * h)
        assert numeric == pytest.approx(float(np.real(np.vdot(g, e))), rel=1e-6, abs=1e-6)


def test_rotation_tuple_steps():
    sigma = rotation_tuple([0.0, 0.70710678])
    assert sigma.n == 3 and sigma.d == 1
    assert rotation_tuple([0.1, 0.4]).n == 1
    with pytest.raises(EvenTupleError):
        rotation_tuple([0.0, 0.3], n=2)
    with pytest.raises(OutOfRange):
        rotation_tuple([0.0, 0.7], n=1)


def test_inverse_and_powers(rng):
    sigma = random_quadratic_tuple(1, 3, rng)
    inv = inverse_tuple(sigma)
    assert np.allclose(inv.entries[0].form.matrix, -sigma.entries[2].form.matrix)
    assert power_tuple(sigma, 2).n == 6
    assert odd_power_tuple(sigma, 2).n == 7
    assert odd_power_tuple(sigma, 3).n == 9


def test_block_form(rng):
    sigma = random_quadratic_tuple(1, 3, rng)
    assert block_form(sigma).dim == 6


def test_oracle_tuple_assembles_to_oracle(rng):
    def value(w):
        return float(np.sum(np.abs(w) ** 4))

    def gradient(w):
        return 4 * np.abs(w) ** 2 * w

    oracle = OracleGF(2, value, gradient, label='quartic')
    sigma = GFTuple(1, (oracle, QuadraticGF(block_form(identity_tuple(1, 1)))))
    assert not sigma.is_quadratic
    F = assemble_F(GFTuple(1, (oracle,)))
    assert isinstance(F, GeneratingOracle)
    w = random_vector(rng, 2)
    assert oracle.negated().value(w) == pytest.approx(-value(w))
    v = random_vector(rng, 2)
    assert F.evaluate(v) == pytest.approx(evaluate_F(GFTuple(1, (oracle,)), v))


def test_entry_dimension_checked():
    with pytest.raises(InputError):
        GFTuple(2, identity_tuple(1, 1).entries)


def test_tuple_json():
    sigma = tuple_from_json(read_data_file(sample_path('rotation_step.json')))
    assert sigma.n == 3 and sigma.d == 1
    expected = math.tan(math.pi * 0.6 / 3)
    assert sigma.entries[0].form.matrix[1, 1].real == pytest.approx(expected)
    again = tuple_from_json(tuple_to_json(sigma))
    assert np.allclose(block_form(again).matrix, block_form(sigma).matrix)
    with pytest.raises(InputError):
        tuple_from_json({'d': 1, 'entries': [{'kind': 'oracle'}]})
