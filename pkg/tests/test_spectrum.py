import math

import numpy as np
import pytest

from smithbar.core.errors import DegenerateRotation, DegenerateSpectrum, OutOfRange
from smithbar.genfun.spectrum import (
    action_classes, circular_distance, critical_spectrum, maslov_index_check, mod1,
    rotation_barcode, rotation_power_barcode, spectral_inverse_check, sweep_jumps,
)
from smithbar.genfun.tuples import GFTuple, OracleGF, identity_tuple, rotation_tuple
from smithbar.periodic.barcode import betamax_validate

GRID = 83
ROOT = 0.70710678


@pytest.mark.parametrize('d,m,t,expected', [
    (1, 2, 1.5, 4),
    (1, 1, 0.5, 0),
    (1, 2, 0.25, 0),
    (0, 1, -0.5, -2),
    (2, 3, -1.3, -12),
])
def test_maslov_index(d, m, t, expected):
    report = maslov_index_check(d, m, t)
    assert report['difference'] == expected == report['expected']
    assert report['nullity_0'] == 2 * (d + 1)
    assert report['holds']


@pytest.mark.parametrize('t,m', [(1.0, 2), (0.0, 1), (2.5, 2)])
def test_maslov_rejects(t, m):
    with pytest.raises(OutOfRange):
        maslov_index_check(1, m, t)


def test_mod1_and_distance():
    assert mod1(-0.25) == pytest.approx(0.75)
    assert mod1(1.0 - 1e-9) == 0.0
    assert circular_distance(0.05, 0.95) == pytest.approx(0.1)
    assert action_classes([-1.0, 0.0, 1e-9, 0.3, 1.3]) == pytest.approx([0.0, 0.3], abs=1e-8)


# ---------------------------------------------------------------------------
# Rotations
# ---------------------------------------------------------------------------

@pytest.fixture(scope='module')
def root_rotation():
    return rotation_barcode([0.0, ROOT], m=2, grid=GRID)


def test_rotation_barcode(root_rotation):
    pb = root_rotation.barcode
    assert pb.K == 0 and pb.d + 1 + 2 * pb.K == 2
    assert [float(c) for c in pb.spectral] == pytest.approx([0.0, ROOT], abs=1e-6)
    assert root_rotation.max_class_error < 1e-6


def test_rotation_actions(root_rotation):
    actions = root_rotation.sample.actions
    for t in actions:
        assert min(circular_distance(t, a) for a in (0.0, ROOT)) < 1e-6
    expected = [k + a for a in (0.0, ROOT) for k in range(-3, 3) if abs(k + a) < 2]
    for value in expected:
        assert min(abs(t - value) for t in actions) < 1e-6


def test_rotation_morse_indices_step_by_two(root_rotation):
    points = sorted(root_rotation.sample.points, key=lambda pt: pt.t)
    inner_points = [pt for pt in points if abs(pt.t) < 2 - 1e-6]
    indices = [pt.morse_index for pt in inner_points]
    assert None not in indices
    assert all(b - a == 2 for a, b in zip(indices, indices[1:]))


def test_rotation_representatives(root_rotation):
    for pt in root_rotation.sample.points:
        axis = 0 if circular_distance(pt.t, 0.0) < 1e-6 else 1
        assert abs(pt.representative[axis]) == pytest.approx(1.0, abs=1e-6)
        assert pt.representative[axis].real > 0


def test_golden_rotation():
    golden = (math.sqrt(5) - 1) / 2
    report = rotation_barcode([0.0, golden], m=2, grid=GRID)
    pb = report.barcode
    assert pb.K == 0 and pb.d + 1 + 2 * pb.K == 2
    assert list(report.classes) == pytest.approx([0.0, golden], abs=1e-6)
    assert betamax_validate(pb)['holds']


@pytest.mark.parametrize('a', [[0.0, 0.0], [0.25, 1.25]])
def test_degenerate_rotation(a):
    with pytest.raises(DegenerateRotation):
        rotation_barcode(a, m=1, grid=GRID)


def test_one_dimensional_rotation_counts_births():
    report = rotation_barcode([0.3], m=2, grid=GRID)
    pb = report.barcode
    assert pb.d == 0 and float(pb.spectral[0]) == pytest.approx(0.3, abs=1e-6)
    assert [t for t in report.sample.actions if abs(t) < 2] == pytest.approx([-1.7, -0.7, 0.3, 1.3], abs=1e-6)


def test_rotation_power():
    report = rotation_power_barcode([0.1, 0.35], p=3, m=2, grid=GRID)
    assert report.barcode.field.p == 3
    assert sorted(report.classes) == pytest.approx([0.05, 0.3], abs=1e-6)


def test_power_with_coinciding_classes():
    with pytest.raises(DegenerateRotation):
        rotation_power_barcode([0.0, 1.0 / 3.0], p=3, m=1, grid=GRID)


def test_inverse_negates_actions():
    report = spectral_inverse_check([0.1, 0.35], m=1, grid=GRID)
    assert report['holds']
    assert len(report['actions']) == 4


def test_identity_is_degenerate():
    with pytest.raises(DegenerateSpectrum):
        critical_spectrum(identity_tuple(1, 1), m=1, grid=41)


def test_sweep_jumps_are_sorted():
    sigma = rotation_tuple([0.2, 0.6])
    jumps = sweep_jumps(sigma, 1, GRID)
    assert jumps == sorted(jumps)
    assert len(action_classes(jumps)) == 2


# ---------------------------------------------------------------------------
# Oracle search
# ---------------------------------------------------------------------------

def perturbed_rotation(a0=0.1, a1=0.3, eps=0.05):
    """tan(pi a0)|w0|^2 + tan(pi a1)|w1|^2 + eps |w0|^2 |w1|^2 / |w|^2."""
    tau0, tau1 = math.tan(math.pi * a0), math.tan(math.pi * a1)

    def value(w):
        x, y = abs(w[0]) ** 2, abs(w[1]) ** 2
        s = x + y
        return tau0 * x + tau1 * y + (eps * x * y / s if s else 0.0)

    def gradient(w):
        x, y = abs(w[0]) ** 2, abs(w[1]) ** 2
        s = x + y
        if not s:
            return np.zeros(2, dtype=complex)
        return np.array([
            2 * tau0 * w[0] + 2 * eps * w[0] * y ** 2 / s ** 2,
            2 * tau1 * w[1] + 2 * eps * w[1] * x ** 2 / s ** 2,
        ], dtype=complex)

    return GFTuple(1, (OracleGF(2, value, gradient, label='perturbed rotation'),))


def test_oracle_gradient_is_consistent(rng):
    f = perturbed_rotation().entries[0]
    w = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    e = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    h = 1e-6
    numeric = (f.value(w + h * e) - f.value(w - h * e)) / (2 * h)
    assert numeric == pytest.approx(float(np.real(np.vdot(f.gradient(w), e))), abs=1e-6)


@pytest.mark.slow
def test_oracle_spectrum_finds_axis_fixed_points():
    sample = critical_spectrum(perturbed_rotation(), m=1, grid=23, n0=4, seeds=2,
                               rng=np.random.default_rng(3))
    expected = [-0.9, -0.7, 0.1, 0.3]
    for value in expected:
        assert min(abs(t - value) for t in sample.actions) < 1e-5
    for t in sample.actions:
        assert min(abs(t - value) for value in expected) < 1e-5
