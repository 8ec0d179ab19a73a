import random
from collections import Counter
from fractions import Fraction

import pytest

from smithbar.algebra.field import RATIONALS, parse_field
from smithbar.core.errors import (
    ConsistencyViolation, EndpointCollision, FieldMismatch, InputError,
)
from smithbar.periodic.barcode import (
    FiniteOrbit, LocalDatum, PeriodicBarcode, assemble_N, beta_stats, betamax_validate,
    betatot_integral, endpoint_classes, expand_window, homological_count, local_data_from_json,
    periodic_from_json, periodic_to_json, random_smith_windows, smith_barcode_check,
    smith_shifts, spectral_value, window_dimension_periodic, window_integral,
)
from smithbar.topology.persistence import Bar
from smithbar.utils.formatters import read_data_file

from .conftest import sample_path

F = Fraction


def periodic(d=1, orbits=(), spectral=(F(0), F(1, 2)), field=RATIONALS):
    return PeriodicBarcode(d, field, tuple(FiniteOrbit(F(b), F(e), k) for b, e, k in orbits),
                           tuple(spectral))


@pytest.fixture
def two_orbits():
    return periodic(orbits=[(F(1, 10), F(2, 5), 1), (F(1, 5), F(9, 10), 2)])


def test_reads_sample(two_orbits):
    pb = periodic_from_json(read_data_file(sample_path('two_orbits.json')))
    assert pb == two_orbits
    assert periodic_from_json(periodic_to_json(pb)) == pb


def test_type_checks():
    with pytest.raises(InputError):
        periodic(spectral=(F(0),))
    with pytest.raises(InputError):
        periodic(spectral=(F(1, 2), F(0)))
    with pytest.raises(InputError):
        periodic(spectral=(F(0), F(3, 2)))
    with pytest.raises(InputError):
        periodic(orbits=[(F(1), F(3, 2), 0)])
    with pytest.raises(InputError):
        periodic_from_json({'d': 1})


def test_spectral_values_lie_in_a_half_open_period():
    with pytest.raises(InputError):
        periodic(spectral=(F(0), F(1)))
    with pytest.raises(InputError):
        periodic(d=2, spectral=(F(1, 3), F(1, 2), F(4, 3)))
    assert periodic(spectral=(F(0), F(99, 100))).spectral[-1] == F(99, 100)


@pytest.mark.parametrize('name', ['local.json', 'local.yaml'])
def test_local_data_files_are_read_as_utf8(tmp_path, name):
    path = tmp_path / name
    if name.endswith('.json'):
        path.write_text('[{"id": "x₀", "action": "1/10", "loc_dims": {"1": 1}}]',
                        encoding='utf-8')
    else:
        path.write_text('- {id: "x₀", action: "1/10", loc_dims: {1: 1}}\n', encoding='utf-8')
    [datum] = local_data_from_json(read_data_file(str(path)))
    assert datum.fixed_point_id == 'x₀'
    assert datum.action_class == F(1, 10)


def test_spectral_value_is_periodic():
    pb = periodic()
    assert [spectral_value(pb, k) for k in range(-2, 4)] == [-1, F(-1, 2), 0, F(1, 2), 1, F(3, 2)]


def test_expand_infinite_births():
    bars = expand_window(periodic(), F(-1, 10), F(21, 10))
    births = [b.birth for b in bars if b.is_infinite]
    assert births == [0, F(1, 2), 1, F(3, 2), 2]
    assert [b.degree for b in bars if b.is_infinite] == [0, 2, 4, 6, 8]


def test_expand_translates_finite_orbits():
    pb = periodic(orbits=[(F(1, 5), F(9, 10), 2)])
    bars = expand_window(pb, F(1), F(2))
    assert Bar(6, F(6, 5), F(19, 10)) in bars.bars


@pytest.mark.parametrize('start', [F(-7, 3), F(0), F(13, 17)])
def test_unit_window_holds_d_plus_one_births(start):
    pb = periodic(d=2, spectral=(F(1, 7), F(2, 7), F(5, 7)))
    births = [b for b in expand_window(pb, start, start + 1) if b.is_infinite]
    assert len(births) == 3


def test_beta_stats(two_orbits):
    stats = beta_stats(two_orbits)
    assert stats.betas == (F(3, 10), F(7, 10))
    assert (stats.beta_max, stats.beta_tot, stats.K) == (F(7, 10), 1, 2)
    empty = beta_stats(periodic())
    assert (empty.betas, empty.beta_max, empty.beta_tot, empty.K) == ((), 0, 0, 0)


@pytest.mark.parametrize('d,k,expected', [(1, 2, 6), (2, 0, 3), (1, 0, 2)])
def test_homological_count(d, k, expected):
    pb = periodic(d=d, orbits=[(F(1, 10), F(1, 5), 1)] * k, spectral=[F(0)] * (d + 1))
    assert homological_count(pb) == expected


def test_assemble_from_local_data(two_orbits):
    three = [LocalDatum(f"x{i}", F(i, 3), {0: 1}) for i in range(3)]
    assert assemble_N(2, three) == 3
    data = local_data_from_json(read_data_file(sample_path('two_orbits_local.yaml')))
    assert assemble_N(1, data, two_orbits) == 6


def test_assemble_count_mismatch(two_orbits):
    data = [LocalDatum(f"x{i}", F(i, 5), {0: 1}) for i in range(5)]
    with pytest.raises(ConsistencyViolation):
        assemble_N(1, data, two_orbits)


def test_assemble_class_mismatch(two_orbits):
    data = [LocalDatum(f"x{i}", F(i, 6), {0: 1}) for i in range(6)]
    with pytest.raises(ConsistencyViolation):
        assemble_N(1, data, two_orbits)


def test_endpoint_classes(two_orbits):
    classes = endpoint_classes(two_orbits)
    assert classes == Counter({F(1, 10): 1, F(2, 5): 1, F(1, 5): 1, F(9, 10): 1, 0: 1, F(1, 2): 1})


def test_betamax_validate():
    ok = betamax_validate(periodic(orbits=[(F(0), F(2, 5), 1)]))
    assert ok['refined_bounds'] == ['1/2', '1/2']
    assert ok['holds']
    long = betamax_validate(periodic(orbits=[(F(0), F(6, 5), 1)]))
    assert not long['bound_1'] and not long['holds']
    assert betamax_validate(periodic())['holds']


def test_window_dimension_periodic(two_orbits):
    # [1/10, 2/5) holds only 1/4, the infinite bar born at 1/2 holds only 3/4
    assert window_dimension_periodic(two_orbits, F(1, 4), F(3, 4)) == 2
    with pytest.raises(EndpointCollision):
        window_dimension_periodic(two_orbits, F(11, 10), F(2))


@pytest.mark.parametrize('a,n,integral,expected', [
    (F(0), 1, 4, 1),
    (F(37, 100), 3, 8, 1),
])
def test_betatot_integral(two_orbits, a, n, integral, expected):
    assert window_integral(two_orbits, a, n) == integral
    assert betatot_integral(two_orbits, a, n) == expected


def test_betatot_integral_without_orbits():
    pb = periodic()
    assert window_integral(pb, F(0), 2) == 4
    assert betatot_integral(pb, F(0), 2) == 0
    with pytest.raises(InputError):
        window_integral(pb, F(0), 0)


# ---------------------------------------------------------------------------
# Smith-type barcode inequalities
# ---------------------------------------------------------------------------

def test_smith_shifts():
    assert smith_shifts(2) == [0, F(1, 2)]
    assert smith_shifts(5) == [F(-2, 5), F(-1, 5), 0, F(1, 5), F(2, 5)]


def test_total_length_inequality():
    f3 = parse_field('f3')
    pb = periodic(orbits=[(F(0), F(1, 2), 1)], field=f3)
    equal = periodic(orbits=[(F(0), F(3, 2), 1)], field=f3)
    short = periodic(orbits=[(F(0), F(1), 1)], field=f3)
    report = smith_barcode_check(pb, equal, 3, [])
    assert report['total_holds'] and report['holds']
    report = smith_barcode_check(pb, short, 3, [])
    assert not report['total_holds'] and not report['holds']


@pytest.mark.parametrize('p', [2, 3, 5])
def test_identity_barcode_windows(p):
    fld = parse_field(f"f{p}")
    eps = periodic(spectral=(F(0), F(0)), field=fld)
    windows = random_smith_windows(eps, eps, p, 20, random.Random(p))
    report = smith_barcode_check(eps, eps, p, windows)
    assert report['holds']
    assert all(row['lhs'] == row['rhs'] for row in report['windows'])


def test_smith_sample_windows_avoid_endpoints():
    pb = periodic_from_json(read_data_file(sample_path('smith_f5.json')))
    windows = random_smith_windows(pb, pb, 5, 10, random.Random(3))
    assert len(windows) == 10
    # does not raise EndpointCollision
    smith_barcode_check(pb, pb, 5, windows)


def test_smith_field_checks():
    pb = periodic()
    with pytest.raises(FieldMismatch):
        smith_barcode_check(pb, pb, 2, [])
    with pytest.raises(ConsistencyViolation):
        smith_barcode_check(periodic(field=parse_field('f2')),
                            periodic(d=0, spectral=(F(0),), field=parse_field('f2')), 2, [])


def test_integral_matches_bar_lengths_randomly():
    rng = random.Random(5)
    for _ in range(10):
        orbits = []
        for _ in range(rng.randint(0, 3)):
            birth = F(rng.randint(0, 19), 20)
            orbits.append((birth, birth + F(rng.randint(1, 19), 20), rng.randint(0, 3)))
        pb = periodic(orbits=orbits, spectral=(F(1, 40), F(21, 40)))
        a = F(rng.randint(0, 999), 1000) + F(1, 7919)
        assert betatot_integral(pb, a, rng.randint(1, 3)) == beta_stats(pb).beta_tot


def random_periodic(rng):
    d = rng.randint(0, 3)
    spectral = sorted(F(rng.randint(0, 59), 60) for _ in range(d + 1))
    orbits = []
    for _ in range(rng.randint(0, 5)):
        birth = F(rng.randint(0, 29), 30)
        orbits.append((birth, birth + F(rng.randint(1, 30), 30), rng.randint(0, 2 * d + 1)))
    return periodic(d=d, orbits=orbits, spectral=spectral)


@pytest.mark.slow
def test_integral_formula_on_many_barcodes():
    rng = random.Random(2024)
    for _ in range(200):
        pb = random_periodic(rng)
        beta_tot = beta_stats(pb).beta_tot
        for _ in range(5):
            a = F(rng.randint(-500, 500), rng.randint(1, 97))
            assert betatot_integral(pb, a, rng.randint(1, 4)) == beta_tot
