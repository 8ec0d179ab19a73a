import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from smithbar.algebra.field import RATIONALS
from smithbar.core.errors import InputError
from smithbar.periodic.barcode import FiniteOrbit, PeriodicBarcode
from smithbar.topology.complex import parse_complex
from smithbar.topology.persistence import compute_barcode
from smithbar.utils.svg import get_environment, render_barcode_svg, render_periodic_svg

from .conftest import TORSION

F = Fraction
SVG = '{http://www.w3.org/2000/svg}'


@pytest.fixture
def torsion_barcode():
    return compute_barcode(parse_complex(TORSION))


def group_ids(svg):
    root = ET.fromstring(svg)
    return [g.get('id') for g in root.iter(f'{SVG}g')]


def test_barcode_svg_groups_by_degree(torsion_barcode):
    svg = render_barcode_svg(torsion_barcode)
    assert group_ids(svg) == ['grid', 'degree-0', 'degree-1']
    assert svg.count('<rect class="bar"') == 1
    assert svg.count('<path class="bar infinite"') == 1
    assert svg.count('<line class="grid"') == 4


def test_bar_titles_use_exact_endpoints(torsion_barcode):
    svg = render_barcode_svg(torsion_barcode)
    assert '<title>[1, 2)</title>' in svg
    assert '<title>[0, inf)</title>' in svg


def test_window_clips_bars(torsion_barcode):
    svg = render_barcode_svg(torsion_barcode, (F(3, 2), F(5)))
    assert '<rect class="bar" x="40.0"' in svg


def test_title_is_escaped(torsion_barcode):
    svg = render_barcode_svg(torsion_barcode, title='a<b')
    assert '<title>a&lt;b</title>' in svg
    ET.fromstring(svg)


def test_empty_window(torsion_barcode):
    with pytest.raises(InputError):
        render_barcode_svg(torsion_barcode, (F(1), F(1)))


def test_periodic_svg():
    pb = PeriodicBarcode(1, RATIONALS, (FiniteOrbit(F(1, 10), F(2, 5), 1),), (F(0), F(1, 2)))
    svg = render_periodic_svg(pb, F(0), F(1))
    ids = group_ids(svg)
    assert 'degree-0' in ids and 'degree-2' in ids
    assert svg.count('<path class="bar infinite"') == 2


def test_environment_filters():
    env = get_environment()
    assert env.filters['rational'](F(3, 4)) == '3/4'
    assert 'bound' in env.filters
