import json
import logging
from fractions import Fraction
from xml.etree import ElementTree

import pytest

from smithbar import cli, pjoin_cli
from smithbar.periodic.barcode import expand_window, periodic_from_json
from smithbar.utils.formatters import read_data_file

from .conftest import sample_path

SVG_NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture(autouse=True)
def no_dotenv(mocker):
    return mocker.patch('smithbar.cli._load_env')


def write_json(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def test_qindex(capsys):
    assert cli.run(['qindex', '--n', '3', '--d', '1']) == 0
    assert capsys.readouterr().out.strip() == 'ind=4 coind=4 null=4'


def test_hz_worked_example(capsys):
    argv = ['hz', '--d', '1', '--betatot', '1/5', '--n', '3', '--B', '4', '--primes', '2..100',
            '--scan', '200']
    assert cli.run(argv) == 0
    assert capsys.readouterr().out.split() == ['A=29', 'scan=29']


def test_hz_without_certificate(capsys):
    argv = ['hz', '--d', '1', '--betatot', '1/5', '--n', '3', '--B', '4', '--primes', '2,3,5']
    assert cli.run(argv) == 1
    assert capsys.readouterr().out.strip() == 'A=none'


def test_barcode_json_and_svg(capsys, tmp_path):
    svg = tmp_path / 'torsion.svg'
    report = tmp_path / 'torsion.json'
    argv = ['barcode', sample_path('torsion.cplx'), '--svg', str(svg), '--json', str(report)]
    assert cli.run(argv) == 0
    data = json.loads(capsys.readouterr().out)
    assert data == {
        'field': 'q',
        'bars': [
            {'degree': 0, 'birth': '0', 'death': 'inf', 'mult': 1},
            {'degree': 1, 'birth': '1', 'death': '2', 'mult': 1},
        ],
    }
    assert json.loads(report.read_text()) == data
    assert 'id="degree-1"' in svg.read_text()


def test_barcode_field_override(capsys):
    assert cli.run(['barcode', sample_path('torsion.cplx'), '--field', 'f2']) == 0
    data = json.loads(capsys.readouterr().out)
    assert data['field'] == 'f2'
    assert all(bar['death'] == 'inf' for bar in data['bars'])


def test_window_and_bottleneck(capsys, tmp_path):
    report = tmp_path / 'torsion.json'
    cli.run(['barcode', sample_path('torsion.cplx'), '--json', str(report)])
    capsys.readouterr()
    assert cli.run(['window', str(report), '1/2', '3/2']) == 0
    assert json.loads(capsys.readouterr().out)['dimension'] == 1
    assert cli.run(['bottleneck', str(report), str(report)]) == 0
    assert json.loads(capsys.readouterr().out) == {'distance': '0'}


def test_smith_complex(capsys):
    assert cli.run(['smith-complex', sample_path('sphere_z2.cplx')]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data['holds'] and data['p'] == 2


def test_periodic_stats_with_local_data(capsys):
    argv = ['periodic-stats', sample_path('two_orbits.json'),
            '--local', sample_path('two_orbits_local.yaml')]
    # beta_max 7/10 exceeds the refined bound 1/2
    assert cli.run(argv) == 1
    data = json.loads(capsys.readouterr().out)
    assert not data['betamax_validate']['refined_holds']
    assert data['beta_tot'] == '1' and data['K'] == 2
    assert data['local'] == {'N': 6, 'holds': True}


def test_betatot_integral(capsys):
    assert cli.run(['betatot-integral', sample_path('two_orbits.json'), '--a', '37/100', '--n', '3']) == 0
    data = json.loads(capsys.readouterr().out)
    assert (data['integral'], data['betatot_integral'], data['holds']) == ('8', '1', True)


def test_smith_violation_exits_one(capsys, tmp_path):
    orbit = {'d': 1, 'field': 'f3', 'spectral': ['0', '1/2']}
    pb = write_json(tmp_path / 'pb.json',
                    dict(orbit, finite_orbits=[{'birth': '0', 'death': '1/2', 'degree': 1}]))
    short = write_json(tmp_path / 'short.json',
                       dict(orbit, finite_orbits=[{'birth': '0', 'death': '1', 'degree': 1}]))
    assert cli.run(['smith', pb, short, '--p', '3']) == 1
    assert not json.loads(capsys.readouterr().out)['total_holds']


def test_smith_samples(capsys):
    path = sample_path('smith_f5.json')
    cli.run(['smith', path, path, '--p', '5', '--samples', '5', '--seed', '3'])
    assert len(json.loads(capsys.readouterr().out)['windows']) == 5


def test_maslov(capsys):
    assert cli.run(['maslov', '--d', '1', '--m', '2', '--t', '1.5']) == 0
    assert json.loads(capsys.readouterr().out)['difference'] == 4


def test_rotation(capsys):
    argv = ['rotation', '--coeffs', '0', '0.70710678', '--m', '2', '--grid', '83']
    assert cli.run(argv) == 0
    data = json.loads(capsys.readouterr().out)
    assert data['barcode']['d'] == 1


def test_verify_identities(capsys):
    assert cli.run(['verify-identities', '--suite', 'identities', '--samples', '10']) == 0
    data = json.loads(capsys.readouterr().out)
    assert data['holds'] and 'bmn' in data['identities']


@pytest.mark.parametrize('argv', [
    ['barcode', sample_path('torsion.cplx'), '--field', 'f2'],
    ['verify-identities', '--suite', 'all', '--samples', '5', '--seed', '17'],
])
def test_identical_invocations_print_identical_bytes(capsys, argv):
    outputs = []
    for _ in range(2):
        cli.run(list(argv))
        outputs.append(capsys.readouterr().out.encode('utf-8'))
    assert outputs[0] and outputs[0] == outputs[1]


def svg_bars(path):
    root = ElementTree.parse(str(path)).getroot()
    rects = [e for e in root.iter(SVG_NS + 'rect') if 'bar' in e.get('class', '').split()]
    paths = [e for e in root.iter(SVG_NS + 'path') if 'infinite' in e.get('class', '').split()]
    return rects, paths


def test_periodic_svg_draws_each_bar_of_the_window(capsys, tmp_path):
    svg = tmp_path / 'window.svg'
    lo, hi = Fraction(1, 7), Fraction(20, 7)
    argv = ['periodic-stats', sample_path('two_orbits.json'), '--svg', str(svg),
            '--window', '1/7', '20/7']
    cli.run(argv)
    capsys.readouterr()
    pb = periodic_from_json(read_data_file(sample_path('two_orbits.json')))
    bars = list(expand_window(pb, lo, hi).expanded())
    rects, paths = svg_bars(svg)
    assert len(rects) + len(paths) == len(bars)
    assert len(paths) == sum(1 for b in bars if b.is_infinite)
    assert paths
    for element in paths:
        assert 'Z' not in element.get('d').upper()
    assert len({element.get('d').split()[-1] for element in paths}) == 1


def test_barcode_svg_has_one_element_per_bar(capsys, tmp_path):
    svg = tmp_path / 'torsion.svg'
    assert cli.run(['barcode', sample_path('torsion.cplx'), '--field', 'f2', '--svg', str(svg)]) == 0
    bars = json.loads(capsys.readouterr().out)['bars']
    rects, paths = svg_bars(svg)
    assert (len(rects), len(paths)) == (0, sum(bar['mult'] for bar in bars))


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.run(['qindex', '--n', '3'])
    assert exc.value.code == 2
    assert 'E:UsageError:' in capsys.readouterr().err


def test_no_command(capsys):
    assert cli.run([]) == 2


def test_missing_file(capsys, tmp_path):
    assert cli.run(['barcode', str(tmp_path / 'missing.cplx')]) == 2
    assert capsys.readouterr().err.startswith('E:InputError:')


def test_syntax_error(capsys, tmp_path):
    path = tmp_path / 'broken.cplx'
    path.write_text('gen x 0\n')
    assert cli.run(['barcode', str(path)]) == 2
    assert capsys.readouterr().err.startswith('E:SyntaxError:line 1')


def test_invalid_config(capsys):
    assert cli.run(['qindex', '--n', '3', '--d', '1', '--n0', '3']) == 2
    assert capsys.readouterr().err.startswith('E:ConfigError:')


def test_debug_flag_raises_log_level(mocker, capsys):
    set_level = mocker.patch('smithbar.cli.set_level')
    cli.run(['qindex', '--n', '1', '--d', '0', '--debug'])
    set_level.assert_called_once_with(logging.DEBUG)


def test_dotenv_loaded_once(no_dotenv, capsys):
    cli.run(['qindex', '--n', '1', '--d', '0'])
    no_dotenv.assert_called_once_with()


# ---------------------------------------------------------------------------
# pjoin
# ---------------------------------------------------------------------------

def test_pjoin_subcommand(capsys):
    assert cli.run(['pjoin', 'pullback', '3', '2', '2']) == 0
    assert capsys.readouterr().out.strip() == 'u1^2 + u1*u2 + u2^2'


@pytest.mark.parametrize('argv,expected', [
    (['pullback', '3', '1', '2'], 'u1*u2 + u2^2'),
    (['push', '2', '1'], '[CP^4]'),
    (['assoc-sweep', '5'], 'checked=216 failures=0'),
    (['homlength', '3', '2'], 'length=5 witness=[CP^4]'),
    (['binomial', '5', '--m', '6', '--n', '6'], 'k=5 holds=true'),
    (['stabilize', '1', '2'], '[CP^4]'),
    (['cap', '3', '1'], '[CP^2]'),
])
def test_pjoin_entry_point(capsys, argv, expected):
    with pytest.raises(SystemExit) as exc:
        pjoin_cli.main(argv)
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip() == expected
