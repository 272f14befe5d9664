"""Tests for the hopfcorr command line: exit codes, reports and artifacts."""

import json
import sys
import tempfile
from pathlib import Path

PROJECT_ROOT = Path(__file__).parent.parent.parent.resolve()
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import pandas as pd
import pytest

from src.hopfcorr.cli import RunConfig, build_parser, main
from src.hopfcorr.utils.config import get_data_dir
from src.hopfcorr.utils.storage import read_json, write_json


def test_verify_hopf_exit_zero(capsys):
    assert main(['verify-hopf', '--preset', 'c-z']) == 0
    report = json.loads(capsys.readouterr().out)
    assert report['status'] == 'pass'
    assert report['command'] == 'verify-hopf'


def test_from_cocycle_writes_report_and_artifact():
    with tempfile.TemporaryDirectory() as tmpdir:
        out = Path(tmpdir) / 'report.json'
        code = main(['from-cocycle', '--preset', 'c-z', '--cocycle', 'gaussian-cocycle.json',
                     '--out', str(out)])
        assert code == 0
        report = read_json(out)
        artifact = Path(tmpdir) / 'report.artifact.json'
        assert artifact.exists(), "Functional artifact was not written next to the report"
        assert report['data']['artifact'] == str(artifact)
        inputs = report['provenance']['inputs']
        assert set(inputs) == {'cocycle', 'presentation'}
        assert all(len(entry['sha256']) == 64 for entry in inputs.values())
        L = read_json(artifact)
        assert L['kind'] == 'functional'
        assert (L['cutoff'], L['degree']) == (4, 8)
        assert L['values']['u u'] == '-2'


def test_attempt_on_twisted_cocycle_fails():
    assert main(['attempt', '--preset', 'c-f2', '--cocycle', 'twisted.json', '--max-deg', '1']) == 1


def test_usage_errors_exit_two(capsys):
    assert main(['verify-hopf', '--preset', 'no-such-preset']) == 2
    report = json.loads(capsys.readouterr().out)
    assert report['checks'][0]['name'] == 'ParseError'
    assert main(['roundtrip', '--preset', 'c-z', '--functional', 'gaussian.json', '--cutoff', '0']) == 2
    assert main(['roundtrip', '--preset', 'c-z', '--functional', 'missing.json']) == 2


def test_exactly_one_source():
    with pytest.raises(SystemExit) as e:
        main(['verify-hopf'])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(['verify-hopf', '--preset', 'c-z', '--presentation', 'c-z.json'])
    assert e.value.code == 2
    with pytest.raises(ValueError):
        RunConfig('verify-hopf')


def test_cutoff_beyond_stored_degree():
    """gaussian.json stores degree 8, so cutoff 5 cannot be honoured."""
    assert main(['roundtrip', '--preset', 'c-z', '--functional', 'gaussian.json', '--cutoff', '5']) == 2
    assert main(['roundtrip', '--preset', 'c-z', '--functional', 'gaussian.json', '--cutoff', '3']) == 0


def test_proper_table():
    with tempfile.TemporaryDirectory() as tmpdir:
        recipe = Path(tmpdir) / 'tree-4.json'
        recipe.write_text(json.dumps({'name': 'tree-4', 'recipe': {'type': 'tree', 'radius': 4}}),
                          encoding='utf-8')
        table = Path(tmpdir) / 'proper.csv'
        code = main(['proper', '--preset', 'c-f2', '--cocycle', str(recipe), '--horizon', '4',
                     '--M', '3', '--table', str(table)])
        assert code == 0
        df = pd.read_csv(table)
        assert len(df) == 1 + 4 + 12 + 36 + 108
        assert int(df['exceptional'].sum()) == 17
        assert list(df['level'])[:5] == [0, 1, 1, 1, 1]


def test_parser_defaults():
    args = build_parser().parse_args(['decompose', '--preset', 'c-z', '--cocycle', 'gaussian-cocycle.json'])
    cfg = RunConfig(**vars(args))
    assert cfg.cutoff is None
    assert cfg.M == '1'
    assert cfg.source == 'c-z'


def test_malformed_rule_exits_one(capsys):
    data = read_json(get_data_dir() / 'c-z.json')
    data['rules'].append({'lhs': ['u', 'u'], 'rhs': [{'coef': '1', 'word': ['u', 'u', 'u']}]})
    with tempfile.TemporaryDirectory() as tmpdir:
        path = write_json(data, Path(tmpdir) / 'bad.json')
        assert main(['verify-hopf', '--presentation', str(path)]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report['status'] == 'fail'
    assert report['checks'][0]['name'] == 'rule order'
