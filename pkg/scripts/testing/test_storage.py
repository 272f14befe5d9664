"""Tests for JSON storage, coefficient expressions and preset lookup."""

import json
import sys
import tempfile
from fractions import Fraction
from pathlib import Path
from unittest.mock import patch

PROJECT_ROOT = Path(__file__).parent.parent.parent.resolve()
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import pytest

from src.hopfcorr.core.errors import ParseError, RuleOrderViolation, ValidationFailed
from src.hopfcorr.core.linalg import SparseVector
from src.hopfcorr.core.scalars import Backend, Scalar
from src.hopfcorr.utils.config import get_data_dir
from src.hopfcorr.utils.presets import (list_presets, load_cocycle, load_coreps, load_functional,
                                        load_presentation, parse_ref, resolve_artifact)
from src.hopfcorr.utils.storage import (cocycle_from_dict, cocycle_to_dict, coreps_from_dict, coreps_to_dict,
                                        dumps, functional_from_dict, functional_to_dict, parse_coefficient,
                                        presentation_from_dict, presentation_to_dict, read_json,
                                        vector_from_json, vector_to_json, write_json)

EXACT = Backend.EXACT


def test_parse_ref():
    assert parse_ref("suq2?q=1/3") == ("suq2", {"q": "1/3"})
    assert parse_ref("u2-weighted?q1=3&q2=1") == ("u2-weighted", {"q1": "3", "q2": "1"})
    assert parse_ref("c-z") == ("c-z", {})
    with pytest.raises(ParseError):
        parse_ref("suq2?q=")


def test_parse_coefficient_expressions():
    params = {"q": Scalar(Fraction(1, 2))}
    cases = {
        "q^-2": Scalar(4),
        "-q": Scalar(Fraction(-1, 2)),
        "1/2*q^2": Scalar(Fraction(1, 8)),
        "-i*q": Scalar(0, Fraction(-1, 2)),
        "q/q": Scalar(1),
        "3/4": Scalar(Fraction(3, 4)),
    }
    for text, expected in cases.items():
        got = parse_coefficient(text, params, EXACT)
        assert got == expected, f"{text}: expected {expected}, got {got}"
    assert parse_coefficient(2, params, EXACT) == Scalar(2)
    with pytest.raises(ParseError):
        parse_coefficient("p", params, EXACT)
    with pytest.raises(ParseError):
        parse_coefficient("q/0", params, EXACT)


def test_shipped_presets_listed():
    assert list_presets() == ['c-f2', 'c-z', 'suq2', 'u2-weighted']


EXPLICIT_ARTIFACTS = [
    ('c-z', 'gaussian-cocycle.json', cocycle_from_dict, cocycle_to_dict),
    ('c-z', 'gaussian.json', functional_from_dict, functional_to_dict),
    ('c-f2', 'twisted.json', cocycle_from_dict, cocycle_to_dict),
    ('suq2', 'cocycle.json', cocycle_from_dict, cocycle_to_dict),
    ('suq2', 'coreps.json', coreps_from_dict, coreps_to_dict),
    ('u2-weighted', 'coreps.json', coreps_from_dict, coreps_to_dict),
    ('u2-weighted', 'mixed-cocycle.json', cocycle_from_dict, cocycle_to_dict),
]


@pytest.mark.parametrize("preset", ['c-f2', 'c-z', 'suq2', 'u2-weighted'])
def test_presentation_file_saves_to_same_bytes(preset):
    path = get_data_dir() / f"{preset}.json"
    P = presentation_from_dict(read_json(path))
    assert dumps(presentation_to_dict(P)) == path.read_text(encoding='utf-8')


@pytest.mark.parametrize("preset,file_name,from_dict,to_dict", EXPLICIT_ARTIFACTS)
def test_artifact_file_saves_to_same_bytes(preset, file_name, from_dict, to_dict):
    path = get_data_dir() / preset / file_name
    P = load_presentation(preset)
    assert dumps(to_dict(from_dict(read_json(path), P))) == path.read_text(encoding='utf-8')


def test_shipped_files_are_canonical():
    for path in sorted(get_data_dir().rglob('*.json')):
        text = path.read_text(encoding='utf-8')
        assert dumps(json.loads(text)) == text, f"{path.name} is not written canonically"


def test_saved_expressions_follow_overrides():
    """A saved suq2 keeps "q^-1", so reloading under q=1/3 gives the new eigenvalue."""
    saved = dumps(presentation_to_dict(load_presentation('suq2')))
    data = json.loads(saved)
    assert data['alpha'] == {'c': 'q^-1', 'c*': 'q'}
    P = presentation_from_dict(data, {'q': '1/3'})
    c = P.system.index['c']
    assert P.alpha_scalings[c] == Scalar(3)
    assert P.modular_weights[c] == Scalar(9)
    overridden = presentation_to_dict(P)
    assert overridden['parameters'] == {'q': '1/3'}
    assert overridden['alpha'] == data['alpha']
    assert P.with_identity_alpha().source.get('alpha') is None
    assert presentation_to_dict(P.with_identity_alpha())['alpha'] == {}


def test_coreps_keep_expressions():
    suq2 = load_presentation('suq2')
    F = load_coreps('coreps.json', suq2, preset='suq2')
    half = coreps_to_dict(F)['coreps'][1]
    assert half['Q'] == ['q^-1', 'q']
    assert F.get('1/2').Q == [Scalar(2), Scalar(Fraction(1, 2))]


def test_gaussian_artifact_values():
    cz = load_presentation('c-z')
    L = load_functional('gaussian.json', cz, preset='c-z')
    assert (L.cutoff, L.degree) == (4, 8)
    assert L.value((1, 1, 1)) == Scalar(Fraction(-9, 2))


def test_functional_keys_are_reduced():
    cz = load_presentation('c-z')
    L = functional_from_dict({'cutoff': 1, 'values': {'u u*': '1', '': '2', 'u* u u': '-1/2'}}, cz)
    assert L.value(()) == Scalar(3)
    assert L.value((0,)) == Scalar(Fraction(-1, 2))


def test_sparse_vector_form():
    v = SparseVector(10, {3: Scalar(1, 1)}, EXACT)
    data = vector_to_json(v)
    assert data == {'dim': 10, 'entries': [[3, '1+i']]}
    assert vector_from_json(data, 10, EXACT) == v
    with pytest.raises(ParseError):
        vector_from_json(['1', '2'], 3, EXACT)


def test_malformed_cocycle():
    cz = load_presentation('c-z')
    with pytest.raises(ParseError):
        cocycle_from_dict({'dim': 1}, cz)
    with pytest.raises(ParseError):
        cocycle_from_dict({'dim': 1, 'cutoff': 2, 'eta': {'v': ['1']}}, cz)
    with pytest.raises(ParseError):
        load_cocycle({'recipe': {'type': 'spiral'}}, cz)


def test_json_files():
    with tempfile.TemporaryDirectory() as tmpdir:
        path = write_json({'b': 1, 'a': [1, 2]}, Path(tmpdir) / 'nested' / 'x.json')
        assert path.read_text(encoding='utf-8') == dumps({'a': [1, 2], 'b': 1})
        assert read_json(path) == {'a': [1, 2], 'b': 1}
        broken = Path(tmpdir) / 'broken.json'
        broken.write_text('{not json', encoding='utf-8')
        with pytest.raises(ParseError):
            read_json(broken)
    with pytest.raises(ParseError):
        read_json(Path(tmpdir) / 'missing.json')


def test_resolve_artifact():
    assert resolve_artifact('tree.json', 'c-f2').name == 'tree.json'
    assert resolve_artifact('coreps.json', 'suq2?q=1/3').parent.name == 'suq2'
    with pytest.raises(ParseError):
        resolve_artifact('nothing.json', 'c-z')


def test_data_dir_override():
    """HOPFCORR_DATA_DIR points preset lookup at another directory."""
    with tempfile.TemporaryDirectory() as tmpdir:
        with patch.dict('os.environ', {'HOPFCORR_DATA_DIR': tmpdir}):
            assert list_presets() == []
            with pytest.raises(ParseError):
                load_presentation('c-z')


def test_default_cutoff_from_environment():
    from src.hopfcorr.analysis.gfcocycle import Cocycle, GeneratingFunctional
    cz = load_presentation('c-z')
    with patch.dict('os.environ', {'HOPFCORR_CUTOFF': '5'}):
        assert Cocycle.zero(cz).cutoff == 5
        assert GeneratingFunctional.zero(cz).degree == 10


def test_rule_raising_the_order_fails_validation():
    """u u -> u u u does not decrease the term order, so loading reports it."""
    data = read_json(get_data_dir() / 'c-z.json')
    data['rules'].append({'lhs': ['u', 'u'], 'rhs': [{'coef': '1', 'word': ['u', 'u', 'u']}]})
    with tempfile.TemporaryDirectory() as tmpdir:
        path = write_json(data, Path(tmpdir) / 'bad.json')
        with pytest.raises(ValidationFailed) as e:
            load_presentation(path)
    check = e.value.report.get('rule order')
    assert check is not None and check.passed is False
    assert 'u u u' in check.witness
    assert isinstance(e.value.__cause__, RuleOrderViolation)
