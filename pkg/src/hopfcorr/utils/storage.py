"""JSON storage for presentations, cocycles, functionals and corep families.

Files are written canonically (sorted keys, indent 2, trailing newline) and
coefficient expressions are written back as read, so saving a loaded
canonical file gives back its exact bytes. Scalars are stored as
literal strings; presentations may also use parameter expressions such as
"-q", "q^-2" or "1/2*q".
"""

from __future__ import annotations

import copy
import json
import logging
import re
from pathlib import Path
from typing import Any, Mapping

from ..analysis.coquant import Corep, CorepFamily
from ..analysis.gfcocycle import Cocycle, GeneratingFunctional
from ..core.errors import ParseError, RuleOrderViolation, ValidationFailed
from ..core.hopf import Presentation
from ..core.linalg import SparseMatrix, SparseVector
from ..core.ncalg import NCPoly, RewriteSystem, Rule, TensorPoly, Word, deglex_key, normal_form
from ..core.report import Report
from ..core.scalars import Backend, Scalar, scalar_parse

logger = logging.getLogger(__name__)

# Vectors and matrices at least this large are written in sparse form
SPARSE_THRESHOLD = 8

# Presentation sections written back verbatim when the presentation came from a file
_RAW_SECTIONS = ('rules', 'hopf', 'alpha', 'weights')

_FACTOR_RE = re.compile(r'^(?P<name>[A-Za-z_][A-Za-z0-9_]*)(?:\^(?P<exp>[+-]?\d+))?$')


def read_json(path: Path | str) -> dict[str, Any]:
    """Read a JSON artifact.

    Raises:
        ParseError: If the file is missing or not valid JSON
    """
    path = Path(path)
    try:
        with open(path, encoding='utf-8') as f:
            return json.load(f)
    except FileNotFoundError:
        raise ParseError(f"File not found: {path}")
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON in {path}: {e}") from e


def dumps(data: Mapping[str, Any]) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + '\n'


def write_json(data: Mapping[str, Any], path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dumps(data))
    logger.debug(f"Wrote {path}")
    return path


# Scalars and coefficient expressions

def parse_coefficient(text: str | int, params: Mapping[str, Scalar], backend: Backend) -> Scalar:
    """Literal, or a signed product/quotient of literals and parameter powers.

    Args:
        text: e.g. "3/4", "-q", "q^-2", "1/2*q^2", "-i*q"
        params: Parameter values by name
        backend: Scalar backend

    Raises:
        ParseError: Malformed expression or unknown parameter
    """
    if isinstance(text, int):
        return Scalar.of(text, backend)
    s = text.replace(' ', '')
    try:
        return scalar_parse(s, backend)
    except ParseError:
        pass
    sign = Scalar.one(backend)
    if s.startswith('-'):
        sign, s = -sign, s[1:]
    elif s.startswith('+'):
        s = s[1:]
    if not s:
        raise ParseError(f"Empty coefficient expression {text!r}")
    value = sign
    for op, token in re.findall(r'([*/]?)([^*/]+)', s):
        m = _FACTOR_RE.match(token)
        if m and m['name'] != 'i':
            name = m['name']
            if name not in params:
                raise ParseError(f"Unknown parameter {name!r} in {text!r}")
            factor = params[name] ** int(m['exp'] or 1)
        else:
            factor = scalar_parse(token, backend)
        if op == '/':
            if factor.is_zero():
                raise ParseError(f"Division by zero in {text!r}")
            value = value / factor
        else:
            value = value * factor
    return value


def scalar_text(x: Scalar) -> str:
    return str(x)


# Words and polynomials

def word_from_names(system: RewriteSystem, names: list[str] | str) -> Word:
    return system.parse_word(names)


def poly_from_terms(system: RewriteSystem, terms: list[Mapping[str, Any]],
                    params: Mapping[str, Scalar] | None = None) -> NCPoly:
    """NCPoly from [{"coef": ..., "word": [...]}, ...] (reduced to normal form)."""
    params = params or {}
    raw: dict[Word, Scalar] = {}
    for term in terms:
        w = system.parse_word(term.get('word', []))
        c = parse_coefficient(term.get('coef', '1'), params, system.backend)
        raw[w] = raw[w] + c if w in raw else c
    return normal_form(system, raw)


def poly_to_terms(p: NCPoly) -> list[dict[str, Any]]:
    return [{'coef': str(c), 'word': [p.system.generators[i] for i in w]} for w, c in p]


def tensor_from_terms(system: RewriteSystem, terms: list[Mapping[str, Any]],
                      params: Mapping[str, Scalar]) -> TensorPoly:
    """Rank-2 TensorPoly from [{"coef": ..., "legs": [[...], [...]]}, ...]."""
    out = TensorPoly(system, 2, {})
    for term in terms:
        legs = term['legs']
        if len(legs) != 2:
            raise ParseError(f"Coproduct terms need two legs, got {legs}")
        c = parse_coefficient(term.get('coef', '1'), params, system.backend)
        out = out + TensorPoly.simple([system.word(system.parse_word(leg)) for leg in legs], c)
    return out


def tensor_to_terms(t: TensorPoly) -> list[dict[str, Any]]:
    gens = t.system.generators
    return [{'coef': str(c), 'legs': [[gens[i] for i in w] for w in key]} for key, c in t]


# Vectors and matrices

def vector_from_json(data: Any, dim: int, backend: Backend) -> SparseVector:
    if isinstance(data, Mapping):
        if data.get('dim', dim) != dim:
            raise ParseError(f"Vector of dimension {data.get('dim')} where {dim} is expected")
        return SparseVector(dim, {int(i): scalar_parse(str(x), backend) for i, x in data.get('entries', [])},
                            backend)
    if len(data) != dim:
        raise ParseError(f"Vector of length {len(data)} where {dim} is expected")
    return SparseVector.from_list([scalar_parse(str(x), backend) for x in data], backend)


def vector_to_json(v: SparseVector) -> Any:
    if v.dim >= SPARSE_THRESHOLD:
        return {'dim': v.dim, 'entries': [[i, str(x)] for i, x in sorted(v.entries.items())]}
    return [str(x) for x in v.to_list()]


def matrix_from_json(data: Any, dim: int, backend: Backend) -> SparseMatrix:
    if isinstance(data, Mapping):
        shape = tuple(data.get('shape', (dim, dim)))
        if shape != (dim, dim):
            raise ParseError(f"Matrix of shape {shape} where {(dim, dim)} is expected")
        rows: dict[int, dict[int, Scalar]] = {}
        for i, j, x in data.get('entries', []):
            rows.setdefault(int(i), {})[int(j)] = scalar_parse(str(x), backend)
        return SparseMatrix((dim, dim), rows, backend)
    if len(data) != dim or any(len(row) != dim for row in data):
        raise ParseError(f"Dense matrix is not {dim} x {dim}")
    return SparseMatrix.from_dense([[scalar_parse(str(x), backend) for x in row] for row in data], backend, dim)


def matrix_to_json(m: SparseMatrix) -> Any:
    if m.shape[0] >= SPARSE_THRESHOLD:
        entries = [[i, j, str(x)] for i in sorted(m.rows) for j, x in sorted(m.rows[i].items())]
        return {'shape': list(m.shape), 'entries': entries}
    return [[str(x) for x in row] for row in m.to_dense()]


# Presentations

def _backend_of(data: Mapping[str, Any], backend: Backend | None) -> Backend:
    return backend if backend is not None else Backend.parse(data.get('backend', 'exact'))


def presentation_from_dict(data: Mapping[str, Any], overrides: Mapping[str, str] | None = None,
                           backend: Backend | None = None) -> Presentation:
    """Build a Presentation from its JSON form.

    The raw parameter, rule, hopf, alpha and weight sections are kept on the
    result so saving writes the coefficient expressions back unevaluated.

    Args:
        data: Parsed presentation file
        overrides: Parameter values replacing the file's defaults
        backend: Backend to parse under (defaults to the file's)

    Raises:
        ParseError: Malformed file or unknown override
        ValidationFailed: If a rule does not decrease the term order
    """
    b = _backend_of(data, backend)
    raw_params = dict(data.get('parameters', {}))
    for key in (overrides or {}):
        if key not in raw_params:
            raise ParseError(f"Unknown parameter {key!r} for {data.get('name')}; "
                             f"known: {sorted(raw_params)}")
    raw_params.update(overrides or {})
    params = {k: scalar_parse(str(v), b) for k, v in raw_params.items()}
    try:
        gens = data['generators']
        star = {g['name']: g['star'] for g in gens}
        order = data.get('order') or [g['name'] for g in gens]
        hopf = data['hopf']
    except (KeyError, TypeError) as e:
        raise ParseError(f"Presentation {data.get('name')!r} is missing {e}")
    if sorted(order) != sorted(star):
        raise ParseError(f"order {order} does not list the generators {sorted(star)}")
    free = RewriteSystem(order, star, [], b)
    rules = []
    for r in data.get('rules', []):
        lhs = free.parse_word(r['lhs'])
        rhs = []
        for term in r.get('rhs', []):
            rhs.append((free.parse_word(term.get('word', [])),
                        parse_coefficient(term.get('coef', '1'), params, b)))
        rules.append(Rule(lhs, tuple(rhs)))
    try:
        system = RewriteSystem(order, star, rules, b)
    except RuleOrderViolation as e:
        report = Report('load-presentation')
        report.add('rule order', False, witness=str(e))
        raise ValidationFailed(f"Presentation {data.get('name')!r} has a rule that does not "
                               f"decrease the term order", report) from e

    def per_gen(section: Mapping[str, Any], fn, default=None) -> dict[int, Any]:
        out = {}
        for name in order:
            if name in section:
                out[system.index[name]] = fn(section[name])
            elif default is not None:
                out[system.index[name]] = default
        return out

    for key in ('delta', 'epsilon', 'antipode'):
        missing = [g for g in order if g not in hopf.get(key, {})]
        if missing:
            raise ParseError(f"hopf.{key} has no image for {missing}")
    one = Scalar.one(b)
    source = {key: copy.deepcopy(data[key]) for key in _RAW_SECTIONS if key in data}
    source['parameters'] = {k: str(v) for k, v in raw_params.items()}
    return Presentation(
        data.get('name', 'presentation'), system,
        per_gen(hopf['delta'], lambda t: tensor_from_terms(system, t, params)),
        per_gen(hopf['epsilon'], lambda x: parse_coefficient(x, params, b)),
        per_gen(hopf['antipode'], lambda t: poly_from_terms(system, t, params)),
        per_gen(data.get('alpha', {}), lambda x: parse_coefficient(x, params, b), one),
        per_gen(data.get('weights', {}), lambda x: parse_coefficient(x, params, b), one),
        params,
        source=source,
    )


def presentation_to_dict(P: Presentation) -> dict[str, Any]:
    """JSON form; sections read from a file keep their coefficient expressions."""
    system = P.system
    gens = system.generators
    rules = []
    for rule in system.rules:
        rules.append({'lhs': [gens[i] for i in rule.lhs],
                      'rhs': [{'coef': str(c), 'word': [gens[i] for i in w]} for w, c in rule.rhs]})
    out = {
        'kind': 'presentation',
        'name': P.name,
        'backend': P.backend.value,
        'parameters': {k: str(v) for k, v in P.parameters.items()},
        'generators': [{'name': g, 'star': gens[system.star_index[i]]} for i, g in enumerate(gens)],
        'order': list(gens),
        'rules': rules,
        'hopf': {
            'delta': {gens[g]: tensor_to_terms(t) for g, t in P.delta_images.items()},
            'epsilon': {gens[g]: str(x) for g, x in P.epsilon_images.items()},
            'antipode': {gens[g]: poly_to_terms(p) for g, p in P.antipode_images.items()},
        },
        'alpha': {gens[g]: str(x) for g, x in P.alpha_scalings.items() if x != 1},
        'weights': {gens[g]: str(x) for g, x in P.modular_weights.items() if x != 1},
    }
    for key in ('parameters',) + _RAW_SECTIONS:
        if key in P.source:
            out[key] = copy.deepcopy(P.source[key])
    return out


# Cocycles

def cocycle_from_dict(data: Mapping[str, Any], P: Presentation) -> Cocycle:
    """Cocycle from explicit generator data.

    Generators missing from "pi" act by epsilon(g) I, missing from "eta" map to 0.

    Raises:
        ParseError: Malformed data
    """
    b = P.backend
    system = P.system
    try:
        dim = int(data['dim'])
        cutoff = int(data['cutoff'])
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"Cocycle needs integer dim and cutoff: {e}")
    for section in ('pi', 'eta'):
        unknown = set(data.get(section, {})) - set(system.generators)
        if unknown:
            raise ParseError(f"Cocycle {section} names unknown generators {sorted(unknown)}")
    pi, eta = {}, {}
    for g, name in enumerate(system.generators):
        if name in data.get('pi', {}):
            pi[g] = matrix_from_json(data['pi'][name], dim, b)
        else:
            pi[g] = SparseMatrix.identity(dim, b).scale(P.epsilon_images[g])
        if name in data.get('eta', {}):
            eta[g] = vector_from_json(data['eta'][name], dim, b)
        else:
            eta[g] = SparseVector.zero(dim, b)
    metric = data.get('metric')
    if metric is not None:
        metric = [scalar_parse(str(x), b) for x in metric]
    return Cocycle(P, dim, pi, eta, cutoff, metric, data.get('name', 'cocycle'))


def cocycle_to_dict(c: Cocycle) -> dict[str, Any]:
    gens = c.system.generators
    out = {
        'kind': 'cocycle',
        'name': c.name,
        'presentation': c.presentation.name,
        'dim': c.dim,
        'cutoff': c.cutoff,
        'pi': {gens[g]: matrix_to_json(m) for g, m in c.pi_images.items()},
        'eta': {gens[g]: vector_to_json(v) for g, v in c.eta_images.items()},
    }
    if c.metric is not None:
        out['metric'] = [str(x) for x in c.metric]
    return out


# Functionals

def functional_from_dict(data: Mapping[str, Any], P: Presentation) -> GeneratingFunctional:
    """Functional from {"cutoff", "degree"?, "values": {word-string: scalar}}.

    Keys are reduced to normal form, so "u* u" and "" may both appear and add up.
    """
    b = P.backend
    system = P.system
    values: dict[Word, Scalar] = {}
    for key, x in data.get('values', {}).items():
        poly = normal_form(system, {system.parse_word(key): scalar_parse(str(x), b)})
        for w, c in poly.terms.items():
            values[w] = values[w] + c if w in values else c
    try:
        cutoff = int(data['cutoff'])
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"Functional needs an integer cutoff: {e}")
    degree = data.get('degree')
    return GeneratingFunctional(P, values, cutoff, None if degree is None else int(degree),
                                data.get('name', 'functional'))


def functional_to_dict(L: GeneratingFunctional) -> dict[str, Any]:
    words = sorted((w for w, x in L.values.items() if not x.is_zero()), key=deglex_key)
    return {
        'kind': 'functional',
        'name': L.name,
        'presentation': L.presentation.name,
        'cutoff': L.cutoff,
        'degree': L.degree,
        'values': {L.system.format_word(w): str(L.values[w]) for w in words},
    }


# Corep families

def coreps_from_dict(data: Mapping[str, Any], P: Presentation) -> CorepFamily:
    b = P.backend
    system = P.system
    coreps, source = [], []
    for entry in data.get('coreps', []):
        n = int(entry['dim'])
        U = [[poly_from_terms(system, cell, P.parameters) for cell in row] for row in entry['U']]
        if len(U) != n or any(len(row) != n for row in U):
            raise ParseError(f"Corep {entry.get('label')} is not {n} x {n}")
        Q = [parse_coefficient(x, P.parameters, b) for x in entry.get('Q', ['1'] * n)]
        coreps.append(Corep(str(entry['label']), n, U, Q, int(entry.get('level', 0))))
        source.append({key: copy.deepcopy(entry[key]) for key in ('U', 'Q') if key in entry})
    horizon = data.get('horizon')
    return CorepFamily(P, coreps, data.get('name', 'coreps'), None if horizon is None else int(horizon),
                       source)


def coreps_to_dict(F: CorepFamily) -> dict[str, Any]:
    entries = []
    for i, beta in enumerate(F):
        entry = {'label': beta.label, 'dim': beta.dim, 'level': beta.level,
                 'U': [[poly_to_terms(p) for p in row] for row in beta.U],
                 'Q': [str(q) for q in beta.Q]}
        if F.source is not None:
            entry.update(copy.deepcopy(F.source[i]))
        entries.append(entry)
    out = {
        'kind': 'coreps',
        'name': F.name,
        'presentation': F.presentation.name,
        'coreps': entries,
    }
    if F.horizon is not None:
        out['horizon'] = F.horizon
    return out
