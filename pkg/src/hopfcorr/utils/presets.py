"""Preset presentations, artifact lookup and recipe-built artifacts.

Presets live in the data directory as ``<name>.json`` with their artifacts
under ``<name>/``. A preset reference may override parameters:
``suq2?q=1/3`` or ``u2-weighted?q1=3&q2=1``.

Artifacts are either explicit data or a recipe:
  - cocycle ``tree`` (radius R, optional cutoff): the free-group tree cocycle on the ball of radius R
  - cocycle ``direct-sum`` (parts): block direct sum of inline or file parts
  - functional ``word-length`` (scale): L(w) = scale * |w| on reduced words
  - coreps ``group-elements`` (horizon): the one-dimensional coreps w, |w| <= horizon
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Mapping
from urllib.parse import parse_qsl

from ..analysis.coquant import CorepFamily, group_element_family
from ..analysis.gfcocycle import Cocycle, GeneratingFunctional, direct_sum
from ..core.errors import ParseError
from ..core.hopf import Presentation, verify_admissible, verify_hopf_axioms
from ..core.linalg import SparseMatrix, SparseVector
from ..core.ncalg import Word, check_local_confluence, enumerate_normal_words
from ..core.report import Report
from ..core.scalars import Backend, Scalar
from .config import get_data_dir, get_default_cutoff
from .storage import (coreps_from_dict, cocycle_from_dict, functional_from_dict, parse_coefficient,
                      presentation_from_dict, read_json)

logger = logging.getLogger(__name__)

PRESETS = ('c-z', 'c-f2', 'u2-weighted', 'suq2')
VALIDATION_DEGREE = 3


def parse_ref(ref: str) -> tuple[str, dict[str, str]]:
    """Split "name?k=v&k=v" into the name and its parameter overrides."""
    name, _, query = ref.partition('?')
    overrides = dict(parse_qsl(query, keep_blank_values=True)) if query else {}
    for key, value in overrides.items():
        if not value:
            raise ParseError(f"Empty value for parameter {key!r} in {ref!r}")
    return name.strip(), overrides


def preset_path(name: str) -> Path:
    return get_data_dir() / f"{name}.json"


def list_presets() -> list[str]:
    return sorted(p.stem for p in get_data_dir().glob('*.json'))


def resolve_artifact(ref: str | Path, preset: str | None = None) -> Path:
    """An existing file path, or a file shipped with a preset.

    Raises:
        ParseError: If neither exists
    """
    path = Path(ref)
    if path.exists():
        return path
    if preset is not None:
        shipped = get_data_dir() / parse_ref(preset)[0] / str(ref)
        if shipped.exists():
            return shipped
    raise ParseError(f"Artifact not found: {ref}" + (f" (also looked in preset {preset})" if preset else ''))


def validate_presentation(P: Presentation, max_deg: int = VALIDATION_DEGREE) -> Report:
    """Local confluence, Hopf axioms and admissibility of alpha in one Report."""
    report = Report('validate-presentation')
    report.extend(check_local_confluence(P.system, 2 * max(P.system.max_lhs, 1)), 'confluence')
    report.extend(verify_hopf_axioms(P, max_deg), 'hopf')
    report.extend(verify_admissible(P, max_deg), 'admissible')
    report.data.update({'presentation': P.name, 'alpha': P.alpha_label, 'max_deg': max_deg})
    return report


@lru_cache(maxsize=32)
def _load_cached(path: str, overrides: tuple[tuple[str, str], ...], backend: Backend | None,
                 validate: bool, max_deg: int) -> Presentation:
    P = presentation_from_dict(read_json(path), dict(overrides), backend)
    if validate:
        validate_presentation(P, max_deg).require(f"Presentation {P.name} failed validation")
    logger.info(f"Loaded presentation {P.name} ({len(P.generators)} generators, "
                f"{len(P.system.rules)} rules, {P.backend.value})")
    return P


def load_presentation(ref: str | Path, backend: Backend | None = None, validate: bool = True,
                      max_deg: int = VALIDATION_DEGREE) -> Presentation:
    """Load a preset name (with optional overrides) or a presentation file.

    Raises:
        ParseError: Unknown preset or malformed file
        ValidationFailed: If confluence, the Hopf axioms or admissibility fail
    """
    text = str(ref)
    path = Path(text)
    if path.suffix == '.json' and path.exists():
        overrides: dict[str, str] = {}
    else:
        name, overrides = parse_ref(text)
        path = preset_path(name)
        if not path.exists():
            raise ParseError(f"Unknown preset {name!r}; available: {', '.join(list_presets())}")
    return _load_cached(str(path.resolve()), tuple(sorted(overrides.items())), backend, validate, max_deg)


def apply_alpha(P: Presentation, choice: str | None) -> Presentation:
    """Select alpha: "preset" (or None) keeps the file's, "id", or "tau:t".

    Raises:
        ParseError: Unknown choice
        IrrationalPower: If tau_{it} is irrational under Exact
    """
    if choice in (None, '', 'preset'):
        return P
    if choice == 'id':
        return P.with_identity_alpha()
    if choice.startswith('tau:'):
        try:
            t = Fraction(choice[4:])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"Invalid tau exponent in {choice!r}")
        return P.with_tau(int(t) if t.denominator == 1 else t)
    raise ParseError(f"Unknown alpha {choice!r} (expected id or tau:t)")


# Tree cocycle

def _free_inverse(P: Presentation) -> dict[int, int]:
    return {g: P.system.star_index[g] for g in range(len(P.generators))}


def _translate(word: Word, s: int, inverse: Mapping[int, int]) -> Word:
    if word and word[0] == inverse[s]:
        return word[1:]
    return (s,) + word


def tree_cocycle(P: Presentation, radius: int, cutoff: int | None = None) -> Cocycle:
    """Tree cocycle of a free group, truncated to the ball of a radius.

    The carrier has one coordinate per edge (parent(y), y) of the ball,
    oriented away from 1. Left translation by a generator is a partial
    signed permutation of these edges; its chains are closed into cycles
    with one sign flip each, so no edge vector is fixed. eta(g) is the edge
    from 1 to g, giving eta(w) = sum of the geodesic edges and
    ||eta(w)||^2 = |w| for |w| <= radius. A cutoff above the radius stays a
    valid cocycle of the closed-up representation, no longer geodesic.

    Raises:
        ValueError: If the radius is not positive or the cutoff is below it
    """
    if radius < 1:
        raise ValueError(f"Tree radius must be positive, got {radius}")
    cutoff = radius if cutoff is None else cutoff
    if cutoff < radius:
        raise ValueError(f"Tree cutoff {cutoff} is below the radius {radius}")
    b = P.backend
    inverse = _free_inverse(P)
    nodes = enumerate_normal_words(P.system, radius)
    edge = {y: k for k, y in enumerate(nodes[1:])}
    dim = len(edge)
    one = Scalar.one(b)
    pi: dict[int, SparseMatrix] = {}
    for s in range(len(P.generators)):
        if inverse[s] < s:
            continue
        image: dict[int, tuple[int, int]] = {}
        for y, k in edge.items():
            p_img, y_img = _translate(y[:-1], s, inverse), _translate(y, s, inverse)
            child, sign = (y_img, 1) if len(y_img) > len(p_img) else (p_img, -1)
            if len(child) <= radius:
                image[k] = (edge[child], sign)
        hit = {target for target, _ in image.values()}
        rows: dict[int, dict[int, Scalar]] = {}
        for start in (k for k in range(dim) if k not in hit):
            k, product = start, 1
            while k in image:
                target, sign = image[k]
                rows.setdefault(target, {})[k] = one * sign
                product *= sign
                k = target
            rows.setdefault(start, {})[k] = one * (-product)
        pi[s] = SparseMatrix((dim, dim), rows, b)
        pi[inverse[s]] = pi[s].transpose()
    eta = {g: SparseVector.basis(dim, edge[(g,)], b) for g in range(len(P.generators))}
    logger.info(f"Built tree cocycle on {P.name}: radius {radius}, {dim} edges")
    return Cocycle(P, dim, pi, eta, cutoff, name=f"tree-{radius}")


# Artifacts

def _source(source: str | Path | Mapping[str, Any], preset: str | None) -> tuple[Mapping[str, Any], Path | None]:
    if isinstance(source, Mapping):
        return source, None
    path = resolve_artifact(source, preset)
    return read_json(path), path.parent


def _check_ref(data: Mapping[str, Any], P: Presentation, kind: str) -> None:
    ref = data.get('presentation')
    if ref and parse_ref(str(ref))[0] != P.name:
        logger.warning(f"{kind} {data.get('name', '')!r} was written for {ref}, loading it on {P.name}")


def load_cocycle(source: str | Path | Mapping[str, Any], P: Presentation,
                 preset: str | None = None) -> Cocycle:
    """Load an explicit or recipe cocycle on P.

    Raises:
        ParseError: Malformed data or unknown recipe
    """
    data, base = _source(source, preset)
    _check_ref(data, P, 'Cocycle')
    recipe = data.get('recipe')
    if recipe is None:
        return cocycle_from_dict(data, P)
    kind = recipe.get('type')
    if kind == 'tree':
        radius = int(recipe.get('radius', 3))
        c = tree_cocycle(P, radius, int(recipe.get('cutoff', radius)))
    elif kind == 'direct-sum':
        parts = []
        for part in recipe.get('parts', []):
            if not isinstance(part, Mapping) and base is not None and (base / str(part)).exists():
                part = base / str(part)
            parts.append(load_cocycle(part, P, preset))
        if not parts:
            raise ParseError("direct-sum recipe needs at least one part")
        c = parts[0]
        for part in parts[1:]:
            c = direct_sum(c, part)
    else:
        raise ParseError(f"Unknown cocycle recipe {kind!r}")
    if 'name' in data:
        c.name = data['name']
    return c


def load_functional(source: str | Path | Mapping[str, Any], P: Presentation,
                    preset: str | None = None) -> GeneratingFunctional:
    """Load an explicit or recipe functional on P.

    Raises:
        ParseError: Malformed data or unknown recipe
    """
    data, _ = _source(source, preset)
    _check_ref(data, P, 'Functional')
    recipe = data.get('recipe')
    if recipe is None:
        return functional_from_dict(data, P)
    if recipe.get('type') != 'word-length':
        raise ParseError(f"Unknown functional recipe {recipe.get('type')!r}")
    scale = parse_coefficient(recipe.get('scale', '-1/2'), P.parameters, P.backend)
    cutoff = int(data.get('cutoff', get_default_cutoff()))
    return GeneratingFunctional.from_function(P, lambda w: scale * len(w), cutoff,
                                              data.get('degree'), data.get('name', 'word-length'))


def load_coreps(source: str | Path | Mapping[str, Any], P: Presentation,
                preset: str | None = None) -> CorepFamily:
    """Load an explicit or recipe corep family on P.

    Raises:
        ParseError: Malformed data or unknown recipe
    """
    data, _ = _source(source, preset)
    _check_ref(data, P, 'Corep family')
    recipe = data.get('recipe')
    if recipe is None:
        return coreps_from_dict(data, P)
    if recipe.get('type') != 'group-elements':
        raise ParseError(f"Unknown corep recipe {recipe.get('type')!r}")
    return group_element_family(P, int(recipe.get('horizon', 3)))
