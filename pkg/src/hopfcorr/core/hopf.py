"""Hopf *-algebra structure maps on a presented algebra.

A Presentation bundles a rewrite system with generator images of the
coproduct, counit and antipode, together with a monomial-diagonal admissible
bijection alpha (g -> s_g g) and the modular weights of the scaling group
(tau_{it}(g) = w_g^t g). Everything else is extended (anti)homomorphically
and cached per word.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping

from .errors import CoassociativityViolation, SingularGamma
from .ncalg import (NCPoly, RewriteSystem, TensorPoly, Word, _accumulate,
                    enumerate_normal_words, mul, normal_form, star)
from .report import Report, Tally
from .scalars import Scalar

logger = logging.getLogger(__name__)

Power = int | Fraction | float


class _StructureCache:
    """Per-word images of Delta, epsilon and S (independent of alpha)."""

    def __init__(self):
        self.delta: dict[Word, TensorPoly] = {}
        self.epsilon: dict[Word, Scalar] = {}
        self.antipode: dict[Word, NCPoly] = {}


class Presentation:
    """Hopf *-algebra given by generators, rules and generator images.

    Args:
        name: Display name (preset name or file stem)
        system: Rewrite system of the underlying *-algebra
        delta_images: Generator index -> rank-2 TensorPoly
        epsilon_images: Generator index -> Scalar
        antipode_images: Generator index -> NCPoly
        alpha_scalings: Generator index -> scaling of alpha
        modular_weights: Generator index -> positive weight of the scaling group
        parameters: Named parameters the presentation was built with
        alpha_label: How alpha was chosen ('preset', 'id', 'tau:t', ...)
        source: Raw file sections (coefficient expressions unevaluated) written back on save
    """

    def __init__(self, name: str, system: RewriteSystem,
                 delta_images: Mapping[int, TensorPoly],
                 epsilon_images: Mapping[int, Scalar],
                 antipode_images: Mapping[int, NCPoly],
                 alpha_scalings: Mapping[int, Scalar],
                 modular_weights: Mapping[int, Scalar] | None = None,
                 parameters: Mapping[str, Scalar] | None = None,
                 alpha_label: str = 'preset',
                 source: Mapping[str, Any] | None = None,
                 _cache: _StructureCache | None = None):
        self.name = name
        self.system = system
        self.backend = system.backend
        one = Scalar.one(self.backend)
        n = len(system.generators)
        self.delta_images = {g: delta_images[g] for g in range(n)}
        self.epsilon_images = {g: epsilon_images[g] for g in range(n)}
        self.antipode_images = {g: antipode_images[g] for g in range(n)}
        self.alpha_scalings = {g: alpha_scalings.get(g, one) for g in range(n)}
        weights = modular_weights or {}
        self.modular_weights = {g: weights.get(g, one) for g in range(n)}
        self.parameters = dict(parameters or {})
        self.alpha_label = alpha_label
        self.source = dict(source or {})
        self._cache = _cache or _StructureCache()
        self._powers: dict[tuple[str, Power], dict[int, Scalar]] = {}

    @property
    def generators(self) -> tuple[str, ...]:
        return self.system.generators

    def monomial(self, word: Word) -> NCPoly:
        """The normal word as a polynomial (no reduction)."""
        return NCPoly(self.system, {tuple(word): Scalar.one(self.backend)})

    def with_alpha(self, scalings: Mapping[int, Scalar], label: str = 'custom') -> Presentation:
        """Same Hopf algebra with another monomial-diagonal alpha."""
        return Presentation(self.name, self.system, self.delta_images, self.epsilon_images,
                            self.antipode_images, scalings, self.modular_weights,
                            self.parameters, label,
                            {k: v for k, v in self.source.items() if k != 'alpha'}, self._cache)

    def with_identity_alpha(self) -> Presentation:
        return self.with_alpha({}, 'id')

    def with_tau(self, t: Power) -> Presentation:
        """alpha = tau_{it}: g -> w_g^t g.

        Raises:
            IrrationalPower: If some weight power is irrational under Exact
        """
        return self.with_alpha(self._table('weight', t), f"tau:{t}")

    def is_kac(self) -> bool:
        """True when the scaling group is trivial."""
        return all(w == 1 for w in self.modular_weights.values())

    def _table(self, kind: str, power: Power) -> dict[int, Scalar]:
        key = (kind, power)
        cached = self._powers.get(key)
        if cached is None:
            base = self.alpha_scalings if kind == 'alpha' else self.modular_weights
            if isinstance(power, int):
                cached = {g: s ** power for g, s in base.items()}
            else:
                cached = {g: s.power(power) for g, s in base.items()}
            self._powers[key] = cached
        return cached

    # Word-level extensions (raw words allowed, so rules can be checked)

    def delta_word(self, word: Word) -> TensorPoly:
        cached = self._cache.delta.get(word)
        if cached is None:
            if not word:
                cached = TensorPoly.unit(self.system, 2)
            else:
                cached = self.delta_word(word[:-1]) * self.delta_images[word[-1]]
            self._cache.delta[word] = cached
        return cached

    def epsilon_word(self, word: Word) -> Scalar:
        cached = self._cache.epsilon.get(word)
        if cached is None:
            cached = Scalar.one(self.backend)
            for g in word:
                cached = cached * self.epsilon_images[g]
            self._cache.epsilon[word] = cached
        return cached

    def antipode_word(self, word: Word) -> NCPoly:
        cached = self._cache.antipode.get(word)
        if cached is None:
            if not word:
                cached = self.system.one()
            else:
                cached = mul(self.antipode_word(word[1:]), self.antipode_images[word[0]])
            self._cache.antipode[word] = cached
        return cached

    def __repr__(self) -> str:
        return (f"Presentation({self.name!r}, {len(self.generators)} generators, "
                f"alpha={self.alpha_label}, backend={self.backend.value})")


@dataclass(frozen=True)
class SweedlerExpansion:
    """Delta(a) as a list of (leg1, leg2, coefficient) with monomial legs."""

    pairs: tuple[tuple[NCPoly, NCPoly, Scalar], ...] = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def folded(self) -> list[tuple[NCPoly, NCPoly]]:
        """Pairs with the coefficient moved into the first leg."""
        return [(leg1.scale(c), leg2) for leg1, leg2, c in self.pairs]

    def tensor(self) -> TensorPoly:
        if not self.pairs:
            raise ValueError("Empty expansion has no rewrite system attached")
        system = self.pairs[0][0].system
        out = TensorPoly(system, 2, {})
        for leg1, leg2, c in self.pairs:
            out = out + TensorPoly.simple([leg1, leg2], c)
        return out


# Structure maps

def delta(P: Presentation, a: NCPoly) -> TensorPoly:
    """Coproduct, the homomorphic extension of the generator images."""
    out: dict[tuple[Word, ...], Scalar] = {}
    for w, c in a.terms.items():
        for key, x in P.delta_word(w).terms.items():
            _accumulate(out, key, x * c)
    return TensorPoly(P.system, 2, out)


def _expand_leg(P: Presentation, t: TensorPoly, leg: int) -> TensorPoly:
    out: dict[tuple[Word, ...], Scalar] = {}
    for key, c in t.terms.items():
        for k2, c2 in P.delta_word(key[leg]).terms.items():
            _accumulate(out, key[:leg] + k2 + key[leg + 1:], c * c2)
    return TensorPoly(P.system, t.rank + 1, out)


def delta2(P: Presentation, a: NCPoly) -> TensorPoly:
    """Triple coproduct; both bracketings are computed and compared.

    Raises:
        CoassociativityViolation: If (Delta x id)Delta(a) != (id x Delta)Delta(a)
    """
    d = delta(P, a)
    left = _expand_leg(P, d, 0)
    right = _expand_leg(P, d, 1)
    if left != right:
        raise CoassociativityViolation(f"Delta is not coassociative on {a}: {left - right}")
    return left


def epsilon(P: Presentation, a: NCPoly) -> Scalar:
    total = Scalar.zero(P.backend)
    for w, c in a.terms.items():
        total = total + c * P.epsilon_word(w)
    return total


def antipode(P: Presentation, a: NCPoly) -> NCPoly:
    """Antipode, the antihomomorphic extension of the generator images."""
    out = P.system.zero()
    for w, c in a.terms.items():
        out = out + P.antipode_word(w).scale(c)
    return out


def _diagonal(P: Presentation, a: NCPoly, table: Mapping[int, Scalar]) -> NCPoly:
    out: dict[Word, Scalar] = {}
    for w, c in a.terms.items():
        x = c
        for g in w:
            x = x * table[g]
        if not x.is_zero():
            out[w] = x
    return NCPoly(P.system, out)


def alpha_apply(P: Presentation, a: NCPoly, power: Power = 1) -> NCPoly:
    """alpha^power, scaling each monomial w by lambda_w^power.

    Raises:
        IrrationalPower: Exact backend with an irrational scaling power
    """
    return _diagonal(P, a, P._table('alpha', power))


def tau_apply(P: Presentation, a: NCPoly, t: Power) -> NCPoly:
    """Scaling group tau_{it}: each monomial w scaled by (prod of weights)^t."""
    return _diagonal(P, a, P._table('weight', t))


def word_eigenvalue(P: Presentation, word: Word, power: Power = 1) -> Scalar:
    """Eigenvalue lambda_w of alpha^power on the monomial w."""
    table = P._table('alpha', power)
    x = Scalar.one(P.backend)
    for g in word:
        x = x * table[g]
    return x


def twisted_antipode(P: Presentation, a: NCPoly) -> NCPoly:
    """S_alpha = S o alpha."""
    return antipode(P, alpha_apply(P, a))


def unitary_antipode(P: Presentation, a: NCPoly) -> NCPoly:
    """R = S o tau_{i/2}."""
    return antipode(P, tau_apply(P, a, Fraction(1, 2)))


def gamma(P: Presentation, a: NCPoly) -> NCPoly:
    """gamma = id + alpha."""
    return a + alpha_apply(P, a)


def gamma_inverse(P: Presentation, a: NCPoly) -> NCPoly:
    """Inverse of id + alpha, monomial by monomial.

    Raises:
        SingularGamma: If 1 + lambda_w = 0 for a monomial of a
    """
    out: dict[Word, Scalar] = {}
    for w, c in a.terms.items():
        d = word_eigenvalue(P, w) + 1
        if d.is_zero():
            raise SingularGamma(f"1 + lambda = 0 on monomial {P.system.format_word(w) or '1'}")
        out[w] = c / d
    return NCPoly(P.system, out)


def sweedler(P: Presentation, a: NCPoly) -> SweedlerExpansion:
    pairs = tuple((P.monomial(k[0]), P.monomial(k[1]), c) for k, c in delta(P, a))
    return SweedlerExpansion(pairs)


def antipode_degree(P: Presentation) -> int:
    """Largest degree of a generator's antipode image (at least 1)."""
    return max([1] + [s.degree() for s in P.antipode_images.values()])


def coproduct_degree(P: Presentation) -> int:
    """Largest leg degree in a generator's coproduct image (at least 1)."""
    return max([1] + [len(w) for t in P.delta_images.values() for key in t.terms for w in key])


# Verification helpers

def _residual(x: NCPoly | TensorPoly) -> float:
    return max((abs(c) for c in x.terms.values()), default=0.0)


def _map_legs(P: Presentation, t: TensorPoly, fn: Callable[[NCPoly], NCPoly],
              flip: bool = False, conj: bool = False) -> TensorPoly:
    out = TensorPoly(P.system, t.rank, {})
    for key, c in t.terms.items():
        legs = [fn(P.monomial(w)) for w in key]
        if flip:
            legs.reverse()
        out = out + TensorPoly.simple(legs, c.conj() if conj else c)
    return out


def _contract(P: Presentation, t: TensorPoly, left: Callable[[NCPoly], NCPoly],
              right: Callable[[NCPoly], NCPoly]) -> NCPoly:
    """m o (left x right) applied to a rank-2 tensor."""
    out = P.system.zero()
    for (w1, w2), c in t.terms.items():
        out = out + mul(left(P.monomial(w1)), right(P.monomial(w2))).scale(c)
    return out


def _raw_rhs(P: Presentation, rule, fn: Callable[[Word], object], zero):
    total = zero
    for mono, coef in rule.rhs:
        image = fn(mono)
        total = total + (image * coef if isinstance(image, Scalar) else image.scale(coef))
    return total


def _check_rules(P: Presentation, report: Report) -> None:
    """Delta, epsilon, S, * and alpha map each rule lhs and rhs to the same element."""
    system = P.system
    fmt = system.format_word
    tallies = {name: Tally(name) for name in (
        'delta respects relations', 'epsilon respects relations',
        'antipode respects relations', 'star respects relations')}
    for rule in system.rules:
        label = fmt(rule.lhs)
        diff = P.delta_word(rule.lhs) - _raw_rhs(P, rule, P.delta_word, TensorPoly(system, 2, {}))
        tallies['delta respects relations'].record(diff.is_zero(), _residual(diff), label)
        e = P.epsilon_word(rule.lhs) - _raw_rhs(P, rule, P.epsilon_word, Scalar.zero(P.backend))
        tallies['epsilon respects relations'].record(e.is_zero(), abs(e), label)
        s = P.antipode_word(rule.lhs) - _raw_rhs(P, rule, P.antipode_word, system.zero())
        tallies['antipode respects relations'].record(s.is_zero(), _residual(s), label)
        lhs_star = normal_form(system, {system.star_word(rule.lhs): Scalar.one(P.backend)})
        rhs_star = normal_form(system, [(system.star_word(m), c.conj()) for m, c in rule.rhs])
        d = lhs_star - rhs_star
        tallies['star respects relations'].record(d.is_zero(), _residual(d), label)
    for tally in tallies.values():
        tally.emit(report)


def _check_alpha_homogeneous(P: Presentation, report: Report, name: str) -> None:
    tally = Tally(name)
    for rule in P.system.rules:
        lam = word_eigenvalue(P, rule.lhs)
        for mono, _ in rule.rhs:
            other = word_eigenvalue(P, mono)
            tally.record(lam == other, abs(lam - other),
                         f"{P.system.format_word(rule.lhs)}: {lam} vs {other}")
    tally.emit(report)


def verify_hopf_axioms(P: Presentation, max_deg: int = 4) -> Report:
    """Check the Hopf *-algebra axioms on generators, rules and short words.

    Args:
        P: Presentation to check
        max_deg: Longest normal word used for the word-level identities

    Returns:
        Report with one check per axiom; witnesses name the first failing word
    """
    report = Report('verify-hopf')
    system = P.system
    fmt = system.format_word
    words = enumerate_normal_words(system, max_deg)
    gens = [(g,) for g in range(len(system.generators))]

    _check_rules(P, report)
    _check_alpha_homogeneous(P, report, 'alpha respects relations')

    coassoc = Tally('coassociativity')
    counit = Tally('counit law')
    for w in words:
        d = P.delta_word(w)
        diff = _expand_leg(P, d, 0) - _expand_leg(P, d, 1)
        coassoc.record(diff.is_zero(), _residual(diff), fmt(w) or '1')
        x = P.monomial(w)
        left = _contract(P, d, lambda m: system.scalar(epsilon(P, m)), lambda m: m)
        right = _contract(P, d, lambda m: m, lambda m: system.scalar(epsilon(P, m)))
        r = max(_residual(left - x), _residual(right - x))
        counit.record(left == x and right == x, r, fmt(w) or '1')
    coassoc.emit(report)
    counit.emit(report)

    relation = Tally('antipode relation')
    s_of = lambda m: antipode(P, m)
    for w in (w for w in words if len(w) <= min(max_deg, 3)):
        d = P.delta_word(w)
        target = system.scalar(P.epsilon_word(w))
        left = _contract(P, d, s_of, lambda m: m)
        right = _contract(P, d, lambda m: m, s_of)
        r = max(_residual(left - target), _residual(right - target))
        relation.record(left == target and right == target, r, fmt(w) or '1')
    relation.emit(report)

    star_compat = Tally('star compatibility')
    involution = Tally('S o * o S o * = id')
    intertwine = Tally('alpha intertwines delta')
    counit_alpha = Tally('epsilon o alpha = epsilon')
    for g in gens:
        x = P.monomial(g)
        gs = star(x)
        d = delta(P, gs) - _map_legs(P, P.delta_word(g), star, conj=True)
        e = epsilon(P, gs) - P.epsilon_word(g).conj()
        star_compat.record(d.is_zero() and e.is_zero(), max(_residual(d), abs(e)), fmt(g))
        back = antipode(P, star(antipode(P, star(x))))
        involution.record(back == x, _residual(back - x), fmt(g))
        lam = word_eigenvalue(P, g)
        d = _map_legs(P, P.delta_word(g), lambda m: alpha_apply(P, m)) - P.delta_word(g).scale(lam)
        intertwine.record(d.is_zero(), _residual(d), fmt(g))
        e = P.epsilon_word(g) * lam - P.epsilon_word(g)
        counit_alpha.record(e.is_zero(), abs(e), fmt(g))
    for tally in (star_compat, involution, intertwine, counit_alpha):
        tally.emit(report)
    report.data.update({'presentation': P.name, 'max_deg': max_deg, 'words': len(words)})
    logger.debug(f"verify_hopf_axioms({P.name}): {report.summary()}")
    return report


def verify_admissible(P: Presentation, max_deg: int = 4) -> Report:
    """Check that alpha is an admissible bijection and its derived properties.

    Conditions (i)-(v) of admissibility are itemized, followed by the seven
    consequences for alpha and S_alpha, all on generators and words up to
    max_deg (three for the word-level consequences).
    """
    report = Report('check-admissible')
    system = P.system
    fmt = system.format_word
    one = Scalar.one(P.backend)
    gens = [(g,) for g in range(len(system.generators))]
    words = enumerate_normal_words(system, max_deg)
    short = [w for w in words if len(w) <= min(max_deg, 3)]

    signs = Tally('alpha scalings positive')
    for g, s in P.alpha_scalings.items():
        signs.record(s.is_positive(), 0.0, f"{system.generators[g]}: {s}")
    signs.emit(report)

    _check_alpha_homogeneous(P, report, '(i) alpha is a homomorphism')

    star_pair = Tally('(ii) alpha o * o alpha o * = id')
    intertwine = Tally('(iii) alpha intertwines delta')
    for g in gens:
        x = P.monomial(g)
        back = alpha_apply(P, star(alpha_apply(P, star(x))))
        star_pair.record(back == x, _residual(back - x), fmt(g))
        lam = word_eigenvalue(P, g)
        d = _map_legs(P, P.delta_word(g), lambda m: alpha_apply(P, m)) - P.delta_word(g).scale(lam)
        intertwine.record(d.is_zero(), _residual(d), fmt(g))
    star_pair.emit(report)
    intertwine.emit(report)

    eigen: dict[Scalar, Word] = {}
    gamma_ok = Tally('(iv) id + alpha is bijective')
    for w in words:
        lam = word_eigenvalue(P, w)
        eigen.setdefault(lam, w)
        gamma_ok.record(not (lam + 1).is_zero(), 0.0, f"{fmt(w) or '1'}: 1+({lam})=0")
    gamma_ok.emit(report, eigenvalues=sorted(str(v) for v in eigen))
    pair_ok = Tally('(v) id + alpha x alpha is bijective')
    for (l1, w1), (l2, w2) in itertools.combinations_with_replacement(eigen.items(), 2):
        pair_ok.record(not (l1 * l2 + 1).is_zero(), 0.0,
                       f"({fmt(w1) or '1'}, {fmt(w2) or '1'}): 1+({l1})({l2})=0")
    pair_ok.emit(report)

    inverse = Tally('property (i) alpha^-1 = * o alpha o *')
    unit = Tally('property (ii) alpha(1) = 1 = S_alpha(1)')
    counit = Tally('property (iii) epsilon o alpha = epsilon = epsilon o S_alpha')
    commute = Tally('property (iv) alpha o S = S o alpha')
    anti = Tally('property (v) S_alpha o * o S_alpha o * = id')
    coprod = Tally('property (vi) (S_alpha x S_alpha) flip delta = delta S_alpha')
    twisted = Tally('property (vii) twisted antipode relation')

    u = system.one()
    unit.record(alpha_apply(P, u) == u and twisted_antipode(P, u) == u, 0.0, '1')
    s_alpha = lambda m: twisted_antipode(P, m)
    a_of = lambda m: alpha_apply(P, m)
    for g in gens:
        x = P.monomial(g)
        d = alpha_apply(P, x, -1) - star(alpha_apply(P, star(x)))
        inverse.record(d.is_zero(), _residual(d), fmt(g))
        d = alpha_apply(P, antipode(P, x)) - antipode(P, alpha_apply(P, x))
        commute.record(d.is_zero(), _residual(d), fmt(g))
        d = _map_legs(P, P.delta_word(g), s_alpha, flip=True) - delta(P, s_alpha(x))
        coprod.record(d.is_zero(), _residual(d), fmt(g))
    for g1, g2 in itertools.product(range(len(gens)), repeat=2):
        x, y = P.monomial((g1,)), P.monomial((g2,))
        d = s_alpha(mul(x, y)) - mul(s_alpha(y), s_alpha(x))
        anti.record(d.is_zero(), _residual(d), f"{fmt((g1, g2))} (antihomomorphism)")
    for w in short:
        x = P.monomial(w)
        e = [epsilon(P, alpha_apply(P, x)), epsilon(P, s_alpha(x))]
        target = P.epsilon_word(w)
        counit.record(all(v == target for v in e), max(abs(v - target) for v in e), fmt(w) or '1')
        back = s_alpha(star(s_alpha(star(x))))
        anti.record(back == x, _residual(back - x), fmt(w) or '1')
        d = P.delta_word(w)
        unit_target = system.scalar(target)
        left = _contract(P, d, s_alpha, a_of)
        right = _contract(P, d, a_of, s_alpha)
        r = max(_residual(left - unit_target), _residual(right - unit_target))
        twisted.record(left == unit_target and right == unit_target, r, fmt(w) or '1')
    for tally in (inverse, unit, counit, commute, anti, coprod, twisted):
        tally.emit(report)

    homog = Tally('alpha commutes with normal form')
    for length in range(min(max_deg, 3) + 1):
        for raw in itertools.product(range(len(gens)), repeat=length):
            raw_poly = {raw: word_eigenvalue(P, raw)}
            d = normal_form(system, raw_poly) - alpha_apply(P, normal_form(system, {raw: one}))
            homog.record(d.is_zero(), _residual(d), fmt(raw) or '1')
    homog.emit(report)
    report.data.update({'presentation': P.name, 'alpha': P.alpha_label,
                        'scalings': {system.generators[g]: str(s) for g, s in P.alpha_scalings.items()}})
    logger.debug(f"verify_admissible({P.name}): {report.summary()}")
    return report
