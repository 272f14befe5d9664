"""Free *-algebra modulo a rewriting system.

Words are tuples of generator indices; the generator order of the system is
the index order, so tuple comparison on equal lengths is the lexicographic
part of the degree-lexicographic order. Normal forms are computed by
exhaustive leftmost rewriting with a per-system cache of reduced words.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ContextMismatch, ParseError, RankMismatch, RuleOrderViolation
from .report import Report
from .scalars import Backend, Scalar

logger = logging.getLogger(__name__)

Word = tuple[int, ...]
RawPoly = Mapping[Word, Scalar]

UNIT: Word = ()

# Normal forms kept per rewrite system before the cache is emptied
REDUCTION_CACHE_SIZE = 200_000


def deglex_key(word: Word) -> tuple[int, Word]:
    return len(word), word


def _accumulate(target: dict, key, value: Scalar) -> None:
    if key in target:
        total = target[key] + value
        if total.is_zero():
            del target[key]
        else:
            target[key] = total
    elif not value.is_zero():
        target[key] = value


@dataclass(frozen=True)
class Rule:
    """lhs -> rhs where rhs is a raw polynomial."""

    lhs: Word
    rhs: tuple[tuple[Word, Scalar], ...]


class RewriteSystem:
    """Generators with star pairing, and rules decreasing the deglex order.

    Args:
        generators: Generator names in term order
        star: Name of each generator's adjoint
        rules: Rewriting rules
        backend: Scalar backend of all coefficients

    Raises:
        RuleOrderViolation: If some rhs monomial is not below its lhs
    """

    def __init__(self, generators: Sequence[str], star: Mapping[str, str],
                 rules: Sequence[Rule], backend: Backend = Backend.EXACT):
        self.generators = tuple(generators)
        self.backend = backend
        self.index = {name: i for i, name in enumerate(self.generators)}
        if len(self.index) != len(self.generators):
            raise ParseError(f"Duplicate generator names: {self.generators}")
        try:
            self.star_index = tuple(self.index[star[name]] for name in self.generators)
        except KeyError as e:
            raise ParseError(f"Star pairing refers to unknown generator {e}")
        for i, j in enumerate(self.star_index):
            if self.star_index[j] != i:
                raise ParseError(f"Star pairing is not an involution at {self.generators[i]}")
        for rule in rules:
            for word, _ in rule.rhs:
                if deglex_key(word) >= deglex_key(rule.lhs):
                    raise RuleOrderViolation(
                        f"Rule {self.format_word(rule.lhs)} -> ... has rhs monomial "
                        f"{self.format_word(word)} not below its lhs")
        self.rules = tuple(rules)
        self._by_lhs: dict[Word, Rule] = {}
        for rule in self.rules:
            self._by_lhs.setdefault(rule.lhs, rule)
        self._lengths = sorted({len(r.lhs) for r in self.rules})
        self._cache: dict[Word, dict[Word, Scalar]] = {}

    @property
    def max_lhs(self) -> int:
        return max(self._lengths, default=0)

    # Words

    def parse_word(self, text: str | Sequence[str]) -> Word:
        """Word from a space-separated string (or list) of generator names."""
        names = text.split() if isinstance(text, str) else list(text)
        try:
            return tuple(self.index[n] for n in names)
        except KeyError as e:
            raise ParseError(f"Unknown generator {e} in word {text!r}")

    def format_word(self, word: Word) -> str:
        return ' '.join(self.generators[i] for i in word)

    def star_word(self, word: Word) -> Word:
        return tuple(self.star_index[i] for i in reversed(word))

    def find_redex(self, word: Word) -> tuple[int, Rule] | None:
        for start in range(len(word)):
            for length in self._lengths:
                if start + length > len(word):
                    break
                rule = self._by_lhs.get(word[start:start + length])
                if rule is not None:
                    return start, rule
        return None

    def is_irreducible(self, word: Word) -> bool:
        return self.find_redex(word) is None

    def reduce_word(self, word: Word) -> dict[Word, Scalar]:
        """Normal form of a single word (cached)."""
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        redex = self.find_redex(word)
        if redex is None:
            result = {word: Scalar.one(self.backend)}
        else:
            start, rule = redex
            result: dict[Word, Scalar] = {}
            prefix, suffix = word[:start], word[start + len(rule.lhs):]
            for mono, coef in rule.rhs:
                for w, c in self.reduce_word(prefix + mono + suffix).items():
                    _accumulate(result, w, c * coef)
        if len(self._cache) >= REDUCTION_CACHE_SIZE:
            logger.debug(f"Reduction cache reached {REDUCTION_CACHE_SIZE} words, clearing")
            self._cache.clear()
        self._cache[word] = result
        return result

    def apply_rule_at(self, word: Word, start: int, rule: Rule) -> dict[Word, Scalar]:
        """One rewriting step at a given position (no further reduction)."""
        out: dict[Word, Scalar] = {}
        prefix, suffix = word[:start], word[start + len(rule.lhs):]
        for mono, coef in rule.rhs:
            _accumulate(out, prefix + mono + suffix, coef)
        return out

    # Polynomials

    def poly(self, terms: RawPoly | Iterable[tuple[Word, Scalar]]) -> NCPoly:
        return normal_form(self, terms)

    def zero(self) -> NCPoly:
        return NCPoly(self, {})

    def one(self) -> NCPoly:
        return NCPoly(self, {UNIT: Scalar.one(self.backend)})

    def scalar(self, c: Scalar | int) -> NCPoly:
        c = Scalar.of(c, self.backend)
        return NCPoly(self, {UNIT: c} if not c.is_zero() else {})

    def word(self, word: Word | str, coef: Scalar | int = 1) -> NCPoly:
        w = self.parse_word(word) if isinstance(word, str) else tuple(word)
        return normal_form(self, {w: Scalar.of(coef, self.backend)})

    def gen(self, name: str) -> NCPoly:
        return self.word((self.index[name],))

    def __repr__(self) -> str:
        return f"RewriteSystem({len(self.generators)} generators, {len(self.rules)} rules)"


class NCPoly:
    """Normal-form polynomial: Word -> nonzero Scalar."""

    __slots__ = ('system', 'terms')

    def __init__(self, system: RewriteSystem, terms: dict[Word, Scalar]):
        self.system = system
        self.terms = terms

    def _same(self, other: NCPoly) -> None:
        if other.system is not self.system:
            raise ContextMismatch("Polynomials from different rewrite systems")

    def __iter__(self) -> Iterator[tuple[Word, Scalar]]:
        return iter(sorted(self.terms.items(), key=lambda t: deglex_key(t[0])))

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, word: Word | str) -> Scalar:
        w = self.system.parse_word(word) if isinstance(word, str) else word
        return self.terms.get(w, Scalar.zero(self.system.backend))

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: NCPoly) -> NCPoly:
        if isinstance(other, (int, Scalar)):
            other = self.system.scalar(other)
        self._same(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            _accumulate(out, w, c)
        return NCPoly(self.system, out)

    __radd__ = __add__

    def __neg__(self) -> NCPoly:
        return NCPoly(self.system, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: NCPoly) -> NCPoly:
        if isinstance(other, (int, Scalar)):
            other = self.system.scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> NCPoly:
        return (-self) + other

    def scale(self, c: Scalar | int) -> NCPoly:
        c = Scalar.of(c, self.system.backend)
        if c.is_zero():
            return self.system.zero()
        return NCPoly(self.system, {w: x * c for w, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly) or other.system is not self.system:
            return False
        return (self - other).is_zero()

    def __str__(self) -> str:
        if not self.terms:
            return '0'
        parts = []
        for w, c in self:
            word = self.system.format_word(w) or '1'
            parts.append(f"({c})*{word}" if w else f"({c})")
        return ' + '.join(parts)

    def __repr__(self) -> str:
        return f"NCPoly({self})"


class TensorPoly:
    """Element of A (x) A or A (x) A (x) A with componentwise normal-form words."""

    __slots__ = ('system', 'rank', 'terms')

    def __init__(self, system: RewriteSystem, rank: int, terms: dict[tuple[Word, ...], Scalar]):
        self.system = system
        self.rank = rank
        self.terms = terms

    @classmethod
    def unit(cls, system: RewriteSystem, rank: int) -> TensorPoly:
        return cls(system, rank, {(UNIT,) * rank: Scalar.one(system.backend)})

    @classmethod
    def simple(cls, legs: Sequence[NCPoly], coef: Scalar | int = 1) -> TensorPoly:
        """coef * legs[0] (x) legs[1] (x) ..."""
        system = legs[0].system
        c = Scalar.of(coef, system.backend)
        terms: dict[tuple[Word, ...], Scalar] = {(): c}
        for leg in legs:
            nxt: dict[tuple[Word, ...], Scalar] = {}
            for key, x in terms.items():
                for w, y in leg.terms.items():
                    _accumulate(nxt, key + (w,), x * y)
            terms = nxt
        return cls(system, len(legs), terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda t: [deglex_key(w) for w in t[0]]))

    def is_zero(self) -> bool:
        return not self.terms

    def _same(self, other: TensorPoly) -> None:
        if other.system is not self.system:
            raise ContextMismatch("Tensors from different rewrite systems")
        if other.rank != self.rank:
            raise RankMismatch(f"Rank {self.rank} vs rank {other.rank}")

    def __add__(self, other: TensorPoly) -> TensorPoly:
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _accumulate(out, k, c)
        return TensorPoly(self.system, self.rank, out)

    def __neg__(self) -> TensorPoly:
        return TensorPoly(self.system, self.rank, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: TensorPoly) -> TensorPoly:
        return self + (-other)

    def scale(self, c: Scalar | int) -> TensorPoly:
        c = Scalar.of(c, self.system.backend)
        return TensorPoly(self.system, self.rank,
                          {k: x * c for k, x in self.terms.items() if not (x * c).is_zero()})

    def __mul__(self, other):
        if isinstance(other, TensorPoly):
            return tensor_mul(self, other)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorPoly) or other.system is not self.system:
            return False
        if other.rank != self.rank:
            return False
        return (self - other).is_zero()

    def __str__(self) -> str:
        if not self.terms:
            return '0'
        fmt = self.system.format_word
        return ' + '.join(f"({c})*" + ' (x) '.join(fmt(w) or '1' for w in key) for key, c in self)

    def __repr__(self) -> str:
        return f"TensorPoly(rank={self.rank}, {self})"


def normal_form(system: RewriteSystem, p: RawPoly | Iterable[tuple[Word, Scalar]] | NCPoly) -> NCPoly:
    """Reduce a raw polynomial to normal form.

    Args:
        system: Rewrite system
        p: Mapping or iterable of (word, coefficient) pairs

    Returns:
        NCPoly whose words are irreducible; idempotent on its output
    """
    if isinstance(p, NCPoly):
        p = p.terms
    items = p.items() if isinstance(p, Mapping) else p
    out: dict[Word, Scalar] = {}
    n = len(system.generators)
    for word, coef in items:
        word = tuple(word)
        if any(not 0 <= i < n for i in word):
            raise ParseError(f"Generator index out of range in {word}")
        coef = Scalar.of(coef, system.backend)
        if coef.is_zero():
            continue
        for w, c in system.reduce_word(word).items():
            _accumulate(out, w, c * coef)
    return NCPoly(system, out)


def mul(p: NCPoly, q: NCPoly) -> NCPoly:
    """Product p*q in normal form.

    Raises:
        ContextMismatch: If p and q come from different systems
    """
    p._same(q)
    system = p.system
    out: dict[Word, Scalar] = {}
    for w1, c1 in p.terms.items():
        for w2, c2 in q.terms.items():
            for w, c in system.reduce_word(w1 + w2).items():
                _accumulate(out, w, c * c1 * c2)
    return NCPoly(system, out)


def star(p: NCPoly) -> NCPoly:
    """Antilinear antimultiplicative involution."""
    system = p.system
    return normal_form(system, [(system.star_word(w), c.conj()) for w, c in p.terms.items()])


def tensor_mul(s: TensorPoly, t: TensorPoly) -> TensorPoly:
    """Componentwise product (a (x) b)(c (x) d) = ac (x) bd.

    Raises:
        RankMismatch: If ranks differ
    """
    s._same(t)
    system = s.system
    out: dict[tuple[Word, ...], Scalar] = {}
    for k1, c1 in s.terms.items():
        for k2, c2 in t.terms.items():
            partial: dict[tuple[Word, ...], Scalar] = {(): c1 * c2}
            for a, b in zip(k1, k2):
                reduced = system.reduce_word(a + b)
                nxt: dict[tuple[Word, ...], Scalar] = {}
                for key, x in partial.items():
                    for w, y in reduced.items():
                        _accumulate(nxt, key + (w,), x * y)
                partial = nxt
            for key, x in partial.items():
                _accumulate(out, key, x)
    return TensorPoly(system, s.rank, out)


def enumerate_normal_words(system: RewriteSystem, max_deg: int, min_deg: int = 0) -> list[Word]:
    """Irreducible words with min_deg <= length <= max_deg, in deglex order.

    Every prefix of an irreducible word is irreducible, so words are grown
    letter by letter and only the new suffixes need checking.
    """
    layers: list[list[Word]] = [[UNIT]]
    n = len(system.generators)
    lengths = system._lengths
    for _ in range(max_deg):
        nxt = []
        for w in layers[-1]:
            for g in range(n):
                cand = w + (g,)
                if not any(len(cand) >= L and cand[-L:] in system._by_lhs for L in lengths):
                    nxt.append(cand)
        layers.append(nxt)
    return [w for d, layer in enumerate(layers) if d >= min_deg for w in layer]


def check_local_confluence(system: RewriteSystem, max_overlap: int) -> Report:
    """Resolve every critical pair of the rules up to a word length.

    Overlaps (a suffix of one lhs equals a prefix of another) and inclusions
    (one lhs inside another) are both reduced two ways; the Report lists
    each critical word whose two normal forms differ.

    Raises:
        ValueError: If max_overlap is shorter than the longest lhs
    """
    if max_overlap < system.max_lhs:
        raise ValueError(f"max_overlap {max_overlap} < longest lhs {system.max_lhs}")
    report = Report('check-local-confluence')
    fmt = system.format_word
    rules = system.rules
    critical = 0
    for i, r1 in enumerate(rules):
        for j, r2 in enumerate(rules):
            l1, l2 = r1.lhs, r2.lhs
            cases: list[tuple[Word, int, int]] = []
            # overlaps: suffix of l1 == prefix of l2
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k] and len(l1) + len(l2) - k <= max_overlap:
                    cases.append((l1 + l2[k:], 0, len(l1) - k))
            # inclusions: l2 inside l1 (distinct rules)
            if i != j and len(l2) <= len(l1):
                for start in range(len(l1) - len(l2) + 1):
                    if l1[start:start + len(l2)] == l2:
                        cases.append((l1, 0, start))
            for word, pos1, pos2 in cases:
                critical += 1
                left = normal_form(system, system.apply_rule_at(word, pos1, r1))
                right = normal_form(system, system.apply_rule_at(word, pos2, r2))
                if left != right:
                    report.add(f"critical pair {fmt(word)}", False,
                               witness=f"{fmt(word)}: {left} vs {right}")
    report.add('critical pairs resolved', report.status != 'fail', detail={'critical_words': critical})
    logger.debug(f"Checked {critical} critical words up to length {max_overlap}")
    return report
