"""Exact-rational polynomials in the free associative algebra.

Lie polynomials live inside k<X> as combinations of commutators; membership in the
Lie subspace is certified by :func:`to_lyndon_basis` terminating at zero.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Tuple, Union

from .errors import AlphabetMismatchError, NotALieElementError
from .words import Alphabet, Tree, Word, deglex_key, is_alsw, standard_bracketing

Scalar = Union[int, Fraction]
Terms = Dict[Word, Fraction]


def format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def axpy(acc: Terms, c: Fraction, terms: Mapping[Word, Fraction]) -> None:
    """``acc += c * terms`` in place, dropping cancelled entries."""
    if not c:
        return
    for w, v in terms.items():
        s = acc.get(w, 0) + c * v
        if s:
            acc[w] = s
        else:
            acc.pop(w, None)


class Polynomial:
    __slots__ = ("alphabet", "_terms")

    def __init__(self, alphabet: Alphabet, terms: Union[Mapping[Word, Scalar], Iterable[Tuple[Word, Scalar]]] = ()):
        self.alphabet = alphabet
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Terms = {}
        for w, c in items:
            w = tuple(w)
            if not w:
                raise ValueError("the empty word is not a monomial here")
            s = acc.get(w, 0) + Fraction(c)
            if s:
                acc[w] = s
            else:
                acc.pop(w, None)
        self._terms = acc

    @classmethod
    def _raw(cls, alphabet: Alphabet, terms: Terms) -> "Polynomial":
        p = cls.__new__(cls)
        p.alphabet = alphabet
        p._terms = terms
        return p

    @classmethod
    def zero(cls, alphabet: Alphabet) -> "Polynomial":
        return cls._raw(alphabet, {})

    @classmethod
    def letter(cls, alphabet: Alphabet, rank: int) -> "Polynomial":
        return cls._raw(alphabet, {(rank,): Fraction(1)})

    @classmethod
    def word(cls, alphabet: Alphabet, word: Word, coeff: Scalar = 1) -> "Polynomial":
        return cls(alphabet, {tuple(word): coeff})

    @property
    def terms(self) -> Mapping[Word, Fraction]:
        return MappingProxyType(self._terms)

    def _check(self, other: "Polynomial") -> None:
        if other.alphabet is not self.alphabet and other.alphabet != self.alphabet:
            raise AlphabetMismatchError(
                f"alphabet mismatch: {self.alphabet.order_text()} vs {other.alphabet.order_text()}"
            )

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.alphabet == other.alphabet and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        acc = dict(self._terms)
        axpy(acc, Fraction(1), other._terms)
        return Polynomial._raw(self.alphabet, acc)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        acc = dict(self._terms)
        axpy(acc, Fraction(-1), other._terms)
        return Polynomial._raw(self.alphabet, acc)

    def __neg__(self) -> "Polynomial":
        return self.scale(-1)

    def scale(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.alphabet)
        return Polynomial._raw(self.alphabet, {w: c * v for w, v in self._terms.items()})

    def __mul__(self, c: Scalar) -> "Polynomial":
        if isinstance(c, Polynomial):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def concat(self, other: "Polynomial") -> "Polynomial":
        """Bilinear extension of word concatenation."""
        self._check(other)
        acc: Terms = {}
        for u, a in self._terms.items():
            for v, b in other._terms.items():
                w = u + v
                s = acc.get(w, 0) + a * b
                if s:
                    acc[w] = s
                else:
                    acc.pop(w, None)
        return Polynomial._raw(self.alphabet, acc)

    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def leading(self) -> Tuple[Word, Fraction]:
        if not self._terms:
            raise ValueError("the zero polynomial has no leading word")
        w = max(self._terms, key=deglex_key)
        return w, self._terms[w]

    def monic(self) -> "Polynomial":
        return self.scale(1 / self.leading()[1])

    def sorted_terms(self) -> List[Tuple[Word, Fraction]]:
        """Terms in descending deg-lex order."""
        return sorted(self._terms.items(), key=lambda kv: deglex_key(kv[0]), reverse=True)

    def map_letters(self, alphabet: Alphabet, mapping: Mapping[int, int]) -> "Polynomial":
        acc: Terms = {}
        for w, c in self._terms.items():
            u = tuple(mapping[r] for r in w)
            s = acc.get(u, 0) + c
            if s:
                acc[u] = s
            else:
                acc.pop(u, None)
        return Polynomial._raw(alphabet, acc)

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, (w, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = self.alphabet.format_word(w)
            if mag != 1:
                body = f"{format_fraction(mag)}*{body}"
            if i == 0:
                out.append(f"-{body}" if sign == "-" else body)
            else:
                out.append(f"{sign} {body}")
        return " ".join(out)


def bracket(f: Polynomial, g: Polynomial) -> Polynomial:
    return f.concat(g) - g.concat(f)


@lru_cache(maxsize=None)
def _expand_items(tree: Tree) -> Tuple[Tuple[Word, Fraction], ...]:
    if isinstance(tree, int):
        return (((tree,), Fraction(1)),)
    left = dict(_expand_items(tree[0]))
    right = dict(_expand_items(tree[1]))
    acc: Terms = {}
    for u, a in left.items():
        for v, b in right.items():
            for w, s in ((u + v, a * b), (v + u, -a * b)):
                t = acc.get(w, 0) + s
                if t:
                    acc[w] = t
                else:
                    acc.pop(w, None)
    return tuple(acc.items())


def expand_terms(tree: Tree) -> Terms:
    return dict(_expand_items(tree))


def expand_nlsw(tree: Tree, alphabet: Alphabet) -> Polynomial:
    """Expand a bracketing tree into the free associative algebra."""
    return Polynomial._raw(alphabet, expand_terms(tree))


def to_lyndon_basis(f: Polynomial) -> List[Tuple[Fraction, Tree]]:
    """Rewrite a Lie polynomial in the basis of standard bracketings."""
    rest = dict(f.terms)
    out: List[Tuple[Fraction, Tree]] = []
    while rest:
        w = max(rest, key=deglex_key)
        c = rest[w]
        if not is_alsw(w):
            raise NotALieElementError(
                f"remainder leads with {f.alphabet.format_word(w)}, which is not a Lyndon-Shirshov word"
            )
        tree = standard_bracketing(w)
        out.append((c, tree))
        axpy(rest, -c, expand_terms(tree))
    return out


def from_lyndon_basis(alphabet: Alphabet, combo: Iterable[Tuple[Scalar, Tree]]) -> Polynomial:
    acc: Terms = {}
    for c, tree in combo:
        axpy(acc, Fraction(c), expand_terms(tree))
    return Polynomial._raw(alphabet, acc)
