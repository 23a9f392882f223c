"""Replication of Lie relations into di-Lie (Leibniz) relations.

Elements of a di-Lie algebra are modelled inside Lie<X u X'>: the generator x becomes
the dotted letter x', ``f -| g = [f, phi(g)]`` and ``f |- g = [phi(f), g]`` where phi
forgets the dots.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import InvalidInputError, MalformedRelationError
from .freealg import Polynomial, bracket, expand_nlsw
from .gsb import RewriteSystem, Rule
from .linalg import rank
from .tables import DiTable, StructureTable, as_sparse, unit, zeros
from .words import Alphabet, Letter, Tree

DASHV = "-|"
VDASH = "|-"


@dataclass(frozen=True)
class DoubledAlphabet:
    """X u X' with x > y => x' > y' and every dotted letter above every undotted one."""

    base: Alphabet
    full: Alphabet

    @classmethod
    def of(cls, base: Alphabet) -> "DoubledAlphabet":
        n = len(base)
        letters = [Letter(l.id, False, l.rank) for l in base.letters]
        letters += [Letter(l.id, True, n + l.rank) for l in base.letters]
        return cls(base, Alphabet(tuple(letters)))

    def dot(self, rank: int) -> int:
        return rank + len(self.base) if rank < len(self.base) else rank

    def undot(self, rank: int) -> int:
        return rank - len(self.base) if rank >= len(self.base) else rank

    def is_dotted(self, rank: int) -> bool:
        return rank >= len(self.base)

    def letter(self, name: str, dotted: bool = False) -> Polynomial:
        r = self.base.rank(name)
        return Polynomial.letter(self.full, self.dot(r) if dotted else r)


def phi(f: Polynomial, doubled: DoubledAlphabet, to_base: bool = False) -> Polynomial:
    """Forget the dots; the result stays in X u X' unless ``to_base`` is set."""
    n = len(doubled.base)
    mapping = {r: (r - n if r >= n else r) for r in range(len(doubled.full))}
    return f.map_letters(doubled.base if to_base else doubled.full, mapping)


def di_product(op: str, f: Polynomial, g: Polynomial, doubled: DoubledAlphabet, lie: bool = True) -> Polynomial:
    """``f -| g`` or ``f |- g``; with ``lie=False`` the plain concatenation products."""
    if op == DASHV:
        left, right = f, phi(g, doubled)
    elif op == VDASH:
        left, right = phi(f, doubled), g
    else:
        raise ValueError(f"unknown di-product {op!r}; expected {DASHV!r} or {VDASH!r}")
    return bracket(left, right) if lie else left.concat(right)


@dataclass(frozen=True)
class DiNode:
    op: str  # DASHV, VDASH, or "," for a plain bracket
    left: "DiTerm"
    right: "DiTerm"


DiTerm = Union[str, DiNode]


@dataclass(frozen=True)
class DiRelation:
    """A linear combination of di-monomials over generator names."""

    terms: Tuple[Tuple[Fraction, DiTerm], ...]

    @classmethod
    def single(cls, term: DiTerm) -> "DiRelation":
        return cls(((Fraction(1), term),))


def _evaluate(term: DiTerm, doubled: DoubledAlphabet) -> Polynomial:
    if isinstance(term, str):
        return doubled.letter(term, dotted=True)
    if term.op not in (DASHV, VDASH):
        raise MalformedRelationError(
            "plain bracket inside a di-expression has no dash orientation, so no selected variable"
        )
    return di_product(term.op, _evaluate(term.left, doubled), _evaluate(term.right, doubled), doubled)


def translate_relation(relation: Union[DiRelation, DiTerm], doubled: DoubledAlphabet) -> Polynomial:
    """Map a di-relation into Lie<X u X'>, dotting the variable all dashes point to."""
    if not isinstance(relation, DiRelation):
        relation = DiRelation.single(relation)
    out = Polynomial.zero(doubled.full)
    for c, term in relation.terms:
        out = out + _evaluate(term, doubled).scale(c)
    return out


def v_membership(f: Polynomial, doubled: DoubledAlphabet) -> bool:
    return all(any(doubled.is_dotted(r) for r in w) for w in f.terms)


def dotted_degree(word: Sequence[int], doubled: DoubledAlphabet) -> int:
    return sum(1 for r in word if doubled.is_dotted(r))


def replicate_system(
    relations: Sequence[Polynomial],
    doubled: DoubledAlphabet,
    labels: Optional[Sequence[str]] = None,
    phi_labels: Optional[Sequence[str]] = None,
) -> RewriteSystem:
    """The seed ``S u phi(S)``; completion and verification are left to :mod:`gsb`."""
    labels = list(labels) if labels is not None else [f"s{i}" for i in range(len(relations))]
    phi_labels = list(phi_labels) if phi_labels is not None else [f"phi({l})" for l in labels]
    rules: List[Rule] = []
    images: List[Rule] = []
    for rel, label, plabel in zip(relations, labels, phi_labels):
        if not v_membership(rel, doubled):
            raise InvalidInputError(f"relation {label} has a monomial without dotted letters")
        if rel:
            rules.append(Rule(rel.monic(), label))
        image = phi(rel, doubled)
        if image:
            images.append(Rule(image.monic(), plabel))
    return RewriteSystem(doubled.full, rules + images)


def left_normed(letters: Sequence[int]) -> Tree:
    tree: Tree = letters[0]
    for r in letters[1:]:
        tree = (tree, r)
    return tree


def dilie_basis(base: Alphabet, max_degree: int) -> List[Tree]:
    """Left-normed ``[..[[x1' x2] x3] .. xn]`` with indices free, degree <= max_degree."""
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    doubled = DoubledAlphabet.of(base)
    desc = sorted(range(len(base)), reverse=True)
    out: List[Tree] = []
    for n in range(1, max_degree + 1):
        for first, *rest in product(desc, repeat=n):
            out.append(left_normed([doubled.dot(first)] + rest))
    return out


def dilie_basis_rank(base: Alphabet, max_degree: int) -> Tuple[int, int]:
    """(count, rank of expansions in Lie<X u X'>)."""
    doubled = DoubledAlphabet.of(base)
    trees = dilie_basis(base, max_degree)
    rows = [dict(expand_nlsw(t, doubled.full).terms) for t in trees]
    return len(trees), rank(rows)


def _left_bracket(f: Polynomial, letters: Sequence[int], alphabet: Alphabet) -> Polynomial:
    for r in letters:
        f = bracket(f, Polynomial.letter(alphabet, r))
    return f


def ideal_transfer_check(
    relations: Sequence[Polynomial], doubled: DoubledAlphabet, max_degree: int
) -> Dict[int, Tuple[int, int, int]]:
    """Per degree: ranks of Id(S u phi S) n V, of the di-ideal of S, and of their sum.

    Relations must be homogeneous with exactly one dotted letter in every monomial.
    """
    full = doubled.full
    for rel in relations:
        degrees = {len(w) for w in rel.terms}
        if len(degrees) != 1 or any(dotted_degree(w, doubled) != 1 for w in rel.terms):
            raise InvalidInputError("ideal transfer is checked for homogeneous relations of dotted degree 1")
    undotted = list(range(len(doubled.base)))
    dotted = [doubled.dot(r) for r in undotted]

    lie_side: List[Polynomial] = []
    for rel in relations:
        d0 = rel.degree()
        image = phi(rel, doubled)
        for k in range(0, max_degree - d0 + 1):
            for zs in product(undotted, repeat=k):
                lie_side.append(_left_bracket(rel, zs, full))
            for pos in range(k):
                for zs in product(undotted, repeat=k - 1):
                    for z in dotted:
                        seq = list(zs[:pos]) + [z] + list(zs[pos:])
                        lie_side.append(_left_bracket(image, seq, full))

    di_side: List[Polynomial] = [r for r in relations]
    frontier = list(di_side)
    while frontier:
        nxt = []
        for f in frontier:
            if f.degree() >= max_degree:
                continue
            for r in undotted:
                gen = Polynomial.letter(full, doubled.dot(r))
                for op in (DASHV, VDASH):
                    nxt.append(di_product(op, f, gen, doubled))
                    nxt.append(di_product(op, gen, f, doubled))
        nxt = [p for p in nxt if p]
        di_side.extend(nxt)
        frontier = nxt

    out: Dict[int, Tuple[int, int, int]] = {}
    for d in range(1, max_degree + 1):
        a = [dict(p.terms) for p in lie_side if p and p.degree() == d]
        b = [dict(p.terms) for p in di_side if p and p.degree() == d]
        out[d] = (rank(a), rank(b), rank(a + b))
    return out


def _apply(t_map: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.dot(v, t_map)


def is_averaging(t_map: np.ndarray, table: StructureTable) -> bool:
    """``[ta, tb] = t[ta, b] = t[a, tb]`` on all basis pairs; ``t_map[j]`` is the image of e_j."""
    n = table.dim
    if t_map.shape != (n, n):
        raise ValueError(f"operator has shape {t_map.shape}, expected {(n, n)}")
    for i, j in product(range(n), repeat=2):
        a, b = unit(n, i), unit(n, j)
        ta, tb = _apply(t_map, a), _apply(t_map, b)
        both = table.mul(ta, tb)
        if any(both != _apply(t_map, table.mul(ta, b))) or any(both != _apply(t_map, table.mul(a, tb))):
            return False
    return True


def averaged_dialgebra(table: StructureTable, t_map: np.ndarray) -> DiTable:
    """``a -| b = [a, tb]`` and ``a |- b = [ta, b]``."""
    if not is_averaging(t_map, table):
        raise InvalidInputError("the operator is not an averaging operator on this table")
    n = table.dim
    dashv, vdash = zeros(n, n, n), zeros(n, n, n)
    for i, j in product(range(n), repeat=2):
        a, b = unit(n, i), unit(n, j)
        dashv[i, j, :] = table.mul(a, _apply(t_map, b))
        vdash[i, j, :] = table.mul(_apply(t_map, a), b)
    return DiTable(table.names, dashv, vdash)


def hat_algebra(table: StructureTable) -> StructureTable:
    """The Lie algebra ``L~ + L`` with ``L~ = L / H0`` acting on the Leibniz algebra ``L``.

    Brackets: ``[x~, y~] = (x -| y)~``, ``[x~, b] = x |- b``, ``[a, y~] = a -| y``, ``[a, b] = 0``.
    Quotient letters are the basis elements that are not pivots of ``H0`` and carry a ``~``.
    """
    bad = table.leibniz_defects()
    if bad:
        raise InvalidInputError(f"not a Leibniz table: identity fails on basis triple {bad[0]}")
    h0 = table.h0_space()
    n = table.dim
    quotient = [k for k in range(n) if k not in set(h0.pivots)]
    m = len(quotient)
    names = [f"{table.names[k]}~" for k in quotient] + list(table.names)
    c = zeros(m + n, m + n, m + n)
    for a, qa in enumerate(quotient):
        for b, qb in enumerate(quotient):
            rest = h0.reduce(as_sparse(table.c[qa, qb]))
            for k, v in rest.items():
                c[a, b, quotient.index(k)] = v
        for j in range(n):
            c[a, m + j, m:] = -table.c[j, qa]
            c[m + j, a, m:] = table.c[j, qa]
    return StructureTable(names, c)
