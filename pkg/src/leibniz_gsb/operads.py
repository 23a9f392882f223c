"""Arity <= 4 operad calculator for Lie, Perm and their Hadamard product (di-Lie)."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, Iterator, List, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation

from .errors import InternalConsistencyError, InvalidInputError
from .freealg import Polynomial, expand_nlsw
from .linalg import rank
from .tables import DiTable, StructureTable, is_zero, unit, zeros
from .words import Alphabet, Tree

log = logging.getLogger(__name__)

MU = "mu"
MU12 = "mu^(12)"

# coset representatives of S3 / S2, as 1-based transpositions
IDENTITY = ()
SWAP13 = (1, 3)
SWAP23 = (2, 3)
COSETS = (IDENTITY, SWAP13, SWAP23)

MAX_ARITY = 4


# -- Perm -------------------------------------------------------------------------------


@dataclass(frozen=True)
class PermBasisElement:
    """``e_i^(n) = (x_1 .. x_{i-1} x_{i+1} .. x_n) x_i``."""

    n: int
    i: int

    def __post_init__(self) -> None:
        if self.n < 1 or not 1 <= self.i <= self.n:
            raise ValueError(f"e_{self.i}^({self.n}) is not a basis element of Perm({self.n})")

    def word(self) -> Tuple[int, ...]:
        return tuple(k for k in range(1, self.n + 1) if k != self.i) + (self.i,)

    def __str__(self) -> str:
        return f"e{self.i}^({self.n})"


def _check_arity(e: PermBasisElement, args: Sequence[PermBasisElement]) -> None:
    if len(args) != e.n:
        raise ValueError(f"{e} takes {e.n} arguments, got {len(args)}")


def perm_compose(e: PermBasisElement, args: Sequence[PermBasisElement]) -> PermBasisElement:
    """``gamma(e_i^(n); e_j1^(m1), .., e_jn^(mn)) = e^(m)_{m1 + .. + m_{i-1} + j_i}``."""
    _check_arity(e, args)
    m = sum(a.n for a in args)
    offset = sum(a.n for a in args[: e.i - 1])
    return PermBasisElement(m, offset + args[e.i - 1].i)


def printed_index(e: PermBasisElement, args: Sequence[PermBasisElement]) -> int:
    """The index as ``m1 + .. + m_{n-1} + j_i``; disagrees with composition unless i == n."""
    _check_arity(e, args)
    return sum(a.n for a in args[:-1]) + args[e.i - 1].i


def _evaluate(e: PermBasisElement, values: Sequence[np.ndarray], algebra: StructureTable) -> np.ndarray:
    """``e`` as an n-ary operation on a Perm algebra: the left-normed product of its word."""
    word = e.word()
    acc = values[word[0] - 1]
    for k in word[1:]:
        acc = algebra.mul(acc, values[k - 1])
    return acc


def perm_oracle_index(e: PermBasisElement, args: Sequence[PermBasisElement]) -> PermBasisElement:
    """Compose the operations as functions and read the result off distinct inputs.

    The right-zero algebra on ``p1..pm`` is a Perm algebra on which ``e_i^(n)`` acts as
    ``(p_1, .., p_n) -> p_i``, so evaluating the composite at ``(p1, .., pm)`` names the
    basis element.
    """
    _check_arity(e, args)
    m = sum(a.n for a in args)
    algebra = right_zero_perm_table(m)
    inputs = [unit(m, k) for k in range(m)]
    inner: List[np.ndarray] = []
    offset = 0
    for a in args:
        inner.append(_evaluate(a, inputs[offset:offset + a.n], algebra))
        offset += a.n
    value = _evaluate(e, inner, algebra)
    hits = [k for k in range(m) if value[k]]
    if len(hits) != 1 or value[hits[0]] != 1:
        raise InternalConsistencyError(f"{e} composed with {len(args)} operations is not a basis operation")
    return PermBasisElement(m, hits[0] + 1)


def perm_act(sigma: Permutation, e: PermBasisElement) -> PermBasisElement:
    """Right action ``e_i^(n) . sigma = e_{i sigma}^(n)``."""
    if sigma.size != e.n:
        raise ValueError(f"permutation of degree {sigma.size} cannot act on {e}")
    return PermBasisElement(e.n, sigma(e.i - 1) + 1)


def transposition(a: int, b: int, n: int) -> Permutation:
    return Permutation([[a - 1, b - 1]], size=n)


def perm_basis(n: int) -> List[PermBasisElement]:
    return [PermBasisElement(n, i) for i in range(1, n + 1)]


@dataclass
class PermCompositionCheck:
    checked: int = 0
    mismatches: List[str] = field(default_factory=list)
    printed_formula_disagreements: int = 0


def check_perm_compositions(max_arity: int = 3) -> PermCompositionCheck:
    """Every composition of total arity <= max_arity against the expansion oracle."""
    out = PermCompositionCheck()
    for n in range(1, max_arity + 1):
        for e in perm_basis(n):
            for sizes in product(range(1, max_arity + 1), repeat=n):
                if sum(sizes) > max_arity:
                    continue
                for args in product(*(perm_basis(m) for m in sizes)):
                    out.checked += 1
                    got, want = perm_compose(e, args), perm_oracle_index(e, args)
                    if got != want:
                        out.mismatches.append(f"{e}({', '.join(map(str, args))}) = {got}, oracle {want}")
                    if printed_index(e, args) != want.i:
                        out.printed_formula_disagreements += 1
    log.debug(
        "checked %d Perm compositions; printed index formula disagrees on %d",
        out.checked, out.printed_formula_disagreements,
    )
    return out


# -- arity-3 Lie monomials ---------------------------------------------------------------


@dataclass(frozen=True)
class OperadMonomial:
    """``sigma (x)_{S2} (eps1 (x) eps2)``; eps1 is the outer operation, eps2 the inner one."""

    sigma: Tuple[int, ...]
    outer: str
    inner: str

    def __post_init__(self) -> None:
        if self.sigma not in COSETS:
            raise KeyError(f"sigma {self.sigma} is not one of the coset representatives {COSETS}")
        for eps in (self.outer, self.inner):
            if eps not in (MU, MU12):
                raise KeyError(f"unknown binary operation {eps!r}")

    def __str__(self) -> str:
        s = "1" if not self.sigma else f"({self.sigma[0]}{self.sigma[1]})"
        return f"{s} (x) ({self.outer} (x) {self.inner})"


@dataclass(frozen=True)
class MultilinearMonomial:
    """A bracketing over variables ``x1..xn``; leaves are 1-based variable numbers."""

    tree: Tree
    sign: int = 1

    def __str__(self) -> str:
        body = _format(self.tree)
        return body if self.sign == 1 else f"-{body}"

    def polynomial(self, n: int) -> Polynomial:
        alphabet = variables(n)
        tree = _relabel(self.tree, lambda k: alphabet.rank(f"x{k}"))
        return expand_nlsw(tree, alphabet).scale(self.sign)


def variables(n: int) -> Alphabet:
    return Alphabet.from_names([f"x{k}" for k in range(1, n + 1)])


def _format(tree: Tree) -> str:
    if isinstance(tree, int):
        return f"x{tree}"
    return f"[{_format(tree[0])},{_format(tree[1])}]"


def _relabel(tree: Tree, fn: Callable[[int], int]) -> Tree:
    if isinstance(tree, int):
        return fn(tree)
    return (_relabel(tree[0], fn), _relabel(tree[1], fn))


def monomial_of(o: OperadMonomial) -> MultilinearMonomial:
    inner: Tree = (1, 2) if o.inner == MU else (2, 1)
    tree: Tree = (inner, 3) if o.outer == MU else (3, inner)
    if o.sigma:
        a, b = o.sigma
        tree = _relabel(tree, lambda k: b if k == a else a if k == b else k)
    return MultilinearMonomial(tree)


EXAMPLE_TABLE: Tuple[Tuple[OperadMonomial, str], ...] = (
    (OperadMonomial(IDENTITY, MU, MU), "[[x1,x2],x3]"),
    (OperadMonomial(IDENTITY, MU, MU12), "[[x2,x1],x3]"),
    (OperadMonomial(IDENTITY, MU12, MU), "[x3,[x1,x2]]"),
    (OperadMonomial(IDENTITY, MU12, MU12), "[x3,[x2,x1]]"),
    (OperadMonomial(SWAP13, MU, MU), "[[x3,x2],x1]"),
    (OperadMonomial(SWAP13, MU, MU12), "[[x2,x3],x1]"),
    (OperadMonomial(SWAP13, MU12, MU), "[x1,[x3,x2]]"),
    (OperadMonomial(SWAP13, MU12, MU12), "[x1,[x2,x3]]"),
    (OperadMonomial(SWAP23, MU, MU), "[[x1,x3],x2]"),
    (OperadMonomial(SWAP23, MU, MU12), "[[x3,x1],x2]"),
    (OperadMonomial(SWAP23, MU12, MU), "[x2,[x1,x3]]"),
    (OperadMonomial(SWAP23, MU12, MU12), "[x2,[x3,x1]]"),
)

JACOBIATOR: Tuple[OperadMonomial, ...] = (
    OperadMonomial(IDENTITY, MU, MU),
    OperadMonomial(SWAP13, MU, MU12),
    OperadMonomial(SWAP23, MU, MU12),
)


def table_mismatches() -> List[str]:
    return [
        f"{o}: expected {text}, got {monomial_of(o)}"
        for o, text in EXAMPLE_TABLE
        if str(monomial_of(o)) != text
    ]


def jacobiator_sum(summands: Sequence[OperadMonomial] = JACOBIATOR) -> Polynomial:
    total = Polynomial.zero(variables(3))
    for o in summands:
        total = total + monomial_of(o).polynomial(3)
    return total


def jacobiator_check(summands: Sequence[OperadMonomial] = JACOBIATOR) -> bool:
    """The summands are exactly the three Jacobi terms and their expansion vanishes."""
    got = sorted(str(monomial_of(o)) for o in summands)
    jacobi = sorted(["[[x1,x2],x3]", "[[x2,x3],x1]", "[[x3,x1],x2]"])
    return got == jacobi and not jacobiator_sum(summands)


# -- multilinear dimensions ---------------------------------------------------------------

# magma trees over variable numbers; identities are linear combinations of trees in
# placeholders 0..k-1
Combo = Dict[Tree, Fraction]
Identity = Tuple[int, Tuple[Tuple[int, Tree], ...]]

IDENTITIES: Dict[str, Tuple[Identity, ...]] = {
    "lie": (
        (2, ((1, (0, 1)), (1, (1, 0)))),
        (3, ((1, ((0, 1), 2)), (1, ((1, 2), 0)), (1, ((2, 0), 1)))),
    ),
    "perm": (
        (3, ((1, ((0, 1), 2)), (-1, (0, (1, 2))))),
        (3, ((1, ((0, 1), 2)), (-1, ((1, 0), 2)))),
    ),
    # right Leibniz identity [[a,b],c] - [[a,c],b] - [a,[b,c]]
    "dilie": ((3, ((1, ((0, 1), 2)), (-1, ((0, 2), 1)), (-1, (0, (1, 2))))),),
}


@lru_cache(maxsize=None)
def _magma(variables_: Tuple[int, ...]) -> Tuple[Tree, ...]:
    if len(variables_) == 1:
        return (variables_[0],)
    out: List[Tree] = []
    for left, right in _ordered_splits(variables_):
        for a in _magma(left):
            for b in _magma(right):
                out.append((a, b))
    return tuple(out)


def _ordered_splits(vs: Tuple[int, ...]) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    n = len(vs)
    for mask in range(1, 2 ** n - 1):
        left = tuple(v for k, v in enumerate(vs) if mask >> k & 1)
        right = tuple(v for k, v in enumerate(vs) if not mask >> k & 1)
        yield left, right


def _set_partitions(vs: Tuple[int, ...], k: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """Ordered partitions of ``vs`` into ``k`` nonempty blocks."""
    if k == 1:
        yield (vs,)
        return
    for first, rest in _ordered_splits(vs):
        if len(rest) < k - 1:
            continue
        for tail in _set_partitions(rest, k - 1):
            yield (first,) + tail


def _substitute(tree: Tree, args: Sequence[Tree]) -> Tree:
    if isinstance(tree, int):
        return args[tree]
    return (_substitute(tree[0], args), _substitute(tree[1], args))


@lru_cache(maxsize=None)
def _relations(which: str, vs: Tuple[int, ...]) -> Tuple[Tuple[Tuple[Tree, Fraction], ...], ...]:
    rows: List[Combo] = []
    for arity, terms in IDENTITIES[which]:
        if arity > len(vs):
            continue
        for blocks in _set_partitions(vs, arity):
            for args in product(*(_magma(b) for b in blocks)):
                row: Combo = {}
                for c, t in terms:
                    key = _substitute(t, args)
                    row[key] = row.get(key, Fraction(0)) + c
                rows.append(row)
    for left, right in _ordered_splits(vs):
        for rel in _relations(which, left):
            for m in _magma(right):
                rows.append({(t, m): c for t, c in rel})
                rows.append({(m, t): c for t, c in rel})
    return tuple(tuple(r.items()) for r in rows)


def operad_dimension(which: str, n: int) -> int:
    """Dimension of the arity-n component: magma monomials modulo the identities."""
    key = which.lower().replace("-", "")
    if key not in IDENTITIES:
        raise KeyError(f"unknown operad {which!r}; expected one of lie, perm, dilie")
    if not 1 <= n <= MAX_ARITY:
        raise ValueError(f"arity must be between 1 and {MAX_ARITY}, got {n}")
    vs = tuple(range(1, n + 1))
    rows = [dict(r) for r in _relations(key, vs)]
    return len(_magma(vs)) - rank(rows)


def dimension_table(max_arity: int = MAX_ARITY) -> Dict[str, List[int]]:
    return {which: [operad_dimension(which, n) for n in range(1, max_arity + 1)] for which in IDENTITIES}


# -- algebras ------------------------------------------------------------------------------


@dataclass
class IdentityCheck:
    failures: List[Tuple[str, Tuple[int, ...]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


def right_zero_perm_table(n: int) -> StructureTable:
    """``p_i p_j = p_j``: the n-dimensional Perm algebra used as the Perm factor."""
    c = zeros(n, n, n)
    for i, j in product(range(n), repeat=2):
        c[i, j, j] = Fraction(1)
    return StructureTable([f"p{k}" for k in range(1, n + 1)], c)


def perm_check_identities(table: StructureTable) -> IdentityCheck:
    n = table.dim
    e = [unit(n, i) for i in range(n)]
    out = IdentityCheck()
    for i, j, k in product(range(n), repeat=3):
        ab_c = table.mul(table.mul(e[i], e[j]), e[k])
        if not is_zero(ab_c - table.mul(e[i], table.mul(e[j], e[k]))):
            out.failures.append(("associativity", (i, j, k)))
        if not is_zero(ab_c - table.mul(table.mul(e[j], e[i]), e[k])):
            out.failures.append(("left commutativity", (i, j, k)))
    return out


def check_dilie_identities(ditable: DiTable) -> IdentityCheck:
    """``[x |- y] + [y -| x] = 0`` on pairs and the right Leibniz identity for -| on triples."""
    n = ditable.dim
    left, right = ditable.left(), ditable.right()
    e = [unit(n, i) for i in range(n)]
    out = IdentityCheck()
    for i, j in product(range(n), repeat=2):
        if not is_zero(right.mul(e[i], e[j]) + left.mul(e[j], e[i])):
            out.failures.append(("x |- y + y -| x", (i, j)))
    for i, j, k in product(range(n), repeat=3):
        x, y, z = e[i], e[j], e[k]
        s = (
            left.mul(left.mul(x, y), z)
            - left.mul(x, left.mul(y, z))
            - left.mul(left.mul(x, z), y)
        )
        if not is_zero(s):
            out.failures.append(("right Leibniz", (i, j, k)))
    return out


def hadamard_algebra(lie_table: StructureTable, perm_dim: int) -> DiTable:
    """``A (x) P`` with ``(a p) -| (b q) = [a,b] (p)`` and ``(a p) |- (b q) = [a,b] (q)``.

    These are the arity-2 operations ``f_1`` and ``f_2`` over the right-zero Perm algebra,
    where ``e_1^(2)(p, q) = q p = p`` and ``e_2^(2)(p, q) = p q = q``.
    """
    if not lie_table.is_lie():
        raise InvalidInputError("hadamard_algebra needs a Lie table (antisymmetry and Jacobi)")
    perm = right_zero_perm_table(perm_dim)
    if not perm_check_identities(perm):
        raise InvalidInputError("the Perm factor violates its identities")
    n = lie_table.dim
    size = n * perm_dim
    names = [f"{a}_{p}" for a in lie_table.names for p in perm.names]
    dashv, vdash = zeros(size, size, size), zeros(size, size, size)
    for a, p, b, q in product(range(n), range(perm_dim), range(n), range(perm_dim)):
        row, col = a * perm_dim + p, b * perm_dim + q
        ab = lie_table.c[a, b]
        # p q = q in the right-zero algebra, so f_1 keeps p and f_2 keeps q
        for k in range(n):
            if ab[k]:
                dashv[row, col, k * perm_dim + p] = ab[k]
                vdash[row, col, k * perm_dim + q] = ab[k]
    return DiTable(tuple(names), dashv, vdash)


DiKey = Tuple[str, str, str]

# [x,y] = xy - yx as signed variable orders
LIE_BRACKET: Tuple[Tuple[Tuple[int, int], int], ...] = (((1, 2), 1), ((2, 1), -1))


def _signed(parts: Sequence[Tuple[int, str]]) -> str:
    out: List[str] = []
    for c, body in parts:
        if abs(c) != 1:
            body = f"{abs(c)}*{body}"
        if not out:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(out) if out else "0"


@dataclass
class Derivation:
    lhs: str
    steps: List[str]
    terms: Dict[DiKey, int]
    expected: Dict[DiKey, int]

    @property
    def rhs(self) -> str:
        return _signed([(c, " ".join(key)) for key, c in self.terms.items()])

    @property
    def ok(self) -> bool:
        return self.terms == self.expected


def derive_leibniz_product(
    index: int = 1,
    commutative: bool = False,
    bracket: Sequence[Tuple[Tuple[int, int], int]] = LIE_BRACKET,
    act: Callable[[Permutation, PermBasisElement], PermBasisElement] = perm_act,
) -> Derivation:
    """Expand ``bracket (x) e_index^(2)`` in the Hadamard product with Perm.

    A term ``w (x) e`` with ``w`` a reordering of ``x y`` is rewritten as
    ``(xy (x) e.sigma)^sigma``; the slot selected by ``e.sigma`` carries the dot, so the
    first slot reads ``-|`` and the second ``|-``. ``commutative`` identifies ``xy`` with
    ``yx`` before expanding.
    """
    if index not in (1, 2):
        raise ValueError("Perm(2) has basis e1, e2")
    names = ("x", "y")
    e = PermBasisElement(2, index)
    words: Dict[Tuple[int, int], int] = {}
    for word, c in bracket:
        key = tuple(sorted(word)) if commutative else tuple(word)
        words[key] = words.get(key, 0) + c  # type: ignore[index]
    words = {w: c for w, c in words.items() if c}

    def text(word: Sequence[int]) -> str:
        return "".join(names[k - 1] for k in word)

    terms: Dict[DiKey, int] = {}
    moved_parts: List[Tuple[int, str]] = []
    for word, c in words.items():
        # variable k sits at position sigma(k) of the word
        sigma = Permutation([word.index(k) for k in (1, 2)])
        moved = act(sigma, e)
        letters = [names[k - 1] for k in word]
        key = (letters[0], "-|" if moved.i == 1 else "|-", letters[1])
        terms[key] = terms.get(key, 0) + c
        if sigma.is_Identity:
            moved_parts.append((c, f"{text(word)} (x) {moved}"))
        else:
            cycles = "".join("(" + "".join(str(k + 1) for k in cyc) + ")" for cyc in sigma.cyclic_form)
            moved_parts.append((c, f"({text(sorted(word))} (x) {moved})^{cycles}"))
    terms = {k: c for k, c in terms.items() if c}

    steps = [
        f"[x,y] (x) {e} = " + _signed([(c, f"{text(w)} (x) {e}") for w, c in words.items()]),
        "= " + _signed(moved_parts),
    ]
    op = "-|" if index == 1 else "|-"
    other = "|-" if index == 1 else "-|"
    lhs = "0" if commutative else f"[x {op} y]"
    expected: Dict[DiKey, int] = {} if commutative else {("x", op, "y"): 1, ("y", other, "x"): -1}
    return Derivation(lhs, steps, terms, expected)
