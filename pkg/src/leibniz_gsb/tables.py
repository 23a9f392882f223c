"""Structure constants of finite-dimensional algebras.

Tensors are numpy object arrays of Fractions, so every contraction is exact.
Basis elements are kept in declaration order (greatest letter first).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, Rational

from .freealg import Polynomial
from .gsb import RewriteSystem, Rule
from .linalg import RowSpace
from .words import Alphabet

Triple = Tuple[int, int, int]


def zeros(*shape: int) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    arr.fill(Fraction(0))
    return arr


def vector(values: Iterable) -> np.ndarray:
    return np.array([Fraction(v) for v in values], dtype=object)


def unit(n: int, i: int) -> np.ndarray:
    v = zeros(n)
    v[i] = Fraction(1)
    return v


def is_zero(v: np.ndarray) -> bool:
    return not any(v.flat)


def as_sparse(v: np.ndarray) -> Dict[int, Fraction]:
    return {i: c for i, c in enumerate(v) if c}


class StructureTable:
    """A bilinear product ``e_i * e_j = sum_k c[i, j, k] e_k``."""

    def __init__(self, names: Sequence[str], c: Optional[np.ndarray] = None):
        self.names: Tuple[str, ...] = tuple(names)
        n = len(self.names)
        if len(set(self.names)) != n:
            raise ValueError(f"duplicate basis names in {list(self.names)}")
        if c is None:
            c = zeros(n, n, n)
        if c.shape != (n, n, n):
            raise ValueError(f"structure constants must have shape {(n, n, n)}, got {c.shape}")
        self.c = c

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"basis element {name!r} is not declared") from None

    @classmethod
    def from_entries(cls, names: Sequence[str], entries: Mapping[Tuple[int, int], Sequence]) -> "StructureTable":
        n = len(names)
        c = zeros(n, n, n)
        for (i, j), value in entries.items():
            c[i, j, :] = vector(value)
        return cls(names, c)

    def mul(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.tensordot(np.tensordot(u, self.c, axes=(0, 0)), v, axes=(0, 0))

    def is_antisymmetric(self) -> bool:
        return all(is_zero(self.c[i, j] + self.c[j, i]) for i in range(self.dim) for j in range(i, self.dim))

    def leibniz_defects(self) -> List[Triple]:
        """Triples violating ``[[x,y],z] = [[x,z],y] + [x,[y,z]]``."""
        n = self.dim
        e = [unit(n, i) for i in range(n)]
        bad = []
        for i, j, k in product(range(n), repeat=3):
            x, y, z = e[i], e[j], e[k]
            lhs = self.mul(self.mul(x, y), z)
            rhs = self.mul(self.mul(x, z), y) + self.mul(x, self.mul(y, z))
            if not is_zero(lhs - rhs):
                bad.append((i, j, k))
        return bad

    def jacobi_defects(self) -> List[Triple]:
        n = self.dim
        e = [unit(n, i) for i in range(n)]
        bad = []
        for i, j, k in product(range(n), repeat=3):
            x, y, z = e[i], e[j], e[k]
            s = self.mul(self.mul(x, y), z) + self.mul(self.mul(y, z), x) + self.mul(self.mul(z, x), y)
            if not is_zero(s):
                bad.append((i, j, k))
        return bad

    def is_lie(self) -> bool:
        return self.is_antisymmetric() and not self.jacobi_defects()

    def change_basis(self, rows: np.ndarray) -> "StructureTable":
        """Table in the basis whose i-th element has old coordinates ``rows[i]``."""
        n = self.dim
        inv = inverse(rows)
        c = zeros(n, n, n)
        for i, j in product(range(n), repeat=2):
            c[i, j, :] = np.dot(self.mul(rows[i], rows[j]), inv)
        return StructureTable(self.names, c)

    def perturbed(self, i: int, j: int, k: int, delta=1) -> "StructureTable":
        c = self.c.copy()
        c[i, j, k] = c[i, j, k] + Fraction(delta)
        return StructureTable(self.names, c)

    def alphabet(self) -> Alphabet:
        return Alphabet.from_names(self.names)

    def to_polynomial(self, alphabet: Alphabet, v: np.ndarray, names: Optional[Sequence[str]] = None) -> Polynomial:
        names = names or self.names
        return Polynomial(alphabet, {(alphabet.rank(names[i]),): c for i, c in enumerate(v) if c})

    def symmetrized_products(self) -> List[np.ndarray]:
        """``[x |- y] - [x -| y] = -[y, x] - [x, y]`` over basis pairs ``i <= j``."""
        return [-(self.c[i, j] + self.c[j, i]) for i in range(self.dim) for j in range(i, self.dim)]

    def h0_space(self) -> RowSpace:
        return RowSpace([as_sparse(v) for v in self.symmetrized_products()])


def inverse(rows: np.ndarray) -> np.ndarray:
    m = Matrix([[Rational(c.numerator, c.denominator) for c in row] for row in rows])
    inv = m.inv()
    n = m.shape[0]
    out = zeros(n, n)
    for i, j in product(range(n), repeat=2):
        q = inv[i, j]
        out[i, j] = Fraction(int(q.p), int(q.q))
    return out


def multiplication_system(table: StructureTable, alphabet: Optional[Alphabet] = None) -> RewriteSystem:
    """Rules ``[x y] - mu(x, y)`` for every pair of letters with ``x > y``."""
    alphabet = alphabet or table.alphabet()
    rules: List[Rule] = []
    for i, j in product(range(table.dim), repeat=2):
        xi, xj = alphabet.rank(table.names[i]), alphabet.rank(table.names[j])
        if xi <= xj:
            continue
        poly = Polynomial(alphabet, {(xi, xj): 1, (xj, xi): -1}) - table.to_polynomial(
            alphabet, table.c[i, j, :]
        )
        rules.append(Rule(poly, f"[{table.names[i]},{table.names[j]}]"))
    return RewriteSystem(alphabet, rules)


@dataclass
class DiTable:
    """Two products on one basis: ``dashv`` and ``vdash``."""

    names: Tuple[str, ...]
    dashv: np.ndarray
    vdash: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.names)

    def left(self) -> StructureTable:
        return StructureTable(self.names, self.dashv)

    def right(self) -> StructureTable:
        return StructureTable(self.names, self.vdash)

    @classmethod
    def from_leibniz(cls, table: StructureTable) -> "DiTable":
        # [x |- y] = -[y -| x]
        return cls(table.names, table.c.copy(), -np.transpose(table.c, (1, 0, 2)))
