"""Ordered alphabets, associative words and Lyndon-Shirshov words.

Words are tuples of letter ranks (rank 0 is the smallest letter). Bracketing
trees are nested pairs whose leaves are ranks, so ``(3, (2, 1))`` is ``[3 [2 1]]``.
Both are hashable and cheap to compare; :class:`Alphabet` turns them into text.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from sympy import divisors
from sympy.ntheory import mobius

from .errors import AlphabetMismatchError, InternalConsistencyError, NotALSWError

Word = Tuple[int, ...]
Tree = Union[int, Tuple["Tree", "Tree"]]

DOT = "'"


@dataclass(frozen=True)
class Letter:
    id: str
    dotted: bool = False
    rank: int = 0

    @property
    def name(self) -> str:
        return self.id + (DOT if self.dotted else "")


@dataclass(frozen=True)
class Alphabet:
    """Letters in ascending order; ``letters[i].rank == i``."""

    letters: Tuple[Letter, ...]

    def __post_init__(self) -> None:
        seen = set()
        for i, letter in enumerate(self.letters):
            if letter.rank != i:
                raise ValueError(f"letter {letter.name!r} has rank {letter.rank}, expected {i}")
            if not letter.id or any(ch.isspace() for ch in letter.id) or DOT in letter.id:
                raise ValueError(f"invalid letter id {letter.id!r}")
            key = (letter.id, letter.dotted)
            if key in seen:
                raise ValueError(f"duplicate letter {letter.name!r}")
            seen.add(key)

    @classmethod
    def from_names(cls, names: Sequence[str]) -> "Alphabet":
        """Build from names listed greatest first, as in ``x1 > x2 > x3``."""
        letters = []
        for rank, raw in enumerate(reversed(list(names))):
            dotted = raw.endswith(DOT)
            letters.append(Letter(raw[:-1] if dotted else raw, dotted, rank))
        return cls(tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def names(self) -> List[str]:
        return [letter.name for letter in self.letters]

    @property
    def compact(self) -> bool:
        return all(len(letter.id) == 1 for letter in self.letters)

    def rank(self, name: str) -> int:
        try:
            return self._ranks()[name]
        except KeyError:
            raise KeyError(f"letter {name!r} is not declared in alphabet {self.order_text()}") from None

    def _ranks(self) -> Dict[str, int]:
        cached = self.__dict__.get("_rank_cache")
        if cached is None:
            cached = {letter.name: letter.rank for letter in self.letters}
            object.__setattr__(self, "_rank_cache", cached)
        return cached

    def __contains__(self, name: object) -> bool:
        return name in self._ranks()

    def name(self, rank: int) -> str:
        return self.letters[rank].name

    def order_text(self) -> str:
        return " > ".join(reversed(self.names))

    def format_word(self, word: Sequence[int]) -> str:
        parts = [self.name(r) for r in word]
        return "".join(parts) if self.compact else ".".join(parts)

    def parse_word(self, text: str) -> Word:
        text = text.strip()
        if not text:
            raise ValueError("empty word")
        if "." in text or not self.compact:
            return tuple(self.rank(tok) for tok in text.split("."))
        out: List[int] = []
        i = 0
        while i < len(text):
            tok = text[i]
            if i + 1 < len(text) and text[i + 1] == DOT:
                tok += DOT
                i += 1
            out.append(self.rank(tok))
            i += 1
        return tuple(out)

    def format_tree(self, tree: Tree) -> str:
        if isinstance(tree, int):
            return self.name(tree)
        return f"[{self.format_tree(tree[0])},{self.format_tree(tree[1])}]"


@dataclass(frozen=True)
class AssocWord:
    """A word tied to its alphabet, for APIs that must reject mixed alphabets."""

    alphabet: Alphabet
    letters: Word

    def __post_init__(self) -> None:
        if not self.letters:
            raise ValueError("words are nonempty")
        if any(r < 0 or r >= len(self.alphabet) for r in self.letters):
            raise ValueError(f"word {self.letters} has letters outside the alphabet")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.alphabet.format_word(self.letters)


WordLike = Union[AssocWord, Sequence[int]]


def _ranks(u: WordLike) -> Word:
    return u.letters if isinstance(u, AssocWord) else tuple(u)


def deglex_key(u: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    return (len(u), tuple(u))


def compare_deglex(u: WordLike, v: WordLike) -> int:
    """Return -1, 0 or 1 as ``u`` is less than, equal to or greater than ``v``."""
    if isinstance(u, AssocWord) and isinstance(v, AssocWord) and u.alphabet != v.alphabet:
        raise AlphabetMismatchError(f"cannot compare {u} and {v}: different alphabets")
    ku, kv = deglex_key(_ranks(u)), deglex_key(_ranks(v))
    return (ku > kv) - (ku < kv)


def is_alsw(u: WordLike) -> bool:
    w = _ranks(u)
    return bool(w) and all(w > w[i:] + w[:i] for i in range(1, len(w)))


def _lyndon_min(k: int, n: int) -> Iterator[Tuple[int, ...]]:
    # Duval's generation of words smaller than all their rotations, letters 0..k-1
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()


def enumerate_alsw(alphabet: Union[Alphabet, int], max_degree: int) -> List[Word]:
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    k = alphabet if isinstance(alphabet, int) else len(alphabet)
    if k == 0:
        return []
    # reversing the letter order turns "smallest rotation" into "greatest rotation"
    out = [tuple(k - 1 - c for c in w) for w in _lyndon_min(k, max_degree)]
    return sorted(out, key=deglex_key)


def witt_dimension(k: int, n: int) -> int:
    """Number of ALSWs of length ``n`` over ``k`` letters."""
    return int(sum(int(mobius(d)) * k ** (n // d) for d in divisors(n))) // n


@lru_cache(maxsize=None)
def _standard(w: Word) -> Tree:
    if len(w) == 1:
        return w[0]
    for i in range(1, len(w)):
        if is_alsw(w[i:]):
            return (_standard(w[:i]), _standard(w[i:]))
    raise InternalConsistencyError(f"no ALSW suffix in {w}")


def standard_bracketing(u: WordLike) -> Tree:
    w = _ranks(u)
    if not is_alsw(w):
        raise NotALSWError(f"{w} is not an associative Lyndon-Shirshov word")
    return _standard(w)


def underlying_word(tree: Tree) -> Word:
    if isinstance(tree, int):
        return (tree,)
    return underlying_word(tree[0]) + underlying_word(tree[1])


def tree_degree(tree: Tree) -> int:
    return 1 if isinstance(tree, int) else tree_degree(tree[0]) + tree_degree(tree[1])


def _le_prefix_greater(u: Word, v: Word) -> bool:
    # lexicographic, except that a proper prefix ranks above its extensions
    for a, b in zip(u, v):
        if a != b:
            return a < b
    return len(u) >= len(v)


def is_nlsw(tree: Tree) -> bool:
    if isinstance(tree, int):
        return True
    left, right = tree
    if not (is_alsw(underlying_word(tree)) and is_nlsw(left) and is_nlsw(right)):
        return False
    if isinstance(left, tuple):
        return _le_prefix_greater(underlying_word(left[1]), underlying_word(right))
    return True


def cfl_factorization(u: WordLike) -> List[Word]:
    """Factor a word into a product of ALSWs, ``u1 >= u2 >= ...`` in the Lyndon sense."""
    w = _ranks(u)
    # Duval on negated ranks gives the factorization for the reversed convention
    s = [-r for r in w]
    n, i = len(s), 0
    out: List[Word] = []
    while i < n:
        j, k = i + 1, i
        while j < n and s[k] <= s[j]:
            k = i if s[k] < s[j] else k + 1
            j += 1
        while i <= k:
            out.append(tuple(w[i:i + j - k]))
            i += j - k
    return out


def tree_leading(tree: Tree) -> Optional[Tuple[Word, int]]:
    """Leading word and sign of a bracket monomial, or None when a node is degenerate.

    For a node whose children lead with ``l`` and ``r`` the expansion leads with the larger
    of ``lr`` and ``rl``; equal candidates may cancel and are reported as degenerate.
    """
    if isinstance(tree, int):
        return (tree,), 1
    a = tree_leading(tree[0])
    b = tree_leading(tree[1])
    if a is None or b is None:
        return None
    (l, cl), (r, cr) = a, b
    lr, rl = l + r, r + l
    if lr == rl:
        return None
    return (lr, cl * cr) if lr > rl else (rl, -cl * cr)


def _span_subtree(tree: Tree, offset: int, start: int, end: int) -> Tuple[Tree, int, int]:
    size = tree_degree(tree)
    if isinstance(tree, tuple):
        left_size = tree_degree(tree[0])
        if end <= offset + left_size:
            return _span_subtree(tree[0], offset, start, end)
        if start >= offset + left_size:
            return _span_subtree(tree[1], offset + left_size, start, end)
    return tree, offset, offset + size


def _replace_subtree(tree: Tree, offset: int, lo: int, hi: int, new: Tree) -> Tree:
    size = tree_degree(tree)
    if offset == lo and offset + size == hi:
        return new
    left, right = tree  # type: ignore[misc]
    left_size = tree_degree(left)
    if hi <= offset + left_size:
        return (_replace_subtree(left, offset, lo, hi, new), right)
    return (left, _replace_subtree(right, offset + left_size, lo, hi, new))


def _classical_relative(w: Word, start: int, end: int) -> Optional[Tree]:
    std = _standard(w)
    sub, lo, hi = _span_subtree(std, 0, start, end)
    if lo != start:
        return None
    comb: Tree = _standard(w[start:end])
    if hi > end:
        for factor in cfl_factorization(w[end:hi]):
            comb = (comb, _standard(factor))
    return _replace_subtree(std, 0, lo, hi, comb)


def _all_trees(units: Tuple[Tree, ...]) -> Iterator[Tree]:
    if len(units) == 1:
        yield units[0]
        return
    for i in range(1, len(units)):
        for left in _all_trees(units[:i]):
            for right in _all_trees(units[i:]):
                yield (left, right)


def _orient(tree: Tree, w: Word) -> Optional[Tree]:
    lead = tree_leading(tree)
    if lead is None or lead[0] != w:
        return None
    if lead[1] == 1:
        return tree
    left, right = tree  # type: ignore[misc]
    return (right, left)


@lru_cache(maxsize=None)
def _special(w: Word, start: int, end: int) -> Tree:
    if start == 0 and end == len(w):
        return _standard(w)
    cand = _classical_relative(w, start, end)
    if cand is not None:
        found = _orient(cand, w)
        if found is not None:
            return found
    units = tuple(w[:start]) + (_standard(w[start:end]),) + tuple(w[end:])
    for cand in _all_trees(units):
        found = _orient(cand, w)
        if found is not None:
            return found
    raise InternalConsistencyError(f"no relative bracketing of {w} around {start}:{end}")


def special_bracketing(u: WordLike, start: int, end: int) -> Tree:
    """Bracketing of ``u`` that contains the standard bracketing of ``u[start:end]``.

    Offsets are 0-based with ``end`` exclusive. The expansion of the result leads with
    ``u`` itself, coefficient 1.
    """
    w = _ranks(u)
    if not (0 <= start < end <= len(w)):
        raise IndexError(f"occurrence {start}:{end} out of bounds for a word of length {len(w)}")
    if not is_alsw(w):
        raise NotALSWError(f"{w} is not an associative Lyndon-Shirshov word")
    if not is_alsw(w[start:end]):
        raise NotALSWError(f"subword {w[start:end]} is not an associative Lyndon-Shirshov word")
    return _special(w, start, end)


def occurrences(word: Sequence[int], sub: Sequence[int]) -> Iterator[int]:
    n, m = len(word), len(sub)
    sub = tuple(sub)
    for i in range(n - m + 1):
        if tuple(word[i:i + m]) == sub:
            yield i


def contains(word: Sequence[int], sub: Sequence[int]) -> bool:
    return next(occurrences(word, sub), None) is not None
