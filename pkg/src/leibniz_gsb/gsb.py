"""Composition-Diamond machinery for Lie polynomials.

A :class:`RewriteSystem` holds monic Lie polynomials keyed by their leading words.
``reduce`` eliminates leading words that contain a rule's leading word ``s`` by
subtracting the relative bracketing ``[a s b]`` whose expansion leads with the same word.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np

from .errors import CompositionShapeError, InternalConsistencyError, NotALieElementError, NotALSWError
from .freealg import Polynomial, Terms, axpy, expand_terms
from .linalg import RowSpace, rank
from .words import (
    Alphabet,
    Tree,
    Word,
    deglex_key,
    enumerate_alsw,
    is_alsw,
    occurrences,
    special_bracketing,
    standard_bracketing,
    tree_degree,
    witt_dimension,
)

log = logging.getLogger(__name__)

THREADS_ENV = "LEIBNIZ_GSB_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def worker_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _pool_map(fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
    n = worker_threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class Rule:
    poly: Polynomial
    label: str = ""
    aliases: Tuple[str, ...] = ()
    lead: Word = field(init=False, compare=False)
    frozen: Tuple[Tuple[Word, Fraction], ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.poly:
            raise ValueError(f"rule {self.label!r} is zero")
        lead, coeff = self.poly.leading()
        if coeff != 1:
            raise ValueError(f"rule {self.label!r} is not monic (leading coefficient {coeff})")
        if not is_alsw(lead):
            raise NotALSWError(
                f"rule {self.label!r} leads with {self.poly.alphabet.format_word(lead)}, "
                "which is not a Lyndon-Shirshov word"
            )
        object.__setattr__(self, "lead", lead)
        object.__setattr__(self, "frozen", tuple(sorted(self.poly.terms.items())))

    def __hash__(self) -> int:
        return hash((self.frozen, self.label))

    def with_aliases(self, *labels: str) -> "Rule":
        return Rule(self.poly, self.label, self.aliases + tuple(labels))


class RewriteSystem:
    """An ordered list of monic rules over one alphabet.

    Rules are tried in deg-lex order of their leading words, then insertion order.
    """

    def __init__(self, alphabet: Alphabet, rules: Iterable[Union[Rule, Polynomial]] = ()):
        self.alphabet = alphabet
        built: List[Rule] = []
        for i, r in enumerate(rules):
            if isinstance(r, Polynomial):
                r = Rule(r.monic(), f"r{i}")
            if r.poly.alphabet != alphabet:
                raise ValueError(f"rule {r.label!r} is over a different alphabet")
            built.append(r)
        self.rules: Tuple[Rule, ...] = tuple(built)
        order = sorted(range(len(built)), key=lambda i: (deglex_key(built[i].lead), i))
        self._priority = {i: p for p, i in enumerate(order)}
        self.index: Dict[Word, Rule] = {}
        self._index_pos: Dict[Word, int] = {}
        for i in order:
            self.index.setdefault(built[i].lead, built[i])
            self._index_pos.setdefault(built[i].lead, i)
        self._max_lead = max((len(r.lead) for r in built), default=0)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def extended(self, rules: Iterable[Rule]) -> "RewriteSystem":
        return RewriteSystem(self.alphabet, list(self.rules) + list(rules))

    def rule(self, label: str) -> Rule:
        for r in self.rules:
            if r.label == label:
                return r
        raise KeyError(f"no rule labelled {label!r}")

    def match(self, w: Word) -> Optional[Tuple[int, int]]:
        """Position of the rule to apply to ``w`` and the start of its occurrence."""
        best: Optional[Tuple[int, int, int]] = None
        n = len(w)
        for length in range(1, min(n, self._max_lead) + 1):
            for start in range(n - length + 1):
                pos = self._index_pos.get(w[start:start + length])
                if pos is None:
                    continue
                key = (self._priority[pos], start, pos)
                if best is None or key < best:
                    best = key
        return None if best is None else (best[2], best[1])

    def is_reducible(self, w: Word) -> bool:
        return self.match(w) is not None


def _expand_with(tree: Tree, offset: int, start: int, end: int, inner: Terms) -> Terms:
    size = tree_degree(tree)
    if offset == start and offset + size == end:
        return inner
    if isinstance(tree, int):
        return {(tree,): Fraction(1)}
    left_size = tree_degree(tree[0])
    if end <= offset or start >= offset + size:
        return expand_terms(tree)
    left = _expand_with(tree[0], offset, start, end, inner)
    right = _expand_with(tree[1], offset + left_size, start, end, inner)
    acc: Terms = {}
    for u, a in left.items():
        for v, b in right.items():
            for w, s in ((u + v, a * b), (v + u, -a * b)):
                t = acc.get(w, 0) + s
                if t:
                    acc[w] = t
                else:
                    acc.pop(w, None)
    return acc


@lru_cache(maxsize=65536)
def _relative_items(w: Word, start: int, rule: Tuple[Tuple[Word, Fraction], ...]) -> Tuple[Tuple[Word, Fraction], ...]:
    inner = dict(rule)
    lead = max(inner, key=deglex_key)
    end = start + len(lead)
    if w[start:end] != lead:
        raise CompositionShapeError(f"{lead} does not occur in {w} at {start}")
    tree = special_bracketing(w, start, end)
    terms = _expand_with(tree, 0, start, end, inner)
    top = max(terms, key=deglex_key) if terms else None
    if top != w or terms[top] != 1:
        raise InternalConsistencyError(f"relative bracketing of {w} around {start}:{end} does not lead with it")
    return tuple(terms.items())


def relative_terms(w: Word, start: int, rule: Rule) -> Terms:
    return dict(_relative_items(w, start, rule.frozen))


def relative_bracketing(w: Word, start: int, rule: Rule) -> Polynomial:
    """``[a s b]`` relative to the occurrence of the rule's leading word at ``start``."""
    return Polynomial._raw(rule.poly.alphabet, relative_terms(w, start, rule))


@dataclass(frozen=True)
class ReductionStep:
    word: Word
    rule: str
    start: int
    coeff: Fraction


def reduce(f: Polynomial, system: RewriteSystem, trace: Optional[List[ReductionStep]] = None) -> Polynomial:
    """Normal form of a Lie polynomial modulo the rules; 0 iff ``f`` reduces into the ideal."""
    rest: Terms = dict(f.terms)
    result: Terms = {}
    while rest:
        w = max(rest, key=deglex_key)
        c = rest[w]
        if not is_alsw(w):
            raise NotALieElementError(
                f"leading word {f.alphabet.format_word(w)} is not a Lyndon-Shirshov word"
            )
        hit = system.match(w)
        if hit is None:
            terms = expand_terms(standard_bracketing(w))
            axpy(result, c, terms)
            axpy(rest, -c, terms)
            continue
        pos, start = hit
        rule = system.rules[pos]
        if trace is not None:
            trace.append(ReductionStep(w, rule.label, start, c))
        axpy(rest, -c, relative_terms(w, start, rule))
    return Polynomial._raw(f.alphabet, result)


def member(f: Polynomial, system: RewriteSystem) -> bool:
    return not reduce(f, system)


def reduction_certificate(system: RewriteSystem, trace: Sequence[ReductionStep]) -> Polynomial:
    """``sum c [a s b]`` over the steps of a trace; equals ``f - reduce(f)``."""
    acc: Terms = {}
    for step in trace:
        axpy(acc, step.coeff, relative_bracketing(step.word, step.start, system.rule(step.rule)).terms)
    return Polynomial._raw(system.alphabet, acc)


def certificate_holds(
    f: Polynomial, normal_form: Polynomial, system: RewriteSystem, trace: Sequence[ReductionStep]
) -> bool:
    return f - normal_form == reduction_certificate(system, trace)


@dataclass
class CompositionReport:
    kind: str  # "intersection" or "inclusion"
    f: int
    g: int
    f_label: str
    g_label: str
    w: Word
    value: Polynomial
    residue: Polynomial
    trace: List[ReductionStep] = field(default_factory=list)

    @property
    def trivial(self) -> bool:
        return not self.residue


def _finish(kind: str, system: RewriteSystem, i: int, j: int, w: Word, value: Polynomial) -> CompositionReport:
    if value and deglex_key(value.leading()[0]) >= deglex_key(w):
        raise InternalConsistencyError(f"composition at {w} does not cancel its leading word")
    steps: List[ReductionStep] = []
    residue = reduce(value, system, steps)
    f, g = system.rules[i], system.rules[j]
    return CompositionReport(kind, i, j, f.label, g.label, w, value, residue, steps)


def intersection_composition(system: RewriteSystem, i: int, j: int, w: Word) -> CompositionReport:
    f, g = system.rules[i], system.rules[j]
    fl, gl = f.lead, g.lead
    w = tuple(w)
    if not (
        len(w) < len(fl) + len(gl)
        and len(w) > max(len(fl), len(gl))
        and w[:len(fl)] == fl
        and w[len(w) - len(gl):] == gl
    ):
        raise CompositionShapeError(
            f"{system.alphabet.format_word(w)} is not an overlap of "
            f"{system.alphabet.format_word(fl)} and {system.alphabet.format_word(gl)}"
        )
    if not is_alsw(w):
        raise CompositionShapeError(f"{system.alphabet.format_word(w)} is not a Lyndon-Shirshov word")
    value = Polynomial._raw(system.alphabet, relative_terms(w, 0, f))
    axpy(value._terms, Fraction(-1), relative_terms(w, len(w) - len(gl), g))
    return _finish("intersection", system, i, j, w, value)


def inclusion_composition(
    system: RewriteSystem, i: int, j: int, w: Word, start: Optional[int] = None
) -> CompositionReport:
    f, g = system.rules[i], system.rules[j]
    w = tuple(w)
    if w != f.lead:
        raise CompositionShapeError(f"inclusion compositions are taken at the leading word of {f.label!r}")
    starts = list(occurrences(w, g.lead))
    if start is None:
        if not starts:
            raise CompositionShapeError(f"{g.label!r} does not occur inside {f.label!r}")
        start = starts[0]
    elif start not in starts:
        raise CompositionShapeError(f"{g.label!r} does not occur inside {f.label!r} at {start}")
    value = Polynomial._raw(system.alphabet, dict(f.poly.terms))
    axpy(value._terms, Fraction(-1), relative_terms(w, start, g))
    return _finish("inclusion", system, i, j, w, value)


def composition_shapes(system: RewriteSystem, max_degree: Optional[int] = None) -> List[Tuple[str, int, int, Word, int]]:
    """Every (kind, f, g, w, offset) pair of the system in a deterministic order."""
    out: List[Tuple[str, int, int, Word, int]] = []
    rules = system.rules
    for i, f in enumerate(rules):
        for j, g in enumerate(rules):
            fl, gl = f.lead, g.lead
            for k in range(1, min(len(fl), len(gl))):
                if fl[len(fl) - k:] == gl[:k]:
                    w = fl + gl[k:]
                    if max_degree is not None and len(w) > max_degree:
                        continue
                    if not is_alsw(w):
                        raise InternalConsistencyError(f"overlap {w} of Lyndon-Shirshov words is not one")
                    out.append(("intersection", i, j, w, k))
            if i != j and len(gl) <= len(fl):
                for start in occurrences(fl, gl):
                    out.append(("inclusion", i, j, fl, start))
    return out


def all_compositions(system: RewriteSystem, max_degree: Optional[int] = None) -> List[CompositionReport]:
    def run(shape: Tuple[str, int, int, Word, int]) -> CompositionReport:
        kind, i, j, w, offset = shape
        if kind == "intersection":
            return intersection_composition(system, i, j, w)
        return inclusion_composition(system, i, j, w, offset)

    return _pool_map(run, composition_shapes(system, max_degree))


@dataclass
class GsbReport:
    ok: bool
    compositions: List[CompositionReport]

    @property
    def failures(self) -> List[CompositionReport]:
        return [c for c in self.compositions if not c.trivial]


def is_gsb(system: RewriteSystem, max_degree: Optional[int] = None) -> GsbReport:
    comps = all_compositions(system, max_degree)
    return GsbReport(all(c.trivial for c in comps), comps)


@dataclass(frozen=True)
class RuleFate:
    label: str
    outcome: str  # "merged" or "rewritten"
    into: Optional[str] = None


def interreduce(system: RewriteSystem) -> Tuple[RewriteSystem, List[RuleFate]]:
    """Reduce every rule modulo the others until nothing changes."""
    rules = list(system.rules)
    fates: List[RuleFate] = []
    changed = True
    while changed:
        changed = False
        for i in sorted(range(len(rules)), key=lambda k: (deglex_key(rules[k].lead), k)):
            r = rules[i]
            others = RewriteSystem(system.alphabet, rules[:i] + rules[i + 1:])
            steps: List[ReductionStep] = []
            red = reduce(r.poly, others, steps)
            if red == r.poly:
                continue
            changed = True
            if not red:
                into = steps[0].rule if steps else None
                fates.append(RuleFate(r.label, "merged", into))
                log.debug("rule %s reduced to zero (first step by %s)", r.label, into)
                del rules[i]
                if into is not None:
                    k = next(k for k, q in enumerate(rules) if q.label == into)
                    rules[k] = rules[k].with_aliases(r.label, *r.aliases)
            else:
                fates.append(RuleFate(r.label, "rewritten"))
                rules[i] = Rule(red.monic(), r.label, r.aliases)
            break
    return RewriteSystem(system.alphabet, rules), fates


@dataclass
class Completion:
    system: RewriteSystem
    rounds: int
    added: List[str]
    pending_above_cap: int
    # input rules that do not reduce to 0 modulo the result
    unreduced: List[str] = field(default_factory=list)

    @property
    def incomplete_above_cap(self) -> bool:
        return self.pending_above_cap > 0

    @property
    def same_ideal(self) -> bool:
        return not self.unreduced


def complete(system: RewriteSystem, max_degree: int) -> Completion:
    """Adjoin residues of compositions up to ``max_degree`` until all of them vanish."""
    if system.rules and max_degree < max(len(r.lead) for r in system.rules):
        raise ValueError("max_degree must be at least the largest rule degree")
    current, _ = interreduce(system)
    added: List[str] = []
    rounds = 0
    while True:
        rounds += 1
        residues: List[Polynomial] = []
        for comp in all_compositions(current, max_degree):
            if comp.trivial:
                continue
            # earlier residues of this round may already kill this one
            extra = RewriteSystem(current.alphabet, list(current.rules) + [
                Rule(p, f"tmp{n}") for n, p in enumerate(residues)
            ])
            r = reduce(comp.residue, extra)
            if r:
                residues.append(r.monic())
        if not residues:
            break
        new_rules = []
        for p in residues:
            label = f"c{len(added) + 1}"
            added.append(label)
            new_rules.append(Rule(p, label))
            log.debug("adjoined %s with leading word %s", label, current.alphabet.format_word(p.leading()[0]))
        current, _ = interreduce(current.extended(new_rules))
    above = sum(1 for shape in composition_shapes(current) if len(shape[3]) > max_degree)
    unreduced = [r.label for r in system.rules if reduce(r.poly, current)]
    if unreduced:
        log.warning("input rules %s do not reduce to 0 modulo the completed system", ", ".join(unreduced))
    log.info("completion finished after %d rounds with %d rules (%d added)", rounds, len(current), len(added))
    return Completion(current, rounds, added, above, unreduced)


def irr_basis(system: RewriteSystem, max_degree: int) -> List[Tree]:
    """Standard bracketings of ALSWs avoiding every leading word, deg-lex sorted."""
    return [standard_bracketing(w) for w in enumerate_alsw(system.alphabet, max_degree) if not system.is_reducible(w)]


def ideal_generators(system: RewriteSystem, max_degree: int) -> List[Terms]:
    """Expansions of every ``[a s b]`` of degree at most ``max_degree``."""
    rows: List[Terms] = []
    for w in enumerate_alsw(system.alphabet, max_degree):
        for rule in system.rules:
            for start in occurrences(w, rule.lead):
                rows.append(relative_terms(w, start, rule))
    return rows


def ideal_span_oracle(system: RewriteSystem, max_degree: int) -> RowSpace:
    return RowSpace(ideal_generators(system, max_degree))


def dimension_check(system: RewriteSystem, max_degree: int) -> Dict[int, Tuple[int, int]]:
    """Per degree: (size of Irr, dim of free Lie minus rank of the ideal), cumulatively differenced."""
    k = len(system.alphabet)
    irr = irr_basis(system, max_degree)
    out: Dict[int, Tuple[int, int]] = {}
    prev = 0
    for d in range(1, max_degree + 1):
        free = sum(witt_dimension(k, n) for n in range(1, d + 1))
        quotient = free - rank(ideal_generators(system, d))
        out[d] = (sum(1 for t in irr if tree_degree(t) == d), quotient - prev)
        prev = quotient
    return out


@dataclass
class CrossCheck:
    agreed: int = 0
    disagreements: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def membership_cross_check(system: RewriteSystem, max_degree: int, samples: int, seed: int = 0) -> CrossCheck:
    """Compare ``member`` with the linear-algebra oracle on random ideal elements and normal forms.

    Only meaningful when the system is a Groebner-Shirshov basis up to ``max_degree``.
    """
    rng = np.random.default_rng(seed)
    gens = ideal_generators(system, max_degree)
    space = ideal_span_oracle(system, max_degree)
    irr = [expand_terms(t) for t in irr_basis(system, max_degree)]
    out = CrossCheck()

    def combo(rows: List[Terms]) -> Polynomial:
        acc: Terms = {}
        picks = rng.integers(0, len(rows), size=min(3, len(rows)))
        for k in picks:
            c = int(rng.integers(1, 4)) * (1 if rng.integers(0, 2) else -1)
            axpy(acc, Fraction(c), rows[int(k)])
        return Polynomial._raw(system.alphabet, acc)

    for kind, rows, expected in (("ideal", gens, True), ("normal", irr, False)):
        if not rows:
            continue
        for _ in range(samples):
            f = combo(rows)
            if not f:
                continue
            got = member(f, system)
            oracle = space.contains(dict(f.terms))
            if got == oracle == expected:
                out.agreed += 1
            else:
                out.disagreements.append(f"{kind} sample {f}: reduce says {got}, oracle says {oracle}")
    log.info("membership cross-check: %d agreed, %d disagreed", out.agreed, len(out.disagreements))
    return out
