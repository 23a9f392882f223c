"""HNN-extensions of Leibniz algebras as replicated Lie presentations.

Input is a right Leibniz algebra ``L`` (``[x -| y]`` structure constants), a subalgebra
``A``, a derivation ``d`` and an anti-derivation ``d'`` on ``A``. The builder works in an
adapted basis of ``L``::

    B_R > B_A1 > B_H > B_A0      B_A0 spans A n H0, B_H completes H0, B_A1 completes A

so that ``X0 = B_H u B_A0`` are letters and the letters of ``A`` are the smallest ones
outside ``X0``. The alphabet is ``t' > X' > t > X``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InternalConsistencyError, InvalidInputError
from .freealg import Polynomial, bracket
from .gsb import (
    CompositionReport,
    GsbReport,
    RewriteSystem,
    Rule,
    RuleFate,
    dimension_check,
    interreduce,
    irr_basis,
    is_gsb,
    reduce,
)
from .linalg import coordinates, intersection, rank
from .replication import DoubledAlphabet, phi
from .tables import StructureTable, as_sparse, inverse, is_zero, unit, vector, zeros
from .words import Alphabet, Tree, Word, contains, enumerate_alsw, standard_bracketing

log = logging.getLogger(__name__)

STABLE = "t"
DERIVATION = "derivation"
ANTI_DERIVATION = "anti_derivation"


@dataclass
class SubalgebraSpec:
    generators: List[np.ndarray]


@dataclass
class DerivationSpec:
    """A linear map on ``A`` given by its values on some vectors of ``A``.

    Generators of ``A`` outside the span of the listed arguments are sent to 0.
    """

    kind: str
    values: List[Tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    name: str = "d"

    def __post_init__(self) -> None:
        if self.kind not in (DERIVATION, ANTI_DERIVATION):
            raise ValueError(f"unknown map kind {self.kind!r}")

    @classmethod
    def zero(cls, kind: str, name: str = "d") -> "DerivationSpec":
        return cls(kind, [], name)


class LinearMap:
    """``spec`` extended linearly to ``span(A)``."""

    def __init__(self, dim: int, subalgebra: SubalgebraSpec, spec: DerivationSpec):
        self.dim = dim
        args = [list(a) for a, _ in spec.values]
        images = [img for _, img in spec.values]
        if args and rank([as_sparse(vector(a)) for a in args]) != len(args):
            raise InvalidInputError(f"{spec.name} is given on linearly dependent arguments")
        for a in args:
            if coordinates([list(g) for g in subalgebra.generators], a) is None:
                raise InvalidInputError(f"{spec.name} is given on a vector outside the subalgebra")
        for g in subalgebra.generators:
            if coordinates(args, list(g)) is None:
                args.append(list(g))
                images.append(zeros(dim))
        self.args = args
        self.images = images

    def __call__(self, v: np.ndarray) -> np.ndarray:
        coeffs = coordinates(self.args, list(v))
        if coeffs is None:
            raise InvalidInputError("vector is outside the domain of the map")
        out = zeros(self.dim)
        for c, img in zip(coeffs, self.images):
            out = out + img * c
        return out


def _subalgebra_basis(a: SubalgebraSpec) -> List[np.ndarray]:
    gens = a.generators
    if gens and rank([as_sparse(g) for g in gens]) != len(gens):
        raise InvalidInputError("subalgebra generators are linearly dependent")
    return list(gens)


# -- input checks ---------------------------------------------------------------------------


def check_leibniz(table: StructureTable) -> bool:
    return not table.leibniz_defects()


def subalgebra_defects(table: StructureTable, a: SubalgebraSpec) -> List[Tuple[int, int]]:
    basis = _subalgebra_basis(a)
    rows = [list(g) for g in basis]
    return [
        (i, j)
        for i, j in product(range(len(basis)), repeat=2)
        if coordinates(rows, list(table.mul(basis[i], basis[j]))) is None
    ]


def check_subalgebra(table: StructureTable, a: SubalgebraSpec) -> bool:
    return not subalgebra_defects(table, a)


def derivation_defects(table: StructureTable, a: SubalgebraSpec, spec: DerivationSpec) -> List[Tuple[int, int]]:
    """Generator pairs violating ``d[x,y] = [dx,y] + [x,dy]`` or ``d'[x,y] = [d'x,y] - [d'y,x]``."""
    basis = _subalgebra_basis(a)
    d = LinearMap(table.dim, a, spec)
    bad = []
    for i, j in product(range(len(basis)), repeat=2):
        x, y = basis[i], basis[j]
        lhs = d(table.mul(x, y))
        if spec.kind == DERIVATION:
            rhs = table.mul(d(x), y) + table.mul(x, d(y))
        else:
            rhs = table.mul(d(x), y) - table.mul(d(y), x)
        if not is_zero(lhs - rhs):
            bad.append((i, j))
    return bad


def check_derivation(table: StructureTable, a: SubalgebraSpec, spec: DerivationSpec) -> bool:
    return not derivation_defects(table, a, spec)


def compatibility_defects(
    table: StructureTable, a: SubalgebraSpec, d: DerivationSpec, dp: DerivationSpec
) -> List[str]:
    """``(d + d')(A)`` must lie in ``H0`` and ``d'`` must vanish on ``A n H0``."""
    h0 = table.h0_space()
    dm, dpm = LinearMap(table.dim, a, d), LinearMap(table.dim, a, dp)
    bad = []
    for k, g in enumerate(_subalgebra_basis(a)):
        if not h0.contains(as_sparse(dm(g) + dpm(g))):
            bad.append(f"({d.name} + {dp.name})(generator {k}) is not in H0")
    h0_rows = [[h.get(k, Fraction(0)) for k in range(table.dim)] for h in h0.basis]
    for v in intersection([list(g) for g in a.generators], h0_rows, table.dim):
        if not is_zero(dpm(vector(v))):
            bad.append(f"{dp.name} does not vanish on A n H0")
            break
    return bad


def check_compatibility(table: StructureTable, a: SubalgebraSpec, d: DerivationSpec, dp: DerivationSpec) -> bool:
    return not compatibility_defects(table, a, d, dp)


# -- adapted basis --------------------------------------------------------------------------


@dataclass
class AdaptedBasis:
    names: List[str]  # greatest first
    rows: np.ndarray  # rows[i] = old coordinates of the i-th adapted vector
    table: StructureTable
    x0: List[str]
    a_letters: List[str]  # B_A1 then B_A0
    a0: List[str]
    d: Dict[str, np.ndarray] = field(default_factory=dict)
    dp: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def x1(self) -> List[str]:
        return [n for n in self.names if n not in self.x0]

    def to_new(self, v: np.ndarray) -> np.ndarray:
        return np.dot(v, inverse(self.rows))

    def is_identity(self) -> bool:
        n = len(self.names)
        return all(self.rows[i, j] == (1 if i == j else 0) for i in range(n) for j in range(n))


def _extend(chosen: List[List[Fraction]], candidates: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    added: List[List[Fraction]] = []
    for c in candidates:
        trial = chosen + added + [list(c)]
        if any(c) and rank([as_sparse(vector(r)) for r in trial]) == len(trial):
            added.append([Fraction(x) for x in c])
    return added


def _leading_index(v: Sequence[Fraction]) -> int:
    return next(k for k, x in enumerate(v) if x)


def _name_blocks(old: Sequence[str], blocks: Sequence[List[List[Fraction]]]) -> Tuple[List[str], List[List[Fraction]]]:
    names: List[str] = []
    rows: List[List[Fraction]] = []
    fresh = 0
    for block in blocks:
        for v in sorted(block, key=_leading_index):
            support = [k for k, x in enumerate(v) if x]
            if len(support) == 1 and v[support[0]] == 1:
                names.append(old[support[0]])
            else:
                fresh += 1
                while f"b{fresh}" in old:
                    fresh += 1
                names.append(f"b{fresh}")
            rows.append(v)
    return names, rows


def h0_and_adapt(
    table: StructureTable,
    a: Optional[SubalgebraSpec] = None,
    d: Optional[DerivationSpec] = None,
    dp: Optional[DerivationSpec] = None,
) -> AdaptedBasis:
    """Choose the adapted basis and rewrite the table and both maps in it."""
    n = table.dim
    a = a or SubalgebraSpec([])
    gens = [list(g) for g in _subalgebra_basis(a)]
    h0 = table.h0_space()
    h0_rows = [[h.get(k, Fraction(0)) for k in range(n)] for h in h0.basis]

    b_a0 = intersection(gens, h0_rows, n)
    b_h = _extend(b_a0, h0_rows)
    b_a1 = _extend(b_a0 + b_h, gens)
    b_r = _extend(b_a0 + b_h + b_a1, [list(unit(n, k)) for k in range(n)])

    names, rows = _name_blocks(table.names, [b_r, b_a1, b_h, b_a0])
    sizes = [len(b_r), len(b_a1), len(b_h), len(b_a0)]
    p = np.array([[Fraction(x) for x in r] for r in rows], dtype=object).reshape(n, n)
    new = StructureTable(names, table.c).change_basis(p)

    start_h = sizes[0] + sizes[1]
    x0 = names[start_h:]
    a_letters = names[sizes[0]:start_h] + names[start_h + sizes[2]:]
    a0 = names[start_h + sizes[2]:]

    x0_idx = [names.index(x) for x in x0]
    for i, j in product(range(n), x0_idx):
        if not is_zero(new.c[i, j]):
            raise InternalConsistencyError(f"[{names[i]}, {names[j]}] != 0 although {names[j]} is in H0")
        if any(new.c[j, i, k] for k in range(n) if k not in x0_idx):
            raise InternalConsistencyError(f"[{names[j]}, {names[i]}] leaves H0")
    basis = AdaptedBasis(names, p, new, x0, a_letters, a0)
    if basis.is_identity():
        log.debug("adapted basis coincides with the input basis")
    else:
        log.debug("adapted basis %s with rows %s", names, [[str(x) for x in r] for r in rows])
    inv = inverse(p)
    for spec, target in ((d, basis.d), (dp, basis.dp)):
        if spec is None:
            continue
        m = LinearMap(n, a, spec)
        for name in a_letters:
            target[name] = np.dot(m(p[names.index(name)]), inv)
    return basis


# -- presentation ---------------------------------------------------------------------------


@dataclass
class HnnPresentation:
    doubled: DoubledAlphabet
    seed: RewriteSystem
    system: RewriteSystem
    fates: List[RuleFate]
    families: Dict[str, str]
    basis: AdaptedBasis

    @property
    def alphabet(self) -> Alphabet:
        return self.doubled.full

    @property
    def x0_letters(self) -> List[str]:
        return self.basis.x0

    def family(self, rule: Rule) -> str:
        return self.families.get(rule.label, "")

    def letter(self, name: str, dotted: bool = False) -> int:
        r = self.doubled.base.rank(name)
        return self.doubled.dot(r) if dotted else r


def _validate_inputs(table: StructureTable, a: SubalgebraSpec, d: DerivationSpec, dp: DerivationSpec) -> None:
    bad = table.leibniz_defects()
    if bad:
        i, j, k = bad[0]
        raise InvalidInputError(
            f"Leibniz identity fails on ({table.names[i]}, {table.names[j]}, {table.names[k]})"
        )
    if not check_subalgebra(table, a):
        raise InvalidInputError("the subalgebra is not closed under the product")
    if d.kind != DERIVATION or dp.kind != ANTI_DERIVATION:
        raise InvalidInputError("expected a derivation d and an anti-derivation d'")
    for spec in (d, dp):
        bad2 = derivation_defects(table, a, spec)
        if bad2:
            raise InvalidInputError(f"{spec.name} violates its law on generator pair {bad2[0]}")
    issues = compatibility_defects(table, a, d, dp)
    if issues:
        raise InvalidInputError(issues[0])


def build_presentation(
    table: StructureTable,
    a: SubalgebraSpec,
    d: DerivationSpec,
    dp: DerivationSpec,
    check: bool = True,
) -> HnnPresentation:
    """Rules of the HNN-extension over ``t' > X' > t > X``, inter-reduced.

    All relation families are generated; inter-reduction drops or merges the ones the
    reduced set does without (``phi(f2)``, ``phi(f3)``, ``phi(g)``, ``h`` on ``A n H0``)
    and records them as aliases of the surviving rules.
    """
    if STABLE in table.names:
        raise InvalidInputError(f"letter {STABLE!r} is reserved for the stable letter")
    if check:
        _validate_inputs(table, a, d, dp)
    basis = h0_and_adapt(table, a, d, dp)
    doubled = DoubledAlphabet.of(Alphabet.from_names([STABLE] + basis.names))
    full = doubled.full
    new = basis.table
    n = len(basis.names)

    def undotted(name: str) -> Polynomial:
        return Polynomial.letter(full, doubled.base.rank(name))

    def dotted(name: str) -> Polynomial:
        return Polynomial.letter(full, doubled.dot(doubled.base.rank(name)))

    def linear(v: np.ndarray, dot: bool) -> Polynomial:
        out = Polynomial.zero(full)
        for k in range(n):
            if v[k]:
                out = out + (dotted if dot else undotted)(basis.names[k]).scale(v[k])
        return out

    t, tdot = undotted(STABLE), dotted(STABLE)
    families: Dict[str, str] = {}
    kept: List[Rule] = []
    vanishing: List[Rule] = []

    def add(poly: Polynomial, label: str, family: str, into: List[Rule]) -> None:
        if not poly:
            log.debug("relation %s is zero", label)
            return
        families[label] = family
        into.append(Rule(poly.monic(), label))

    x1 = basis.x1
    for name in basis.x0:
        add(undotted(name), f"x0({name})", "x0", kept)
    for x, y in product(basis.names, x1):
        i, j = basis.names.index(x), basis.names.index(y)
        rel = bracket(dotted(x), undotted(y)) - linear(new.c[i, j], dot=True)
        kind = "f3" if x == y else "f1" if i < j else "f2"
        add(rel, f"{kind}({x},{y})", kind, kept)
        image = phi(rel, doubled)
        # phi(f2) repeats phi(f1) modulo H0 and phi(f3) lies in H0
        if kind == "f1":
            add(image, f"phi(f1)({x},{y})", "phi_f1", kept)
        elif x not in basis.x0:
            add(image, f"phi({kind})({x},{y})", f"phi_{kind}", vanishing)
    for name in basis.a_letters:
        dv, dpv = basis.d.get(name, zeros(n)), basis.dp.get(name, zeros(n))
        g = bracket(dotted(name), t) - linear(dv, dot=True)
        h = bracket(tdot, undotted(name)) - linear(dpv, dot=True)
        add(g, f"g({name},t)", "g", kept)
        add(phi(g, doubled), f"phi(g)({name},t)", "phi_g", vanishing)
        if name in basis.a0:
            add(h, f"h(t,{name})", "h", vanishing)
            add(phi(h, doubled), f"phi(h)(t,{name})", "phi_h", vanishing)
        else:
            add(h, f"h(t,{name})", "h", kept)
            add(phi(h, doubled), f"phi(h)(t,{name})", "phi_h", kept)

    # on equal leading words the earlier rule is the one absorbed
    seed = RewriteSystem(full, vanishing + kept)
    system, fates = interreduce(seed)
    for fate in fates:
        log.debug("inter-reduction: %s %s%s", fate.label, fate.outcome, f" into {fate.into}" if fate.into else "")
    return HnnPresentation(doubled, seed, system, fates, families, basis)


# -- verification ---------------------------------------------------------------------------

CASES = ("i", "ii", "iii", "iv", "v", "f2^phi(f1)", "other", "inclusion")


def classify(p: HnnPresentation, comp: CompositionReport) -> List[str]:
    if comp.kind != "intersection":
        return ["inclusion"]
    f = p.families.get(comp.f_label, "")
    g = p.families.get(comp.g_label, "")
    if (f, g) == ("f1", "phi_f1"):
        rule = next(r for r in p.system.rules if r.label == comp.g_label)
        aliases = {p.families.get(a, "") for a in rule.aliases}
        return ["i", "ii"] if "phi_f2" in aliases else ["i"]
    pairs = {
        ("f2", "phi_f1"): "f2^phi(f1)",
        ("f3", "phi_f1"): "iii",
        ("h", "phi_f1"): "iv",
        ("g", "phi_h"): "v",
    }
    return [pairs.get((f, g), "other")]


@dataclass
class HnnVerification:
    report: GsbReport
    cases: Dict[str, int]
    classified: List[Tuple[List[str], CompositionReport]]

    @property
    def ok(self) -> bool:
        return self.report.ok


def verify_gsb(p: HnnPresentation, max_degree: Optional[int] = None) -> HnnVerification:
    report = is_gsb(p.system, max_degree)
    cases = {c: 0 for c in CASES}
    classified = []
    for comp in report.compositions:
        labels = classify(p, comp)
        for c in labels:
            cases[c] += 1
        classified.append((labels, comp))
        if not comp.trivial:
            log.warning(
                "composition %s/%s at %s leaves %s",
                comp.f_label, comp.g_label, p.alphabet.format_word(comp.w), comp.residue,
            )
    return HnnVerification(report, cases, classified)


def normal_basis(p: HnnPresentation, max_degree: int) -> List[Tree]:
    return irr_basis(p.system, max_degree)


def forbidden_words(p: HnnPresentation) -> List[Word]:
    """Forbidden subwords from the basis data alone, without looking at the rules."""
    b = p.basis
    t, tdot = p.letter(STABLE), p.letter(STABLE, dotted=True)
    x1 = b.x1
    out: List[Word] = [(p.letter(x),) for x in b.x0]
    out += [(p.letter(x), p.letter(y)) for x, y in product(x1, x1) if p.letter(x) > p.letter(y)]
    out += [(p.letter(x, True), p.letter(y)) for x, y in product(b.names, x1)]
    a1 = [a for a in b.a_letters if a not in b.a0]
    out += [(t, p.letter(a)) for a in a1]
    out += [(tdot, p.letter(a)) for a in a1]
    out += [(p.letter(a, True), t) for a in b.a_letters]
    return out


def forbidden_basis(p: HnnPresentation, max_degree: int) -> List[Tree]:
    forbidden = forbidden_words(p)
    return [
        standard_bracketing(w)
        for w in enumerate_alsw(p.alphabet, max_degree)
        if not any(contains(w, s) for s in forbidden)
    ]


def normal_form_counts(p: HnnPresentation, max_degree: int) -> Dict[int, Tuple[int, int]]:
    """Per degree: (normal words, rank oracle)."""
    return dimension_check(p.system, max_degree)


@dataclass
class EmbeddingReport:
    missing_letters: List[str] = field(default_factory=list)
    failing_pairs: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.missing_letters and not self.failing_pairs


def check_embedding(p: HnnPresentation) -> EmbeddingReport:
    """Dotted basis letters are normal and products of ``L`` are respected."""
    b = p.basis
    full = p.alphabet
    out = EmbeddingReport()
    leads = {r.lead for r in p.system.rules}
    for name in b.names:
        if (p.letter(name, True),) in leads:
            out.missing_letters.append(name + "'")
    n = len(b.names)
    for i, j in product(range(n), repeat=2):
        x, y = b.names[i], b.names[j]
        mu = Polynomial.zero(full)
        for k in range(n):
            if b.table.c[i, j, k]:
                mu = mu + Polynomial.letter(full, p.letter(b.names[k], True)).scale(b.table.c[i, j, k])
        rel = bracket(Polynomial.letter(full, p.letter(x, True)), Polynomial.letter(full, p.letter(y))) - mu
        if reduce(rel, p.system):
            out.failing_pairs.append((x, y))
    return out
