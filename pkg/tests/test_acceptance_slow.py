from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from leibniz_gsb.freealg import from_lyndon_basis
from leibniz_gsb.gsb import RewriteSystem, complete, is_gsb, membership_cross_check, reduce
from leibniz_gsb.hnn import (
    ANTI_DERIVATION,
    DERIVATION,
    DerivationSpec,
    SubalgebraSpec,
    build_presentation,
    check_compatibility,
    check_derivation,
    check_embedding,
    forbidden_basis,
    normal_basis,
    normal_form_counts,
    verify_gsb,
)
from leibniz_gsb.operads import check_dilie_identities, dimension_table
from leibniz_gsb.parser import parse_presentation, to_maps, to_subalgebra, to_table
from leibniz_gsb.replication import averaged_dialgebra, dilie_basis_rank, is_averaging
from leibniz_gsb.tables import StructureTable, unit, vector, zeros
from leibniz_gsb.words import Alphabet, enumerate_alsw, standard_bracketing

DATA = Path(__file__).resolve().parents[1] / "data" / "presentations"
HNN_INPUTS = ["dim2.pres", "lie2.pres", "heisenberg.pres", "hemisemidirect.pres"]
AB = Alphabet.from_names(["a", "b"])


@pytest.mark.slow
@pytest.mark.parametrize("name", HNN_INPUTS)
def test_hnn_normal_forms_up_to_degree_four(name):
    f = parse_presentation((DATA / name).read_text())
    d, dp = to_maps(f)
    p = build_presentation(to_table(f), to_subalgebra(f), d, dp)
    assert verify_gsb(p).ok
    assert check_embedding(p).ok
    assert normal_basis(p, 4) == forbidden_basis(p, 4)
    for degree, (words, oracle) in normal_form_counts(p, 4).items():
        assert words == oracle, degree


@pytest.mark.slow
def test_three_letter_dilie_basis():
    count, rank = dilie_basis_rank(Alphabet.from_names(["x", "y", "z"]), 4)
    assert count == rank == 3 + 9 + 27 + 81


@pytest.mark.slow
def test_operad_dimensions_at_arity_four():
    assert dimension_table(4) == {"lie": [1, 1, 2, 6], "perm": [1, 2, 3, 4], "dilie": [1, 2, 6, 24]}




# -- random rewriting systems ----------------------------------------------------------------

TREES = {d: [standard_bracketing(w) for w in enumerate_alsw(AB, 3) if len(w) == d] for d in (2, 3)}

relation = st.sampled_from((2, 3, 3, 3)).flatmap(
    lambda d: st.lists(st.integers(min_value=-3, max_value=3), min_size=len(TREES[d]), max_size=len(TREES[d])).map(
        lambda coeffs: from_lyndon_basis(AB, zip(coeffs, TREES[d]))
    )
)


@pytest.mark.slow
@settings(max_examples=20, deadline=None)
@given(st.lists(relation, min_size=2, max_size=3), st.integers(min_value=0, max_value=2**16))
def test_random_two_letter_systems_complete(relations, seed):
    assume(all(relations))
    system = RewriteSystem(AB, relations)
    done = complete(system, 5)
    assert done.same_ideal
    assert all(not reduce(r.poly, done.system) for r in system)
    assert is_gsb(done.system, 5).ok
    check = membership_cross_check(done.system, 5, samples=100, seed=seed)
    assert check.ok, check.disagreements[:3]


# -- random averaging operators --------------------------------------------------------------


def lie_table(names, brackets):
    entries = {}
    for (i, j), image in brackets.items():
        v = vector(image)
        entries[(i, j)], entries[(j, i)] = v, -v
    return StructureTable.from_entries(names, {k: list(v) for k, v in entries.items()})


def averaging_pair(family, p, s, coeffs):
    """A Lie table of dimension <= 3 and an averaging operator on it; rows are images."""
    alpha, beta, gamma = coeffs
    if family == "heisenberg":
        # sI plus a map into the centre that kills [L,L]
        table = lie_table(["x", "y", "z"], {(0, 1): [0, 0, p]})
        t = zeros(3, 3)
        for i in range(3):
            t[i, i] = Fraction(s)
        t[0, 2], t[1, 2] = Fraction(alpha), Fraction(beta)
    elif family == "lie2":
        # nilpotent, into the derived algebra
        table = lie_table(["a", "b"], {(0, 1): [0, p]})
        t = zeros(2, 2)
        t[0, 1] = Fraction(alpha)
    elif family == "lie2+centre":
        table = lie_table(["a", "b", "c"], {(0, 1): [0, p, 0]})
        t = zeros(3, 3)
        for i in range(3):
            t[i, i] = Fraction(s)
        t[0, 2] = Fraction(alpha)
        t[2, 2] += Fraction(gamma)
    elif family == "solvable3":
        table = lie_table(["a", "b", "c"], {(0, 1): [0, 1, 0], (0, 2): [0, 0, p]})
        t = zeros(3, 3)
        t[0, 1], t[0, 2] = Fraction(alpha), Fraction(beta)
    else:
        n = 1 + (abs(p) % 3)
        table = StructureTable([f"e{k}" for k in range(n)])
        t = zeros(n, n)
        for i in range(n):
            for j in range(n):
                t[i, j] = Fraction(coeffs[(i + 2 * j) % 3] + (s if i == j else 0))
    return table, t


@pytest.mark.slow
@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from(("heisenberg", "lie2", "lie2+centre", "solvable3", "abelian")),
    st.integers(min_value=-3, max_value=3).filter(bool),
    st.integers(min_value=-3, max_value=3),
    st.lists(st.integers(min_value=-3, max_value=3), min_size=3, max_size=3),
)
def test_random_averaging_operators(family, p, s, coeffs):
    table, t = averaging_pair(family, p, s, coeffs)
    scalar = all(t[i, j] == (t[0, 0] if i == j else 0) for i in range(table.dim) for j in range(table.dim))
    assume(not scalar)
    assert table.is_lie()
    assert is_averaging(t, table)
    assert check_dilie_identities(averaged_dialgebra(table, t)).ok


# -- random HNN inputs -----------------------------------------------------------------------


def _pad(v, dim):
    return vector(list(v) + [0] * (dim - len(v)))


def _scaled(spec, scale, dim):
    return DerivationSpec(spec.kind, [(_pad(a, dim), _pad(img, dim) * scale) for a, img in spec.values], spec.name)


def random_hnn_input(name, scale, central):
    """A shipped input with both maps scaled, optionally plus a central letter in ``A``."""
    f = parse_presentation((DATA / name).read_text())
    table, a = to_table(f), to_subalgebra(f)
    d, dp = to_maps(f)
    if central is None:
        n = table.dim
        return table, a, _scaled(d, scale, n), _scaled(dp, scale, n)
    n = table.dim + 1
    c = zeros(n, n, n)
    c[: n - 1, : n - 1, : n - 1] = table.c
    bigger = StructureTable(list(table.names) + ["w"], c)
    gens = [_pad(g, n) for g in a.generators] + [unit(n, n - 1)]
    w = unit(n, n - 1)
    d2 = _scaled(d, scale, n)
    d2.values.append((w, w * Fraction(central)))
    dp2 = _scaled(dp, scale, n)
    dp2.values.append((w, w * Fraction(-central)))
    return bigger, SubalgebraSpec(gens), d2, dp2


@pytest.mark.slow
@settings(max_examples=20, deadline=None)
@given(
    st.sampled_from(HNN_INPUTS),
    st.integers(min_value=-3, max_value=3).filter(bool),
    st.one_of(st.none(), st.integers(min_value=-2, max_value=2)),
)
def test_random_valid_hnn_inputs_give_gsbs(name, scale, central):
    table, a, d, dp = random_hnn_input(name, Fraction(scale), central)
    assert table.dim <= 4
    assert d.kind == DERIVATION and dp.kind == ANTI_DERIVATION
    assert check_derivation(table, a, d) and check_derivation(table, a, dp)
    assert check_compatibility(table, a, d, dp)
    p = build_presentation(table, a, d, dp)
    assert verify_gsb(p).ok
    assert check_embedding(p).ok
