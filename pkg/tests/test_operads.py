from pathlib import Path

import pytest

from leibniz_gsb.errors import InvalidInputError
from leibniz_gsb.operads import (
    MU,
    MU12,
    SWAP13,
    OperadMonomial,
    PermBasisElement,
    check_dilie_identities,
    check_perm_compositions,
    derive_leibniz_product,
    dimension_table,
    hadamard_algebra,
    jacobiator_check,
    monomial_of,
    operad_dimension,
    perm_act,
    perm_check_identities,
    perm_compose,
    perm_oracle_index,
    printed_index,
    right_zero_perm_table,
    table_mismatches,
    transposition,
)
from leibniz_gsb.parser import parse_presentation, to_table
from leibniz_gsb.replication import averaged_dialgebra
from leibniz_gsb.tables import DiTable, zeros

DATA = Path(__file__).resolve().parents[1] / "data" / "presentations"


def table(name):
    return to_table(parse_presentation((DATA / name).read_text()))


def e(i, n):
    return PermBasisElement(n, i)


def test_monomial_table_is_consistent():
    assert table_mismatches() == []
    assert str(monomial_of(OperadMonomial(SWAP13, MU12, MU12))) == "[x1,[x2,x3]]"


def test_jacobiator_vanishes():
    assert jacobiator_check()
    assert not jacobiator_check([OperadMonomial((), MU, MU)] * 3)


def test_unknown_monomials_are_rejected():
    with pytest.raises(KeyError):
        OperadMonomial((1, 2), MU, MU)
    with pytest.raises(KeyError):
        OperadMonomial((), "nu", MU)


def test_perm_composition_examples():
    assert perm_compose(e(1, 2), [e(1, 1), e(2, 2)]) == e(1, 3)
    assert perm_compose(e(2, 2), [e(1, 2), e(1, 1)]) == e(3, 3)
    assert perm_oracle_index(e(2, 2), [e(1, 2), e(1, 1)]) == e(3, 3)
    # the m1 + .. + m_(n-1) + j_i reading only agrees when the last slot is selected
    assert printed_index(e(2, 2), [e(1, 2), e(1, 1)]) == 3
    assert printed_index(e(1, 2), [e(1, 2), e(1, 1)]) == 3
    with pytest.raises(ValueError):
        perm_compose(e(1, 2), [e(1, 1)])


def test_perm_compositions_against_oracle():
    check = check_perm_compositions(3)
    assert check.mismatches == []
    assert check.checked > 0
    assert check.printed_formula_disagreements > 0


def test_perm_action():
    assert perm_act(transposition(1, 2, 2), e(1, 2)) == e(2, 2)
    assert perm_act(transposition(1, 3, 3), e(2, 3)) == e(2, 3)
    with pytest.raises(ValueError):
        perm_act(transposition(1, 2, 3), e(1, 2))
    with pytest.raises(ValueError):
        e(3, 2)


def test_dimensions_up_to_arity_three():
    assert dimension_table(3) == {"lie": [1, 1, 2], "perm": [1, 2, 3], "dilie": [1, 2, 6]}
    assert operad_dimension("di-Lie", 2) == 2
    with pytest.raises(KeyError):
        operad_dimension("ass", 2)
    with pytest.raises(ValueError):
        operad_dimension("lie", 5)


def test_right_zero_perm_table():
    perm = right_zero_perm_table(3)
    assert perm.names == ("p1", "p2", "p3")
    assert perm_check_identities(perm).ok
    assert not perm_check_identities(table("lie2.pres")).ok


@pytest.mark.parametrize("name", ["lie2.pres", "heisenberg.pres"])
def test_hadamard_product_is_dilie(name):
    lie = table(name)
    di = hadamard_algebra(lie, 2)
    assert di.dim == 2 * lie.dim
    assert check_dilie_identities(di).ok


def test_hadamard_needs_a_lie_table():
    with pytest.raises(InvalidInputError):
        hadamard_algebra(table("dim2.pres"), 2)


def test_averaged_dialgebra_is_dilie():
    lie2 = table("lie2.pres")
    t = zeros(2, 2)
    t[0, 0] = t[1, 1] = 3
    assert check_dilie_identities(averaged_dialgebra(lie2, t))


def test_leibniz_table_gives_dilie_identities():
    assert check_dilie_identities(DiTable.from_leibniz(table("hemisemidirect.pres"))).ok
    broken = DiTable.from_leibniz(table("dim2.pres").perturbed(0, 0, 0))
    assert not check_dilie_identities(broken).ok


def test_derive_leibniz_product():
    first = derive_leibniz_product(1)
    assert first.ok
    assert first.lhs == "[x -| y]"
    assert first.rhs == "x -| y - y |- x"
    second = derive_leibniz_product(2)
    assert second.ok
    assert second.rhs == "x |- y - y -| x"
    flat = derive_leibniz_product(1, commutative=True)
    assert (flat.lhs, flat.rhs) == ("0", "0")
    with pytest.raises(ValueError):
        derive_leibniz_product(3)


def test_derive_leibniz_product_follows_the_swap_action():
    first = derive_leibniz_product(1)
    assert first.terms == {("x", "-|", "y"): 1, ("y", "|-", "x"): -1}
    assert first.steps[-1] == "= xy (x) e1^(2) - (xy (x) e2^(2))^(12)"


def test_derive_leibniz_product_rejects_a_wrong_slot():
    fixed = derive_leibniz_product(1, act=lambda sigma, e: e)
    assert not fixed.ok
    assert fixed.rhs == "x -| y - y -| x"


def test_derive_leibniz_product_rejects_a_wrong_sign():
    plus = derive_leibniz_product(2, bracket=(((1, 2), 1), ((2, 1), 1)))
    assert not plus.ok
    assert plus.rhs == "x |- y + y -| x"


@pytest.mark.parametrize("e,args", [
    (PermBasisElement(2, 1), [PermBasisElement(2, 2), PermBasisElement(1, 1)]),
    (PermBasisElement(3, 2), [PermBasisElement(1, 1), PermBasisElement(2, 1), PermBasisElement(1, 1)]),
    (PermBasisElement(2, 2), [PermBasisElement(3, 1), PermBasisElement(1, 1)]),
])
def test_oracle_evaluates_the_composite_operation(e, args):
    assert perm_oracle_index(e, args) == perm_compose(e, args)
