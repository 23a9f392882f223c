from fractions import Fraction
from pathlib import Path

import pytest

from leibniz_gsb.errors import InvalidInputError, MalformedRelationError
from leibniz_gsb.freealg import bracket
from leibniz_gsb.parser import parse_presentation, to_table
from leibniz_gsb.replication import (
    DASHV,
    VDASH,
    DiNode,
    DoubledAlphabet,
    averaged_dialgebra,
    di_product,
    dilie_basis,
    dilie_basis_rank,
    hat_algebra,
    ideal_transfer_check,
    is_averaging,
    phi,
    replicate_system,
    translate_relation,
    v_membership,
)
from leibniz_gsb.tables import zeros
from leibniz_gsb.words import Alphabet

DATA = Path(__file__).resolve().parents[1] / "data" / "presentations"

XY = DoubledAlphabet.of(Alphabet.from_names(["x", "y"]))


def table(name):
    return to_table(parse_presentation((DATA / name).read_text()))


def diagonal(n, c):
    m = zeros(n, n)
    for i in range(n):
        m[i, i] = Fraction(c)
    return m


def test_doubled_order():
    assert XY.full.order_text() == "x' > y' > x > y"
    assert XY.dot(XY.base.rank("y")) == XY.full.rank("y'")
    assert XY.undot(XY.full.rank("x'")) == XY.full.rank("x")


def test_phi_forgets_dots():
    f = bracket(XY.letter("x", dotted=True), XY.letter("y"))
    assert phi(f, XY) == bracket(XY.letter("x"), XY.letter("y"))
    assert phi(f, XY, to_base=True).alphabet == XY.base


def test_di_products_dot_the_selected_side():
    x, y = XY.letter("x", dotted=True), XY.letter("y", dotted=True)
    assert di_product(DASHV, x, y, XY) == bracket(x, XY.letter("y"))
    assert di_product(VDASH, x, y, XY) == bracket(XY.letter("x"), y)
    with pytest.raises(ValueError):
        di_product(",", x, y, XY)


def test_translate_relation():
    got = translate_relation(DiNode(DASHV, DiNode(VDASH, "x", "y"), "x"), XY)
    x, y = XY.letter("x"), XY.letter("y")
    assert got == bracket(bracket(x, XY.letter("y", dotted=True)), x)
    assert v_membership(got, XY)
    assert not v_membership(bracket(x, y), XY)
    with pytest.raises(MalformedRelationError):
        translate_relation(DiNode(",", "x", "y"), XY)


def test_replicate_system_adds_phi_images():
    rel = translate_relation(DiNode(DASHV, "x", "y"), XY)
    system = replicate_system([rel], XY, labels=["s"])
    assert [r.label for r in system] == ["s", "phi(s)"]
    assert system.rules[1].poly == phi(rel, XY).monic()
    with pytest.raises(InvalidInputError):
        replicate_system([bracket(XY.letter("x"), XY.letter("y"))], XY)


def test_dilie_basis_is_free():
    trees = dilie_basis(XY.base, 3)
    assert len(trees) == 2 + 4 + 8
    assert trees[0] == XY.full.rank("x'")
    assert dilie_basis_rank(XY.base, 3) == (14, 14)
    with pytest.raises(ValueError):
        dilie_basis(XY.base, 0)


def test_ideal_transfer_ranks_agree():
    rel = translate_relation(DiNode(DASHV, "x", "y"), XY)
    for degree, (lie, di, both) in ideal_transfer_check([rel], XY, 3).items():
        assert lie == di == both, degree


def test_ideal_transfer_needs_dotted_degree_one():
    rel = bracket(XY.letter("x", dotted=True), XY.letter("y", dotted=True))
    with pytest.raises(InvalidInputError):
        ideal_transfer_check([rel], XY, 3)


def test_scalar_operator_is_averaging():
    lie2 = table("lie2.pres")
    t = diagonal(2, 2)
    assert is_averaging(t, lie2)
    di = averaged_dialgebra(lie2, t)
    a, b = lie2.index("a"), lie2.index("b")
    assert list(di.dashv[a, b]) == [0, 2]
    assert list(di.vdash[a, b]) == [0, 2]


def test_central_operator_is_averaging():
    heis = table("heisenberg.pres")
    t = diagonal(3, 1)
    t[heis.index("x"), heis.index("z")] = Fraction(5)
    assert is_averaging(t, heis)


def test_projection_is_not_averaging():
    lie2 = table("lie2.pres")
    t = zeros(2, 2)
    t[lie2.index("b"), lie2.index("b")] = Fraction(1)
    assert not is_averaging(t, lie2)
    with pytest.raises(InvalidInputError):
        averaged_dialgebra(lie2, t)
    with pytest.raises(ValueError):
        is_averaging(zeros(3, 3), lie2)


@pytest.mark.parametrize("name", ["dim2.pres", "hemisemidirect.pres", "heisenberg.pres"])
def test_hat_algebra_is_lie(name):
    t = table(name)
    hat = hat_algebra(t)
    assert hat.is_lie()
    assert hat.names[-t.dim:] == t.names


def test_hat_algebra_quotients_by_squares():
    hat = hat_algebra(table("dim2.pres"))
    assert hat.names == ("x1~", "x1", "x2")
    assert list(hat.c[0, 1]) == [0, 0, -1]


def test_hat_algebra_rejects_non_leibniz_tables():
    with pytest.raises(InvalidInputError):
        hat_algebra(table("dim2.pres").perturbed(0, 0, 0))

