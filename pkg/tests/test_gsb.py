from pathlib import Path

import pytest

from leibniz_gsb.errors import CompositionShapeError, NotALSWError
from leibniz_gsb.freealg import Polynomial, bracket
from leibniz_gsb.gsb import (
    THREADS_ENV,
    RewriteSystem,
    Rule,
    certificate_holds,
    complete,
    dimension_check,
    inclusion_composition,
    intersection_composition,
    irr_basis,
    is_gsb,
    member,
    membership_cross_check,
    reduce,
    reduction_certificate,
    worker_threads,
)
from leibniz_gsb.parser import letters, parse_presentation, to_relations, to_table
from leibniz_gsb.tables import multiplication_system

DATA = Path(__file__).resolve().parents[1] / "data" / "presentations"


def load(name):
    return parse_presentation((DATA / name).read_text())


def free_abb():
    f = load("free_abb.pres")
    return RewriteSystem(letters(f), to_relations(f))


def heisenberg():
    return multiplication_system(to_table(load("heisenberg.pres")))


def test_single_relation_has_no_compositions():
    system = free_abb()
    report = is_gsb(system)
    assert report.ok
    assert report.compositions == []
    assert irr_basis(system, 3) == [0, 1, (1, 0), (1, (1, 0))]


def test_irr_basis_matches_rank_oracle():
    for system in (free_abb(), heisenberg()):
        for degree, (irr, quotient) in dimension_check(system, 4).items():
            assert irr == quotient, degree


def test_lie_table_gives_a_gsb():
    system = heisenberg()
    assert [r.label for r in system] == ["[x,y]", "[x,z]", "[y,z]"]
    report = is_gsb(system)
    assert report.ok
    assert len(report.compositions) == 1
    assert report.compositions[0].w == (2, 1, 0)


def test_reduce_applies_the_table():
    system = heisenberg()
    ab = system.alphabet
    xy = Polynomial(ab, {ab.parse_word("xy"): 1, ab.parse_word("yx"): -1})
    trace = []
    assert reduce(xy, system, trace) == Polynomial.letter(ab, ab.rank("z"))
    assert [s.rule for s in trace] == ["[x,y]"]
    assert member(xy - Polynomial.letter(ab, ab.rank("z")), system)


def test_jacobi_failure_is_a_nontrivial_composition():
    system = multiplication_system(to_table(load("not_jacobi.pres")))
    report = is_gsb(system)
    assert not report.ok
    assert [c.w for c in report.failures] == [(2, 1, 0)]

    done = complete(system, 3)
    assert sorted(r.lead for r in done.system) == [(1, 0), (2,)]
    assert is_gsb(done.system, 3).ok
    assert not done.incomplete_above_cap
    assert done.same_ideal
    assert done.unreduced == []
    assert all(not reduce(r.poly, done.system) for r in system)


def test_complete_rejects_a_low_cap():
    with pytest.raises(ValueError):
        complete(free_abb(), 2)


def test_composition_shapes_are_checked():
    system = heisenberg()
    assert intersection_composition(system, 0, 2, (2, 1, 0)).trivial
    with pytest.raises(CompositionShapeError):
        intersection_composition(system, 0, 2, (2, 1))
    with pytest.raises(CompositionShapeError):
        inclusion_composition(system, 0, 2, (2, 1))


def test_rules_must_be_monic_with_alsw_leads():
    ab = free_abb().alphabet
    with pytest.raises(ValueError):
        Rule(Polynomial(ab, {(1, 0): 2}), "twice")
    with pytest.raises(NotALSWError):
        Rule(Polynomial(ab, {(0, 1): 1}), "ba")


def test_membership_agrees_with_linear_algebra():
    check = membership_cross_check(free_abb(), 4, samples=10, seed=3)
    assert check.ok
    assert check.agreed > 0


def test_worker_threads_from_env(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert worker_threads() == 1
    monkeypatch.setenv(THREADS_ENV, "3")
    assert worker_threads() == 3
    assert is_gsb(heisenberg()).ok
    for bad in ("0", "many"):
        monkeypatch.setenv(THREADS_ENV, bad)
        with pytest.raises(ValueError):
            worker_threads()


def test_reduction_trace_is_a_certificate():
    system = heisenberg()
    ab = system.alphabet
    x, y, z = (Polynomial.letter(ab, ab.rank(n)) for n in "xyz")
    f = bracket(bracket(x, y), x) + bracket(x, z) * 3 + bracket(x, y) - bracket(y, z) + y
    trace = []
    nf = reduce(f, system, trace)
    assert nf == z + y
    assert len(trace) >= 3
    assert reduction_certificate(system, trace) == f - nf
    assert certificate_holds(f, nf, system, trace)
    assert not certificate_holds(f, nf + x, system, trace)


def test_composition_traces_are_certificates():
    system = multiplication_system(to_table(load("not_jacobi.pres")))
    for c in is_gsb(system).compositions:
        assert certificate_holds(c.value, c.residue, system, c.trace)


def test_rules_are_looked_up_by_label():
    system = heisenberg()
    assert system.rule("[x,z]").lead == (2, 0)
    with pytest.raises(KeyError):
        system.rule("[z,x]")
