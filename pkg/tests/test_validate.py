from pathlib import Path

from leibniz_gsb.models import MapSection, MapValue, PresentationFile, TableEntry
from leibniz_gsb.parser import parse_presentation
from leibniz_gsb.validate import validate

DATA = Path(__file__).resolve().parents[1] / "data" / "presentations"


def load(name):
    return parse_presentation((DATA / name).read_text())


def paths(report):
    return [i.path for i in report.issues]


def test_shipped_inputs_are_valid():
    for name in ("dim2.pres", "lie2.pres", "heisenberg.pres", "hemisemidirect.pres"):
        report = validate(load(name), stable_letter=True)
        assert report.ok, (name, report.issues)


def test_broken_derivation_law():
    report = validate(load("heisenberg_bad_d.pres"))
    assert not report.ok
    assert "derivation d[0,1]" in paths(report)
    assert any(p.startswith("antiderivation d'[") for p in paths(report))


def test_jacobi_failure():
    report = validate(load("not_jacobi.pres"))
    assert not report.ok
    assert paths(report)[0].startswith("table.leibniz[")
    assert any(p.startswith("table.jacobi[") for p in paths(report))


def test_leibniz_failure():
    f = load("dim2.pres")
    f.table.append(TableEntry(left="x1", right="x2", value={"x1": 1}))
    report = validate(f)
    assert "table.leibniz[x1,x1,x1]" in paths(report)


def test_antisymmetry_for_lie_kind():
    f = PresentationFile(alphabet=["a", "b"], kind="lie", table=[TableEntry(left="a", right="a", value={"b": 1})])
    assert "table.antisymmetry[a,a]" in paths(validate(f))


def test_subalgebra_not_closed():
    f = load("heisenberg.pres")
    f.subalgebra = [{"x": "1"}, {"y": "1"}]
    f.derivation = f.antiderivation = None
    assert paths(validate(f)) == ["subalgebra[0,1]", "subalgebra[1,0]"]


def test_dependent_subalgebra_generators():
    f = load("lie2.pres")
    f.subalgebra = [{"b": "1"}, {"b": "2"}]
    assert paths(validate(f)) == ["subalgebra"]


def test_antiderivation_must_vanish_on_a_cap_h0():
    f = load("dim2.pres")
    f.antiderivation = MapSection(name="d'", values=[MapValue(argument={"x2": 1}, image={"x2": 1})])
    report = validate(f)
    assert paths(report) == ["compatibility"]
    assert "does not vanish" in report.issues[0].message


def test_map_outside_subalgebra():
    f = load("lie2.pres")
    f.derivation = MapSection(name="d", values=[MapValue(argument={"a": 1}, image={"b": 1})])
    assert paths(validate(f)) == ["derivation d"]


def test_alphabet_checks():
    dotted = PresentationFile(alphabet=["x'", "x"], table=[TableEntry(left="x", right="x")])
    assert paths(validate(dotted)) == ["alphabet"]
    stable = PresentationFile(alphabet=["t", "x"])
    assert validate(stable).ok
    assert paths(validate(stable, stable_letter=True)) == ["alphabet"]
