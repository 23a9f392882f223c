from __future__ import annotations

from typing import List

from .errors import InvalidInputError
from .hnn import ANTI_DERIVATION, DERIVATION, STABLE, compatibility_defects, derivation_defects, subalgebra_defects
from .models import PresentationFile, ValidationIssue, ValidationReport
from .parser import to_map, to_subalgebra, to_table
from .words import DOT


def _triple(names, t) -> str:
    return ",".join(names[k] for k in t)


def validate(f: PresentationFile, stable_letter: bool = False) -> ValidationReport:
    """Leibniz (or Lie), subalgebra, derivation, anti-derivation and compatibility checks.

    Each failing pair or triple becomes one issue; later checks are skipped when the data
    they depend on is already broken.
    """
    issues: List[ValidationIssue] = []

    dotted = [n for n in f.alphabet if n.endswith(DOT)]
    if dotted and (f.table or f.subalgebra):
        issues.append(ValidationIssue(path="alphabet", message=f"dotted letters {dotted} cannot carry a table"))
    if stable_letter and STABLE in f.alphabet:
        issues.append(ValidationIssue(path="alphabet", message=f"letter {STABLE!r} is reserved for the stable letter"))
    if issues:
        return ValidationReport(ok=False, issues=issues)

    table = to_table(f)
    names = table.names
    for t in table.leibniz_defects():
        issues.append(ValidationIssue(path=f"table.leibniz[{_triple(names, t)}]", message="Leibniz identity fails"))
    if f.kind == "lie":
        for i in range(table.dim):
            for j in range(i, table.dim):
                if any(table.c[i, j] + table.c[j, i]):
                    issues.append(ValidationIssue(
                        path=f"table.antisymmetry[{names[i]},{names[j]}]", message="[x,y] != -[y,x]"
                    ))
        for t in table.jacobi_defects():
            issues.append(ValidationIssue(path=f"table.jacobi[{_triple(names, t)}]", message="Jacobi identity fails"))
    if issues or f.subalgebra is None:
        return ValidationReport(ok=not issues, issues=issues)

    a = to_subalgebra(f)
    try:
        for i, j in subalgebra_defects(table, a):
            issues.append(ValidationIssue(
                path=f"subalgebra[{i},{j}]", message=f"product of generators {i} and {j} leaves the subalgebra"
            ))
    except InvalidInputError as e:
        issues.append(ValidationIssue(path="subalgebra", message=str(e)))
    if issues:
        return ValidationReport(ok=False, issues=issues)

    maps = []
    for section in ("derivation", "antiderivation"):
        spec = to_map(f, DERIVATION if section == "derivation" else ANTI_DERIVATION)
        maps.append(spec)
        law = "d[x,y] = [dx,y] + [x,dy]" if section == "derivation" else "d'[x,y] = [d'x,y] - [d'y,x]"
        try:
            for i, j in derivation_defects(table, a, spec):
                issues.append(ValidationIssue(
                    path=f"{section} {spec.name}[{i},{j}]", message=f"{law} fails on generators {i} and {j}"
                ))
        except InvalidInputError as e:
            issues.append(ValidationIssue(path=f"{section} {spec.name}", message=str(e)))
    if issues:
        return ValidationReport(ok=False, issues=issues)

    for message in compatibility_defects(table, a, maps[0], maps[1]):
        issues.append(ValidationIssue(path="compatibility", message=message))
    return ValidationReport(ok=not issues, issues=issues)
