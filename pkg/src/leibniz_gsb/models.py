from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

# A vector over the declared basis: letter name -> rational written "p/q".
Coords = Dict[str, str]


def _canonical_coords(v: Dict[str, Any]) -> Coords:
    out: Coords = {}
    for name, c in v.items():
        try:
            q = Fraction(str(c))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"coefficient {c!r} of {name!r} is not a rational number") from None
        if q:
            out[name] = str(q)
    return out


class TableEntry(BaseModel):
    left: str
    right: str
    value: Coords = Field(default_factory=dict)

    @field_validator("value", mode="before")
    @classmethod
    def _rationals(cls, v: Dict[str, Any]) -> Coords:
        return _canonical_coords(v)


class MapValue(BaseModel):
    argument: Coords
    image: Coords = Field(default_factory=dict)

    @field_validator("argument", "image", mode="before")
    @classmethod
    def _rationals(cls, v: Dict[str, Any]) -> Coords:
        return _canonical_coords(v)


class MapSection(BaseModel):
    name: str
    values: List[MapValue] = Field(default_factory=list)


class PresentationFile(BaseModel):
    alphabet: List[str]  # greatest first
    kind: Literal["lie", "leibniz"] = "leibniz"
    table: List[TableEntry] = Field(default_factory=list)
    subalgebra: Optional[List[Coords]] = None
    derivation: Optional[MapSection] = None
    antiderivation: Optional[MapSection] = None
    relations: List[str] = Field(default_factory=list)

    @field_validator("subalgebra", mode="before")
    @classmethod
    def _generators(cls, v: Optional[List[Dict[str, Any]]]) -> Optional[List[Coords]]:
        return None if v is None else [_canonical_coords(g) for g in v]


class ValidationIssue(BaseModel):
    path: str
    message: str


class ValidationReport(BaseModel):
    ok: bool
    issues: List[ValidationIssue] = Field(default_factory=list)


class Report(BaseModel):
    command: str
    inputs_digest: str
    letter_order: str = ""
    results: Dict[str, Any] = Field(default_factory=dict)
    warnings: List[str] = Field(default_factory=list)
