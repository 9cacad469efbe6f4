"""Axiom validation for fusion category presentations.

Violations are collected into a :class:`ValidationReport` rather than
raised, so corrupted fixtures remain loadable and the first offending
instance can be named precisely.  The pentagon is checked honestly: the
two rebracketing routes from ``((ab)c)d`` to ``a(b(cd))`` are driven
through the same move engine that the rest of the package uses, and
their matrices are compared entry by entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .fusion import FusionCategoryData
from .trees import move_path_matrix


@dataclass(frozen=True)
class Finding:
    code: str
    instance: object
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


@dataclass
class ValidationReport:
    category: str
    findings: List[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def add(self, code: str, instance, message: str) -> None:
        self.findings.append(Finding(code, instance, message))

    def first(self, code: str) -> Optional[Finding]:
        for f in self.findings:
            if f.code == code:
                return f
        return None

    def __str__(self) -> str:
        if self.ok:
            return f"{self.category}: ok"
        lines = [f"{self.category}: {len(self.findings)} violation(s)"]
        lines.extend("  " + str(f) for f in self.findings)
        return "\n".join(lines)


def _admissible_f_keys(cat: FusionCategoryData):
    n = cat.label_count
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if cat.unit in (a, b, c):
                    continue
                for d in range(n):
                    for e in range(n):
                        nab = cat.n(a, b, e)
                        ned = cat.n(e, c, d)
                        if not nab or not ned:
                            continue
                        for f in range(n):
                            nbc = cat.n(b, c, f)
                            naf = cat.n(a, f, d)
                            if not nbc or not naf:
                                continue
                            for al in range(nab):
                                for be in range(ned):
                                    for ga in range(nbc):
                                        for de in range(naf):
                                            yield (a, b, c, d, e, f, al, be, ga, de)


def _key_is_admissible(cat: FusionCategoryData, key) -> bool:
    a, b, c, d, e, f, al, be, ga, de = key
    return (
        cat.n(a, b, e) > al
        and cat.n(e, c, d) > be
        and cat.n(b, c, f) > ga
        and cat.n(a, f, d) > de
    )


# Pentagon routes: the two-move side is the canonical comb path of
# (((0,1),2),3); the three-move side rotates inside the left child first.
_SHAPE_LLLL = (((0, 1), 2), 3)
_PENTAGON_SHORT = (((), "assoc"), ((), "assoc"))
_PENTAGON_LONG = (((0,), "assoc"), ((), "assoc"), ((1,), "assoc"))


def validate(cat: FusionCategoryData, include_dimension_checks: bool = True) -> ValidationReport:
    """Check every axiom instance and report each violation found."""
    report = ValidationReport(cat.name)
    _check_unit_and_duality(cat, report)
    _check_f_support(cat, report)
    _check_pentagon(cat, report)
    _check_pivotal(cat, report)
    if include_dimension_checks and report.ok:
        _check_dimensions(cat, report)
    return report


def _check_unit_and_duality(cat: FusionCategoryData, report: ValidationReport) -> None:
    names = cat.labels
    unit = cat.unit
    if cat.dual[unit] != unit:
        report.add("duality", unit, "dual of the unit is not the unit")
    for a in range(cat.label_count):
        if cat.dual[cat.dual[a]] != a:
            report.add("duality", a, f"dual map is not an involution at {names[a]}")
        for b in range(cat.label_count):
            want = 1 if a == b else 0
            if cat.n(unit, a, b) != want:
                report.add(
                    "unit-law", (unit, a, b),
                    f"N({names[unit]},{names[a]};{names[b]}) = {cat.n(unit, a, b)}, expected {want}",
                )
            if cat.n(a, unit, b) != want:
                report.add(
                    "unit-law", (a, unit, b),
                    f"N({names[a]},{names[unit]};{names[b]}) = {cat.n(a, unit, b)}, expected {want}",
                )
            want_dual = 1 if b == cat.dual[a] else 0
            if cat.n(a, b, unit) != want_dual:
                report.add(
                    "duality", (a, b),
                    f"N({names[a]},{names[b]};{names[unit]}) = {cat.n(a, b, unit)}, expected {want_dual}",
                )


def _check_f_support(cat: FusionCategoryData, report: ValidationReport) -> None:
    names = cat.labels
    admissible = set(_admissible_f_keys(cat))
    for key in sorted(admissible):
        if key not in cat.F:
            report.add(
                "f-missing", key,
                "no F entry for admissible key (" + ",".join(names[x] for x in key[:6]) + ")",
            )
    for key in sorted(cat.F):
        a, b, c = key[0], key[1], key[2]
        if cat.unit in (a, b, c):
            gauge = cat.field.one if cat._unit_leg_match(
                a, b, c, (key[4], key[6], key[7]), (key[5], key[8], key[9])
            ) else cat.field.zero
            if cat.F[key] != gauge:
                report.add(
                    "triangle", key,
                    "unit-leg F entry disagrees with the fixed gauge at ("
                    + ",".join(names[x] for x in key[:6]) + ")",
                )
        elif key not in admissible:
            report.add(
                "f-extraneous", key,
                "F entry for inadmissible key (" + ",".join(names[x] for x in key[:6]) + ")",
            )


def _check_pentagon(cat: FusionCategoryData, report: ValidationReport) -> None:
    if report.first("f-missing") is not None:
        return
    names = cat.labels
    n = cat.label_count
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    leaves = (a, b, c, d)
                    for root in range(n):
                        try:
                            short, _ = move_path_matrix(
                                cat, leaves, root, _SHAPE_LLLL, _PENTAGON_SHORT
                            )
                            long, _ = move_path_matrix(
                                cat, leaves, root, _SHAPE_LLLL, _PENTAGON_LONG
                            )
                        except ValueError as exc:
                            report.add(
                                "f-singular", leaves + (root,),
                                f"rebracketing failed at ({','.join(names[x] for x in leaves)}): {exc}",
                            )
                            continue
                        if short.rows == 0 and short.cols == 0:
                            continue
                        if short != long:
                            report.add(
                                "pentagon", leaves + (root,),
                                "pentagon violated on leaves ("
                                + ",".join(names[x] for x in leaves)
                                + f") at root {names[root]}",
                            )


def _check_pivotal(cat: FusionCategoryData, report: ValidationReport) -> None:
    names = cat.labels
    if cat.pivotal[cat.unit] != cat.field.one:
        report.add("pivotal", cat.unit, "pivotal coefficient of the unit is not 1")
    for a in range(cat.label_count):
        if cat.pivotal[a].is_zero():
            report.add("pivotal", a, f"pivotal coefficient of {names[a]} is zero")
    for (a, b, c), k in sorted(cat.N.items()):
        if k and cat.pivotal[a] * cat.pivotal[b] != cat.pivotal[c]:
            report.add(
                "pivotal", (a, b, c),
                f"pivotal coefficients not monoidal on ({names[a]},{names[b]};{names[c]})",
            )


def _check_dimensions(cat: FusionCategoryData, report: ValidationReport) -> None:
    names = cat.labels
    try:
        qdim = cat.qdim
    except Exception as exc:  # noqa: BLE001 - report, never crash, on broken data
        report.add("qdim", None, f"loop evaluation failed: {exc}")
        return
    for a in range(cat.label_count):
        if qdim[a].is_zero():
            report.add("qdim", a, f"quantum dimension of {names[a]} vanishes")
    for a in range(cat.label_count):
        for b in range(cat.label_count):
            total = cat.field.zero
            for c in range(cat.label_count):
                k = cat.n(a, b, c)
                if k:
                    total = total + qdim[c] * cat.field.from_rational(k)
            if total != qdim[a] * qdim[b]:
                report.add(
                    "qdim", (a, b),
                    f"dimensions not multiplicative on {names[a]} x {names[b]}",
                )
    if cat.spherical:
        for a in range(cat.label_count):
            if qdim[a] != qdim[cat.dual[a]]:
                report.add(
                    "spherical", a,
                    f"declared spherical but dim {names[a]} != dim {names[cat.dual[a]]}",
                )
