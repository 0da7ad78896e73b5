"""Solution reports (text / JSON) and plot-data emission."""

from __future__ import annotations

import csv
import logging
from collections.abc import Sequence
from fractions import Fraction
from functools import cmp_to_key
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field

from polyset.config import get_settings
from polyset.core import Vec, format_decimal, format_rational
from polyset.exceptions import UnsupportedDimensionError
from polyset.polyhedron import VRep
from polyset.setopt import (
    MinimizerResult,
    SetOptProblem,
    Solution,
    SolutionStatus,
    TargetStats,
    recession_map,
    upper_image,
    value_set,
)

logger = logging.getLogger(__name__)

Rational = str  # "p" or "p/q"


def _exact(v: Sequence[Fraction]) -> list[Rational]:
    return [format_rational(a) for a in v]


def _decimal(v: Sequence[Fraction], places: int) -> list[str]:
    return [format_decimal(a, places) for a in v]


class GeneratorSet(BaseModel):
    points: list[list[Rational]] = Field(default_factory=list)
    rays: list[list[Rational]] = Field(default_factory=list)
    lines: list[list[Rational]] = Field(default_factory=list)

    @classmethod
    def from_vrep(cls, v: VRep) -> GeneratorSet:
        return cls(
            points=[_exact(p) for p in v.points],
            rays=[_exact(r) for r in v.rays],
            lines=[_exact(ln) for ln in v.lines],
        )


class ElementReport(BaseModel):
    """One member of S_bar or S_hat together with its minimizer certificate summary."""

    kind: Literal["point", "direction"]
    exact: list[Rational]
    decimal: list[str]
    target: list[Rational]
    normals: int
    lp_solves: int
    updates: int
    inner_updates: int

    @classmethod
    def build(
        cls, kind: str, element: Vec, result: MinimizerResult, places: int
    ) -> ElementReport:
        return cls(
            kind=kind,
            exact=_exact(element),
            decimal=_decimal(element, places),
            target=_exact(result.target),
            normals=len(result.normals),
            lp_solves=result.lp_solves,
            updates=result.updates,
            inner_updates=result.inner_updates,
        )


class TargetRow(BaseModel):
    kind: str
    target: list[Rational]
    lp_solves: int
    updates: int
    inner_updates: int
    found: bool

    @classmethod
    def from_stats(cls, t: TargetStats) -> TargetRow:
        return cls(
            kind=t.kind,
            target=_exact(t.target),
            lp_solves=t.lp_solves,
            updates=t.updates,
            inner_updates=t.inner_updates,
            found=t.found,
        )


class StatsReport(BaseModel):
    targets: list[TargetRow] = Field(default_factory=list)
    wall_time: float = 0.0


class SolutionReport(BaseModel):
    status: SolutionStatus
    bounded: bool
    Sbar: list[list[Rational]] = Field(default_factory=list)
    Shat: list[list[Rational]] = Field(default_factory=list)
    elements: list[ElementReport] = Field(default_factory=list)
    upper_image: GeneratorSet = Field(default_factory=GeneratorSet)
    stats: StatsReport = Field(default_factory=StatsReport)

    @classmethod
    def from_solution(cls, solution: Solution, places: int | None = None) -> SolutionReport:
        if places is None:
            places = get_settings().decimal_places
        elements = [
            ElementReport.build("point", x, r, places)
            for x, r in zip(solution.Sbar, solution.point_certificates)
        ]
        elements += [
            ElementReport.build("direction", x, r, places)
            for x, r in zip(solution.Shat, solution.direction_certificates)
        ]
        ui = solution.upper_image
        return cls(
            status=solution.status,
            bounded=solution.bounded,
            Sbar=[_exact(x) for x in solution.Sbar],
            Shat=[_exact(x) for x in solution.Shat],
            elements=elements,
            upper_image=GeneratorSet.from_vrep(ui.vrep) if ui else GeneratorSet(),
            stats=StatsReport(
                targets=[TargetRow.from_stats(t) for t in solution.stats.targets],
                wall_time=solution.stats.wall_time,
            ),
        )


def _tuple(v: Sequence[str]) -> str:
    return "(" + ", ".join(v) + ")"


def _text_report(r: SolutionReport) -> str:
    out = [f"status: {r.status.value}"]
    if r.status is SolutionStatus.SOLVED:
        out.append(f"bounded: {'yes' if r.bounded else 'no'}")
    for kind, title in (("point", "Sbar"), ("direction", "Shat")):
        members = [e for e in r.elements if e.kind == kind]
        out.append(f"{title} ({len(members)}):")
        for e in members:
            out.append(f"  {_tuple(e.exact)}")
            out.append(f"    ~ {_tuple(e.decimal)}   target {_tuple(e.target)}")
    ui = r.upper_image
    out.append(
        f"upper image: {len(ui.points)} points, {len(ui.rays)} rays, {len(ui.lines)} lines"
    )
    for label, gens in (("point", ui.points), ("ray", ui.rays), ("line", ui.lines)):
        out += [f"  {label} {_tuple(g)}" for g in gens]
    if r.stats.targets:
        out.append("statistics:")
        out.append(f"  {'kind':<10} {'target':<24} {'LPs':>6} {'updates':>8} {'inner-upd':>9}")
        for t in r.stats.targets:
            mark = "" if t.found else "  (none)"
            out.append(
                f"  {t.kind:<10} {_tuple(t.target):<24} {t.lp_solves:>6} {t.updates:>8} "
                f"{t.inner_updates:>9}{mark}"
            )
    out.append(f"wall time: {r.stats.wall_time:.2f}s")
    return "\n".join(out) + "\n"


def serialize_solution(report: SolutionReport, fmt: Literal["text", "json"] = "text") -> str:
    if fmt == "json":
        return report.model_dump_json(indent=2) + "\n"
    if fmt == "text":
        return _text_report(report)
    raise ValueError(f"unknown report format {fmt!r}")


# ---------------------------------------------------------------------------
# Plot data
# ---------------------------------------------------------------------------


def _counterclockwise(points: Sequence[Vec]) -> list[Vec]:
    """Planar points in convex position, ordered counterclockwise around their centroid."""
    if len(points) < 3:
        return list(points)
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)

    def upper(p: Vec) -> bool:
        dx, dy = p[0] - cx, p[1] - cy
        return dy > 0 or (dy == 0 and dx > 0)

    def compare(a: Vec, b: Vec) -> int:
        ua, ub = upper(a), upper(b)
        if ua != ub:
            return -1 if ua else 1
        cross = (a[0] - cx) * (b[1] - cy) - (a[1] - cy) * (b[0] - cx)
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return sorted(points, key=cmp_to_key(compare))


class PlotSet(GeneratorSet):
    name: str
    kind: str


class PlotData(BaseModel):
    q: int
    sets: list[PlotSet] = Field(default_factory=list)


def _plot_sets(problem: SetOptProblem, solution: Solution) -> list[tuple[str, str, VRep]]:
    sets = [
        (f"F(xbar{i})+C", "value", value_set(problem.F, x, problem.C))
        for i, x in enumerate(solution.Sbar, start=1)
    ]
    if solution.Shat:
        G = recession_map(problem.F)
        sets += [
            (f"G(xhat{i})+C", "recession_value", value_set(G, x, problem.C))
            for i, x in enumerate(solution.Shat, start=1)
        ]
    P = solution.upper_image.vrep if solution.upper_image else upper_image(problem).vrep
    sets.append(("P", "upper_image", P))
    sets.append(("Q", "homogeneous_upper_image", VRep.cone(P.dim, P.rays, P.lines)))
    return sets


def emit_plot_data(problem: SetOptProblem, solution: Solution, out: Path) -> list[Path]:
    """
    Write plot_data.json and plot_data.csv into `out`.

    One entry per value set F(x)+C of S_bar, per G(x)+C of S_hat, and for P and Q. Each entry
    lists its points, rays and lines; planar vertex lists are ordered counterclockwise.
    """
    q = problem.q
    if q not in (2, 3):
        raise UnsupportedDimensionError(f"plot data needs an image dimension of 2 or 3, got {q}")
    if solution.status is not SolutionStatus.SOLVED:
        raise ValueError(f"no plot data for a problem with status {solution.status.value}")
    places = get_settings().decimal_places
    out.mkdir(parents=True, exist_ok=True)

    data = PlotData(q=q)
    csv_rows: list[list[str]] = []
    for name, kind, v in _plot_sets(problem, solution):
        points = _counterclockwise(v.points) if q == 2 else list(v.points)
        data.sets.append(
            PlotSet(
                name=name,
                kind=kind,
                points=[_exact(p) for p in points],
                rays=[_exact(r) for r in v.rays],
                lines=[_exact(ln) for ln in v.lines],
            )
        )
        for label, gens in (("point", points), ("ray", v.rays), ("line", v.lines)):
            for i, g in enumerate(gens):
                csv_rows.append([name, kind, label, str(i), *_decimal(g, places)])

    json_path = out / "plot_data.json"
    json_path.write_text(data.model_dump_json(indent=2) + "\n", encoding="utf-8")
    csv_path = out / "plot_data.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["set", "kind", "generator", "index", *(f"y{j + 1}" for j in range(q))])
        writer.writerows(csv_rows)
    logger.info("plot data for %d sets written to %s", len(data.sets), out)
    return [json_path, csv_path]
