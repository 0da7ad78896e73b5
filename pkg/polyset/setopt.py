"""
Polyhedral convex set optimization: minimize F(x) + C over x in R^n w.r.t. set inclusion.

The graph of F is stored as a base polyhedron in R^{n+q} (H- or V-form) plus fibre generators
in R^q, i.e. gr F = base + {0} x (cone(y_rays) + span(y_lines)). Standard form and the
affine-hull lift only ever add fibre generators, so a V-form graph never needs a facet
enumeration in R^{n+q}.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property

from polyset.config import get_settings
from polyset.core import ONE, Mat, Vec, dot, is_zero, neg, primitive_normalize, vec, zeros
from polyset.exceptions import (
    CertificateError,
    DimensionMismatchError,
    IterationLimitError,
    NotInDomainError,
    NotInUpperImageError,
)
from polyset.lp import LPBuilder, LPOutcome, LPProblem, LPStatus, Sense, solve_lp
from polyset.polyhedron import (
    HRep,
    LinearImage,
    NormalSystem,
    VRep,
    affine_hull,
    affine_hull_ineq,
    contains_direction,
    contains_point,
    dimension,
    h_to_v,
    image_vrep,
    is_empty,
    is_subset,
    min_outer_normals,
    minkowski_sum,
    project_drop,
    recession_cone,
    recession_cone_v,
    remove_redundancy,
    v_to_h,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrderCone:
    """Polyhedral convex cone C in R^q given by generators."""

    q: int
    rays: tuple[Vec, ...] = ()
    lines: tuple[Vec, ...] = ()

    def __post_init__(self) -> None:
        v = VRep.cone(self.q, self.rays, self.lines)
        object.__setattr__(self, "rays", v.rays)
        object.__setattr__(self, "lines", v.lines)

    @classmethod
    def nonnegative(cls, q: int) -> OrderCone:
        return cls(q=q, rays=tuple(tuple(ONE if j == i else 0 for j in range(q)) for i in range(q)))

    @classmethod
    def zero(cls, q: int) -> OrderCone:
        return cls(q=q)

    @classmethod
    def from_vrep(cls, v: VRep) -> OrderCone:
        return cls(q=v.dim, rays=v.rays, lines=v.lines)

    @cached_property
    def vrep(self) -> VRep:
        return VRep.cone(self.q, self.rays, self.lines)

    @cached_property
    def hrep(self) -> HRep:
        return v_to_h(self.vrep)

    @property
    def is_full_dimensional(self) -> bool:
        return dimension(self.vrep) == self.q

    @property
    def is_zero(self) -> bool:
        return not self.rays and not self.lines

    def contains(self, y: Sequence[Fraction | int]) -> bool:
        return contains_direction(self.vrep, y)

    def polar_generators(self) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
        """Rays and lines of C* = {w : w.y <= 0 for all y in C}."""
        return self.hrep.A, self.hrep.E


@dataclass(frozen=True)
class PolyMap:
    """Set-valued map F: R^n => R^q with polyhedral graph."""

    n: int
    q: int
    base: HRep | VRep
    y_rays: tuple[Vec, ...] = ()
    y_lines: tuple[Vec, ...] = ()

    def __post_init__(self) -> None:
        if self.base.dim != self.n + self.q:
            raise DimensionMismatchError(
                f"graph lives in R^{self.base.dim}, expected R^{self.n + self.q}"
            )
        fibre = VRep.cone(self.q, self.y_rays, self.y_lines)
        object.__setattr__(self, "y_rays", fibre.rays)
        object.__setattr__(self, "y_lines", fibre.lines)

    def with_fibres(self, rays: Sequence[Vec] = (), lines: Sequence[Vec] = ()) -> PolyMap:
        return PolyMap(
            n=self.n,
            q=self.q,
            base=self.base,
            y_rays=self.y_rays + tuple(rays),
            y_lines=self.y_lines + tuple(lines),
        )

    def _lift(self, g: Vec) -> Vec:
        return zeros(self.n) + tuple(g)

    @cached_property
    def _graph_vrep(self) -> VRep:
        v = h_to_v(self.base) if isinstance(self.base, HRep) else self.base
        if v.is_empty:
            return v
        return VRep(
            dim=v.dim,
            points=v.points,
            rays=v.rays + tuple(self._lift(r) for r in self.y_rays),
            lines=v.lines + tuple(self._lift(ln) for ln in self.y_lines),
        )

    @cached_property
    def _graph_hrep(self) -> HRep:
        if isinstance(self.base, HRep) and not self.y_rays and not self.y_lines:
            return self.base
        return v_to_h(self.graph_vrep())

    def graph_vrep(self) -> VRep:
        return self._graph_vrep

    def graph_hrep(self) -> HRep:
        return self._graph_hrep

    def is_empty(self) -> bool:
        if isinstance(self.base, HRep):
            return is_empty(self.base)
        return self.base.is_empty


@dataclass(frozen=True)
class SetOptProblem:
    F: PolyMap
    C: OrderCone
    is_standard_form: bool = False

    def __post_init__(self) -> None:
        if self.F.q != self.C.q:
            raise DimensionMismatchError(f"map into R^{self.F.q} with a cone in R^{self.C.q}")

    @property
    def n(self) -> int:
        return self.F.n

    @property
    def q(self) -> int:
        return self.F.q


class SolutionStatus(str, Enum):
    INFEASIBLE = "infeasible"
    NO_SOLUTION = "no_solution"
    SOLVED = "solved"


@dataclass(frozen=True)
class MinimizerResult:
    """A minimizer with everything needed to re-certify it and report how it was found."""

    x: Vec
    target: Vec
    normals: NormalSystem
    lp_solves: int
    updates: int
    inner_updates: int = 0
    inner_lp_solves: int = 0
    lift: Mat = ()


@dataclass(frozen=True)
class StabilizedMap:
    F: PolyMap
    x: Vec
    inner_updates: int
    lift: Mat
    lp_solves: int


@dataclass(frozen=True)
class UpperImage:
    vrep: VRep
    # rays and line directions of the upper image that do not belong to C
    directions: tuple[Vec, ...] = ()

    @property
    def points(self) -> tuple[Vec, ...]:
        return self.vrep.points


@dataclass(frozen=True)
class NaturalCone:
    K: VRep

    def is_subset_of(self, C: OrderCone) -> bool:
        return is_subset(self.K, C.vrep)


@dataclass(frozen=True)
class TargetStats:
    target: Vec
    kind: str  # "point" | "direction" | "existence"
    lp_solves: int
    updates: int
    inner_updates: int
    found: bool

    @classmethod
    def from_result(cls, target: Vec, kind: str, result: MinimizerResult | None) -> TargetStats:
        if result is None:
            return cls(target, kind, 0, 0, 0, False)
        return cls(
            target=target,
            kind=kind,
            lp_solves=result.lp_solves,
            updates=result.updates,
            inner_updates=result.inner_updates,
            found=True,
        )


@dataclass(frozen=True)
class SolveStats:
    targets: tuple[TargetStats, ...] = ()
    wall_time: float = 0.0


@dataclass(frozen=True)
class Solution:
    status: SolutionStatus
    Sbar: tuple[Vec, ...] = ()
    Shat: tuple[Vec, ...] = ()
    point_certificates: tuple[MinimizerResult, ...] = ()
    direction_certificates: tuple[MinimizerResult, ...] = ()
    upper_image: UpperImage | None = None
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def bounded(self) -> bool:
        """A solved problem without minimizing directions is bounded."""
        return self.status is SolutionStatus.SOLVED and not self.Shat


# ---------------------------------------------------------------------------
# Values and LP blocks
# ---------------------------------------------------------------------------


def _fibre_generators(F: PolyMap, C: OrderCone | None) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
    if C is None:
        return F.y_rays, F.y_lines
    return F.y_rays + C.rays, F.y_lines + C.lines


def value_set(F: PolyMap, x: Sequence[Fraction | int], C: OrderCone | None = None) -> VRep:
    """V-representation of F(x) (+ C); empty when x is outside dom F."""
    x = vec(x)
    if len(x) != F.n:
        raise DimensionMismatchError(f"point of dimension {len(x)} for a map on R^{F.n}")
    n, q = F.n, F.q
    base = F.base
    if isinstance(base, HRep):
        A = tuple(row[n:] for row in base.A)
        b = tuple(bi - dot(row[:n], x) for row, bi in zip(base.A, base.b))
        E = tuple(row[n:] for row in base.E)
        f = tuple(fi - dot(row[:n], x) for row, fi in zip(base.E, base.f))
        v = h_to_v(HRep(dim=q, A=A, b=b, E=E, f=f))
    else:
        lp = LPBuilder()
        mu = lp.add_vars(len(base.points))
        rho = lp.add_vars(len(base.rays))
        nu = lp.add_vars(len(base.lines), free=True)
        groups = ((mu, base.points), (rho, base.rays), (nu, base.lines))
        for i in range(n):
            coefs = {c: g[i] for cols, gens in groups for c, g in zip(cols, gens)}
            lp.add_row(coefs, Sense.EQ, x[i])
        lp.add_row({c: 1 for c in mu}, Sense.EQ, 1)
        image = [
            [(c, g[n + i]) for cols, gens in groups for c, g in zip(cols, gens) if g[n + i]]
            for i in range(q)
        ]
        v = image_vrep(LinearImage.from_builder(lp, image))
    if v.is_empty:
        return v
    rays, lines = _fibre_generators(F, C)
    return remove_redundancy(
        VRep(dim=q, points=v.points, rays=v.rays + rays, lines=v.lines + lines)
    )


def _add_value_block(
    lp: LPBuilder, F: PolyMap, C: OrderCone | None, xcols: Sequence[int]
) -> list[dict[int, Fraction]]:
    """Add variables/rows encoding y in F(x) + C; returns y as sparse column combinations."""
    n, q = F.n, F.q
    y: list[dict[int, Fraction]] = [{} for _ in range(q)]
    base = F.base
    if isinstance(base, HRep):
        y0 = lp.add_vars(q, free=True)
        for i, c in enumerate(y0):
            y[i][c] = ONE
        cols = list(xcols) + y0
        for a, bi in zip(base.A, base.b):
            lp.add_row(dict(zip(cols, a)), Sense.LE, bi)
        for e, fi in zip(base.E, base.f):
            lp.add_row(dict(zip(cols, e)), Sense.EQ, fi)
    else:
        mu = lp.add_vars(len(base.points))
        rho = lp.add_vars(len(base.rays))
        nu = lp.add_vars(len(base.lines), free=True)
        groups = ((mu, base.points), (rho, base.rays), (nu, base.lines))
        for i in range(n):
            coefs: dict[int, Fraction | int] = {xcols[i]: 1}
            for cols, gens in groups:
                for c, g in zip(cols, gens):
                    if g[i]:
                        coefs[c] = -g[i]
            lp.add_row(coefs, Sense.EQ, 0)
        lp.add_row({c: 1 for c in mu}, Sense.EQ, 1)
        for cols, gens in groups:
            for c, g in zip(cols, gens):
                for i in range(q):
                    if g[n + i]:
                        y[i][c] = g[n + i]
    rays, lines = _fibre_generators(F, C)
    for free, gens in ((False, rays), (True, lines)):
        for g in gens:
            c = lp.add_var(free=free)
            for i in range(q):
                if g[i]:
                    y[i][c] = g[i]
    return y


@dataclass(frozen=True)
class _InclusionLP:
    problem: LPProblem
    xcols: tuple[int, ...]
    y: tuple[dict[int, Fraction], ...]

    def decode(self, out: LPOutcome) -> tuple[Vec, Vec]:
        z = out.point
        x = tuple(z[c] for c in self.xcols)
        y = tuple(sum((a * z[c] for c, a in row.items()), Fraction(0)) for row in self.y)
        return x, y


def _inclusion_lp(
    F: PolyMap,
    C: OrderCone | None,
    w: Sequence[Fraction | int] | None,
    targets: Sequence[Vec],
) -> _InclusionLP:
    """max w.y s.t. y in F(x)+C and every target in F(x)+C (shared x)."""
    lp = LPBuilder()
    xcols = lp.add_vars(F.n, free=True)
    y: list[dict[int, Fraction]] = []
    if w is not None:
        y = _add_value_block(lp, F, C, xcols)
        for wi, row in zip(w, y):
            if wi:
                for c, a in row.items():
                    lp.add_objective(c, wi * a)
    for t in targets:
        expr = _add_value_block(lp, F, C, xcols)
        for row, ti in zip(expr, t):
            lp.add_row(row, Sense.EQ, ti)
    return _InclusionLP(problem=lp.build(), xcols=tuple(xcols), y=tuple(y))


def build_inclusion_lp(
    F: PolyMap, C: OrderCone, w: Sequence[Fraction | int], x_bar: Sequence[Fraction | int]
) -> LPProblem:
    """LP(F, w, x_bar): max w.y s.t. y in F(x)+C, F(x_bar)+C contained in F(x)+C."""
    value = value_set(F, x_bar, C)
    if value.is_empty:
        raise NotInDomainError(f"{tuple(map(str, x_bar))} is not in the domain of F")
    return _inclusion_lp(F, C, w, value.points).problem


def build_homogeneous_lp(F: PolyMap, C: OrderCone, w: Sequence[Fraction | int]) -> LPProblem:
    """The homogeneous LP: max w.y s.t. y in G(x)+C, 0 in G(x)+C with G the recession map."""
    return _inclusion_lp(recession_map(F), C, w, [zeros(F.q)]).problem


def _choose_preimage(F: PolyMap, C: OrderCone, y_bar: Vec) -> Vec:
    inc = _inclusion_lp(F, C, None, [y_bar])
    out = solve_lp(inc.problem)
    if out.status is LPStatus.INFEASIBLE:
        raise NotInUpperImageError(f"{tuple(map(str, y_bar))} is not in the upper image")
    return tuple(out.point[c] for c in inc.xcols)


# ---------------------------------------------------------------------------
# Minimizers
# ---------------------------------------------------------------------------


def stabilize_affine_hull(
    F: PolyMap,
    C: OrderCone,
    y_bar: Sequence[Fraction | int],
    *,
    x_start: Vec | None = None,
) -> StabilizedMap | None:
    """
    Move x until no value F(x)+C containing F(x_bar)+C has a larger dimension, then lift F by
    the orthogonal complement of aff(F(x_bar)+C). None when some LP has no optimal solution.
    """
    y_bar = vec(y_bar)
    x = x_start if x_start is not None else _choose_preimage(F, C, y_bar)
    cap = get_settings().max_minimizer_iterations
    updates = 0
    lp_solves = 0
    while True:
        value = value_set(F, x, C)
        aff = affine_hull(value)
        normals = affine_hull_ineq(aff.E, aff.f)
        moved = False
        for w in normals.normals:
            inc = _inclusion_lp(F, C, w, value.points)
            out = solve_lp(inc.problem)
            lp_solves += 1
            if not out.is_optimal:
                return None
            x_star, y_star = inc.decode(out)
            if any(dot(e, y_star) != fi for e, fi in zip(aff.E, aff.f)):
                x = x_star
                updates += 1
                moved = True
                logger.debug("affine hull grew beyond dimension %d", aff.dim)
                break
        if not moved:
            break
        if lp_solves > cap:
            raise IterationLimitError(f"affine-hull stabilization exceeded {cap} LP solves")
    return StabilizedMap(
        F=F.with_fibres(lines=aff.E) if aff.E else F,
        x=x,
        inner_updates=updates,
        lift=aff.E,
        lp_solves=lp_solves,
    )


def compute_minimizer(
    F: PolyMap, C: OrderCone, y_bar: Sequence[Fraction | int]
) -> MinimizerResult | None:
    """
    A minimizer x with y_bar in F(x)+C, or None when some LP on the way has no optimal
    solution (the problem then has no solution).

    Raises NotInUpperImageError when y_bar is not in the upper image.
    """
    y_bar = vec(y_bar)
    if len(y_bar) != F.q:
        raise DimensionMismatchError(f"target of dimension {len(y_bar)} for a map into R^{F.q}")
    cap = get_settings().max_minimizer_iterations
    x = _choose_preimage(F, C, y_bar)
    inner_updates = 0
    inner_lp_solves = 0
    lift: Mat = ()
    if not C.is_full_dimensional:
        stabilized = stabilize_affine_hull(F, C, y_bar, x_start=x)
        if stabilized is None:
            return None
        F, x = stabilized.F, stabilized.x
        inner_updates = stabilized.inner_updates
        inner_lp_solves = stabilized.lp_solves
        lift = stabilized.lift

    value = value_set(F, x, C)
    normals = min_outer_normals(value)
    used: set[tuple[int, ...]] = set()
    lp_solves = 0
    updates = 0
    while True:
        pending = sorted(w for w in normals.normals if w not in used)
        if not pending:
            break
        w = pending[0]
        used.add(w)
        inc = _inclusion_lp(F, C, w, value.points)
        out = solve_lp(inc.problem)
        lp_solves += 1
        if not out.is_optimal:
            logger.debug("LP for normal %s is %s", w, out.status.value)
            return None
        x_star, y_star = inc.decode(out)
        if not normals.contains(y_star):
            x = x_star
            value = value_set(F, x, C)
            normals = min_outer_normals(value)
            updates += 1
        if lp_solves > cap:
            raise IterationLimitError(f"minimizer computation exceeded {cap} LP solves")
    return MinimizerResult(
        x=x,
        target=y_bar,
        normals=normals,
        lp_solves=lp_solves,
        updates=updates,
        inner_updates=inner_updates,
        inner_lp_solves=inner_lp_solves,
        lift=lift,
    )


def certify_minimizer(F: PolyMap, C: OrderCone, result: MinimizerResult) -> bool:
    """Re-solve LP(F, w, x) for every final normal w; each optimum must stay in F(x)+C."""
    lifted = F.with_fibres(lines=result.lift) if result.lift else F
    value = value_set(lifted, result.x, C)
    if value.is_empty or not contains_point(value, result.target):
        return False
    for w in result.normals.normals:
        inc = _inclusion_lp(lifted, C, w, value.points)
        out = solve_lp(inc.problem)
        if not out.is_optimal:
            return False
        _, y_star = inc.decode(out)
        if not result.normals.contains(y_star):
            return False
    return True


# ---------------------------------------------------------------------------
# Problem transformations
# ---------------------------------------------------------------------------


def recession_map(F: PolyMap) -> PolyMap:
    """G with gr G = 0+ gr F."""
    if isinstance(F.base, HRep):
        base: HRep | VRep = recession_cone(F.base)
    else:
        base = recession_cone_v(F.base)
    return PolyMap(n=F.n, q=F.q, base=base, y_rays=F.y_rays, y_lines=F.y_lines)


def standard_form(p: SetOptProblem) -> SetOptProblem:
    """F_std(x) = F(x) + C, C_std = C + G(0)."""
    if p.is_standard_form:
        return p
    G0 = value_set(recession_map(p.F), zeros(p.n))
    C_std = remove_redundancy(minkowski_sum(p.C.vrep, G0))
    return SetOptProblem(
        F=p.F.with_fibres(p.C.rays, p.C.lines),
        C=OrderCone.from_vrep(C_std),
        is_standard_form=True,
    )


def upper_image(p: SetOptProblem) -> UpperImage:
    """P = C + union of all values, with the directions of P that are not in C."""
    graph = p.F.graph_vrep()
    proj = project_drop(graph, range(p.n, p.n + p.q))
    if proj.is_empty:
        return UpperImage(vrep=proj)
    P = remove_redundancy(
        VRep(
            dim=p.q,
            points=proj.points,
            rays=proj.rays + p.C.rays,
            lines=proj.lines + p.C.lines,
        )
    )
    directions = [r for r in P.rays if not p.C.contains(r)]
    for ln in P.lines:
        directions += [d for d in (ln, neg(ln)) if not p.C.contains(d)]
    logger.info(
        "upper image: %d points, %d rays, %d lines (%d directions outside C)",
        len(P.points),
        len(P.rays),
        len(P.lines),
        len(directions),
    )
    return UpperImage(vrep=P, directions=tuple(directions))


def natural_cone(F: PolyMap, C: OrderCone) -> NaturalCone:
    """K = {y : y in G_C(x), 0 in G_C(x) for some x} with G_C the recession map of F + C."""
    G = recession_map(F)
    lp = LPBuilder()
    xcols = lp.add_vars(G.n, free=True)
    y = _add_value_block(lp, G, C, xcols)
    zero_block = _add_value_block(lp, G, C, xcols)
    for row in zero_block:
        lp.add_row(row, Sense.EQ, 0)
    image = [list(row.items()) for row in y]
    return NaturalCone(K=image_vrep(LinearImage.from_builder(lp, image)))


def homogeneous_bounded(F: PolyMap, C: OrderCone) -> bool:
    """Whether the homogeneous LP is bounded for every w in C* (checked on its generators)."""
    rays, lines = C.polar_generators()
    for w in (*rays, *lines, *(neg(ln) for ln in lines)):
        if solve_lp(build_homogeneous_lp(F, C, w)).status is not LPStatus.OPTIMAL:
            return False
    return True


def check_existence(p: SetOptProblem) -> bool:
    """Feasible and the origin is a minimizer of the homogeneous problem."""
    if p.F.is_empty():
        return False
    std = standard_form(p)
    return compute_minimizer(recession_map(std.F), std.C, zeros(std.q)) is not None


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------


def _minimizer_task(args: tuple[PolyMap, OrderCone, Vec]) -> MinimizerResult | None:
    F, C, y = args
    return compute_minimizer(F, C, y)


def _run_minimizers(
    F: PolyMap, C: OrderCone, targets: Sequence[Vec], jobs: int
) -> list[MinimizerResult | None]:
    if jobs > 1 and len(targets) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(targets))) as pool:
            return list(pool.map(_minimizer_task, [(F, C, t) for t in targets]))
    return [compute_minimizer(F, C, t) for t in targets]


def _certify_all(F: PolyMap, C: OrderCone, results: Sequence[MinimizerResult]) -> None:
    for r in results:
        if not certify_minimizer(F, C, r):
            raise CertificateError(f"minimizer {tuple(map(str, r.x))} failed certification")


def _dedupe(
    results: Sequence[MinimizerResult], normalize: bool
) -> tuple[list[Vec], list[MinimizerResult]]:
    seen: set[Vec] = set()
    elements: list[Vec] = []
    kept: list[MinimizerResult] = []
    for r in results:
        x = tuple(Fraction(a) for a in primitive_normalize(r.x)) if normalize else r.x
        if x in seen:
            continue
        seen.add(x)
        elements.append(x)
        kept.append(r)
    return elements, kept


def solve_bounded(p: SetOptProblem) -> Solution:
    """One minimizer per vertex of the upper image; refuses unbounded problems."""
    started = time.perf_counter()
    if p.F.is_empty():
        return Solution(status=SolutionStatus.INFEASIBLE, upper_image=UpperImage(VRep.empty(p.q)))
    std = standard_form(p)
    ui = upper_image(std)
    if ui.directions:
        raise ValueError("problem is unbounded; use solve()")
    results = _run_minimizers(std.F, std.C, ui.points, get_settings().jobs)
    stats = tuple(TargetStats.from_result(y, "point", r) for y, r in zip(ui.points, results))
    elapsed = time.perf_counter() - started
    if any(r is None for r in results):
        return Solution(
            status=SolutionStatus.NO_SOLUTION,
            upper_image=ui,
            stats=SolveStats(targets=stats, wall_time=elapsed),
        )
    Sbar, kept = _dedupe(results, normalize=False)
    return Solution(
        status=SolutionStatus.SOLVED,
        Sbar=tuple(Sbar),
        point_certificates=tuple(kept),
        upper_image=ui,
        stats=SolveStats(targets=stats, wall_time=elapsed),
    )


def solve(p: SetOptProblem, *, jobs: int | None = None) -> Solution:
    """Solution (S_bar, S_hat) of a not necessarily bounded problem, or the reason there is none."""
    settings = get_settings()
    jobs = jobs or settings.jobs
    started = time.perf_counter()
    if p.F.is_empty():
        logger.info("graph of F is empty: infeasible")
        return Solution(
            status=SolutionStatus.INFEASIBLE,
            upper_image=UpperImage(VRep.empty(p.q)),
            stats=SolveStats(wall_time=time.perf_counter() - started),
        )
    std = standard_form(p)
    ui = upper_image(std)
    G = recession_map(std.F)
    existence = compute_minimizer(G, std.C, zeros(std.q))
    stats = [TargetStats.from_result(zeros(std.q), "existence", existence)]
    if existence is None:
        logger.info("origin is not a minimizer of the homogeneous problem: no solution")
        return Solution(
            status=SolutionStatus.NO_SOLUTION,
            upper_image=ui,
            stats=SolveStats(targets=tuple(stats), wall_time=time.perf_counter() - started),
        )

    point_results = _run_minimizers(std.F, std.C, ui.points, jobs)
    direction_results = _run_minimizers(G, std.C, ui.directions, jobs)
    stats += [TargetStats.from_result(y, "point", r) for y, r in zip(ui.points, point_results)]
    stats += [
        TargetStats.from_result(y, "direction", r)
        for y, r in zip(ui.directions, direction_results)
    ]
    for kind, targets, results in (
        ("point", ui.points, point_results),
        ("direction", ui.directions, direction_results),
    ):
        for y, r in zip(targets, results):
            # existence guarantees a minimizer for every vertex and extreme direction
            if r is None:
                raise CertificateError(
                    f"no minimizer for {kind} {tuple(map(str, y))} although a solution exists"
                )
            logger.info("%s %s -> %s (%d LPs)", kind, y, r.x, r.lp_solves)
    points = [r for r in point_results if r is not None]
    directions = [r for r in direction_results if r is not None and not is_zero(r.x)]
    if settings.certify_minimizers:
        _certify_all(std.F, std.C, points)
        _certify_all(G, std.C, directions)
    Sbar, kept_points = _dedupe(points, normalize=False)
    Shat, kept_directions = _dedupe(directions, normalize=True)
    elapsed = time.perf_counter() - started
    logger.info("solved: |Sbar|=%d |Shat|=%d in %.2fs", len(Sbar), len(Shat), elapsed)
    return Solution(
        status=SolutionStatus.SOLVED,
        Sbar=tuple(Sbar),
        Shat=tuple(Shat),
        point_certificates=tuple(kept_points),
        direction_certificates=tuple(kept_directions),
        upper_image=ui,
        stats=SolveStats(targets=tuple(stats), wall_time=elapsed),
    )


def infimizer_set(p: SetOptProblem, Sbar: Sequence[Vec], Shat: Sequence[Vec]) -> VRep:
    """C + conv of the values at Sbar + cone of the recession values at Shat."""
    points: list[Vec] = []
    rays: list[Vec] = list(p.C.rays)
    lines: list[Vec] = list(p.C.lines)
    for x in Sbar:
        v = value_set(p.F, x)
        if v.is_empty:
            raise NotInDomainError(f"{tuple(map(str, x))} is not in the domain of F")
        points += v.points
        rays += v.rays
        lines += v.lines
    if Shat:
        G = recession_map(p.F)
        for x in Shat:
            v = value_set(G, x)
            if v.is_empty:
                raise NotInDomainError(f"{tuple(map(str, x))} is not in the domain of G")
            rays += [pt for pt in v.points if not is_zero(pt)]
            rays += v.rays
            lines += v.lines
    return VRep(dim=p.q, points=tuple(points), rays=tuple(rays), lines=tuple(lines))


def verify_infimizer(p: SetOptProblem, solution: Solution) -> bool:
    """Exact check of P = C + conv F(Sbar) + cone G(Shat) for a solved problem."""
    if solution.status is not SolutionStatus.SOLVED or not solution.Sbar:
        return False
    P = upper_image(p).vrep
    rhs = infimizer_set(p, solution.Sbar, solution.Shat)
    return is_subset(P, rhs) and is_subset(rhs, P)
