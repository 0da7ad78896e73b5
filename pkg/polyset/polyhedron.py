"""
Polyhedral calculus over exact rationals.

H-representations {z : Az <= b, Ez = f} and V-representations conv(points) + cone(rays) +
span(lines) are converted into each other by the double description method on the homogenized
cone. Membership, subset and redundancy questions are decided by LPs from `polyset.lp`.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from polyset.core import (
    ONE,
    ZERO,
    IntVec,
    Mat,
    Vec,
    dot,
    integer_rank,
    integer_scaled,
    is_zero,
    neg,
    nullspace,
    primitive_normalize,
    primitive_with_factor,
    sub,
    vec,
    zeros,
)
from polyset.exceptions import DimensionMismatchError, EmptySetError
from polyset.lp import LPBuilder, LPOutcome, LPProblem, LPStatus, Sense, solve_lp

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------


def _as_int_vec(v: Sequence[Fraction | int]) -> Vec:
    return tuple(Fraction(a) for a in primitive_normalize(v))


@dataclass(frozen=True)
class HRep:
    """{z in R^dim : A z <= b, E z = f}."""

    dim: int
    A: Mat = ()
    b: Vec = ()
    E: Mat = ()
    f: Vec = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", tuple(vec(r) for r in self.A))
        object.__setattr__(self, "b", vec(self.b))
        object.__setattr__(self, "E", tuple(vec(r) for r in self.E))
        object.__setattr__(self, "f", vec(self.f))
        if len(self.A) != len(self.b) or len(self.E) != len(self.f):
            raise DimensionMismatchError("row count differs from right-hand side count")
        for row in (*self.A, *self.E):
            if len(row) != self.dim:
                raise DimensionMismatchError(f"row of width {len(row)} in R^{self.dim}")

    @property
    def num_rows(self) -> int:
        return len(self.A) + len(self.E)

    def contains(self, z: Sequence[Fraction | int]) -> bool:
        if len(z) != self.dim:
            raise DimensionMismatchError(f"point of dimension {len(z)} in R^{self.dim}")
        return all(dot(a, z) <= bi for a, bi in zip(self.A, self.b)) and all(
            dot(e, z) == fi for e, fi in zip(self.E, self.f)
        )


@dataclass(frozen=True)
class VRep:
    """conv(points) + cone(rays) + span(lines); empty iff there are no points."""

    dim: int
    points: tuple[Vec, ...] = ()
    rays: tuple[Vec, ...] = ()
    lines: tuple[Vec, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(vec(p) for p in self.points))
        object.__setattr__(
            self, "rays", tuple(_as_int_vec(r) for r in self.rays if not is_zero(r))
        )
        object.__setattr__(
            self, "lines", tuple(_as_int_vec(r) for r in self.lines if not is_zero(r))
        )
        for g in (*self.points, *self.rays, *self.lines):
            if len(g) != self.dim:
                raise DimensionMismatchError(f"generator of dimension {len(g)} in R^{self.dim}")

    @classmethod
    def empty(cls, dim: int) -> VRep:
        return cls(dim=dim)

    @classmethod
    def cone(
        cls, dim: int, rays: Iterable[Sequence] = (), lines: Iterable[Sequence] = ()
    ) -> VRep:
        return cls(dim=dim, points=(zeros(dim),), rays=tuple(rays), lines=tuple(lines))

    @property
    def is_empty(self) -> bool:
        return not self.points

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lines


@dataclass(frozen=True)
class NormalSystem:
    """Inequalities w_i . z <= gamma_i; kind "facet" or "affine" (affine-hull pair member)."""

    normals: tuple[IntVec, ...] = ()
    rhs: tuple[Fraction, ...] = ()
    kinds: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.kinds:
            object.__setattr__(self, "kinds", ("facet",) * len(self.normals))
        if not (len(self.normals) == len(self.rhs) == len(self.kinds)):
            raise DimensionMismatchError("normals, rhs and kinds must have equal length")

    def __len__(self) -> int:
        return len(self.normals)

    def contains(self, z: Sequence[Fraction | int]) -> bool:
        return all(dot(w, z) <= g for w, g in zip(self.normals, self.rhs))

    def __add__(self, other: NormalSystem) -> NormalSystem:
        return NormalSystem(
            normals=self.normals + other.normals,
            rhs=self.rhs + other.rhs,
            kinds=self.kinds + other.kinds,
        )


@dataclass(frozen=True)
class AffineHull:
    E: Mat
    f: Vec
    dim: int


# ---------------------------------------------------------------------------
# Double description
# ---------------------------------------------------------------------------


def _idot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v) if a and b)


def _combine(a: int, u: Sequence[int], b: int, v: Sequence[int]) -> IntVec:
    """Primitive form of a*u + b*v (sign preserved)."""
    w = [a * x + b * y for x, y in zip(u, v)]
    g = gcd(*w)
    if g > 1:
        w = [x // g for x in w]
    return tuple(w)


def _cone_generators(
    ineqs: Sequence[IntVec], eqs: Sequence[IntVec], d: int
) -> tuple[list[IntVec], list[IntVec]]:
    """
    Lines and extreme rays of {z in R^d : a.z <= 0 for a in ineqs, e.z = 0 for e in eqs}.

    Rows are inserted in input order (equations first). Two rays are combined only when the
    rows active at both have rank d - (#lines) - 2.
    """
    lines: list[IntVec] = [tuple(1 if j == i else 0 for j in range(d)) for i in range(d)]
    rays: list[IntVec] = []
    masks: list[int] = []
    processed: list[IntVec] = []
    for row, is_eq in [(e, True) for e in eqs] + [(a, False) for a in ineqs]:
        if not any(row):
            continue
        k = len(processed)
        bit = 1 << k
        processed.append(row)
        line_vals = [_idot(row, ln) for ln in lines]
        piv = next((i for i, v in enumerate(line_vals) if v != 0), None)
        if piv is not None:
            pivot_line = lines.pop(piv)
            lv = line_vals.pop(piv)
            if lv > 0:
                pivot_line = tuple(-a for a in pivot_line)
                lv = -lv
            lines = [
                _combine(lv, ln, -v, pivot_line) if v else ln for ln, v in zip(lines, line_vals)
            ]
            ray_vals = [_idot(row, r) for r in rays]
            rays = [_combine(-lv, r, v, pivot_line) if v else r for r, v in zip(rays, ray_vals)]
            masks = [m | bit for m in masks]
            if not is_eq:
                rays.append(pivot_line)
                masks.append(bit - 1)
            continue

        vals = [_idot(row, r) for r in rays]
        need = d - len(lines) - 2
        new_rays: list[IntVec] = []
        new_masks: list[int] = []
        positive: list[int] = []
        negative: list[int] = []
        for i, v in enumerate(vals):
            if v == 0:
                new_rays.append(rays[i])
                new_masks.append(masks[i] | bit)
            elif v > 0:
                positive.append(i)
            else:
                negative.append(i)
                if not is_eq:
                    new_rays.append(rays[i])
                    new_masks.append(masks[i])
        for i in positive:
            for j in negative:
                common = masks[i] & masks[j]
                if common.bit_count() < need:
                    continue
                active = [processed[t] for t in range(k) if common >> t & 1]
                if integer_rank(active) != need:
                    continue
                new_rays.append(_combine(vals[i], rays[j], -vals[j], rays[i]))
                new_masks.append(common | bit)
        rays, masks = new_rays, new_masks
    return lines, rays


def _int_row(coeffs: Sequence[Fraction | int], last: Fraction | int) -> IntVec | None:
    full = [*coeffs, last]
    if is_zero(full):
        return None
    return primitive_normalize(full)


# ---------------------------------------------------------------------------
# Conversions
# ---------------------------------------------------------------------------


def h_to_v(h: HRep) -> VRep:
    """V-representation of an H-represented polyhedron (empty set: no points)."""
    d = h.dim
    ineqs: list[IntVec] = [(0,) * d + (-1,)]
    for a, bi in zip(h.A, h.b):
        row = _int_row(a, -bi)
        if row is not None:
            ineqs.append(row)
    eqs = [r for r in (_int_row(e, -fi) for e, fi in zip(h.E, h.f)) if r is not None]
    lines, rays = _cone_generators(ineqs, eqs, d + 1)
    points: list[Vec] = []
    out_rays: list[Vec] = []
    for r in rays:
        t = r[d]
        if t > 0:
            points.append(tuple(Fraction(a, t) for a in r[:d]))
        else:
            out_rays.append(tuple(Fraction(a) for a in r[:d]))
    if not points:
        return VRep.empty(d)
    return VRep(
        dim=d, points=tuple(points), rays=tuple(out_rays), lines=tuple(ln[:d] for ln in lines)
    )


def v_to_h(v: VRep) -> HRep:
    """Irredundant H-representation; full-dimensional sets get unique primitive facet rows."""
    d = v.dim
    if v.is_empty:
        return HRep(dim=d, A=(zeros(d),), b=(-ONE,))
    gens = [primitive_normalize([*p, ONE]) for p in v.points]
    gens += [primitive_normalize([*r, ZERO]) for r in v.rays]
    line_gens = [primitive_normalize([*ln, ZERO]) for ln in v.lines]
    lines, rays = _cone_generators(gens, line_gens, d + 1)
    E = [tuple(Fraction(a) for a in ln[:d]) for ln in lines]
    f = [Fraction(-ln[d]) for ln in lines]
    eq_rank = integer_rank(ln[:d] for ln in lines)
    A: list[Vec] = []
    b: list[Fraction] = []
    for r in rays:
        normal = r[:d]
        # a in the row space of E is implied by the equations
        if not any(normal) or integer_rank([*(ln[:d] for ln in lines), normal]) == eq_rank:
            continue
        A.append(tuple(Fraction(a) for a in normal))
        b.append(Fraction(-r[d]))
    return HRep(dim=d, A=tuple(A), b=tuple(b), E=tuple(E), f=tuple(f))


# ---------------------------------------------------------------------------
# Affine hulls and normal systems
# ---------------------------------------------------------------------------


def _directions(v: VRep) -> list[Vec]:
    p0 = v.points[0]
    return [sub(p, p0) for p in v.points[1:]] + list(v.rays) + list(v.lines)


def affine_hull(v: VRep) -> AffineHull:
    if v.is_empty:
        raise EmptySetError("affine hull of the empty set")
    E = tuple(tuple(Fraction(a) for a in row) for row in nullspace(_directions(v), v.dim))
    f = tuple(dot(row, v.points[0]) for row in E)
    return AffineHull(E=E, f=f, dim=v.dim - len(E))


def dimension(v: VRep) -> int:
    """Dimension of the set; -1 for the empty set."""
    return -1 if v.is_empty else affine_hull(v).dim


def affine_hull_ineq(E: Mat, f: Vec) -> NormalSystem:
    """Minimal inequality form of {Ez = f}: the rows of E plus the negated sum of all rows."""
    if not E:
        return NormalSystem()
    normals: list[IntVec] = []
    rhs: list[Fraction] = []
    for row, fi in zip(E, f):
        w, lam = primitive_with_factor(row)
        normals.append(w)
        rhs.append(lam * fi)
    total = [-sum(col) for col in zip(*E)]
    w, lam = primitive_with_factor(total)
    normals.append(w)
    rhs.append(lam * -sum(f))
    return NormalSystem(tuple(normals), tuple(rhs), ("affine",) * len(normals))


def _facet_system(h: HRep) -> NormalSystem:
    normals: list[IntVec] = []
    rhs: list[Fraction] = []
    for a, bi in zip(h.A, h.b):
        w, lam = primitive_with_factor(a)
        normals.append(w)
        rhs.append(lam * bi)
    return NormalSystem(tuple(normals), tuple(rhs))


def min_outer_normals(v: VRep) -> NormalSystem:
    """
    Minimal system of outer normals. Lower-dimensional sets are fattened by the orthogonal
    complement of their affine hull first; its facets are completed by the affine-hull
    inequalities.
    """
    aff = affine_hull(v)
    if aff.dim == v.dim:
        return _facet_system(v_to_h(v))
    fattened = VRep(dim=v.dim, points=v.points, rays=v.rays, lines=v.lines + aff.E)
    return _facet_system(v_to_h(fattened)) + affine_hull_ineq(aff.E, aff.f)


# ---------------------------------------------------------------------------
# LP-based queries
# ---------------------------------------------------------------------------


def find_point(h: HRep) -> Vec | None:
    """Some point of the set, or None when it is empty."""
    lp = LPBuilder()
    cols = lp.add_vars(h.dim, free=True)
    for a, bi in zip(h.A, h.b):
        lp.add_row(dict(zip(cols, a)), Sense.LE, bi)
    for e, fi in zip(h.E, h.f):
        lp.add_row(dict(zip(cols, e)), Sense.EQ, fi)
    out = solve_lp(lp.build())
    return out.point if out.status is not LPStatus.INFEASIBLE else None


def is_empty(h: HRep) -> bool:
    return find_point(h) is None


def recession_cone(h: HRep) -> HRep:
    if is_empty(h):
        raise EmptySetError("recession cone of the empty set")
    return HRep(dim=h.dim, A=h.A, b=zeros(len(h.A)), E=h.E, f=zeros(len(h.E)))


def recession_cone_v(v: VRep) -> VRep:
    if v.is_empty:
        raise EmptySetError("recession cone of the empty set")
    return VRep.cone(v.dim, v.rays, v.lines)


def _combination_lp(
    target: Sequence[Fraction], points: Sequence[Vec], rays: Sequence[Vec], lines: Sequence[Vec]
) -> LPProblem:
    """target = sum mu_i p_i + sum lam_j r_j + sum nu_k l_k with sum mu = 1 and mu, lam >= 0."""
    lp = LPBuilder()
    mu = lp.add_vars(len(points))
    lam = lp.add_vars(len(rays))
    nu = lp.add_vars(len(lines), free=True)
    for i, t in enumerate(target):
        coefs: dict[int, Fraction] = {}
        for cols, gens in ((mu, points), (lam, rays), (nu, lines)):
            for c, g in zip(cols, gens):
                if g[i]:
                    coefs[c] = g[i]
        lp.add_row(coefs, Sense.EQ, t)
    if points:
        lp.add_row({c: 1 for c in mu}, Sense.EQ, 1)
    return lp.build()


def _feasible(p: LPProblem) -> bool:
    return solve_lp(p).status is not LPStatus.INFEASIBLE


def contains_point(P: HRep | VRep, z: Sequence[Fraction | int]) -> bool:
    if len(z) != P.dim:
        raise DimensionMismatchError(f"point of dimension {len(z)} tested against R^{P.dim}")
    if isinstance(P, HRep):
        return P.contains(z)
    if P.is_empty:
        return False
    return _feasible(_combination_lp(vec(z), P.points, P.rays, P.lines))


def contains_direction(P: HRep | VRep, d: Sequence[Fraction | int]) -> bool:
    """d in the recession cone of P (P assumed nonempty)."""
    if len(d) != P.dim:
        raise DimensionMismatchError(f"direction of dimension {len(d)} tested against R^{P.dim}")
    if isinstance(P, HRep):
        return all(dot(a, d) <= 0 for a in P.A) and all(dot(e, d) == 0 for e in P.E)
    if is_zero(d):
        return True
    return _feasible(_combination_lp(vec(d), (), P.rays, P.lines))


def is_subset(Q: VRep, P: HRep | VRep) -> bool:
    """Exact decision of Q <= P, recession cones included."""
    if Q.is_empty:
        return True
    if isinstance(P, VRep) and P.is_empty:
        return False
    if not all(contains_point(P, p) for p in Q.points):
        return False
    # P is nonempty here, so its recession cone is defined
    rec = recession_cone_v(P) if isinstance(P, VRep) else recession_cone(P)
    directions = [*Q.rays, *Q.lines, *(neg(ln) for ln in Q.lines)]
    return all(contains_direction(rec, d) for d in directions)


def sets_equal(Q: VRep, P: VRep) -> bool:
    return is_subset(Q, P) and is_subset(P, Q)


# ---------------------------------------------------------------------------
# Reduction and combination
# ---------------------------------------------------------------------------


def _unique(items: Iterable[Vec]) -> list[Vec]:
    seen: set[Vec] = set()
    out: list[Vec] = []
    for it in items:
        if it not in seen:
            seen.add(it)
            out.append(it)
    return out


def remove_redundancy(v: VRep) -> VRep:
    """Drop every generator that the remaining ones already produce; lines become a basis."""
    if v.is_empty:
        return v
    lines: list[Vec] = []
    for ln in v.lines:
        if integer_rank(integer_scaled(x)[0] for x in [*lines, ln]) > len(lines):
            lines.append(ln)
    rays = _unique(v.rays)
    i = 0
    while i < len(rays):
        others = rays[:i] + rays[i + 1 :]
        if _feasible(_combination_lp(rays[i], (), others, lines)):
            rays.pop(i)
        else:
            i += 1
    points = _unique(v.points)
    i = 0
    while i < len(points) and len(points) > 1:
        others = points[:i] + points[i + 1 :]
        if _feasible(_combination_lp(points[i], others, rays, lines)):
            points.pop(i)
        else:
            i += 1
    return VRep(dim=v.dim, points=tuple(points), rays=tuple(rays), lines=tuple(lines))


def project_drop(v: VRep, keep: Sequence[int]) -> VRep:
    """Coordinate projection onto the indices in `keep`, in that order."""
    for i in keep:
        if not 0 <= i < v.dim:
            raise DimensionMismatchError(f"coordinate {i} outside R^{v.dim}")
    if v.is_empty:
        return VRep.empty(len(keep))

    def pick(g: Vec) -> Vec:
        return tuple(g[i] for i in keep)

    return VRep(
        dim=len(keep),
        points=tuple(_unique(pick(p) for p in v.points)),
        rays=tuple(_unique(pick(r) for r in v.rays if not is_zero(pick(r)))),
        lines=tuple(_unique(pick(ln) for ln in v.lines if not is_zero(pick(ln)))),
    )


def minkowski_sum(v1: VRep, v2: VRep) -> VRep:
    if v1.dim != v2.dim:
        raise DimensionMismatchError(f"cannot add R^{v1.dim} and R^{v2.dim}")
    if v1.is_empty or v2.is_empty:
        return VRep.empty(v1.dim)
    points = _unique(tuple(a + b for a, b in zip(p, q)) for p in v1.points for q in v2.points)
    return VRep(
        dim=v1.dim,
        points=tuple(points),
        rays=tuple(_unique(v1.rays + v2.rays)),
        lines=tuple(_unique(v1.lines + v2.lines)),
    )


def fourier_motzkin(h: HRep, keep: Sequence[int]) -> HRep:
    """Projection onto the `keep` coordinates by eliminating all other variables."""
    rows: list[IntVec] = []
    for a, bi in zip(h.A, h.b):
        r = _int_row(a, bi)
        if r is not None:
            rows.append(r)
    for e, fi in zip(h.E, h.f):
        r = _int_row(e, fi)
        if r is not None:
            rows.append(r)
            rows.append(tuple(-x for x in r))
    for j in sorted(set(range(h.dim)) - set(keep), reverse=True):
        pos = [r for r in rows if r[j] > 0]
        neg = [r for r in rows if r[j] < 0]
        nxt = {r for r in rows if r[j] == 0}
        for p in pos:
            for n in neg:
                c = _combine(-n[j], p, p[j], n)
                if any(c[:-1]) or c[-1] < 0:
                    nxt.add(c)
        rows = sorted(nxt)
        logger.debug("eliminated x%d: %d rows", j, len(rows))
    A: list[Vec] = []
    b: list[Fraction] = []
    infeasible = False
    for r in rows:
        coeffs = [r[i] for i in keep]
        if not any(coeffs):
            infeasible = infeasible or r[-1] < 0
            continue
        A.append(tuple(Fraction(a) for a in coeffs))
        b.append(Fraction(r[-1]))
    if infeasible:
        A.append(zeros(len(keep)))
        b.append(-ONE)
    return HRep(dim=len(keep), A=tuple(A), b=tuple(b))


# ---------------------------------------------------------------------------
# Images of LP-feasible sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearImage:
    """{image @ z : z feasible for (matrix, rhs, senses, free)} in R^dim."""

    dim: int
    matrix: Mat
    rhs: Vec
    senses: tuple[Sense, ...]
    free: tuple[bool, ...]
    image: Mat

    @classmethod
    def from_builder(
        cls, lp: LPBuilder, image_cols: Sequence[Sequence[tuple[int, Fraction | int]]]
    ) -> LinearImage:
        """image_cols[i] lists (column, coefficient) pairs forming coordinate i of the image."""
        p = lp.build()
        image = []
        for terms in image_cols:
            row = [ZERO] * p.num_vars
            for c, a in terms:
                row[c] += a
            image.append(tuple(row))
        return cls(
            dim=len(image_cols),
            matrix=p.matrix,
            rhs=p.rhs,
            senses=p.senses,
            free=p.free,
            image=tuple(image),
        )

    def maximize(self, w: Sequence[Fraction | int]) -> LPOutcome:
        objective = [ZERO] * len(self.free)
        for wi, row in zip(w, self.image):
            if wi:
                for k, a in enumerate(row):
                    if a:
                        objective[k] += wi * a
        return solve_lp(
            LPProblem(
                objective=tuple(objective),
                matrix=self.matrix,
                rhs=self.rhs,
                senses=self.senses,
                free=self.free,
            )
        )

    def apply(self, z: Sequence[Fraction]) -> Vec:
        return tuple(dot(row, z) for row in self.image)


def image_vrep(img: LinearImage) -> VRep:
    """
    Exact V-representation of a LinearImage.

    The affine hull is found by maximizing along directions orthogonal to everything seen so
    far; then the inner hull is grown until each of its facets is a valid inequality of the image.
    """
    k = img.dim
    first = img.maximize(zeros(k))
    if first.status is LPStatus.INFEASIBLE:
        return VRep.empty(k)
    y0 = img.apply(first.point)
    points: list[Vec] = [y0]
    rays: list[Vec] = []
    directions: list[Vec] = []
    support_queries = 0

    def extend_beyond(w: Sequence[Fraction | int], bound: Fraction) -> bool:
        """Record a generator beyond w.y <= bound; True when one was found."""
        nonlocal support_queries
        support_queries += 1
        out = img.maximize(w)
        if out.status is LPStatus.UNBOUNDED:
            r = img.apply(out.ray)
            rays.append(_as_int_vec(r))
            directions.append(r)
            return True
        y = img.apply(out.point)
        if out.value > bound:
            points.append(y)
            directions.append(sub(y, y0))
            return True
        return False

    while True:
        normals = nullspace(directions, k)
        grown = False
        for w in normals:
            c = dot(w, y0)
            if extend_beyond(w, c) or extend_beyond(tuple(-a for a in w), -c):
                grown = True
                break
        if not grown:
            break
    eq_rows = tuple(tuple(Fraction(a) for a in w) for w in normals)
    eq_rhs = tuple(dot(w, y0) for w in eq_rows)

    while True:
        inner = VRep(dim=k, points=tuple(_unique(points)), rays=tuple(_unique(rays)), lines=eq_rows)
        h = v_to_h(inner)
        grown = False
        for a, bi in zip(h.A, h.b):
            if extend_beyond(a, bi):
                grown = True
        if not grown:
            break
    logger.debug(
        "image in R^%d: %d facets after %d support queries", k, len(h.A), support_queries
    )
    return h_to_v(HRep(dim=k, A=h.A, b=h.b, E=eq_rows, f=eq_rhs))
