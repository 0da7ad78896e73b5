"""
Exact two-phase simplex with certificates.

Every LP the package solves goes through `solve_lp`: maximize c^T z subject to rows
M_i z <= d_i or M_i z = d_i and per-variable bounds (free or >= 0). The outcome always carries a
certificate (dual vector, improving ray or Farkas multipliers) that `verify_certificate` can
check independently of the pivoting.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from polyset.config import get_settings
from polyset.core import ZERO, Mat, Vec, dot
from polyset.exceptions import CertificateError, DimensionMismatchError

logger = logging.getLogger(__name__)


class Sense(str, Enum):
    LE = "<="
    EQ = "="


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LPProblem:
    objective: Vec
    matrix: Mat
    rhs: Vec
    senses: tuple[Sense, ...]
    free: tuple[bool, ...]

    def __post_init__(self) -> None:
        n = len(self.objective)
        if len(self.free) != n:
            raise DimensionMismatchError(f"{len(self.free)} variable bounds for {n} variables")
        if len(self.rhs) != len(self.matrix) or len(self.senses) != len(self.matrix):
            raise DimensionMismatchError("row count differs between matrix, rhs and senses")
        for i, row in enumerate(self.matrix):
            if len(row) != n:
                raise DimensionMismatchError(f"row {i} has {len(row)} columns, expected {n}")

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @property
    def num_rows(self) -> int:
        return len(self.matrix)


@dataclass(frozen=True)
class LPOutcome:
    status: LPStatus
    # Optimal: optimal z*. Unbounded: a feasible point.
    point: Vec | None = None
    value: Fraction | None = None
    ray: Vec | None = None
    # Optimal: dual solution. Infeasible: Farkas multipliers.
    dual: Vec | None = None
    pivots: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


# ---------------------------------------------------------------------------
# Builder
# ---------------------------------------------------------------------------


class LPBuilder:
    """Collects variables, sparse rows and objective terms, then emits an LPProblem."""

    def __init__(self) -> None:
        self._free: list[bool] = []
        self._rows: list[tuple[dict[int, Fraction], Sense, Fraction]] = []
        self._objective: dict[int, Fraction] = {}

    @property
    def num_vars(self) -> int:
        return len(self._free)

    def add_var(self, *, free: bool = False) -> int:
        self._free.append(free)
        return len(self._free) - 1

    def add_vars(self, count: int, *, free: bool = False) -> list[int]:
        return [self.add_var(free=free) for _ in range(count)]

    def add_row(
        self, coefs: Mapping[int, Fraction | int], sense: Sense, rhs: Fraction | int
    ) -> None:
        row = {k: Fraction(v) for k, v in coefs.items() if v}
        self._rows.append((row, sense, Fraction(rhs)))

    def add_objective(self, col: int, coef: Fraction | int) -> None:
        if coef:
            self._objective[col] = self._objective.get(col, ZERO) + coef

    def build(self) -> LPProblem:
        n = self.num_vars
        matrix = []
        for coefs, _, _ in self._rows:
            row = [ZERO] * n
            for k, v in coefs.items():
                row[k] = v
            matrix.append(tuple(row))
        objective = [ZERO] * n
        for k, v in self._objective.items():
            objective[k] = v
        return LPProblem(
            objective=tuple(objective),
            matrix=tuple(matrix),
            rhs=tuple(r for _, _, r in self._rows),
            senses=tuple(s for _, s, _ in self._rows),
            free=tuple(self._free),
        )


# ---------------------------------------------------------------------------
# Simplex
# ---------------------------------------------------------------------------


class _Tableau:
    """
    Dense Fraction tableau in equality form A'x' + (slack/artificial) = b', b' >= 0.

    Free variables are split into a plus and a minus column. Every row owns an identity column
    (its slack when the row is a <= row with nonnegative rhs, an artificial otherwise), so the
    simplex multipliers can be read off the objective rows at any time.
    """

    def __init__(self, p: LPProblem) -> None:
        self.col_of: list[tuple[int, int]] = []  # (plus col, minus col or -1)
        ncols = 0
        for k in range(p.num_vars):
            if p.free[k]:
                self.col_of.append((ncols, ncols + 1))
                ncols += 2
            else:
                self.col_of.append((ncols, -1))
                ncols += 1
        self.num_structural = ncols
        m = p.num_rows
        self.sign = [1 if p.rhs[i] >= 0 else -1 for i in range(m)]
        slack_col: dict[int, int] = {}
        for i in range(m):
            if p.senses[i] is Sense.LE:
                slack_col[i] = ncols
                ncols += 1
        self.identity_col: list[int] = [0] * m
        self.artificial: set[int] = set()
        for i in range(m):
            if i in slack_col and self.sign[i] > 0:
                self.identity_col[i] = slack_col[i]
            else:
                self.identity_col[i] = ncols
                self.artificial.add(ncols)
                ncols += 1
        self.ncols = ncols
        self.rows: list[list[Fraction]] = []
        for i in range(m):
            row = [ZERO] * (ncols + 1)
            s = self.sign[i]
            for k, a in enumerate(p.matrix[i]):
                if a:
                    plus, minus = self.col_of[k]
                    row[plus] = a if s > 0 else -a
                    if minus >= 0:
                        row[minus] = -row[plus]
            if i in slack_col:
                row[slack_col[i]] = Fraction(s)
            row[self.identity_col[i]] = Fraction(1)
            row[ncols] = p.rhs[i] if s > 0 else -p.rhs[i]
            self.rows.append(row)
        self.basis = list(self.identity_col)

        # Phase 2 row: z_j - c_j with c_B = 0 for the initial basis.
        self.obj2 = [ZERO] * (ncols + 1)
        for k, c in enumerate(p.objective):
            if c:
                plus, minus = self.col_of[k]
                self.obj2[plus] = -c
                if minus >= 0:
                    self.obj2[minus] = c
        # Phase 1 row for max -sum(artificials), priced out against the initial basis.
        self.obj1 = [ZERO] * (ncols + 1)
        for i in range(m):
            if self.identity_col[i] in self.artificial:
                for j, a in enumerate(self.rows[i]):
                    if a:
                        self.obj1[j] -= a
        for j in self.artificial:
            self.obj1[j] = ZERO
        self.pivots = 0

    def pivot(self, r: int, s: int) -> None:
        prow = self.rows[r]
        p = prow[s]
        if p != 1:
            for j, a in enumerate(prow):
                if a:
                    prow[j] = a / p
        nz = [j for j, a in enumerate(prow) if a]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[s]
                if f:
                    for j in nz:
                        row[j] -= f * prow[j]
        for row in (self.obj1, self.obj2):
            f = row[s]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
        self.basis[r] = s
        self.pivots += 1

    def entering(self, obj: list[Fraction], allow_artificial: bool) -> int | None:
        # Bland: lowest index with an improving reduced cost.
        for j in range(self.ncols):
            if obj[j] < 0 and (allow_artificial or j not in self.artificial):
                return j
        return None

    def leaving(self, s: int) -> int | None:
        best: int | None = None
        best_ratio: Fraction | None = None
        rhs = self.ncols
        for i, row in enumerate(self.rows):
            a = row[s]
            if a > 0:
                ratio = row[rhs] / a
                if (
                    best is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and self.basis[i] < self.basis[best])
                ):
                    best, best_ratio = i, ratio
        return best

    def column_values(self) -> list[Fraction]:
        values = [ZERO] * self.ncols
        for i, j in enumerate(self.basis):
            values[j] = self.rows[i][self.ncols]
        return values

    def to_original(self, values: Sequence[Fraction]) -> Vec:
        out = []
        for plus, minus in self.col_of:
            v = values[plus]
            if minus >= 0:
                v -= values[minus]
            out.append(v)
        return tuple(out)

    def multipliers(self, obj: list[Fraction], phase_one: bool) -> Vec:
        """Simplex multipliers mapped back to the original (unflipped) rows."""
        out = []
        for i, j in enumerate(self.identity_col):
            u = obj[j]
            if phase_one and j in self.artificial:
                u -= 1
            out.append(u if self.sign[i] > 0 else -u)
        return tuple(out)


def solve_lp(p: LPProblem) -> LPOutcome:
    """Solve an LP exactly. Deterministic: Bland's rule with lowest-index tie breaking."""
    t = _Tableau(p)

    # Phase 1
    while True:
        s = t.entering(t.obj1, allow_artificial=True)
        if s is None:
            break
        r = t.leaving(s)
        if r is None:  # pragma: no cover - phase 1 is bounded above by 0
            break
        t.pivot(r, s)
    if t.obj1[t.ncols] < 0:
        out = LPOutcome(
            status=LPStatus.INFEASIBLE,
            dual=t.multipliers(t.obj1, phase_one=True),
            pivots=t.pivots,
        )
        return _checked(p, out)

    # Drive zero-level artificials out of the basis where possible.
    for r, j in enumerate(t.basis):
        if j in t.artificial:
            s = next(
                (k for k in range(t.ncols) if k not in t.artificial and t.rows[r][k] != 0), None
            )
            if s is not None:
                t.pivot(r, s)

    # Phase 2
    while True:
        s = t.entering(t.obj2, allow_artificial=False)
        if s is None:
            break
        r = t.leaving(s)
        if r is None:
            values = t.column_values()
            direction = [ZERO] * t.ncols
            direction[s] = Fraction(1)
            for i, j in enumerate(t.basis):
                direction[j] = -t.rows[i][s]
            out = LPOutcome(
                status=LPStatus.UNBOUNDED,
                point=t.to_original(values),
                ray=t.to_original(direction),
                pivots=t.pivots,
            )
            return _checked(p, out)
        t.pivot(r, s)

    point = t.to_original(t.column_values())
    out = LPOutcome(
        status=LPStatus.OPTIMAL,
        point=point,
        value=dot(p.objective, point),
        dual=t.multipliers(t.obj2, phase_one=False),
        pivots=t.pivots,
    )
    return _checked(p, out)


def _checked(p: LPProblem, out: LPOutcome) -> LPOutcome:
    logger.debug(
        "LP %dx%d -> %s after %d pivots", p.num_rows, p.num_vars, out.status.value, out.pivots
    )
    if get_settings().check_certificates and not verify_certificate(p, out):
        raise CertificateError(f"{out.status.value} certificate failed verification")
    return out


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


def _is_feasible(p: LPProblem, z: Sequence[Fraction]) -> bool:
    if len(z) != p.num_vars:
        return False
    if any(not p.free[k] and z[k] < 0 for k in range(p.num_vars)):
        return False
    for row, sense, rhs in zip(p.matrix, p.senses, p.rhs):
        lhs = dot(row, z)
        if sense is Sense.LE and lhs > rhs:
            return False
        if sense is Sense.EQ and lhs != rhs:
            return False
    return True


def _in_recession_cone(p: LPProblem, d: Sequence[Fraction]) -> bool:
    if len(d) != p.num_vars:
        return False
    if any(not p.free[k] and d[k] < 0 for k in range(p.num_vars)):
        return False
    for row, sense in zip(p.matrix, p.senses):
        lhs = dot(row, d)
        if sense is Sense.LE and lhs > 0:
            return False
        if sense is Sense.EQ and lhs != 0:
            return False
    return True


def _dual_residuals(p: LPProblem, y: Sequence[Fraction]) -> list[Fraction]:
    """(M^T y)_k for every variable k."""
    out = [ZERO] * p.num_vars
    for yi, row in zip(y, p.matrix):
        if yi:
            for k, a in enumerate(row):
                if a:
                    out[k] += yi * a
    return out


def _multipliers_signed(p: LPProblem, y: Sequence[Fraction]) -> bool:
    if len(y) != p.num_rows:
        return False
    return all(y[i] >= 0 for i in range(p.num_rows) if p.senses[i] is Sense.LE)


def verify_certificate(p: LPProblem, o: LPOutcome) -> bool:
    """Check an outcome against the problem using only its carried certificate."""
    if o.status is LPStatus.OPTIMAL:
        if o.point is None or o.dual is None or not _is_feasible(p, o.point):
            return False
        if not _multipliers_signed(p, o.dual):
            return False
        residual = _dual_residuals(p, o.dual)
        for k in range(p.num_vars):
            reduced = residual[k] - p.objective[k]
            if p.free[k] and reduced != 0:
                return False
            if not p.free[k] and reduced < 0:
                return False
        primal = dot(p.objective, o.point)
        if o.value is not None and o.value != primal:
            return False
        return primal == dot(p.rhs, o.dual)
    if o.status is LPStatus.UNBOUNDED:
        if o.point is None or o.ray is None:
            return False
        return (
            _is_feasible(p, o.point)
            and _in_recession_cone(p, o.ray)
            and dot(p.objective, o.ray) > 0
        )
    if o.dual is None or not _multipliers_signed(p, o.dual):
        return False
    residual = _dual_residuals(p, o.dual)
    for k in range(p.num_vars):
        if p.free[k] and residual[k] != 0:
            return False
        if not p.free[k] and residual[k] < 0:
            return False
    return dot(p.rhs, o.dual) < 0
