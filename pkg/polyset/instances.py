"""
Problem instances: solvency cones from bid-ask matrices, the risk-compensation problem and the
problem whose graph is the convex hull of the columns of a digit matrix of Euler's number.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from fractions import Fraction
from typing import Literal

from polyset.core import Mat, Vec, mat, unit, vec, zeros
from polyset.exceptions import DimensionMismatchError, InvalidBidAskMatrixError
from polyset.polyhedron import HRep, VRep, remove_redundancy
from polyset.setopt import OrderCone, PolyMap, SetOptProblem

logger = logging.getLogger(__name__)

# First 1000 decimal digits of e, checked against `spigot_e_digits` in the test suite.
EULER_DIGITS = (
    "27182818284590452353602874713526624977572470936999595749669676277240766303535475"
    "94571382178525166427427466391932003059921817413596629043572900334295260595630738"
    "13232862794349076323382988075319525101901157383418793070215408914993488416750924"
    "47614606680822648001684774118537423454424371075390777449920695517027618386062613"
    "31384583000752044933826560297606737113200709328709127443747047230696977209310141"
    "69283681902551510865746377211125238978442505695369677078544996996794686445490598"
    "79316368892300987931277361782154249992295763514822082698951936680331825288693984"
    "96465105820939239829488793320362509443117301238197068416140397019837679320683282"
    "37646480429531180232878250981945581530175671736133206981125099618188159304169035"
    "15988885193458072738667385894228792284998920868058257492796104841984443634632449"
    "68487560233624827041978623209002160990235304369941849146314093431738143640546253"
    "15209618369088870701676839642437814059271456354906130310720851038375051011574770"
    "4171898610687396965521267154688957035035"
)

EULER_ROWS = 12
EULER_COLS = 60


# ---------------------------------------------------------------------------
# Bid-ask matrices and solvency cones
# ---------------------------------------------------------------------------


def example1_matrices() -> tuple[Mat, Mat]:
    """Bid-ask matrices of the four-asset risk-compensation instance."""
    pi1 = mat(
        [
            ["1", "223/100", "89/50", "47/25"],
            ["157/100", "1", "54/25", "177/100"],
            ["19/10", "211/100", "1", "199/100"],
            ["101/50", "41/20", "43/20", "1"],
        ]
    )
    pi2 = mat(
        [
            ["1", "39/20", "223/100", "207/100"],
            ["37/20", "1", "41/20", "54/25"],
            ["38/25", "97/50", "1", "37/20"],
            ["11/5", "49/25", "44/25", "1"],
        ]
    )
    return pi1, pi2


def validate_bid_ask(pi: Sequence[Sequence[Fraction | int]]) -> tuple[bool, str | None]:
    """
    Check pi_ii = 1, pi_ij > 0 and pi_ij <= pi_ik * pi_kj exactly.

    Returns (True, None) or (False, description of the first violated condition).
    """
    n = len(pi)
    if any(len(row) != n for row in pi):
        raise InvalidBidAskMatrixError("bid-ask matrix must be square", condition="square")
    for i in range(n):
        if pi[i][i] != 1:
            return False, f"pi[{i + 1}][{i + 1}] = {pi[i][i]} != 1"
    for i in range(n):
        for j in range(n):
            if pi[i][j] <= 0:
                return False, f"pi[{i + 1}][{j + 1}] = {pi[i][j]} is not positive"
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if pi[i][j] > pi[i][k] * pi[k][j]:
                    return False, (
                        f"pi[{i + 1}][{j + 1}] > pi[{i + 1}][{k + 1}] * pi[{k + 1}][{j + 1}]"
                    )
    return True, None


def solvency_cone(pi: Sequence[Sequence[Fraction | int]]) -> OrderCone:
    """Cone generated by pi_ij e^i - e^j (i != j), without redundant generators."""
    ok, condition = validate_bid_ask(pi)
    if not ok:
        raise InvalidBidAskMatrixError(f"invalid bid-ask matrix: {condition}", condition=condition)
    n = len(pi)
    rays = [
        tuple(Fraction(pi[i][j]) * a - b for a, b in zip(unit(n, i), unit(n, j)))
        for i in range(n)
        for j in range(n)
        if i != j
    ]
    return OrderCone.from_vrep(remove_redundancy(VRep.cone(n, rays)))


def build_risk_problem(
    pi1: Sequence[Sequence[Fraction | int]],
    pi2: Sequence[Sequence[Fraction | int]],
    q: int,
    x_init: Sequence[Fraction | int] | None = None,
) -> SetOptProblem:
    """
    gr F = {(x, y) : x_init - x in K1, x + (y, 0) in K2} with C = R^q_+.

    K1, K2 are the solvency cones of pi1, pi2; x_init defaults to the zero portfolio.
    """
    n = len(pi1)
    if len(pi2) != n:
        raise DimensionMismatchError(f"bid-ask matrices of sizes {n} and {len(pi2)}")
    if not 1 <= q <= n:
        raise DimensionMismatchError(f"q = {q} eligible assets out of n = {n}")
    x_init = vec(x_init) if x_init is not None else zeros(n)
    if len(x_init) != n:
        raise DimensionMismatchError(f"initial portfolio has {len(x_init)} entries, expected {n}")
    h1 = solvency_cone(pi1).hrep
    h2 = solvency_cone(pi2).hrep
    A: list[Vec] = []
    b: list[Fraction] = []
    E: list[Vec] = []
    f: list[Fraction] = []
    # x_init - x in K1
    for normals, lhs, rhs in ((h1.A, A, b), (h1.E, E, f)):
        for a in normals:
            lhs.append(tuple(-c for c in a) + zeros(q))
            rhs.append(-sum(c * xi for c, xi in zip(a, x_init)))
    # x + (y, 0) in K2
    for normals, lhs, rhs in ((h2.A, A, b), (h2.E, E, f)):
        for a in normals:
            lhs.append(tuple(a) + tuple(a[:q]))
            rhs.append(Fraction(0))
    graph = HRep(dim=n + q, A=tuple(A), b=tuple(b), E=tuple(E), f=tuple(f))
    logger.info("risk problem: n=%d q=%d, %d graph inequalities", n, q, graph.num_rows)
    return SetOptProblem(F=PolyMap(n=n, q=q, base=graph), C=OrderCone.nonnegative(q))


# ---------------------------------------------------------------------------
# Digits of e
# ---------------------------------------------------------------------------


def spigot_e_digits(count: int) -> list[int]:
    """Decimal digits of e by the mixed-radix spigot; independent of EULER_DIGITS."""
    if count <= 0:
        return []
    # enough terms that N! exceeds 10^(count + 10)
    terms = 2
    log_fact = 0.0
    while log_fact < count + 10:
        terms += 1
        log_fact += math.log10(terms)
    a = [1] * (terms + 1)
    digits = [2]
    for _ in range(count - 1):
        carry = 0
        for i in range(terms, 1, -1):
            x = a[i] * 10 + carry
            a[i], carry = x % i, x // i
        digits.append(carry)
    return digits


def euler_digits(count: int) -> list[int]:
    if not 0 <= count <= len(EULER_DIGITS):
        raise ValueError(f"between 0 and {len(EULER_DIGITS)} digits available, {count} requested")
    return [int(c) for c in EULER_DIGITS[:count]]


def euler_matrix(image_rows: Literal["last", "first"] = "last") -> list[list[int]]:
    """
    12 x 60 matrix filled row-wise with the digits of e, each reduced mod 3.

    With image_rows="first" the first two rows are moved to the bottom, so the image coordinates
    are always the last two rows of the result.
    """
    digits = euler_digits(EULER_ROWS * EULER_COLS)
    M = [[digits[r * EULER_COLS + c] % 3 for c in range(EULER_COLS)] for r in range(EULER_ROWS)]
    if image_rows == "last":
        return M
    if image_rows == "first":
        return M[2:] + M[:2]
    raise ValueError(f"image_rows must be 'last' or 'first', got {image_rows!r}")


def build_euler_problem(image_rows: Literal["last", "first"] = "last") -> SetOptProblem:
    """gr F = conv(columns of the digit matrix) in R^10 x R^2 with C = {0}."""
    M = euler_matrix(image_rows)
    columns = [tuple(row[c] for row in M) for c in range(EULER_COLS)]
    graph = VRep(dim=EULER_ROWS, points=tuple(columns))
    return SetOptProblem(F=PolyMap(n=EULER_ROWS - 2, q=2, base=graph), C=OrderCone.zero(2))
