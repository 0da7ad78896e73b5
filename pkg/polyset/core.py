"""
Exact rational scalars, dense vectors/matrices and the linear algebra built on them.

Scalars are `fractions.Fraction` values (always in canonical form), vectors are tuples of
scalars and matrices are tuples of row vectors. Nothing in the package rounds: decimal strings
are parsed exactly and decimal renderings exist for display only. Elimination (rank, nullspace,
linear solves) runs on sympy matrices and hands its results back as Fractions.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import sympy as sp
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from polyset.exceptions import DimensionMismatchError, InconsistentSystemError

Scalar = Fraction
Vec = tuple[Fraction, ...]
IntVec = tuple[int, ...]
Mat = tuple[Vec, ...]

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"[+-]?(?:\d+/\d+|\d+\.\d*|\.\d+|\d+)")


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------


def parse_rational(text: str) -> Fraction:
    """Parse "-3", "7/2" or "2.23" (exactly 223/100). Anything else raises ValueError."""
    s = text.strip()
    if not _RATIONAL_RE.fullmatch(s):
        raise ValueError(f"malformed rational literal {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError as e:
        raise ValueError(f"zero denominator in {text!r}") from e


def to_scalar(value: Fraction | int | str) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    # Floats would silently break exactness.
    raise TypeError(f"cannot convert {type(value).__name__} to an exact scalar")


def format_rational(value: Fraction | int) -> str:
    return str(Fraction(value))


def format_decimal(value: Fraction | int, places: int = 4) -> str:
    """Round half away from zero to `places` digits; exact, display only."""
    q = Fraction(value)
    n = abs(q) * 10**places
    whole = n.numerator // n.denominator
    if (n - whole) * 2 >= 1:
        whole += 1
    sign = "-" if q < 0 and whole != 0 else ""
    if places == 0:
        return f"{sign}{whole}"
    digits = str(whole).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


# ---------------------------------------------------------------------------
# Vectors & matrices
# ---------------------------------------------------------------------------


def vec(values: Iterable[Fraction | int | str]) -> Vec:
    return tuple(to_scalar(v) for v in values)


def mat(rows: Iterable[Iterable[Fraction | int | str]], ncols: int | None = None) -> Mat:
    out = tuple(vec(r) for r in rows)
    widths = {len(r) for r in out}
    if ncols is not None:
        widths.add(ncols)
    if len(widths) > 1:
        raise DimensionMismatchError(f"ragged matrix: row widths {sorted(widths)}")
    return out


def zeros(n: int) -> Vec:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vec:
    return tuple(ONE if j == i else ZERO for j in range(n))


def _check_same_length(u: Sequence, v: Sequence) -> None:
    if len(u) != len(v):
        raise DimensionMismatchError(f"vector lengths differ: {len(u)} != {len(v)}")


def dot(u: Sequence[Fraction | int], v: Sequence[Fraction | int]) -> Fraction:
    _check_same_length(u, v)
    total = ZERO
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


def add(u: Sequence[Fraction | int], v: Sequence[Fraction | int]) -> Vec:
    _check_same_length(u, v)
    return tuple(Fraction(a) + b for a, b in zip(u, v))


def sub(u: Sequence[Fraction | int], v: Sequence[Fraction | int]) -> Vec:
    _check_same_length(u, v)
    return tuple(Fraction(a) - b for a, b in zip(u, v))


def scale(c: Fraction | int, v: Sequence[Fraction | int]) -> Vec:
    return tuple(Fraction(c) * a for a in v)


def neg(v: Sequence[Fraction | int]) -> Vec:
    return tuple(-Fraction(a) for a in v)


def is_zero(v: Sequence[Fraction | int]) -> bool:
    return all(a == 0 for a in v)


# ---------------------------------------------------------------------------
# Integer scaling
# ---------------------------------------------------------------------------


def integer_scaled(v: Sequence[Fraction | int]) -> tuple[IntVec, int]:
    """Return (k*v as integers, k) with k the lcm of the denominators."""
    fr = [Fraction(a) for a in v]
    k = lcm(*(a.denominator for a in fr)) if fr else 1
    return tuple(a.numerator * (k // a.denominator) for a in fr), k


def primitive_normalize(v: Sequence[Fraction | int]) -> IntVec:
    """
    Scale v by some λ > 0 so the entries are coprime integers.

    Unique per open ray {λv : λ > 0}; used instead of Euclidean normalization, which is not
    available in exact arithmetic.
    """
    ints, _ = integer_scaled(v)
    g = gcd(*ints) if ints else 0
    if g == 0:
        raise ValueError("cannot normalize the zero vector")
    return tuple(a // g for a in ints)


def primitive_with_factor(v: Sequence[Fraction | int]) -> tuple[IntVec, Fraction]:
    """primitive_normalize(v) together with the factor λ > 0 it applied."""
    p = primitive_normalize(v)
    i = next(k for k, a in enumerate(p) if a != 0)
    return p, Fraction(p[i]) / Fraction(v[i])


def _sign_canonical(v: IntVec) -> IntVec:
    for a in v:
        if a != 0:
            return v if a > 0 else tuple(-b for b in v)
    return v


# ---------------------------------------------------------------------------
# Elimination (sympy)
# ---------------------------------------------------------------------------


def _sympy_matrix(A: Sequence[Sequence[Fraction | int]], ncols: int) -> sp.Matrix:
    rows = []
    for r in A:
        if len(r) != ncols:
            raise DimensionMismatchError(f"row of width {len(r)} in a {ncols}-column matrix")
        rows.append([sp.Rational(Fraction(a).numerator, Fraction(a).denominator) for a in r])
    return sp.Matrix(len(rows), ncols, [a for r in rows for a in r])


def _fraction(x: sp.Rational) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def rank(A: Sequence[Sequence[Fraction | int]]) -> int:
    if not A:
        return 0
    return _sympy_matrix(A, len(A[0])).rank()


def integer_rank(A: Iterable[Sequence[int]]) -> int:
    """Rank of an integer matrix; used inside the double description adjacency test."""
    rows = [list(r) for r in A if any(r)]
    if not rows:
        return 0
    M = DomainMatrix([[QQ(int(a)) for a in r] for r in rows], (len(rows), len(rows[0])), QQ)
    return M.rank()


def nullspace(A: Sequence[Sequence[Fraction | int]], ncols: int) -> list[IntVec]:
    """Primitive integer basis of {z : Az = 0}; each basis vector has a positive leading entry."""
    if not A:
        return [tuple(1 if j == i else 0 for j in range(ncols)) for i in range(ncols)]
    basis = _sympy_matrix(A, ncols).nullspace()
    return [_sign_canonical(primitive_normalize([_fraction(a) for a in b])) for b in basis]


@dataclass(frozen=True)
class LinearSolution:
    x: Vec
    nullspace: tuple[IntVec, ...]


def solve_linear(
    A: Sequence[Sequence[Fraction | int]],
    b: Sequence[Fraction | int],
    ncols: int | None = None,
) -> LinearSolution:
    """
    One exact solution of Ax = b (free variables set to zero) plus a primitive nullspace basis.

    Raises InconsistentSystemError when the system has no solution.
    """
    if len(A) != len(b):
        raise DimensionMismatchError(f"{len(A)} rows but {len(b)} right-hand sides")
    if ncols is None:
        if not A:
            raise DimensionMismatchError("column count required for an empty matrix")
        ncols = len(A[0])
    x = [ZERO] * ncols
    if A:
        augmented = _sympy_matrix([[*r, rhs] for r, rhs in zip(A, b)], ncols + 1)
        R, pivots = augmented.rref()
        if ncols in pivots:
            raise InconsistentSystemError("linear system is inconsistent")
        for i, pc in enumerate(pivots):
            x[pc] = _fraction(R[i, ncols])
    return LinearSolution(x=tuple(x), nullspace=tuple(nullspace(A, ncols)))
