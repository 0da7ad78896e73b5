"""Exact simplex outcomes and their certificates."""

import dataclasses
from fractions import Fraction

import pytest

from polyset.core import dot
from polyset.exceptions import CertificateError, DimensionMismatchError
from polyset.lp import (
    LPBuilder,
    LPOutcome,
    LPProblem,
    LPStatus,
    Sense,
    solve_lp,
    verify_certificate,
)


def _lp(objective, rows, free=False):
    """rows: (coefficients, sense, rhs) triples; variables are nonnegative unless `free`."""
    lp = LPBuilder()
    cols = lp.add_vars(len(objective), free=free)
    for c, a in zip(cols, objective):
        lp.add_objective(c, a)
    for coefs, sense, rhs in rows:
        lp.add_row(dict(zip(cols, coefs)), sense, rhs)
    return lp.build()


# ---------------------------------------------------------------------------
# Builder
# ---------------------------------------------------------------------------


def test_builder_drops_zero_coefficients_and_orders_columns():
    lp = LPBuilder()
    x = lp.add_var(free=True)
    ys = lp.add_vars(2)
    lp.add_row({x: 1, ys[0]: 0, ys[1]: Fraction(1, 2)}, Sense.LE, 3)
    lp.add_objective(ys[0], 2)
    lp.add_objective(ys[0], 1)
    p = lp.build()
    assert lp.num_vars == 3
    assert p.free == (True, False, False)
    assert p.matrix == ((1, 0, Fraction(1, 2)),)
    assert p.objective == (0, 3, 0)


def test_problem_validates_shapes():
    with pytest.raises(DimensionMismatchError):
        LPProblem(objective=(1, 2), matrix=((1,),), rhs=(0,), senses=(Sense.LE,), free=(False,))


# ---------------------------------------------------------------------------
# Statuses
# ---------------------------------------------------------------------------


def test_optimal_with_unique_dual():
    p = _lp((1, 1), [((1, 2), Sense.LE, 4), ((3, 1), Sense.LE, 6)])
    out = solve_lp(p)
    assert out.status is LPStatus.OPTIMAL
    assert out.point == (Fraction(8, 5), Fraction(6, 5))
    assert out.value == Fraction(14, 5)
    assert out.dual == (Fraction(2, 5), Fraction(1, 5))
    assert verify_certificate(p, out)


def test_equalities_with_free_variables():
    p = _lp((-1, -1), [((1, 1), Sense.EQ, 3), ((1, -1), Sense.EQ, 1)], free=True)
    out = solve_lp(p)
    assert out.is_optimal
    assert out.point == (2, 1)
    assert out.value == -3


def test_negative_rhs_rows():
    # x >= 2 written as -x <= -2
    p = _lp((-1,), [((-1,), Sense.LE, -2)])
    out = solve_lp(p)
    assert out.is_optimal
    assert out.point == (2,)
    assert verify_certificate(p, out)


def test_unbounded_carries_improving_ray():
    p = _lp((1, 0), [((1, -1), Sense.LE, 1)])
    out = solve_lp(p)
    assert out.status is LPStatus.UNBOUNDED
    assert dot(p.objective, out.ray) > 0
    assert out.ray[0] - out.ray[1] <= 0
    assert verify_certificate(p, out)


def test_infeasible_carries_farkas_multipliers():
    p = _lp((0,), [((1,), Sense.LE, 0), ((-1,), Sense.LE, -1)])
    out = solve_lp(p)
    assert out.status is LPStatus.INFEASIBLE
    y = out.dual
    assert all(v >= 0 for v in y)
    assert y[0] * 1 + y[1] * -1 >= 0
    assert dot(p.rhs, y) < 0
    assert verify_certificate(p, out)


def test_degenerate_problem_terminates():
    # Beale's example cycles under the textbook largest-coefficient rule.
    p = _lp(
        (Fraction(3, 4), -20, Fraction(1, 2), -6),
        [
            ((Fraction(1, 4), -8, -1, 9), Sense.LE, 0),
            ((Fraction(1, 2), -12, Fraction(-1, 2), 3), Sense.LE, 0),
            ((0, 0, 1, 0), Sense.LE, 1),
        ],
    )
    out = solve_lp(p)
    assert out.is_optimal
    assert out.value == Fraction(5, 4)


def test_empty_problem_is_optimal_at_zero():
    p = _lp((0, 0), [])
    out = solve_lp(p)
    assert out.is_optimal
    assert out.value == 0


_STATUS_CASES = [
    ((1, 1), [((1, 2), Sense.LE, 4), ((3, 1), Sense.LE, 6)]),
    ((1, 0), [((1, -1), Sense.LE, 1)]),
    ((0,), [((1,), Sense.LE, 0), ((-1,), Sense.LE, -1)]),
]


@pytest.mark.parametrize("objective, rows", _STATUS_CASES)
@pytest.mark.parametrize("k", [Fraction(1, 3), 2, 7])
def test_positive_scaling_keeps_status(objective, rows, k):
    base = solve_lp(_lp(objective, rows))
    scaled_objective = solve_lp(_lp([k * c for c in objective], rows))
    scaled_rows = solve_lp(
        _lp(objective, [([k * a for a in coefs], sense, k * rhs) for coefs, sense, rhs in rows])
    )
    assert scaled_objective.status is base.status
    assert scaled_rows.status is base.status
    if base.is_optimal:
        assert scaled_objective.value == k * base.value
        assert scaled_rows.value == base.value
        assert scaled_rows.point == base.point


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


def test_tampered_certificates_are_rejected():
    p = _lp((1, 1), [((1, 2), Sense.LE, 4), ((3, 1), Sense.LE, 6)])
    out = solve_lp(p)
    assert not verify_certificate(p, dataclasses.replace(out, value=out.value + 1))
    assert not verify_certificate(p, dataclasses.replace(out, dual=(Fraction(1), Fraction(0))))
    assert not verify_certificate(p, LPOutcome(status=LPStatus.INFEASIBLE, dual=(1, 0)))
    assert not verify_certificate(
        p, LPOutcome(status=LPStatus.UNBOUNDED, point=(0, 0), ray=(1, 0))
    )


def test_checking_mode_raises_on_bad_certificate(monkeypatch):
    import polyset.lp as lp_module

    monkeypatch.setattr(lp_module, "verify_certificate", lambda p, o: False)
    with pytest.raises(CertificateError):
        solve_lp(_lp((1,), [((1,), Sense.LE, 1)]))
