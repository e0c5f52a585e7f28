from fractions import Fraction
from functools import lru_cache

import pytest
import sympy

from ymlab.reduction import (
    COLUMN_LABELS,
    N_COLS,
    build_system,
    col_p,
    col_pa,
    nullspace,
    rref,
    sphere_moment,
    verify_forces_zero,
)

F = Fraction


def test_column_layout():
    assert N_COLS == 45
    assert len(COLUMN_LABELS) == 45
    assert COLUMN_LABELS[0] == "p_22"
    assert COLUMN_LABELS[8] == "p_44"
    assert COLUMN_LABELS[9] == "p_22,1"
    assert col_p(2, 2) == 0 and col_pa(2, 2, 1) == 9


def test_system_dimensions():
    sys1 = build_system(1, (1, 2, 3, 4))
    assert sys1.shape == (47, 45)
    sys2 = build_system(8, (F(1), F(0), F(0), F(-3)))
    assert sys2.shape == (47, 45)


def test_base_equation_at_unit_u():
    # at u = (1,0,0,0) the first base equation reads p22 + p33 + p44 = 0
    sys1 = build_system(1, (1, 0, 0, 0))
    row = sys1.matrix[9]  # after the 9 Euler rows
    expected = [F(0)] * 45
    expected[col_p(2, 2)] = F(1)
    expected[col_p(3, 3)] = F(1)
    expected[col_p(4, 4)] = F(1)
    assert row == expected


def test_euler_row_instantiation():
    # (i,k) = (2,2), N = 1, u = (1,1,1,1): p22,1+p22,2+p22,3+p22,4 - p22 = 0
    sys1 = build_system(1, (1, 1, 1, 1))
    row = sys1.matrix[0]
    nonzero = {COLUMN_LABELS[c]: v for c, v in enumerate(row) if v != 0}
    assert nonzero == {
        "p_22": F(-1),
        "p_22,1": F(1),
        "p_22,2": F(1),
        "p_22,3": F(1),
        "p_22,4": F(1),
    }


def test_zero_u_rejected():
    with pytest.raises(ValueError):
        build_system(1, (0, 0, 0, 0))
    with pytest.raises(ValueError):
        build_system(0, (1, 0, 0, 0))


def test_nullspace_trivial_cases():
    eye_plus_zeros = [[F(int(i == j)) for j in range(4)] for i in range(4)]
    eye_plus_zeros += [[F(0)] * 4, [F(0)] * 4]
    assert nullspace(eye_plus_zeros) == []


def test_nullspace_exactness_and_rank_crosscheck():
    sys1 = build_system(1, (3, -1, 2, 5))
    basis = nullspace(sys1)
    for v in basis:
        for row in sys1.matrix:
            assert sum(a * b for a, b in zip(row, v)) == 0
    _, piv_fwd = rref(sys1.matrix)
    _, piv_rev = rref(sys1.matrix, column_order=range(N_COLS - 1, -1, -1))
    assert len(piv_fwd) == len(piv_rev)  # rank independent of pivot order
    assert len(basis) == N_COLS - len(piv_fwd)


@pytest.mark.parametrize("n_level", [1, 2, 5])
def test_kernel_p_block_vanishes(n_level):
    sys_n = build_system(n_level, (1, 1, 1, 1))
    for v in nullspace(sys_n):
        assert all(v[c] == 0 for c in range(9))


def test_verify_forces_zero_passes_and_is_deterministic():
    rep1 = verify_forces_zero(1, 3, seed=7)
    rep2 = verify_forces_zero(1, 3, seed=7)
    assert rep1.passed
    assert [s.u for s in rep1.samples] == [s.u for s in rep2.samples]
    assert [s.kernel_dim for s in rep1.samples] == [s.kernel_dim for s in rep2.samples]
    assert rep1.rank_consistent
    j = rep1.to_jsonable()
    assert j["pass"] is True and j["n"] == 1 and len(j["samples"]) == 3


def test_ablation_control_fails():
    # without the exchange relation rows the kernel leaks nonzero p
    ablated = build_system(1, (1, 2, 3, 4), include_exchange_rows=False)
    assert ablated.shape[0] == 29
    basis = nullspace(ablated)
    assert any(any(v[c] != 0 for c in range(9)) for v in basis)


def test_report_mentions_suspect_on_fail():
    # simulate a FAIL by checking the ablated system through the report path:
    # verify_forces_zero always builds the full system, so instead assert the
    # note wiring via a hand-built failing report
    from ymlab.reduction import ReductionReport, SampleResult

    bad = SampleResult(u=(F(1), F(0), F(0), F(0)), kernel_dim=20, p_zero=False,
                       offending_vector=tuple([F(1)] + [F(0)] * 44))
    rep = ReductionReport(1, 0, [bad], passed=False, rank_consistent=True,
                          elapsed_ms=0.0, note="")
    j = rep.to_jsonable()
    assert j["samples"][0]["offending_vector"][0] == "1"


# -- sphere moments --------------------------------------------------------------------


def test_moment_odd_zero():
    assert sphere_moment((1, 0, 0, 0), 4) == 0
    assert sphere_moment((2, 3, 0, 0), 4) == 0


def test_moment_examples():
    assert sphere_moment((0, 0, 0, 0), 4) == 1
    assert sphere_moment((2, 0, 0, 0), 4) == F(1, 4)
    assert sphere_moment((4, 0, 0, 0), 4) == F(1, 8)
    assert sphere_moment((2, 2, 0, 0), 4) == F(1, 24)


def test_moment_sum_rule():
    # sum_i <u_i^2> = 1 in any dimension
    for n in (2, 3, 4, 7):
        alpha = [0] * n
        total = F(0)
        for i in range(n):
            alpha[i] = 2
            total += sphere_moment(alpha, n)
            alpha[i] = 0
        assert total == 1


def test_moment_validation():
    with pytest.raises(ValueError):
        sphere_moment((2, 0), 1)
    with pytest.raises(ValueError):
        sphere_moment((-2, 0, 0, 0), 4)


@lru_cache(maxsize=None)
def _wallis(p, q, full_circle):
    t = sympy.Symbol("t")
    hi = 2 * sympy.pi if full_circle else sympy.pi
    return sympy.integrate(sympy.cos(t) ** p * sympy.sin(t) ** q, (t, 0, hi))


def sphere_moment_oracle_s3(alpha):
    """Iterated-integral average over S^3 in polar coordinates."""
    a1, a2, a3, a4 = alpha
    num = (
        _wallis(a1, a2 + a3 + a4 + 2, False)
        * _wallis(a2, a3 + a4 + 1, False)
        * _wallis(a3, a4, True)
    )
    area = _wallis(0, 2, False) * _wallis(0, 1, False) * _wallis(0, 0, True)
    return sympy.nsimplify(num / area)


def test_moment_against_iterated_integral_sample():
    for alpha in [(2, 0, 0, 0), (4, 0, 0, 0), (2, 2, 0, 0), (2, 2, 2, 2), (6, 2, 0, 0)]:
        got = sphere_moment(alpha, 4)
        expected = sphere_moment_oracle_s3(alpha)
        assert sympy.Rational(got.numerator, got.denominator) == expected
