from fractions import Fraction as F
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gibbsfrag.weights import (
    NEG_INF,
    WeightSystem,
    as_alpha,
    bell_polynomial,
    block_count_distribution,
    gamma_coeff,
    rising_factorial,
    stirling_table,
    v_array,
    verify_v_recursion,
    weight_sequence,
)
from oracles import all_set_partitions, cycle_counts, rising

GRID = [NEG_INF, F(-2), F(-1), F(-1, 2), F(0), F(1, 2)]
FINITE = [a for a in GRID if a is not NEG_INF]

alphas = st.fractions(max_value=F(19, 20), max_denominator=20).filter(lambda a: a >= -20)


@pytest.mark.parametrize("x,m,beta,expected", [
    (1, 0, 1, 1),
    (2, 3, 1, 24),
    (F(1, 2), 2, F(1, 2), F(1, 2)),
])
def test_rising_factorial(x, m, beta, expected):
    assert rising_factorial(x, m, beta) == expected


def test_gamma_coeff():
    assert gamma_coeff(3, 2, F(0)) == 3
    assert gamma_coeff(3, 2, F(-1)) == 5
    assert gamma_coeff(3, 2, NEG_INF) == 2


def test_alpha_parsing():
    assert as_alpha("-inf") is NEG_INF
    assert as_alpha("-1/2") == F(-1, 2)
    with pytest.raises(ValueError):
        as_alpha(1)
    with pytest.raises(TypeError):
        as_alpha(0.5)


def test_weight_system_invariants():
    assert WeightSystem(NEG_INF).weights(5) == [1] * 5
    ws = WeightSystem(F(-1), theta=2)
    assert ws.weights(4) == [factorial(j) for j in range(1, 5)]
    with pytest.raises(ValueError):
        WeightSystem(F(1, 2), theta=F(-1, 2))


def test_stirling_examples():
    assert stirling_table(0, 4)[4, 2] == 11
    assert stirling_table(NEG_INF, 4)[4, 2] == 7
    for alpha in GRID:
        t = stirling_table(alpha, 8)
        assert all(t[n, n] == 1 for n in range(1, 9))
        assert t[1, 1] == 1 and t[5, 0] == 0 and t[5, 6] == 0
        assert t.first_violation() is None


@pytest.mark.parametrize("n", range(1, 9))
def test_stirling_alpha_zero_counts_cycles(n):
    counts = cycle_counts(n)
    assert stirling_table(0, n).row(n) == counts[1:]


def test_corrupted_table_is_located():
    t = stirling_table(F(-1), 6).with_cell(4, 2, 1000)
    assert t.first_violation() in {(4, 2), (5, 2)}
    assert stirling_table(F(-1), 6).with_cell(1, 1, 2).first_violation() == (1, 1)


def test_bell_polynomial_examples():
    assert bell_polynomial(4, 2, [factorial(j - 1) for j in range(1, 5)]) == 11
    assert bell_polynomial(4, 2, [factorial(j) for j in range(1, 5)]) == 36
    assert bell_polynomial(6, 6, [1, 7, 9, 2, 3, 5]) == 1


def test_bell_polynomial_matches_independent_enumeration():
    w = [F(3), F(1, 2), F(5), F(2, 7), F(1), F(4)]
    sums = {}
    for part in all_set_partitions(list(range(6))):
        mass = F(1)
        for block in part:
            mass *= w[len(block) - 1]
        sums[len(part)] = sums.get(len(part), 0) + mass
    for k in range(1, 7):
        assert bell_polynomial(6, k, w) == sums[k]


@pytest.mark.parametrize("alpha", FINITE)
def test_bell_polynomial_equals_stirling(alpha):
    t = stirling_table(alpha, 10)
    w = [rising(1 - alpha, j - 1) for j in range(1, 11)]
    assert w == weight_sequence(alpha, 10)
    for n in range(1, 11):
        for k in range(1, n + 1):
            assert bell_polynomial(n, k, w) == t[n, k]


def test_v_array_examples():
    v = v_array(0, 1, 4)
    assert v[4, 2] == F(1, 24)
    assert v[1, 1] == 1
    assert v_array(F(1, 2), F(1, 2), 2)[2, 2] == F(2, 3)
    with pytest.raises(ValueError):
        v_array(F(-1), F(1), 3)


def test_verify_v_recursion():
    assert verify_v_recursion(v_array(0, 1, 5), 0, 5) == (True, None)
    assert verify_v_recursion(v_array(-1, 2, 5), -1, 5) == (True, None)
    bad = dict(v_array(0, 1, 5))
    bad[1, 1] = F(2)
    assert verify_v_recursion(bad, 0, 5) == (False, (1, 1))
    bad = dict(v_array(0, 1, 5))
    bad[3, 2] += 1
    ok, cell = verify_v_recursion(bad, 0, 5)
    assert not ok and cell in {(2, 1), (2, 2), (3, 2)}


def test_block_count_distribution():
    law = block_count_distribution(0, 1, 4)
    assert law[2] == F(11, 24)
    assert sum(law.values()) == 1
    assert block_count_distribution(F(1, 2), 3, 1) == {1: 1}
    for alpha in FINITE:
        # negative alpha needs theta = m|alpha| for a proper law
        theta = 4 * -alpha if alpha < 0 else F(1)
        for n in range(1, 9):
            law = block_count_distribution(alpha, theta, n)
            assert sum(law.values()) == 1
            assert all(p >= 0 for p in law.values())


@settings(max_examples=40, deadline=None)
@given(alphas)
def test_generalized_stirling_inequality(alpha):
    t = stirling_table(alpha, 12)
    for n in range(1, 13):
        for k in range(1, n + 1):
            lhs = gamma_coeff(n, k, alpha) * t[n, k] ** 2
            assert lhs >= gamma_coeff(n, k + 1, alpha) * t[n, k + 1] * t[n, k - 1]


@settings(max_examples=30, deadline=None)
@given(alphas, st.fractions(min_value=0, max_value=5, max_denominator=10))
def test_v_recursion_holds_for_random_parameters(alpha, extra):
    theta = -alpha + extra + F(1, 100)
    assert verify_v_recursion(v_array(alpha, theta, 7), alpha, 7)[0]
