"""Exact invariant suites run by ``gibbsfrag verify``.

Each suite returns a :class:`SuiteResult`; the first counterexample found
is reported verbatim in ``detail``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

from .coupling import MonotoneCoupling, build_cover_graph, strassen_feasible
from .crp import SeatingChoices, split_check
from .lattice import partition_strassen_explore, record_law_oracle
from .records import (
    RecordVector,
    efron_check,
    harmonic_probs,
    is_log_concave,
    p_record_last,
    poisson_binomial_pmf,
    record_law,
    upset_closure,
)
from .weights import (
    NEG_INF,
    as_alpha,
    gamma_coeff,
    stirling_table,
    v_array,
    verify_v_recursion,
    weight_sequence,
)

DEFAULT_ALPHAS = (NEG_INF, Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2))


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int = 0
    detail: Optional[dict] = field(default=None)

    def to_json(self):
        out = {"suite": self.name, "passed": self.passed, "checked": self.checked}
        if self.detail is not None:
            out["detail" if self.passed else "counterexample"] = self.detail
        return out


def _a(alpha):
    return str(alpha)


def stirling_recursion(alphas=DEFAULT_ALPHAS, n=10, corrupt=None):
    """Table entries match the recursion; ``corrupt=(n, k)`` bumps one cell first."""
    checked = 0
    for alpha in alphas:
        table = stirling_table(alpha, n)
        if corrupt is not None:
            cn, ck = corrupt
            table = table.with_cell(cn, ck, table[cn, ck] + 1)
        cell = table.first_violation()
        checked += 1
        if cell is not None:
            return SuiteResult("stirling-recursion", False, checked,
                               {"alpha": _a(alpha), "n": cell[0], "k": cell[1],
                                "value": str(table[cell])})
    return SuiteResult("stirling-recursion", True, checked)


def stirling_log_concave(alphas=DEFAULT_ALPHAS, n=30):
    """gamma_{m,k} S(m,k)^2 >= gamma_{m,k+1} S(m,k+1) S(m,k-1) for all 1 <= k <= m <= n."""
    checked = 0
    for alpha in alphas:
        table = stirling_table(alpha, n)
        for m in range(1, n + 1):
            for k in range(1, m + 1):
                lhs = gamma_coeff(m, k, alpha) * table[m, k] ** 2
                rhs = gamma_coeff(m, k + 1, alpha) * table[m, k + 1] * table[m, k - 1]
                checked += 1
                if lhs < rhs:
                    return SuiteResult("stirling-logconcave", False, checked,
                                       {"alpha": _a(alpha), "n": m, "k": k,
                                        "lhs": str(lhs), "rhs": str(rhs)})
    return SuiteResult("stirling-logconcave", True, checked)


def record_last_monotone(alphas=DEFAULT_ALPHAS, n=30):
    """P(B_m = 1 | K_m = k) is nondecreasing in k for every m <= n."""
    checked = 0
    for alpha in alphas:
        for m in range(2, n + 1):
            vals = [p_record_last(alpha, m, k) for k in range(1, m + 1)]
            for k in range(1, m):
                checked += 1
                if vals[k] < vals[k - 1]:
                    return SuiteResult("record-last-monotone", False, checked,
                                       {"alpha": _a(alpha), "n": m, "k": k,
                                        "p_k": str(vals[k - 1]), "p_k+1": str(vals[k])})
    return SuiteResult("record-last-monotone", True, checked)


def random_probs(rng: random.Random, n: int, max_den: int = 50):
    out = []
    for _ in range(n):
        den = rng.randint(1, max_den)
        out.append(Fraction(rng.randint(0, den), den))
    return out


def poisson_log_concave(trials=1000, max_n=15, seed=0):
    rng = random.Random(seed)
    for t in range(trials):
        p = random_probs(rng, rng.randint(1, max_n))
        u = poisson_binomial_pmf(p)
        if not is_log_concave(u):
            return SuiteResult("poisson-logconcave", False, t + 1, {"p": [str(x) for x in p]})
    return SuiteResult("poisson-logconcave", True, trials)


def v_recursion(alphas=DEFAULT_ALPHAS, n=10):
    checked = 0
    for alpha in alphas:
        if alpha is NEG_INF:
            continue
        theta = 1 - alpha if alpha < 0 else Fraction(1)
        ok, cell = verify_v_recursion(v_array(alpha, theta, n), alpha, n)
        checked += 1
        if not ok:
            return SuiteResult("v-recursion", False, checked,
                               {"alpha": _a(alpha), "theta": str(theta), "cell": list(cell)})
    return SuiteResult("v-recursion", True, checked)


def record_oracle(alphas=DEFAULT_ALPHAS, n=8):
    """record_law agrees with the partition-enumeration pushforward."""
    checked = 0
    for alpha in alphas:
        w = weight_sequence(alpha, n)
        for m in range(1, n + 1):
            for k in range(1, m + 1):
                checked += 1
                if record_law(alpha, m, k) != record_law_oracle(w, m, k):
                    return SuiteResult("record-oracle", False, checked,
                                       {"alpha": _a(alpha), "n": m, "k": k})
    return SuiteResult("record-oracle", True, checked)


def efron(n=8, trials=200, seed=0):
    """Efron monotonicity for random up-sets under p_i = 1/i."""
    rng = random.Random(seed)
    p = harmonic_probs(n)
    for t in range(trials):
        gens = [RecordVector(n, 1 | (rng.getrandbits(n - 1) << 1)) for _ in range(rng.randint(1, 4))]
        upset = upset_closure(gens)
        for k in range(1, n):
            if not efron_check(p, upset, k):
                return SuiteResult("efron", False, t + 1,
                                   {"n": n, "k": k, "generators": [g.name for g in gens]})
    return SuiteResult("efron", True, trials)


def strassen_records(alphas=DEFAULT_ALPHAS, n=10):
    """Adjacent record layers couple monotonically and the couplings check out exactly."""
    checked = 0
    for alpha in alphas:
        for m in range(2, n + 1):
            layers = [record_law(alpha, m, k) for k in range(1, m + 1)]
            for lo, hi in zip(layers, layers[1:]):
                checked += 1
                result = strassen_feasible(lo, hi, build_cover_graph(lo, hi))
                if not isinstance(result, MonotoneCoupling):
                    return SuiteResult("strassen-records", False, checked,
                                       {"alpha": _a(alpha), "n": m, "k": lo.k,
                                        "certificate": result.to_json()})
                try:
                    result.check()
                except ValueError as err:
                    return SuiteResult("strassen-records", False, checked,
                                       {"alpha": _a(alpha), "n": m, "k": lo.k, "error": str(err)})
    return SuiteResult("strassen-records", True, checked)


def split_exhaustive(n=6):
    """Every single 0 -> 1 record flip splits exactly one table, for all seatings."""
    checked = 0
    for m in range(2, n + 1):
        all_choices = [SeatingChoices(m, c) for c in product(*(range(1, i) for i in range(2, m + 1)))]
        for rest in range(1 << (m - 1)):
            b = RecordVector(m, 1 | (rest << 1))
            for b_next in b.successors():
                for c in all_choices:
                    checked += 1
                    if not split_check(b, b_next, c):
                        return SuiteResult("split-check", False, checked,
                                           {"b": b.name, "b_next": b_next.name, "c": list(c.choices)})
    return SuiteResult("split-check", True, checked)


def strassen_partitions(w_name="ones", n=7, guard=None):
    """Run the partition-layer explorer; passes when every feasible level verifies."""
    alpha = {"ones": NEG_INF, "factorial": Fraction(0)}.get(w_name)
    if alpha is None:
        alpha = as_alpha(w_name)
    w = weight_sequence(alpha, n)
    reports = partition_strassen_explore(w, n, guard)
    bad = [r for r in reports if r.feasible and not r.marginals_ok]
    detail = {"w": w_name, "n": n, "levels": [r.to_json() for r in reports]}
    return SuiteResult("strassen-partitions", not bad, len(reports), detail)


SUITES = {
    "stirling-recursion": stirling_recursion,
    "stirling-logconcave": stirling_log_concave,
    "record-last-monotone": record_last_monotone,
    "poisson-logconcave": poisson_log_concave,
    "v-recursion": v_recursion,
    "record-oracle": record_oracle,
    "efron": efron,
    "strassen-records": strassen_records,
    "split-check": split_exhaustive,
    "strassen-partitions": strassen_partitions,
}

