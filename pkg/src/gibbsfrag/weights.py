"""Exact weight sequences, generalized Stirling numbers and v-arrays.

Everything here works on :class:`fractions.Fraction`; no floats are used.
The parameter ``alpha`` is either a Fraction strictly below 1 or the
tagged value :data:`NEG_INF`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, Optional, Sequence, Tuple, Union


class _NegInf:
    """Tag for alpha = -infinity (unit weights)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INF"

    def __str__(self):
        return "-inf"

    def __reduce__(self):
        return (_NegInf, ())


NEG_INF = _NegInf()

Alpha = Union[Fraction, _NegInf]


def as_alpha(value) -> Alpha:
    """Validate and normalize an alpha value.

    Accepts :data:`NEG_INF`, the strings ``"-inf"``/``"-infinity"``, or
    anything :class:`Fraction` understands (ints, ``"-1/2"``, ``"0.5"``).
    Floats are rejected to keep arithmetic exact.
    """
    if value is NEG_INF:
        return NEG_INF
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("-inf", "-infinity", "neg_inf"):
            return NEG_INF
        value = Fraction(text)
    elif isinstance(value, float):
        raise TypeError("alpha must be exact (int, Fraction or str), not float")
    else:
        value = Fraction(value)
    if value >= 1:
        raise ValueError(f"alpha must be < 1, got {value}")
    return value


def as_rational(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("expected an exact rational, not float")
    return Fraction(value)


def rising_factorial(x, m: int, beta) -> Fraction:
    """Return prod_{j=1}^{m} (x + (j-1) beta); the empty product is 1."""
    if m < 0:
        raise ValueError("m must be non-negative")
    x, beta = as_rational(x), as_rational(beta)
    out = Fraction(1)
    for j in range(m):
        out *= x + j * beta
    return out


def weight(alpha: Alpha, j: int) -> Fraction:
    """The block weight w_j = (1 - alpha)_{j-1 up 1}, or 1 when alpha is -inf."""
    if j < 1:
        raise ValueError("block sizes start at 1")
    if alpha is NEG_INF:
        return Fraction(1)
    return rising_factorial(1 - alpha, j - 1, 1)


def weight_sequence(alpha: Alpha, n: int) -> list:
    """List ``w`` with ``w[j-1] == w_j`` for j = 1..n."""
    alpha = as_alpha(alpha)
    if alpha is NEG_INF:
        return [Fraction(1)] * n
    out, w = [], Fraction(1)
    for j in range(1, n + 1):
        out.append(w)
        w *= j - alpha
    return out


def gamma_coeff(n: int, k: int, alpha: Alpha) -> Fraction:
    """Recursion coefficient: n - alpha*k, or k when alpha is -inf."""
    if not 1 <= k <= n + 1:
        raise ValueError(f"gamma_coeff needs 1 <= k <= n+1, got n={n}, k={k}")
    if alpha is NEG_INF:
        return Fraction(k)
    return n - alpha * k


@dataclass(frozen=True)
class WeightSystem:
    alpha: Alpha
    theta: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        if self.theta is not None:
            theta = as_rational(self.theta)
            object.__setattr__(self, "theta", theta)
            if self.alpha is not NEG_INF and not theta > -self.alpha:
                raise ValueError(f"theta must exceed -alpha = {-self.alpha}, got {theta}")

    def w(self, j: int) -> Fraction:
        return weight(self.alpha, j)

    def weights(self, n: int) -> list:
        return weight_sequence(self.alpha, n)

    def gamma(self, n: int, k: int) -> Fraction:
        return gamma_coeff(n, k, self.alpha)


@dataclass(frozen=True)
class StirlingTable:
    """Triangle of generalized Stirling numbers S_alpha(n, k), 1 <= k <= n <= max_n.

    Indexing with ``table[n, k]`` returns 0 outside the triangle, which is
    how the boundary conditions S(n, 0) = S(n, n+1) = 0 are expressed.
    """

    alpha: Alpha
    max_n: int
    entries: Dict[Tuple[int, int], Fraction] = field(repr=False)

    def __getitem__(self, nk):
        n, k = nk
        if not 1 <= n <= self.max_n:
            raise IndexError(f"n={n} outside table (max_n={self.max_n})")
        return self.entries.get((n, k), Fraction(0))

    def row(self, n: int) -> list:
        return [self[n, k] for k in range(1, n + 1)]

    def first_violation(self):
        """First cell (n, k) breaking the boundary or recursion, or None."""
        if self.entries.get((1, 1)) != 1:
            return (1, 1)
        for n in range(1, self.max_n):
            for k in range(1, n + 2):
                want = gamma_coeff(n, k, self.alpha) * self[n, k] + self[n, k - 1]
                if self[n + 1, k] != want:
                    return (n + 1, k)
        return None

    def with_cell(self, n: int, k: int, value) -> "StirlingTable":
        entries = dict(self.entries)
        entries[n, k] = Fraction(value)
        return StirlingTable(self.alpha, self.max_n, entries)


def stirling_table(alpha, max_n: int) -> StirlingTable:
    """Build S_alpha(n, k) bottom-up via S(n+1,k) = gamma_{n,k} S(n,k) + S(n,k-1)."""
    alpha = as_alpha(alpha)
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    entries = {(1, 1): Fraction(1)}
    for n in range(1, max_n):
        for k in range(1, n + 2):
            prev = entries.get((n, k), 0)
            below = entries.get((n, k - 1), 0)
            entries[n + 1, k] = gamma_coeff(n, k, alpha) * prev + below
    return StirlingTable(alpha, max_n, entries)


def bell_polynomial(n: int, k: int, w: Sequence) -> Fraction:
    """Partial Bell polynomial B_{n,k}(w), with ``w[j-1] = w_j``.

    Conditions on the size j of the block holding element 1:
    B_{n,k} = sum_j C(n-1, j-1) w_j B_{n-j,k-1}.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    if len(w) < n:
        raise ValueError(f"weight sequence too short: need {n}, got {len(w)}")
    w = [as_rational(x) for x in w[:n]]
    # table[m][j] = B_{m,j}
    table = [[Fraction(0)] * (k + 1) for _ in range(n + 1)]
    table[0][0] = Fraction(1)
    for j in range(1, k + 1):
        for m in range(j, n - (k - j) + 1):
            table[m][j] = sum(
                (comb(m - 1, s - 1) * w[s - 1] * table[m - s][j - 1]
                 for s in range(1, m - j + 2)),
                Fraction(0),
            )
    return table[n][k]


def v_array(alpha, theta, max_n: int) -> Dict[Tuple[int, int], Fraction]:
    """v_{n,k} = (theta+alpha)_{k-1 up alpha} / (theta+1)_{n-1 up 1} for the (alpha, theta) family."""
    ws = WeightSystem(alpha, theta)
    if ws.alpha is NEG_INF or ws.theta is None:
        raise ValueError("v_array needs a finite alpha and a theta")
    a, t = ws.alpha, ws.theta
    num = [rising_factorial(t + a, k - 1, a) for k in range(1, max_n + 1)]
    den = [rising_factorial(t + 1, n - 1, 1) for n in range(1, max_n + 1)]
    return {(n, k): num[k - 1] / den[n - 1]
            for n in range(1, max_n + 1) for k in range(1, n + 1)}


def verify_v_recursion(v, alpha, max_n: int):
    """Check v_{1,1} = 1 and v_{n,k} = gamma_{n,k} v_{n+1,k} + v_{n+1,k+1}.

    Returns ``(ok, cell)`` where ``cell`` is the first failing (n, k) or None.
    """
    alpha = as_alpha(alpha)
    if v.get((1, 1)) != 1:
        return False, (1, 1)
    for n in range(1, max_n):
        for k in range(1, n + 1):
            try:
                rhs = gamma_coeff(n, k, alpha) * v[n + 1, k] + v[n + 1, k + 1]
                ok = v[n, k] == rhs
            except KeyError:
                ok = False
            if not ok:
                return False, (n, k)
    return True, None


def block_count_distribution(alpha, theta, n: int) -> Dict[int, Fraction]:
    """Law of the block count: P(K_n = k) = v_{n,k} S_alpha(n, k)."""
    v = v_array(alpha, theta, n)
    table = stirling_table(alpha, n)
    return {k: v[n, k] * table[n, k] for k in range(1, n + 1)}
