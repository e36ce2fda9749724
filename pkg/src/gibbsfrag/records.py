"""Record (block-minimum) indicator vectors and their conditioned laws."""
from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, Sequence, Tuple

from .exceptions import MonotonicityError, ZeroProbabilityError
from .weights import as_alpha, as_rational, gamma_coeff, stirling_table

MAX_BITS = sys.maxsize.bit_length()  # 63 on 64-bit builds


@dataclass(frozen=True, order=True)
class RecordVector:
    """Binary vector (b_1, ..., b_n) stored as a bitmask; bit i-1 holds b_i.

    Ordering is by bitmask value, which is the canonical state order.
    """

    n: int
    bits: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_BITS:
            raise ValueError(f"n must be in [1, {MAX_BITS}], got {self.n}")
        if self.bits >> self.n:
            raise ValueError("bits set beyond position n")
        if not self.bits & 1:
            raise ValueError("b_1 must be 1: element 1 is always a record")

    @classmethod
    def from_bits(cls, seq: Iterable[int]) -> "RecordVector":
        seq = list(seq)
        mask = 0
        for i, b in enumerate(seq):
            if b not in (0, 1):
                raise ValueError(f"record entries must be 0/1, got {b!r}")
            mask |= b << i
        return cls(len(seq), mask)

    @classmethod
    def from_string(cls, text: str) -> "RecordVector":
        return cls.from_bits(int(ch) for ch in text.strip())

    @property
    def k(self) -> int:
        return bin(self.bits).count("1")

    def __getitem__(self, i: int) -> int:
        """1-based coordinate b_i."""
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return (self.bits >> (i - 1)) & 1

    def as_tuple(self) -> Tuple[int, ...]:
        return tuple((self.bits >> i) & 1 for i in range(self.n))

    @property
    def name(self) -> str:
        return "".join(map(str, self.as_tuple()))

    def __str__(self):
        return self.name

    def successors(self):
        """States covering this one: one 0 flipped to 1, in canonical order."""
        out = [RecordVector(self.n, self.bits | (1 << i))
               for i in range(self.n) if not (self.bits >> i) & 1]
        return sorted(out)

    def covers(self, other: "RecordVector") -> bool:
        """True if ``self`` is obtained from ``other`` by one 0 -> 1 flip."""
        diff = self.bits ^ other.bits
        return (self.n == other.n and other.bits & ~self.bits == 0
                and diff != 0 and diff & (diff - 1) == 0)

    def to_json(self):
        return self.name


@dataclass(frozen=True)
class LayerDistribution:
    """Exact law over states sharing one level ``k`` (ones-count or block count)."""

    k: int
    states: tuple
    probs: tuple

    def __post_init__(self):
        states, probs = tuple(self.states), tuple(Fraction(p) for p in self.probs)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "probs", probs)
        if len(states) != len(probs):
            raise ValueError("states and probs differ in length")
        if len(set(states)) != len(states):
            raise ValueError("duplicate states")
        if any(s.k != self.k for s in states):
            raise ValueError(f"every state must sit at level k={self.k}")
        if len({s.n for s in states}) > 1:
            raise ValueError("states disagree on n")
        if any(p < 0 for p in probs):
            raise ValueError("negative probability")
        if sum(probs) != 1:
            raise ValueError(f"probabilities sum to {sum(probs)}, not 1")

    @property
    def n(self) -> int:
        return self.states[0].n

    def __len__(self):
        return len(self.states)

    def prob(self, state) -> Fraction:
        return self.as_dict().get(state, Fraction(0))

    def as_dict(self) -> Dict[object, Fraction]:
        return dict(zip(self.states, self.probs))

    def items(self):
        return zip(self.states, self.probs)

    @classmethod
    def from_weights(cls, k: int, weighted) -> "LayerDistribution":
        """Normalize ``(state, weight)`` pairs, sorting states canonically."""
        weighted = sorted(weighted)
        total = sum((w for _, w in weighted), Fraction(0))
        if total == 0:
            raise ZeroProbabilityError(f"level k={k} has total weight zero")
        return cls(k, tuple(s for s, _ in weighted),
                   tuple(Fraction(w) / total for _, w in weighted))


def _check_probs(p: Sequence) -> list:
    p = [as_rational(x) for x in p]
    if not p:
        raise ValueError("empty probability vector")
    for x in p:
        if not 0 <= x <= 1:
            raise ValueError(f"probabilities must lie in [0, 1], got {x}")
    return p


def poisson_binomial_pmf(p: Sequence) -> list:
    """Exact pmf of a sum of independent Bernoulli(p_i); entry i is P(sum = i)."""
    p = _check_probs(p)
    u = [Fraction(1)]
    for q in p:
        nxt = [Fraction(0)] * (len(u) + 1)
        for i, mass in enumerate(u):
            nxt[i] += mass * (1 - q)
            nxt[i + 1] += mass * q
        u = nxt
    return u


def _layer_states(n: int, k: int):
    """All record vectors of length n with k ones, b_1 = 1, in bitmask order."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    masks = [1 | sum(1 << i for i in rest) for rest in combinations(range(1, n), k - 1)]
    return [RecordVector(n, m) for m in sorted(masks)]


def conditional_bernoulli(p: Sequence, k: int) -> LayerDistribution:
    """Law of independent Bernoulli(p_i) indicators conditioned on their sum being k.

    ``p[0]`` must be 1 (position 1 is always a record). States of zero mass
    are left out of the returned layer.
    """
    p = _check_probs(p)
    if p[0] != 1:
        raise ValueError("p_1 must equal 1 for record vectors")
    n = len(p)
    if not 1 <= k <= n:
        raise ZeroProbabilityError(f"sum of {n} indicators cannot equal {k}")
    weighted = []
    for state in _layer_states(n, k):
        mass = Fraction(1)
        for i, q in enumerate(p):
            mass *= q if (state.bits >> i) & 1 else 1 - q
            if not mass:
                break
        if mass:
            weighted.append((state, mass))
    if not weighted:
        raise ZeroProbabilityError(f"P(sum = {k}) = 0")
    return LayerDistribution.from_weights(k, weighted)


def harmonic_probs(n: int) -> list:
    """(1, 1/2, ..., 1/n): new-table probabilities of the uniform-permutation CRP."""
    return [Fraction(1, i) for i in range(1, n + 1)]


@lru_cache(maxsize=None)
def _stirling(alpha, n):
    return stirling_table(alpha, n)


def record_weight(alpha, state: RecordVector) -> Fraction:
    """Unnormalized record mass: product of gamma_{i, k_i} over i with b_{i+1} = 0."""
    mass, ones = Fraction(1), 1
    for i in range(1, state.n):
        if (state.bits >> i) & 1:
            ones += 1
        else:
            mass *= gamma_coeff(i, ones, alpha)
    return mass


def record_law(alpha, n: int, k: int) -> LayerDistribution:
    """Law of the record vector of a Gibbs partition with k blocks.

    P(B = b | K_n = k) = prod_{i<n, b_{i+1}=0} gamma_{i, k_i(b)} / S_alpha(n, k),
    where k_i(b) counts the ones among b_1..b_i.
    """
    alpha = as_alpha(alpha)
    table = _stirling(alpha, n)
    norm = table[n, k]
    states = _layer_states(n, k)
    return LayerDistribution(k, tuple(states),
                             tuple(record_weight(alpha, s) / norm for s in states))


def p_record_last(alpha, n: int, k: int) -> Fraction:
    """P(B_n = 1 | K_n = k) = S_alpha(n-1, k-1) / S_alpha(n, k)."""
    alpha = as_alpha(alpha)
    if n < 2 or not 1 <= k <= n:
        raise ValueError(f"need n >= 2 and 1 <= k <= n, got n={n}, k={k}")
    table = _stirling(alpha, n)
    return table[n - 1, k - 1] / table[n, k]


def threshold_law(alpha, n: int) -> Dict[int, Fraction]:
    """Point masses of the singleton threshold K with P(K <= k) = P(B_n = 1 | K_n = k).

    Raises MonotonicityError if the cumulative values ever decrease.
    """
    if n < 2:
        raise ValueError("threshold_law needs n >= 2")
    law, prev = {}, Fraction(0)
    for k in range(1, n + 1):
        cdf = p_record_last(alpha, n, k)
        if cdf < prev:
            raise MonotonicityError(
                f"P(B_n=1 | K_n=k) decreases at n={n}, k={k}: {prev} -> {cdf}", index=k)
        law[k] = cdf - prev
        prev = cdf
    if prev != 1:
        raise MonotonicityError(f"threshold CDF ends at {prev}, not 1", index=n)
    return law


def _check_upset(upset: frozenset, n: int):
    for s in upset:
        if s.n != n:
            raise ValueError("upset states disagree on n")
        for t in s.successors():
            if t not in upset:
                raise ValueError(f"set is not upward closed: {s} in it, {t} missing")


def efron_check(p: Sequence, upset, k: int) -> bool:
    """True iff P(upset | sum = k) <= P(upset | sum = k + 1), exactly."""
    p = _check_probs(p)
    n = len(p)
    upset = frozenset(upset)
    _check_upset(upset, n)
    lo = sum((q for s, q in conditional_bernoulli(p, k).items() if s in upset), Fraction(0))
    hi = sum((q for s, q in conditional_bernoulli(p, k + 1).items() if s in upset), Fraction(0))
    return lo <= hi


def upset_closure(generators: Iterable[RecordVector]) -> frozenset:
    """Smallest upward-closed set containing ``generators``."""
    seen, stack = set(), list(generators)
    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen.add(s)
        stack.extend(s.successors())
    return frozenset(seen)


def is_log_concave(seq: Sequence) -> bool:
    return all(seq[i] ** 2 >= seq[i - 1] * seq[i + 1] for i in range(1, len(seq) - 1))
