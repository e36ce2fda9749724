"""Chinese restaurant construction and the fragmentation samplers.

Customer i either opens a new table (record indicator b_i = 1) or sits
immediately to the left of customer C_i, with C_i in 1..i-1. Tables are
cycles of a permutation; each table is stored as a list read clockwise,
so "to the left of x" means "just before x in the list".
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

from .coupling import chain_couplings, sample_next
from .exceptions import MonotonicityError
from .lattice import SetPartition
from .records import RecordVector, conditional_bernoulli, harmonic_probs, threshold_law
from .rng import ExactSampler, check_random_state
from .weights import as_alpha


@dataclass(frozen=True)
class SeatingChoices:
    """Neighbour choices (C_2, ..., C_n); ``choices[i-2]`` is C_i."""

    n: int
    choices: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "choices", tuple(self.choices))
        if len(self.choices) != self.n - 1:
            raise ValueError(f"need {self.n - 1} choices, got {len(self.choices)}")
        for i, c in enumerate(self.choices, start=2):
            if not 1 <= c <= i - 1:
                raise ValueError(f"C_{i} must lie in [1, {i - 1}], got {c}")

    def __getitem__(self, i: int) -> int:
        return self.choices[i - 2]

    @classmethod
    def sample(cls, n: int, seed) -> "SeatingChoices":
        rng = check_random_state(seed)
        return cls(n, tuple(rng.randrange(1, i) for i in range(2, n + 1)))


def _seat(bits: int, n: int, choices: Sequence[int]) -> List[List[int]]:
    tables, where = [[1]], {1: 0}
    for i in range(2, n + 1):
        if (bits >> (i - 1)) & 1:
            where[i] = len(tables)
            tables.append([i])
        else:
            c = choices[i - 2]
            t = tables[where[c]]
            t.insert(t.index(c), i)
            where[i] = where[c]
    return tables


def _check_inputs(b: RecordVector, c: SeatingChoices):
    if b.n != c.n:
        raise ValueError(f"record vector has n={b.n} but seating choices have n={c.n}")


def crp_permutation(b: RecordVector, c: SeatingChoices) -> List[List[int]]:
    """Tables as cycles, each read clockwise starting from its founder."""
    _check_inputs(b, c)
    return _seat(b.bits, b.n, c.choices)


def crp_partition(b: RecordVector, c: SeatingChoices) -> SetPartition:
    """Partition of [n] into tables produced by records ``b`` and choices ``c``."""
    _check_inputs(b, c)
    return SetPartition(_seat(b.bits, b.n, c.choices))


def split_check(b: RecordVector, b_next: RecordVector, c: SeatingChoices) -> bool:
    """True iff raising ``b`` to ``b_next`` splits exactly one table in two."""
    if not b_next.covers(b):
        raise ValueError(f"{b_next} does not cover {b}")
    return crp_partition(b_next, c).covers(crp_partition(b, c))


@dataclass(frozen=True)
class FragmentationPath:
    """Partitions Pi_1, ..., Pi_n of [n]; Pi_{k+1} splits one block of Pi_k."""

    n: int
    partitions: Tuple[SetPartition, ...]

    def validate(self):
        ps = self.partitions
        if len(ps) != self.n:
            raise ValueError(f"expected {self.n} partitions, got {len(ps)}")
        for k, p in enumerate(ps, start=1):
            if p.n != self.n or p.k != k:
                raise ValueError(f"level {k} holds {p}")
        for k in range(1, self.n):
            if not ps[k].covers(ps[k - 1]):
                raise ValueError(f"{ps[k]} is not a one-block split of {ps[k - 1]}")
        return True

    def to_json(self):
        return [p.to_json() for p in self.partitions]


@dataclass(frozen=True)
class PartitionTriangle:
    """Rows m = 1..n, row m a fragmentation path on [m]."""

    rows: Tuple[FragmentationPath, ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    def validate(self):
        for m, row in enumerate(self.rows, start=1):
            if row.n != m:
                raise ValueError(f"row {m} has n={row.n}")
            row.validate()
        for m in range(2, self.n + 1):
            prev = self.rows[m - 2].partitions
            for k, p in enumerate(self.rows[m - 1].partitions, start=1):
                singleton = p.rgs[-1] not in p.rgs[:-1]
                restricted = SetPartition.from_rgs(p.rgs[:-1])
                want = prev[k - 2] if singleton else prev[k - 1]
                if restricted != want:
                    raise ValueError(f"row {m} level {k} is inconsistent with row {m - 1}")
        return True

    def to_json(self):
        return [row.to_json() for row in self.rows]


@lru_cache(maxsize=None)
def _crp_couplings(n: int, extreme=None):
    p = harmonic_probs(n)
    return chain_couplings([conditional_bernoulli(p, k) for k in range(1, n + 1)], extreme)


def _walk(couplings, start, rng):
    chain = [start]
    for c in couplings:
        chain.append(sample_next(c, chain[-1], rng))
    return chain


def sample_fragmentation_crp(n: int, seed, extreme=None) -> FragmentationPath:
    """Fragmentation of a uniform-permutation partition via coupled record chains.

    The seating choices are drawn first and shared by every level; the
    record vectors B^1 < ... < B^n follow the Markov chain of adjacent-layer
    couplings. ``extreme`` ('max' or 'min') swaps the default flow coupling
    for an extremal one.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = check_random_state(seed)
    c = SeatingChoices.sample(n, rng)
    chain = _walk(_crp_couplings(n, extreme), RecordVector(n, 1), rng)
    return FragmentationPath(n, tuple(SetPartition(_seat(b.bits, n, c.choices)) for b in chain))


@lru_cache(maxsize=None)
def _threshold_sampler(alpha, m: int) -> ExactSampler:
    law = threshold_law(alpha, m)
    return ExactSampler(list(law), list(law.values()))


def sample_fragmentation_recursive(n: int, seed) -> PartitionTriangle:
    """Triangle of fragmentation paths built by inserting element m = 2..n.

    For each m a threshold K_m and a neighbour C_m are drawn independently of
    the earlier rows; levels k >= K_m make {m} a singleton, lower levels put
    m in the block of C_m.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = check_random_state(seed)
    row = [(0,)]
    rows = [row]
    zero = as_alpha(0)
    for m in range(2, n + 1):
        threshold = _threshold_sampler(zero, m).draw(rng)
        c = rng.randrange(1, m)
        new = []
        for k in range(1, m + 1):
            if k >= threshold:
                rgs = row[k - 2]
                new.append(rgs + (k - 1,))
            else:
                rgs = row[k - 1]
                new.append(rgs + (rgs[c - 1],))
        row = new
        rows.append(row)
    return PartitionTriangle(tuple(
        FragmentationPath(m, tuple(SetPartition.from_rgs(r) for r in rw))
        for m, rw in enumerate(rows, start=1)))


def sample_record_chain(alpha, n: int, seed) -> List[RecordVector]:
    """Monotone record vectors B^1 <= ... <= B^n with level-k law ``record_law(alpha, n, k)``.

    Built recursively in n: at size m a threshold K_m is drawn; levels
    k >= K_m append a record at position m to level k-1 of size m-1, the
    others append a non-record to level k.
    """
    alpha = as_alpha(alpha)
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = check_random_state(seed)
    chain = [1]
    for m in range(2, n + 1):
        threshold = _threshold_sampler(alpha, m).draw(rng)
        top = 1 << (m - 1)
        chain = [chain[k - 2] | top if k >= threshold else chain[k - 1]
                 for k in range(1, m + 1)]
    out = [RecordVector(n, bits) for bits in chain]
    for lo, hi in zip(out, out[1:]):
        if not hi.covers(lo):
            raise MonotonicityError(f"record chain not monotone: {lo} -> {hi}")
    return out
