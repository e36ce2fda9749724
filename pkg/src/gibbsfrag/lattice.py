"""Set partitions of [n]: enumeration, exact Gibbs laws and Strassen exploration.

Partitions are encoded canonically by restricted growth strings (RGS):
element i gets the 0-based label of its block, blocks numbered by their
minimum element.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterator, List, Optional, Sequence

from .coupling import MonotoneCoupling, ViolationCertificate, build_cover_graph, strassen_feasible
from .exceptions import GuardExceeded
from .records import LayerDistribution, RecordVector
from .weights import as_rational

DEFAULT_GUARD = 5_000_000
_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


@total_ordering
class SetPartition:
    """Partition of [n] into nonempty blocks, kept in canonical form."""

    __slots__ = ("rgs", "_hash")

    def __init__(self, blocks: Sequence[Sequence[int]]):
        blocks = [sorted(b) for b in blocks]
        if any(not b for b in blocks):
            raise ValueError("blocks must be nonempty")
        blocks.sort(key=lambda b: b[0])
        elems = sorted(x for b in blocks for x in b)
        if elems != list(range(1, len(elems) + 1)):
            raise ValueError("blocks must be disjoint and cover 1..n")
        labels = [0] * len(elems)
        for j, b in enumerate(blocks):
            for x in b:
                labels[x - 1] = j
        self._set_rgs(tuple(labels))

    def _set_rgs(self, rgs):
        self.rgs = rgs
        self._hash = hash(rgs)

    @classmethod
    def from_rgs(cls, rgs: Sequence[int]) -> "SetPartition":
        rgs = tuple(rgs)
        top = -1
        for label in rgs:
            if label < 0 or label > top + 1:
                raise ValueError(f"not a restricted growth string: {rgs}")
            top = max(top, label)
        obj = cls.__new__(cls)
        obj._set_rgs(rgs)
        return obj

    @property
    def n(self) -> int:
        return len(self.rgs)

    @property
    def k(self) -> int:
        return max(self.rgs) + 1 if self.rgs else 0

    @property
    def blocks(self) -> tuple:
        out = [[] for _ in range(self.k)]
        for i, label in enumerate(self.rgs, start=1):
            out[label].append(i)
        return tuple(tuple(b) for b in out)

    @property
    def name(self) -> str:
        return "".join(_DIGITS[x] for x in self.rgs)

    def __str__(self):
        return "|".join(",".join(map(str, b)) for b in self.blocks)

    def __repr__(self):
        return f"SetPartition({self})"

    def __eq__(self, other):
        return isinstance(other, SetPartition) and self.rgs == other.rgs

    def __lt__(self, other):
        return (self.n, self.rgs) < (other.n, other.rgs)

    def __hash__(self):
        return self._hash

    def __getstate__(self):
        return self.rgs

    def __setstate__(self, rgs):
        self._set_rgs(rgs)

    def successors(self) -> List["SetPartition"]:
        """Every partition obtained by splitting one block in two, canonically sorted."""
        out = []
        blocks = self.blocks
        for j, block in enumerate(blocks):
            rest = block[1:]
            # the part holding the block minimum stays; any nonempty proper subset of rest leaves
            for mask in range(1, 1 << len(rest)):
                moved = {x for i, x in enumerate(rest) if (mask >> i) & 1}
                new = [b for i, b in enumerate(blocks) if i != j]
                new.append([x for x in block if x not in moved])
                new.append(sorted(moved))
                out.append(SetPartition(new))
        return sorted(out)

    def covers(self, other: "SetPartition") -> bool:
        """True if ``self`` arises from ``other`` by splitting one block."""
        if self.n != other.n or self.k != other.k + 1:
            return False
        parent = {}
        for mine, theirs in zip(self.rgs, other.rgs):
            if parent.setdefault(mine, theirs) != theirs:
                return False
        return True

    def to_json(self):
        return [list(b) for b in self.blocks]


def record_set(partition: SetPartition) -> RecordVector:
    """Indicator vector of block minima."""
    seen, mask = set(), 0
    for i, label in enumerate(partition.rgs):
        if label not in seen:
            seen.add(label)
            mask |= 1 << i
    return RecordVector(partition.n, mask)


def _rgs_iter(n: int, k: int):
    """Restricted growth strings of length n using exactly k labels, lexicographically."""
    rgs = [0] * n

    def rec(i, top):
        # labels 0..top used so far; need k-1-top more new labels in n-i slots
        if i == n:
            if top == k - 1:
                yield tuple(rgs)
            return
        for label in range(0, min(top + 1, k - 1) + 1):
            new_top = max(top, label)
            if k - 1 - new_top > n - i - 1:
                continue
            rgs[i] = label
            yield from rec(i + 1, new_top)

    if n == 0:
        return
    yield from rec(1, 0)


def enumerate_partitions(n: int, k: int) -> Iterator[SetPartition]:
    """Each partition of [n] into k blocks once, in RGS lexicographic order."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    for rgs in _rgs_iter(n, k):
        yield SetPartition.from_rgs(rgs)


def stirling2(n: int, k: int) -> int:
    """Number of partitions of [n] into k blocks (used for size guards)."""
    row = [1] + [0] * k
    for m in range(1, n + 1):
        for j in range(min(m, k), 0, -1):
            row[j] = j * row[j] + row[j - 1]
        row[0] = 0
    return row[k]


def _partition_weight(partition: SetPartition, w) -> Fraction:
    sizes = [0] * partition.k
    for label in partition.rgs:
        sizes[label] += 1
    out = Fraction(1)
    for s in sizes:
        out *= w[s - 1]
    return out


def _check_w(w, n):
    if len(w) < n:
        raise ValueError(f"weight sequence too short: need {n}, got {len(w)}")
    w = [as_rational(x) for x in w]
    if any(x <= 0 for x in w[:n]):
        raise ValueError("weights must be positive")
    return w


def gibbs_partition_law(w: Sequence, n: int, k: int) -> LayerDistribution:
    """Gibbs(w) law on partitions of [n] with k blocks, by full enumeration."""
    w = _check_w(w, n)
    weighted = [(p, _partition_weight(p, w)) for p in enumerate_partitions(n, k)]
    return LayerDistribution.from_weights(k, weighted)


def enumeration_bell(n: int, k: int, w: Sequence) -> Fraction:
    """Partial Bell polynomial by summing over every partition (oracle)."""
    w = [as_rational(x) for x in w]
    return sum((_partition_weight(p, w) for p in enumerate_partitions(n, k)), Fraction(0))


def record_law_oracle(w: Sequence, n: int, k: int) -> LayerDistribution:
    """Pushforward of the Gibbs(w) partition law under ``record_set``."""
    w = _check_w(w, n)
    masses = {}
    for p in enumerate_partitions(n, k):
        r = record_set(p)
        masses[r] = masses.get(r, Fraction(0)) + _partition_weight(p, w)
    return LayerDistribution.from_weights(k, masses.items())


def resolve_guard(guard: Optional[int] = None) -> int:
    if guard is not None:
        return guard
    env = os.environ.get("GIBBSFRAG_GUARD")
    return int(env) if env else DEFAULT_GUARD


@dataclass(frozen=True)
class LevelReport:
    k: int
    feasible: bool
    coupling: Optional[MonotoneCoupling] = None
    certificate: Optional[ViolationCertificate] = None
    marginals_ok: Optional[bool] = None

    def to_json(self):
        out = {"k": self.k, "feasible": self.feasible}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        out["coupling_edge_count"] = len(self.coupling.support()) if self.coupling else 0
        if self.marginals_ok is not None:
            out["marginals_verified"] = self.marginals_ok
        return out


def partition_strassen_explore(w: Sequence, n: int, guard: Optional[int] = None) -> List[LevelReport]:
    """Strassen feasibility of each pair of Gibbs(w) partition layers k -> k+1."""
    limit = resolve_guard(guard)
    for k in range(1, n + 1):
        size = stirling2(n, k)
        if size > limit:
            raise GuardExceeded(f"layer n={n}, k={k} has {size} states, guard is {limit}")
    layers = [gibbs_partition_law(w, n, k) for k in range(1, n + 1)]
    reports = []
    for lower, upper in zip(layers, layers[1:]):
        result = strassen_feasible(lower, upper, build_cover_graph(lower, upper))
        if isinstance(result, MonotoneCoupling):
            try:
                ok = result.check()
            except ValueError:
                ok = False
            reports.append(LevelReport(lower.k, True, coupling=result, marginals_ok=ok))
        else:
            reports.append(LevelReport(lower.k, False, certificate=result))
    return reports
