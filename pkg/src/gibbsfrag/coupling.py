"""Strassen feasibility and monotone couplings between adjacent layers.

A coupling of a level-k law with a level-(k+1) law is a joint law supported
on cover pairs (b, b') with b' obtained from b by a single 0 -> 1 flip
(record vectors) or a single block split (set partitions). Existence is
decided by an exact max-flow on source -> lower -> upper -> sink; when it
fails, the min cut yields a subset C of lower states whose mass exceeds
the mass of its neighbourhood N(C).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import lcm
from typing import Dict, List, Tuple, Union

from .exceptions import InfeasibleError
from .flow import FlowNetwork
from .records import LayerDistribution
from .rng import ExactSampler, check_random_state


@dataclass(frozen=True)
class CoverGraph:
    lower: tuple
    upper: tuple
    edges: Tuple[Tuple[object, object], ...]

    def neighbours(self, state) -> list:
        return [v for u, v in self.edges if u == state]

    def neighbourhood(self, subset) -> frozenset:
        subset = set(subset)
        return frozenset(v for u, v in self.edges if u in subset)


@dataclass(frozen=True)
class ViolationCertificate:
    """A subset C of lower states with p^k(C) > p^{k+1}(N(C))."""

    subset: frozenset
    neighbourhood: frozenset
    lhs: Fraction
    rhs: Fraction

    def __post_init__(self):
        if not self.lhs > self.rhs:
            raise ValueError("certificate must satisfy lhs > rhs")

    def to_json(self):
        return {
            "subset": [s.to_json() for s in sorted(self.subset)],
            "neighbourhood": [s.to_json() for s in sorted(self.neighbourhood)],
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
        }


@dataclass(frozen=True)
class MonotoneCoupling:
    lower: LayerDistribution
    upper: LayerDistribution
    graph: CoverGraph
    joint: Dict[Tuple[object, object], Fraction] = field(repr=False)

    def __getitem__(self, edge) -> Fraction:
        return self.joint.get(edge, Fraction(0))

    def support(self):
        return [e for e in self.graph.edges if self.joint.get(e, 0) > 0]

    def check(self):
        """Raise ValueError unless marginals, support and total mass are exact."""
        edge_set = set(self.graph.edges)
        rows = {s: Fraction(0) for s in self.lower.states}
        cols = {s: Fraction(0) for s in self.upper.states}
        for (u, v), mass in self.joint.items():
            if mass < 0:
                raise ValueError(f"negative mass on {u}->{v}")
            if mass and (u, v) not in edge_set:
                raise ValueError(f"mass on non-cover pair {u}->{v}")
            if mass and not v.covers(u):
                raise ValueError(f"{v} does not cover {u}")
            rows[u] += mass
            cols[v] += mass
        for layer, sums in ((self.lower, rows), (self.upper, cols)):
            for s, p in layer.items():
                if sums[s] != p:
                    raise ValueError(f"marginal mismatch at {s}: {sums[s]} != {p}")
        return True

    @cached_property
    def _kernel(self):
        rows = {}
        for (u, v), mass in self.joint.items():
            if mass > 0:
                rows.setdefault(u, []).append((v, mass))
        return {u: ExactSampler([v for v, _ in succ], [m for _, m in succ])
                for u, succ in rows.items()}

    def kernel(self, state) -> Dict[object, Fraction]:
        """Conditional law of the upper state given the lower one."""
        if state not in self._kernel:
            raise ValueError(f"{state} has no mass in the lower marginal")
        row = {v: m for (u, v), m in self.joint.items() if u == state and m > 0}
        total = sum(row.values())
        return {v: m / total for v, m in row.items()}

    def to_json(self, with_float=False):
        out = {
            "k": self.lower.k,
            "edges": [],
        }
        for u, v in self.graph.edges:
            mass = self[u, v]
            item = {"from": u.to_json(), "to": v.to_json(), "mass": str(mass)}
            if with_float:
                item["mass_approx"] = float(mass)
            out["edges"].append(item)
        return out


def build_cover_graph(lower: LayerDistribution, upper: LayerDistribution) -> CoverGraph:
    """Cover edges from every lower state to every upper state it covers."""
    if lower.n != upper.n:
        raise ValueError(f"layers disagree on n: {lower.n} vs {upper.n}")
    if upper.k != lower.k + 1:
        raise ValueError(f"layers must be adjacent, got k={lower.k} and k={upper.k}")
    upper_set = set(upper.states)
    edges = []
    for u in lower.states:
        edges.extend((u, v) for v in u.successors() if v in upper_set)
    return CoverGraph(lower.states, upper.states, tuple(edges))


class _Instance:
    """Scaled integer flow network for one pair of layers."""

    def __init__(self, lower, upper, graph):
        if graph.lower != lower.states or graph.upper != upper.states:
            raise ValueError("graph does not match the layers")
        self.lower, self.upper, self.graph = lower, upper, graph
        self.scale = lcm(*(p.denominator for p in lower.probs + upper.probs))
        nl, nu = len(lower), len(upper)
        self.source, self.sink = nl + nu, nl + nu + 1
        self.lower_index = {s: i for i, s in enumerate(lower.states)}
        self.upper_index = {s: nl + j for j, s in enumerate(upper.states)}
        net = FlowNetwork(nl + nu + 2)
        for s, p in lower.items():
            net.add_edge(self.source, self.lower_index[s], int(p * self.scale))
        infinite = self.scale + 1
        self.edge_ids = {}
        for u, v in graph.edges:
            self.edge_ids[u, v] = net.add_edge(self.lower_index[u], self.upper_index[v], infinite)
        for s, p in upper.items():
            net.add_edge(self.upper_index[s], self.sink, int(p * self.scale))
        self.net = net

    def solve(self) -> int:
        return self.net.max_flow(self.source, self.sink)

    def coupling(self) -> MonotoneCoupling:
        joint = {e: Fraction(self.net.flow(i), self.scale) for e, i in self.edge_ids.items()}
        return MonotoneCoupling(self.lower, self.upper, self.graph, joint)

    def certificate(self) -> ViolationCertificate:
        reach = self.net.reachable(self.source)
        subset = frozenset(s for s, i in self.lower_index.items() if i in reach)
        nbhd = self.graph.neighbourhood(subset)
        lp, up = self.lower.as_dict(), self.upper.as_dict()
        return ViolationCertificate(
            subset, nbhd,
            sum((lp[s] for s in subset), Fraction(0)),
            sum((up[s] for s in nbhd), Fraction(0)),
        )


def _check_normalized(*layers):
    for layer in layers:
        if sum(layer.probs) != 1:
            raise ValueError("layers must be normalized")


def strassen_feasible(lower, upper, graph=None) -> Union[MonotoneCoupling, ViolationCertificate]:
    """Return a monotone coupling if one exists, else a violation certificate."""
    _check_normalized(lower, upper)
    if graph is None:
        graph = build_cover_graph(lower, upper)
    inst = _Instance(lower, upper, graph)
    if inst.solve() == inst.scale:
        return inst.coupling()
    return inst.certificate()


def extreme_coupling(lower, upper, graph, target_edge, direction: str = "max") -> MonotoneCoupling:
    """Coupling with extremal mass on ``target_edge``.

    A feasible flow is found first; the target edge is then pushed to its
    extreme by routing the largest possible circulation through it in the
    residual network (cycles that use the edge forward for ``max``,
    backward for ``min``). The target coordinate is optimal over the whole
    coupling polytope; other coordinates are whatever the flow leaves.
    """
    if direction not in ("max", "min"):
        raise ValueError("direction must be 'max' or 'min'")
    if graph is None:
        graph = build_cover_graph(lower, upper)
    _check_normalized(lower, upper)
    inst = _Instance(lower, upper, graph)
    if inst.solve() != inst.scale:
        raise InfeasibleError(inst.certificate(), level=lower.k)
    target_edge = tuple(target_edge)
    if target_edge not in inst.edge_ids:
        raise ValueError(f"{target_edge[0]} -> {target_edge[1]} is not a cover edge")
    e = inst.edge_ids[target_edge]
    a, x = inst.lower_index[target_edge[0]], inst.upper_index[target_edge[1]]
    net = inst.net
    blocked = frozenset((e, e ^ 1))
    if direction == "max":
        extra = net.max_flow(x, a, blocked=blocked)
        net.res[e] -= extra
        net.res[e ^ 1] += extra
    else:
        less = net.max_flow(a, x, limit=net.flow(e), blocked=blocked)
        net.res[e] += less
        net.res[e ^ 1] -= less
    coupling = inst.coupling()
    coupling.check()
    return coupling


def chain_couplings(layers: List[LayerDistribution], extreme=None) -> List[MonotoneCoupling]:
    """One coupling per adjacent pair of layers (k=1..n), combined Markovianly.

    ``extreme`` may be 'max' or 'min' to use, at each level, the coupling
    extremal on the first cover edge in canonical order.
    """
    out = []
    for lower, upper in zip(layers, layers[1:]):
        graph = build_cover_graph(lower, upper)
        if extreme is None:
            result = strassen_feasible(lower, upper, graph)
        else:
            try:
                result = extreme_coupling(lower, upper, graph, graph.edges[0], extreme)
            except InfeasibleError as err:
                result = err.certificate
        if isinstance(result, ViolationCertificate):
            raise InfeasibleError(result, level=lower.k)
        out.append(result)
    return out


def sample_next(coupling: MonotoneCoupling, current, seed=None):
    """Draw the next-level state from the coupling's conditional kernel."""
    rng = check_random_state(seed)
    if current not in coupling._kernel:
        raise ValueError(f"{current} has no mass in the lower marginal")
    return coupling._kernel[current].draw(rng)


def brute_force_strassen(lower, upper, graph=None):
    """Check the Strassen inequality over every subset of lower states.

    Returns None if it holds everywhere, else the first violating subset.
    Exponential; meant for small layers.
    """
    if graph is None:
        graph = build_cover_graph(lower, upper)
    lp, up = lower.as_dict(), upper.as_dict()
    states = list(lower.states)
    for r in range(1, len(states) + 1):
        for subset in combinations(states, r):
            nbhd = graph.neighbourhood(subset)
            if sum(lp[s] for s in subset) > sum((up[s] for s in nbhd), Fraction(0)):
                return frozenset(subset)
    return None


def coupling_to_dot(couplings, labels=None, with_float=False) -> str:
    """Layered digraph of one or more couplings; nodes carry their marginal mass."""
    if isinstance(couplings, MonotoneCoupling):
        couplings = [couplings]
    labels = labels or {}
    lines = ["digraph coupling {", "  rankdir=TB;", "  node [shape=box];"]
    layers = [couplings[0].lower] + [c.upper for c in couplings]
    for layer in layers:
        ids = []
        for s, p in layer.items():
            node = f"k{layer.k}_{s.name}"
            ids.append(f'"{node}"')
            tag = f"{labels[s]}: " if s in labels else ""
            extra = f" (~{float(p):.6g})" if with_float else ""
            lines.append(f'  "{node}" [label="{tag}{s.name}\\n{p}{extra}"];')
        lines.append("  { rank=same; " + " ".join(ids) + " }")
    for c in couplings:
        for u, v in c.graph.edges:
            mass = c[u, v]
            lines.append(f'  "k{c.lower.k}_{u.name}" -> "k{c.upper.k}_{v.name}" '
                         f'[label="{mass}"{", style=dashed" if not mass else ""}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
