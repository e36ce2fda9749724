"""Deterministic Dinic max-flow on integer capacities.

Edges are scanned in insertion order, so results depend only on the order
in which the caller adds edges.
"""
from __future__ import annotations

from collections import deque


class FlowNetwork:
    def __init__(self, n_nodes: int):
        self.n_nodes = n_nodes
        self.adj = [[] for _ in range(n_nodes)]
        self.head = []   # edge id -> tail node
        self.to = []     # edge id -> head node
        self.cap = []
        self.res = []    # residual capacity; edge e ^ 1 is the reverse of e

    def add_edge(self, u: int, v: int, cap: int) -> int:
        if cap < 0:
            raise ValueError("capacities must be non-negative")
        e = len(self.to)
        for a, b, c in ((u, v, cap), (v, u, 0)):
            self.adj[a].append(len(self.to))
            self.head.append(a)
            self.to.append(b)
            self.cap.append(c)
            self.res.append(c)
        return e

    def flow(self, e: int) -> int:
        return self.cap[e] - self.res[e]

    def _levels(self, s, t, blocked):
        level = [-1] * self.n_nodes
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.to[e]
                if level[v] < 0 and self.res[e] > 0 and e not in blocked:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _push_path(self, s, t, level, it, blocked, limit):
        path, u = [], s
        res, to, adj = self.res, self.to, self.adj
        while True:
            if u == t:
                f = min(res[e] for e in path)
                if limit is not None:
                    f = min(f, limit)
                for e in path:
                    res[e] -= f
                    res[e ^ 1] += f
                return f
            edges = adj[u]
            while it[u] < len(edges):
                e = edges[it[u]]
                if res[e] > 0 and level[to[e]] == level[u] + 1 and e not in blocked:
                    break
                it[u] += 1
            else:
                if not path:
                    return 0
                level[u] = -1
                e = path.pop()
                u = to[e ^ 1]
                it[u] += 1
                continue
            path.append(e)
            u = to[e]

    def max_flow(self, s: int, t: int, limit=None, blocked=frozenset()) -> int:
        """Augment the current flow from s to t; return the amount added.

        ``limit`` caps the total augmentation; edges in ``blocked`` (either
        direction ids) are not used.
        """
        if s == t:
            raise ValueError("source and sink coincide")
        total = 0
        while limit is None or total < limit:
            level = self._levels(s, t, blocked)
            if level is None:
                break
            it = [0] * self.n_nodes
            while limit is None or total < limit:
                f = self._push_path(s, t, level, it, blocked,
                                    None if limit is None else limit - total)
                if not f:
                    break
                total += f
        return total

    def reachable(self, s: int) -> set:
        """Nodes reachable from s through edges with positive residual capacity."""
        seen, stack = {s}, [s]
        while stack:
            u = stack.pop()
            for e in self.adj[u]:
                v = self.to[e]
                if v not in seen and self.res[e] > 0:
                    seen.add(v)
                    stack.append(v)
        return seen
