"""Coupling graphs, shortest paths, Steiner trees and instance generators.

The approximate Steiner tree grows breadth-first search waves outward from
every terminal at once; when two waves meet, the meeting path is merged into
a single super-terminal (union-find, smallest index as representative) and
the search restarts.  An exact Dreyfus-Wagner solver is provided as a test
oracle for small instances.

All tie-breaking (BFS frontier order, collision choice, equal-length paths)
prefers the lowest node index, so every result is deterministic.
"""

from __future__ import annotations

import heapq
import importlib.resources
import random
import re
from dataclasses import dataclass, field


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class ConnectivityGraph:
    """Undirected, connected, unit-weight coupling graph."""

    node_count: int
    edges: frozenset[tuple[int, int]]
    name: str = "graph"
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = frozenset(_norm_edge(u, v) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"edge ({u},{v}) out of range")
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(ns)) for ns in adj))
        if self.node_count > 1:
            seen = self._bfs_reach(0)
            if len(seen) != self.node_count:
                raise ValueError("graph is not connected")

    def _bfs_reach(self, start: int) -> set[int]:
        seen = {start}
        queue = [start]
        while queue:
            u = queue.pop()
            for v in self._adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self._adj[u]

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


@dataclass(frozen=True)
class SteinerTree:
    """A tree inside a host graph spanning a terminal set.

    Nodes of the tree that are not terminals are Steiner nodes; the root is
    a distinguished terminal (the elimination pivot).
    """

    graph: ConnectivityGraph
    terminals: frozenset[int]
    root: int
    tree_edges: frozenset[tuple[int, int]]

    @property
    def nodes(self) -> frozenset[int]:
        if not self.tree_edges:
            return frozenset({self.root})
        return frozenset(n for e in self.tree_edges for n in e)

    @property
    def steiner_nodes(self) -> frozenset[int]:
        return self.nodes - self.terminals

    @property
    def weight(self) -> int:
        return len(self.tree_edges)

    def validate(self) -> None:
        """Check the structural invariants; raises AssertionError on failure."""
        assert self.root in self.terminals, "root must be a terminal"
        assert self.tree_edges <= self.graph.edges, "tree edge not in host graph"
        nodes = self.nodes
        assert self.terminals <= nodes, "terminal missing from tree"
        assert len(self.tree_edges) == len(nodes) - 1, "edge count is not |nodes|-1"
        # Connectivity of the edge-induced subgraph.
        adj: dict[int, list[int]] = {n: [] for n in nodes}
        for u, v in self.tree_edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {self.root}
        stack = [self.root]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        assert seen == nodes, "tree edges do not form a connected subgraph"

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {n: [] for n in self.nodes}
        for u, v in self.tree_edges:
            adj[u].append(v)
            adj[v].append(u)
        return {n: sorted(ns) for n, ns in adj.items()}


def shortest_path(g: ConnectivityGraph, a: int, b: int) -> list[int]:
    """Minimum-edge-count path from a to b inclusive, lowest-index tie-break."""
    if a == b:
        return [a]
    parent = {a: a}
    queue = [a]
    while queue:
        next_queue = []
        for u in queue:
            for v in g.neighbors(u):
                if v not in parent:
                    parent[v] = u
                    if v == b:
                        path = [b]
                        while path[-1] != a:
                            path.append(parent[path[-1]])
                        return path[::-1]
                    next_queue.append(v)
        queue = next_queue
    raise ValueError(f"no path between {a} and {b}")


def distances_from(g: ConnectivityGraph, a: int) -> list[int]:
    """BFS distances from node a to every node."""
    dist = [-1] * g.node_count
    dist[a] = 0
    queue = [a]
    while queue:
        next_queue = []
        for u in queue:
            for v in g.neighbors(u):
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    next_queue.append(v)
        queue = next_queue
    return dist


def distance(g: ConnectivityGraph, a: int, b: int) -> int:
    return len(shortest_path(g, a, b)) - 1


class _UnionFind:
    """Union-find keeping the smallest member as representative."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        lo, hi = (ra, rb) if ra < rb else (rb, ra)
        self.parent[hi] = lo


def steiner_approx(
    g: ConnectivityGraph, terminals, root: int | None = None
) -> SteinerTree:
    """Approximate minimum Steiner tree by colliding BFS waves.

    Each round runs one breadth-first search seeded from every current
    super-terminal, picks the shortest connecting path between two distinct
    super-terminals (ties by lowest endpoints) and consolidates the path's
    nodes into one super-terminal.  d-1 rounds give O(d*(V+E)) total work.
    """
    term_set = frozenset(terminals)
    if not term_set:
        raise ValueError("terminal set is empty")
    for t in term_set:
        if not 0 <= t < g.node_count:
            raise ValueError(f"terminal {t} out of range")
    if root is None:
        root = min(term_set)
    if root not in term_set:
        raise ValueError("root must be a terminal")

    uf = _UnionFind(g.node_count)
    in_tree = set(term_set)
    tree_edges: set[tuple[int, int]] = set()
    components = len(term_set)

    while components > 1:
        # One BFS wave from every super-terminal simultaneously.
        comp = [-1] * g.node_count
        dist = [0] * g.node_count
        parent = [-1] * g.node_count
        queue = sorted(in_tree)
        for s in queue:
            comp[s] = uf.find(s)
        while queue:
            next_queue = []
            for u in queue:
                for v in g.neighbors(u):
                    if comp[v] < 0:
                        comp[v] = comp[u]
                        dist[v] = dist[u] + 1
                        parent[v] = u
                        next_queue.append(v)
            queue = next_queue

        # Shortest collision between two distinct waves.
        best = None
        for u, v in g.sorted_edges():
            if comp[u] != comp[v]:
                length = dist[u] + dist[v] + 1
                key = (length, u, v)
                if best is None or key < best:
                    best = key
        assert best is not None, "connected graph must yield a collision"
        _, u, v = best

        path_nodes = []
        for end in (u, v):
            node = end
            chain = [node]
            while dist[node] > 0:
                node = parent[node]
                chain.append(node)
            path_nodes.extend(chain)
            for a, b in zip(chain, chain[1:]):
                tree_edges.add(_norm_edge(a, b))
        tree_edges.add(_norm_edge(u, v))

        for node in path_nodes[1:]:
            uf.union(path_nodes[0], node)
        in_tree.update(path_nodes)
        components -= 1

    tree = SteinerTree(g, term_set, root, frozenset(tree_edges))
    tree.validate()
    return tree


def steiner_exact(
    g: ConnectivityGraph, terminals, root: int | None = None
) -> SteinerTree:
    """Minimum Steiner tree by Dreyfus-Wagner dynamic programming.

    Intended as a test oracle; capped to |V| <= 14 or |terminals| <= 6.
    """
    term_list = sorted(set(terminals))
    if not term_list:
        raise ValueError("terminal set is empty")
    if g.node_count > 14 and len(term_list) > 6:
        raise ValueError(
            f"instance too large for the exact solver "
            f"(|V|={g.node_count} > 14 and |terminals|={len(term_list)} > 6)"
        )
    if root is None:
        root = term_list[0]
    if root not in term_list:
        raise ValueError("root must be a terminal")
    if len(term_list) == 1:
        return SteinerTree(g, frozenset(term_list), root, frozenset())

    n = g.node_count
    dist = [distances_from(g, v) for v in range(n)]
    t0, rest = term_list[0], term_list[1:]
    k = len(rest)
    full = (1 << k) - 1
    INF = float("inf")

    dp: list[list[float]] = [[INF] * n for _ in range(full + 1)]
    # walk_from[mask][v]: Dijkstra predecessor source; merge_split[mask][v]: submask.
    walk_from: list[list[int]] = [[-1] * n for _ in range(full + 1)]
    merge_split: list[list[int]] = [[0] * n for _ in range(full + 1)]

    for i, t in enumerate(rest):
        mask = 1 << i
        for v in range(n):
            dp[mask][v] = dist[t][v]
            walk_from[mask][v] = t

    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        merged = [INF] * n
        for v in range(n):
            sub = (mask - 1) & mask
            while sub:
                other = mask ^ sub
                if sub < other:
                    cost = dp[sub][v] + dp[other][v]
                    if cost < merged[v]:
                        merged[v] = cost
                        merge_split[mask][v] = sub
                sub = (sub - 1) & mask
        # Relax merged values across the graph (unit-weight Dijkstra).
        best = list(merged)
        source = list(range(n))
        heap = [(merged[v], v, v) for v in range(n) if merged[v] < INF]
        heapq.heapify(heap)
        while heap:
            d, _, v = heapq.heappop(heap)
            if d > best[v]:
                continue
            for w in g.neighbors(v):
                if d + 1 < best[w]:
                    best[w] = d + 1
                    source[w] = source[v]
                    heapq.heappush(heap, (d + 1, source[w], w))
        for v in range(n):
            dp[mask][v] = best[v]
            walk_from[mask][v] = source[v]

    edges: set[tuple[int, int]] = set()

    def expand(mask: int, v: int) -> None:
        anchor = walk_from[mask][v]
        for a, b in zip(p := shortest_path(g, anchor, v), p[1:]):
            edges.add(_norm_edge(a, b))
        if mask & (mask - 1) == 0:
            return
        sub = merge_split[mask][anchor]
        expand(sub, anchor)
        expand(mask ^ sub, anchor)

    expand(full, t0)

    # The reconstruction may overlap on ties; keep a spanning tree of it.
    nodes = {t0} | {n for e in edges for n in e}
    adj: dict[int, list[int]] = {u: [] for u in nodes}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    tree_edges: set[tuple[int, int]] = set()
    seen = {t0}
    queue = [t0]
    while queue:
        u = queue.pop(0)
        for v in sorted(adj[u]):
            if v not in seen:
                seen.add(v)
                tree_edges.add(_norm_edge(u, v))
                queue.append(v)

    weight = dp[full][t0]
    assert len(tree_edges) <= weight, "reconstruction exceeded the DP optimum"
    tree = SteinerTree(g, frozenset(term_list), root, frozenset(tree_edges))
    tree.validate()
    return tree


def line_graph(n: int) -> ConnectivityGraph:
    if n < 1:
        raise ValueError("line needs at least one node")
    return ConnectivityGraph(
        n, frozenset((i, i + 1) for i in range(n - 1)), name=f"line({n})"
    )


def grid_graph(rows: int, cols: int) -> ConnectivityGraph:
    if rows < 1 or cols < 1:
        raise ValueError("grid needs positive dimensions")
    edges = set()
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            if c + 1 < cols:
                edges.add((u, u + 1))
            if r + 1 < rows:
                edges.add((u, u + cols))
    return ConnectivityGraph(rows * cols, frozenset(edges), name=f"grid({rows},{cols})")


def complete_graph(n: int) -> ConnectivityGraph:
    edges = frozenset((i, j) for i in range(n) for j in range(i + 1, n))
    return ConnectivityGraph(n, edges, name=f"complete({n})")


_NAMED_ARCH_FILES = {
    "bristlecone72": "bristlecone72.txt",
    "tokyo20": "tokyo20.txt",
    "acorn19": "acorn19.txt",
}


def parse_graph(text: str, name: str = "graph") -> ConnectivityGraph:
    """Parse the graph text format: "n m" then m lines "u v"; '#' comments."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"bad header {lines[0]!r}, expected 'n m'")
    n, m = int(head[0]), int(head[1])
    if len(lines) != m + 1:
        raise ValueError(f"expected {m} edge lines, got {len(lines) - 1}")
    edges = set()
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line {ln!r}")
        edges.add(_norm_edge(int(parts[0]), int(parts[1])))
    return ConnectivityGraph(n, frozenset(edges), name=name)


def emit_graph(g: ConnectivityGraph) -> str:
    lines = [f"{g.node_count} {g.edge_count()}"]
    lines += [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def builtin_architecture(name: str) -> ConnectivityGraph:
    """Return a named coupling graph.

    Accepts "bristlecone72", "tokyo20", "acorn19", "line(n)" and "grid(r,c)".
    The named device graphs are best-effort encodings shipped as data files;
    callers should rely only on node counts and connectivity.
    """
    key = name.strip().lower()
    if key in _NAMED_ARCH_FILES:
        data = (
            importlib.resources.files("steinersynth.architectures")
            .joinpath(_NAMED_ARCH_FILES[key])
            .read_text()
        )
        return parse_graph(data, name=key)
    m = re.fullmatch(r"line\((\d+)\)", key)
    if m:
        return line_graph(int(m.group(1)))
    m = re.fullmatch(r"grid\((\d+),\s*(\d+)\)", key)
    if m:
        return grid_graph(int(m.group(1)), int(m.group(2)))
    known = sorted(_NAMED_ARCH_FILES) + ["line(n)", "grid(r,c)"]
    raise ValueError(f"unknown architecture {name!r}; known: {', '.join(known)}")


def list_architectures() -> list[str]:
    return sorted(_NAMED_ARCH_FILES) + ["line(n)", "grid(r,c)"]


def random_connected_graph(
    n: int, sparseness: float, seed: int, max_tries: int = 10_000
) -> ConnectivityGraph:
    """Sample each pair independently with probability `sparseness`, then
    reject and resample until the result is connected.  Deterministic in seed.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    if not 0 < sparseness <= 1:
        raise ValueError("sparseness must lie in (0, 1]")
    rng = random.Random(seed)
    for _ in range(max_tries):
        edges = frozenset(
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < sparseness
        )
        try:
            return ConnectivityGraph(
                n, edges, name=f"random(n={n},s={sparseness},seed={seed})"
            )
        except ValueError:
            continue
    raise RuntimeError(
        f"no connected graph after {max_tries} draws (n={n}, sparseness={sparseness})"
    )
