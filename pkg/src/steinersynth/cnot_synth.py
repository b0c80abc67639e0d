"""Connectivity-constrained synthesis of linear reversible (CNOT) circuits.

The central tool converts a Steiner tree into a row-operation sequence that
adds a chosen root row into a set of terminal rows while leaving every other
row untouched, using only graph-adjacent operations.  Gaussian elimination
drives one such plan per matrix column; a transpose pass finishes the job.

Two full-connectivity baselines live here as well: partitioned elimination
(with duplicate sub-row removal) and long-range CNOT template expansion.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .circuits import Circuit, Gate, cnot
from .gf2 import BinaryMatrix, RowOp, SingularMatrixError, is_invertible
from .graphs import ConnectivityGraph, SteinerTree, distances_from, shortest_path, steiner_approx


@dataclass(frozen=True)
class SubtreePlan:
    """Row ops realizing "add root row into each leaf row" on one subtree.

    The three op lists follow the up-pass / pruned-down-pass / repair-pass
    construction: R walks every edge child-last (deepest first), R' replays
    R reversed without the root-incident ops, and R* repeats the ops whose
    targets are interior (non-terminal) nodes, which restores them exactly.
    """

    root: int
    leaves: frozenset[int]
    edges: frozenset[tuple[int, int]]
    ops_R: tuple[RowOp, ...]
    ops_Rprime: tuple[RowOp, ...]
    ops_Rstar: tuple[RowOp, ...]

    def ops(self) -> tuple[RowOp, ...]:
        return self.ops_R + self.ops_Rprime + self.ops_Rstar


@dataclass(frozen=True)
class EliminationPlan:
    """Ordered subtree plans; executing them in order clears one column.

    Each subtree plan adds its own root's row (as it stands when the subtree
    executes) into its leaf rows and leaves all other rows unchanged.  Rows
    never touched by any subtree are unchanged overall.
    """

    subtrees: tuple[SubtreePlan, ...]

    def ops(self) -> tuple[RowOp, ...]:
        out: tuple[RowOp, ...] = ()
        for sub in self.subtrees:
            out += sub.ops()
        return out

    @property
    def ops_R(self) -> tuple[RowOp, ...]:
        return tuple(op for sub in self.subtrees for op in sub.ops_R)

    @property
    def ops_Rprime(self) -> tuple[RowOp, ...]:
        return tuple(op for sub in self.subtrees for op in sub.ops_Rprime)

    @property
    def ops_Rstar(self) -> tuple[RowOp, ...]:
        return tuple(op for sub in self.subtrees for op in sub.ops_Rstar)

    def net_effects(self) -> list[tuple[int, frozenset[int]]]:
        """(control row, target rows) pairs in execution order."""
        return [(sub.root, sub.leaves) for sub in self.subtrees]


def _rooted(adj: dict[int, list[int]], root: int) -> dict[int, list[int]]:
    """Children lists (ascending) of the tree rooted at root."""
    children: dict[int, list[int]] = {root: []}
    stack = [root]
    seen = {root}
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                children.setdefault(u, []).append(v)
                children.setdefault(v, [])
                stack.append(v)
    return {u: sorted(vs) for u, vs in children.items()}


def _postorder_edges(children: dict[int, list[int]], root: int) -> list[RowOp]:
    """Edge ops (parent -> child), each emitted when its child subtree finishes."""
    out: list[RowOp] = []

    def walk(u: int) -> None:
        for v in children[u]:
            walk(v)
            out.append(RowOp(u, v))

    walk(root)
    return out


def _subtree_ops(
    adj: dict[int, list[int]], root: int, keep: set[int]
) -> tuple[list[RowOp], list[RowOp], list[RowOp]]:
    """The R / R' / R* sequence for one subtree.

    `keep` lists the nodes whose rows should end up XORed with the root row
    (the subtree's terminals); all interior nodes must be outside `keep`.
    """
    children = _rooted(adj, root)
    ops_r = _postorder_edges(children, root)
    ops_rp = [op for op in reversed(ops_r) if op.control != root]
    ops_rs = [op for op in ops_r + ops_rp if op.target not in keep]
    return ops_r, ops_rp, ops_rs


def _pruned_adjacency(tree: SteinerTree) -> dict[int, list[int]]:
    """Tree adjacency with non-terminal leaf branches trimmed away."""
    adj = {n: set(ns) for n, ns in tree.adjacency().items()}
    leaves = [n for n, ns in adj.items() if len(ns) == 1 and n not in tree.terminals]
    while leaves:
        leaf = leaves.pop()
        (parent,) = adj.pop(leaf)
        adj[parent].discard(leaf)
        if len(adj[parent]) == 1 and parent not in tree.terminals:
            leaves.append(parent)
    return {n: sorted(ns) for n, ns in adj.items()}


def _path_plan(path: list[int]) -> SubtreePlan:
    """Plan adding the row of path[0] into the row of path[-1] only."""
    root, leaf = path[0], path[-1]
    adj: dict[int, list[int]] = {n: [] for n in path}
    for a, b in zip(path, path[1:]):
        adj[a].append(b)
        adj[b].append(a)
    r, rp, rs = _subtree_ops(adj, root, {root, leaf})
    edges = frozenset((min(a, b), max(a, b)) for a, b in zip(path, path[1:]))
    return SubtreePlan(root, frozenset({leaf}), edges, tuple(r), tuple(rp), tuple(rs))


def plan_pre_transpose(t: SteinerTree) -> EliminationPlan:
    """Plan clearing a column during the first (upper-triangularizing) pass.

    The tree splits into edge-disjoint subtrees at every interior terminal:
    growing breadth-first from the root, an interior terminal becomes a leaf
    of the subtree under construction and the root of a new one.  Subtrees
    execute in reverse construction order, so each subtree root's row is
    still pristine when its ops run.
    """
    adj = _pruned_adjacency(t)
    if len(adj) == 1:
        return EliminationPlan(())
    children = _rooted(adj, t.root)

    subtree_roots = [t.root]
    plans: list[SubtreePlan] = []
    for cut_root in subtree_roots:
        # Collect this subtree: BFS from cut_root stopping at interior terminals.
        sub_adj: dict[int, list[int]] = {cut_root: []}
        leaves: set[int] = set()
        queue = [cut_root]
        while queue:
            u = queue.pop(0)
            for v in children[u]:
                sub_adj.setdefault(u, []).append(v)
                sub_adj.setdefault(v, []).append(u)
                is_leaf_of_tree = not children[v]
                if v in t.terminals and not is_leaf_of_tree:
                    leaves.add(v)
                    subtree_roots.append(v)
                elif is_leaf_of_tree:
                    leaves.add(v)
                else:
                    queue.append(v)
        r, rp, rs = _subtree_ops(sub_adj, cut_root, leaves | {cut_root})
        edges = frozenset(
            (min(u, v), max(u, v)) for u, vs in sub_adj.items() for v in vs if u < v
        )
        plans.append(
            SubtreePlan(cut_root, frozenset(leaves), edges, tuple(r), tuple(rp), tuple(rs))
        )
    return EliminationPlan(tuple(reversed(plans)))


def plan_post_transpose(t: SteinerTree) -> EliminationPlan:
    """Plan clearing a column after the transpose step.

    Every effective row addition must run from a lower index to a higher
    one, or the triangular half already finished would be damaged.  The
    root is the smallest terminal; each other terminal is cleared by a
    clean ladder from its nearest lower-indexed terminal (ties to the
    smallest), walking the tree path between them.  Ladders execute from
    the highest terminal down, so every control row is read unmodified.
    """
    if t.root != min(t.terminals):
        raise ValueError("post-transpose plans require the smallest terminal as root")
    adj = _pruned_adjacency(t)
    if len(adj) == 1:
        return EliminationPlan(())

    # Tree distances/paths from every terminal, lowest-index tie-breaks.
    def tree_paths_from(s: int) -> dict[int, list[int]]:
        parent = {s: s}
        queue = [s]
        while queue:
            next_queue = []
            for u in queue:
                for v in adj[u]:
                    if v not in parent:
                        parent[v] = u
                        next_queue.append(v)
            queue = next_queue
        paths = {}
        for n in parent:
            path = [n]
            while path[-1] != s:
                path.append(parent[path[-1]])
            paths[n] = path[::-1]
        return paths

    paths = {s: tree_paths_from(s) for s in t.terminals}
    plans: list[SubtreePlan] = []
    for w in sorted(t.terminals, reverse=True):
        if w == t.root:
            continue
        anchor = min(
            (s for s in t.terminals if s < w),
            key=lambda s: (len(paths[s][w]), s),
        )
        plans.append(_path_plan(paths[anchor][w]))
    return EliminationPlan(tuple(plans))


def apply_plan(m: BinaryMatrix, plan: EliminationPlan) -> BinaryMatrix:
    rows = list(m.rows)
    for op in plan.ops():
        rows[op.target] ^= rows[op.control]
    return BinaryMatrix(m.dim, tuple(rows))


@dataclass
class SynthesisReport:
    method: str
    graph_name: str
    cnot_count: int
    rz_count: int = 0
    h_count: int = 0
    depth: int = 0
    elapsed_ms: float = 0.0
    seed: int | None = None
    column_trees: list[int] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.cnot_count + self.rz_count + self.h_count

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "graph": self.graph_name,
            "counts": {
                "cnot": self.cnot_count,
                "rz": self.rz_count,
                "h": self.h_count,
                "total": self.total,
            },
            "depth": self.depth,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "seed": self.seed,
        }


def _report(method: str, graph_name: str, circuit: Circuit, t0: float, **kw) -> SynthesisReport:
    return SynthesisReport(
        method=method,
        graph_name=graph_name,
        cnot_count=circuit.count("cnot"),
        rz_count=circuit.count("rz"),
        h_count=circuit.count("h"),
        depth=circuit.depth(),
        elapsed_ms=(time.perf_counter() - t0) * 1000.0,
        **kw,
    )


def _terminal_rows(rows: list[int], col: int, n: int) -> set[int]:
    return {col} | {j for j in range(col + 1, n) if (rows[j] >> col) & 1}


def _preorder_edges(children: dict[int, list[int]], root: int) -> list[RowOp]:
    """Edge ops (parent -> child), each parent edge before its child's edges."""
    out: list[RowOp] = []

    def walk(u: int) -> None:
        for v in children[u]:
            out.append(RowOp(u, v))
            walk(v)

    walk(root)
    return out


def _fill_clear_column(rows: list[int], col: int, tree: SteinerTree) -> list[RowOp] | None:
    """Cheap column clearing that does not restore Steiner rows.

    Mutates `rows` in place and returns the ops applied.  First pass walks
    the tree parent-first and seeds a one into every tree row still holding
    a zero in the column; second pass walks child-first, adding each parent
    row into its child, which zeroes every non-root row.  Steiner rows end
    up modified in later columns, which is harmless exactly when no tree
    node precedes the pivot (their already-cleared prefixes stay zero).
    Returns None when that safety condition fails; the caller falls back to
    the restoring plan.

    For the transposed pass the caller additionally requires every parent
    index to be smaller than its child, which keeps each individual row
    addition triangularity-safe.
    """
    adj = _pruned_adjacency(tree)
    if len(adj) == 1:
        return []
    if min(adj) < tree.root:
        return None
    children = _rooted(adj, tree.root)
    ops: list[RowOp] = []
    for op in _preorder_edges(children, tree.root):
        if not (rows[op.target] >> col) & 1:
            rows[op.target] ^= rows[op.control]
            ops.append(op)
    for op in reversed(_preorder_edges(children, tree.root)):
        rows[op.target] ^= rows[op.control]
        ops.append(op)
    return ops


def _monotone(tree: SteinerTree) -> bool:
    """True when every child exceeds its parent in the tree rooted at root."""
    adj = _pruned_adjacency(tree)
    if len(adj) == 1:
        return True
    children = _rooted(adj, tree.root)
    return all(u < v for u, vs in children.items() for v in vs)


def synthesize_constrained(
    a: BinaryMatrix, g: ConnectivityGraph
) -> tuple[Circuit, SynthesisReport]:
    """Synthesize an edge-legal CNOT circuit implementing the matrix `a`.

    Column by column, a Steiner tree over the rows still carrying a one is
    turned into adjacent row operations that clear them together; after
    upper-triangular form is reached the matrix is transposed and the pass
    repeats with the direction-restricted plans.  The output simulates to
    `a` exactly and every CNOT lies on an edge of `g`.
    """
    if a.dim != g.node_count:
        raise ValueError(f"matrix dim {a.dim} != graph nodes {g.node_count}")
    if not is_invertible(a):
        raise SingularMatrixError(0)
    t0 = time.perf_counter()
    n = a.dim
    rows = list(a.rows)
    trees_per_column: list[int] = []

    def apply_ops(ops) -> None:
        for op in ops:
            rows[op.target] ^= rows[op.control]

    ops_a: list[RowOp] = []
    for i in range(n):
        n_trees = 0
        if not (rows[i] >> i) & 1:
            candidates = [j for j in range(i + 1, n) if (rows[j] >> i) & 1]
            dist = distances_from(g, i)
            j = min(candidates, key=lambda x: (dist[x], x))
            repair = _path_plan(shortest_path(g, j, i))
            apply_ops(repair.ops())
            ops_a.extend(repair.ops())
            n_trees += 1
        terms = _terminal_rows(rows, i, n)
        if len(terms) > 1:
            tree = steiner_approx(g, terms, root=i)
            ops = _fill_clear_column(rows, i, tree)
            if ops is None:
                plan = plan_pre_transpose(tree)
                ops = list(plan.ops())
                apply_ops(ops)
            ops_a.extend(ops)
            n_trees += 1
        trees_per_column.append(n_trees)

    assert all(rows[r] & ((1 << r) - 1) == 0 for r in range(n)), (
        "first pass did not reach upper-triangular form"
    )
    # Transpose and clear the other half.
    rows = list(BinaryMatrix(n, tuple(rows)).transpose().rows)
    ops_b: list[RowOp] = []
    for i in range(n):
        assert (rows[i] >> i) & 1, "transposed pass lost its unit diagonal"
        terms = _terminal_rows(rows, i, n)
        if len(terms) > 1:
            tree = steiner_approx(g, terms, root=i)
            ops = _fill_clear_column(rows, i, tree) if _monotone(tree) else None
            if ops is None:
                plan = plan_post_transpose(tree)
                ops = list(plan.ops())
                apply_ops(ops)
            ops_b.extend(ops)
            trees_per_column[i] += 1

    assert all(r == 1 << i for i, r in enumerate(rows)), "elimination did not finish"

    gates = [cnot(op.target, op.control) for op in ops_b]
    gates += [cnot(op.control, op.target) for op in reversed(ops_a)]
    circuit = Circuit(n, tuple(gates))
    report = _report("steiner", g.name, circuit, t0, column_trees=trees_per_column)
    return circuit, report


def eliminate_column_cost(rows, control: int, g: ConnectivityGraph) -> int:
    """CNOT count of the grouped plan clearing `rows` with `control`."""
    terms = set(rows) | {control}
    if len(terms) == 1:
        return 0
    tree = steiner_approx(g, terms, root=control)
    return len(plan_pre_transpose(tree).ops())


def naive_column_cost(rows, control: int, g: ConnectivityGraph) -> int:
    """CNOT count when each row is cleared by its own long-range template."""
    total = 0
    for r in rows:
        if r == control:
            continue
        l = len(shortest_path(g, control, r)) - 1
        total += 1 if l == 1 else 4 * (l - 1)
    return total


def _triangularize(rows: list[int], n: int, section: int | None) -> list[RowOp]:
    """Reduce to upper-triangular form; returns the row ops used.

    With a section width, duplicate sub-rows within each column section are
    removed before elimination, the optimization that beats plain Gaussian
    elimination asymptotically under full connectivity.
    """
    ops: list[RowOp] = []
    step = section if section else n
    for sec_start in range(0, n, step):
        sec_end = min(sec_start + step, n)
        if section:
            width_mask = (1 << sec_end) - (1 << sec_start)
            seen: dict[int, int] = {}
            for r in range(sec_start, n):
                pattern = rows[r] & width_mask
                if pattern == 0:
                    continue
                if pattern in seen:
                    rows[r] ^= rows[seen[pattern]]
                    ops.append(RowOp(seen[pattern], r))
                else:
                    seen[pattern] = r
        for col in range(sec_start, sec_end):
            if not (rows[col] >> col) & 1:
                pivot = next(
                    (r for r in range(col + 1, n) if (rows[r] >> col) & 1), None
                )
                if pivot is None:
                    raise SingularMatrixError(col)
                rows[col] ^= rows[pivot]
                ops.append(RowOp(pivot, col))
            for r in range(col + 1, n):
                if (rows[r] >> col) & 1:
                    rows[r] ^= rows[col]
                    ops.append(RowOp(col, r))
    return ops


def pmh_synthesize(a: BinaryMatrix, partition: bool = True, section: int | None = None) -> Circuit:
    """Full-connectivity elimination synthesis (no coupling constraints).

    partition=True enables sectioned elimination with duplicate sub-row
    removal; partition=False is plain Gaussian elimination.  When no section
    width is given, the small range of sensible widths (2 up to ~log2 n) is
    tried and the shortest result kept, which is what the asymptotic width
    rule converges to anyway.  Assembly: transposed-pass ops with control
    and target flipped, in order, then the first-pass ops unchanged but in
    reverse order.
    """
    if not is_invertible(a):
        raise SingularMatrixError(0)
    n = a.dim

    def run(width: int | None) -> tuple[list[RowOp], list[RowOp]]:
        rows = list(a.rows)
        first = _triangularize(rows, n, width)
        rows = list(BinaryMatrix(n, tuple(rows)).transpose().rows)
        second = _triangularize(rows, n, width)
        assert all(r == 1 << i for i, r in enumerate(rows))
        return first, second

    if not partition:
        ops_a, ops_b = run(None)
    elif section is not None:
        ops_a, ops_b = run(max(1, section))
    else:
        widths = range(2, max(3, int(math.log2(n)) + 1))
        ops_a, ops_b = min(
            (run(w) for w in widths), key=lambda ab: len(ab[0]) + len(ab[1])
        )
    gates = [cnot(op.target, op.control) for op in ops_b]
    gates += [cnot(op.control, op.target) for op in reversed(ops_a)]
    return Circuit(n, tuple(gates))


def _ladder_gates(path: list[int]) -> list[Gate]:
    """Gate expansion of one long-range CNOT along a path: 4*(l-1) CNOTs."""
    plan = _path_plan(path)
    return [cnot(op.control, op.target) for op in plan.ops()]


def expand_templates(c: Circuit, g: ConnectivityGraph) -> Circuit:
    """Replace each non-adjacent CNOT with the nearest-neighbor relay ladder.

    A CNOT at graph distance l becomes exactly 4*(l-1) adjacent CNOTs; other
    gates pass through unchanged.
    """
    gates: list[Gate] = []
    for gate in c.gates:
        if gate.kind != "cnot" or g.has_edge(gate.control, gate.target):
            gates.append(gate)
            continue
        gates.extend(_ladder_gates(shortest_path(g, gate.control, gate.target)))
    return Circuit(c.num_qubits, tuple(gates))


def naive_swap_expand(c: Circuit, g: ConnectivityGraph) -> Circuit:
    """Diagnostic SWAP-chain expansion: 1 + 6*(l-1) gates per long-range CNOT."""
    gates: list[Gate] = []
    for gate in c.gates:
        if gate.kind != "cnot" or g.has_edge(gate.control, gate.target):
            gates.append(gate)
            continue
        path = shortest_path(g, gate.control, gate.target)
        swaps = []
        for a, b in zip(path, path[1:-1] if len(path) > 2 else []):
            swaps += [cnot(a, b), cnot(b, a), cnot(a, b)]
        gates.extend(swaps)
        gates.append(cnot(path[-2], path[-1]))
        gates.extend(reversed(swaps))
    return Circuit(c.num_qubits, tuple(gates))
