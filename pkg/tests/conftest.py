"""Shared fixtures: small reference instances with independently known costs."""

from __future__ import annotations

import itertools

import pytest

from steinersynth import BinaryMatrix, ConnectivityGraph


@pytest.fixture
def demo6_graph() -> ConnectivityGraph:
    """6-qubit demo coupling: a 2x3 loop arrangement with one chord."""
    edges = {(0, 1), (1, 2), (2, 3), (3, 4), (1, 4), (0, 5), (4, 5)}
    return ConnectivityGraph(6, frozenset(edges), name="demo6")


@pytest.fixture
def demo6_matrix() -> BinaryMatrix:
    """Invertible 6x6 transformation used in the worked-example tests."""
    return BinaryMatrix.from_rows(
        [
            [1, 1, 0, 1, 1, 0],
            [0, 0, 1, 1, 0, 1],
            [1, 0, 1, 0, 1, 0],
            [1, 1, 0, 1, 0, 0],
            [1, 1, 1, 1, 0, 0],
            [0, 1, 0, 1, 0, 1],
        ]
    )


@pytest.fixture
def grid12_graph() -> ConnectivityGraph:
    """12-node, 17-edge test graph whose optimal Steiner weights are known."""
    edges_1based = [
        (1, 2), (2, 3), (3, 6), (6, 5), (2, 5), (1, 4), (5, 4), (4, 7),
        (5, 8), (6, 9), (7, 8), (8, 9), (7, 10), (8, 11), (9, 12),
        (10, 11), (11, 12),
    ]
    return ConnectivityGraph(
        12, frozenset((u - 1, v - 1) for u, v in edges_1based), name="grid12"
    )


def brute_force_steiner_weight(g: ConnectivityGraph, terminals: set[int]) -> int:
    """Independent oracle: with unit weights, the optimum is |T ∪ X| - 1 over
    the smallest Steiner-node set X whose union with T induces a connected
    subgraph."""
    adj = {i: set() for i in range(g.node_count)}
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)

    def connected(sub: set[int]) -> bool:
        start = next(iter(sub))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u] & sub:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen == sub

    if len(terminals) == 1:
        return 0
    others = sorted(set(range(g.node_count)) - terminals)
    for k in range(len(others) + 1):
        for extra in itertools.combinations(others, k):
            if connected(terminals | set(extra)):
                return len(terminals) + k - 1
    raise AssertionError("graph is disconnected")
