"""Shared test utilities: seeded random structures and slow oracles."""

import numpy as np

from acdaa.daa import Classification
from acdaa.graph import FrequencyGraph
from acdaa.matrix_io import DissimilarityMatrix


def random_connected_graph(n, extra_edges, seed):
    """Random tree plus extra random edges; connected by construction."""
    rng = np.random.default_rng(seed)
    edges = set()
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges.add((u, v))
    attempts = 0
    while len(edges) < n - 1 + extra_edges and attempts < 50 * extra_edges + 100:
        u, v = rng.integers(0, n, size=2)
        u, v = int(min(u, v)), int(max(u, v))
        if u != v:
            edges.add((u, v))
        attempts += 1
    return FrequencyGraph(n, np.array(sorted(edges), dtype=np.int32))


def random_dissimilarity(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.random((n, n))
    a = np.triu(a, 1)
    a = a + a.T
    return DissimilarityMatrix(a)


def random_partition(n, seed):
    rng = np.random.default_rng(seed)
    count = int(rng.integers(1, n + 1))
    labels = rng.integers(0, count, size=n)
    # every label id in [0, count) may be unused; from_labels compacts
    return Classification.from_labels(labels)


def rand_index_bruteforce(a, b):
    """Pair-by-pair agreement count; the O(n^2) oracle."""
    la, lb = a.labels(), b.labels()
    n = len(la)
    agree = 0
    pairs = 0
    for i in range(n):
        for j in range(i + 1, n):
            pairs += 1
            same_a = la[i] == la[j]
            same_b = lb[i] == lb[j]
            if same_a == same_b:
                agree += 1
    return agree / pairs


def all_cuts(g):
    """Every (part_a containing vertex 0) cut of a graph with n <= 16."""
    from acdaa.graph import cut_edges

    n = g.n
    for mask in range(1 << (n - 1)):
        part = [0] + [b + 1 for b in range(n - 1) if (mask >> b) & 1]
        if len(part) == n:
            continue
        yield cut_edges(g, part)
