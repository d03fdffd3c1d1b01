"""Frequency minimax graph dichotomy and cut-quality evaluators.

The dichotomy splits a connected graph in two by statistics accumulation:
bottleneck-optimal paths between random vertex pairs increment per-edge
counters until the set of peak-frequency edges contains a cut.  Removing
those edges disconnects the graph; the largest remaining component is
one part, everything else the other.  The procedure approximately
maximizes the decomposition value |A|*|B|/d(A,B) of the cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heappop, heappush

import numpy as np

from . import kernel
from .graph import Cut, FrequencyGraph, connected_components, cut_edges

DEFAULT_REPETITIONS = 2000

# The closing stage terminates on its own; the cap only guards against
# implementation bugs that would stall it.
EXTRA_CAP_FACTOR = 10


@dataclass(frozen=True)
class DichotomyResult:
    """Outcome of one dichotomy run.

    `freqs` holds the final per-edge counters (after the last path was
    undone, before edge removal) for diagnostics and invariant checks.
    """

    cut: Cut
    max_freq: int
    paths_built: int
    part_one: tuple
    freqs: np.ndarray

    @property
    def part_two(self):
        return self.cut.part_b


def minimax_path(g: FrequencyGraph, s, t):
    """Vertex path from s to t whose largest edge frequency is minimal.

    Dijkstra search with path cost = maximum edge frequency along the
    path; extraction order is fixed by (cost, vertex id) so the result
    is deterministic for a fixed graph state.
    """
    if s == t:
        raise ValueError("endpoints must differ")
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise ValueError("endpoint out of range")
    indptr, nbrs, eids = g.csr()
    freq = g.freq
    inf = float("inf")
    dist = [inf] * g.n
    done = bytearray(g.n)
    pred = [-1] * g.n
    dist[s] = 0
    heap = [(0, s)]
    while heap:
        cost, v = heappop(heap)
        if done[v]:
            continue
        done[v] = 1
        if v == t:
            break
        for idx in range(indptr[v], indptr[v + 1]):
            w = nbrs[idx]
            if done[w]:
                continue
            nd = int(freq[eids[idx]])
            if cost > nd:
                nd = cost
            if nd < dist[w]:
                dist[w] = nd
                pred[w] = v
                heappush(heap, (nd, w))
    if not done[t]:
        raise ValueError("vertices are disconnected")
    path = [t]
    while path[-1] != s:
        path.append(pred[path[-1]])
    path.reverse()
    return path


def path_bottleneck(g: FrequencyGraph, path):
    """Maximum edge frequency along a vertex path."""
    lookup = {(int(u), int(v)): int(f) for (u, v), f in zip(g.edges, g.freq)}
    worst = 0
    for a, b in zip(path, path[1:]):
        worst = max(worst, lookup[(min(a, b), max(a, b))])
    return worst


def frequency_dichotomy(g: FrequencyGraph, reps=DEFAULT_REPETITIONS, rng=0) -> DichotomyResult:
    """Split a connected graph in two by frequency accumulation.

    Counters start at zero; `reps` random-pair bottleneck paths are
    accumulated, the peak counter value is saved, and accumulation
    continues until a path is forced over a peak-frequency edge (that
    path is undone).  All peak-frequency edges are then removed, the
    largest component becomes part one and the rest part two; removed
    edges that do not cross the resulting cut are conceptually returned
    to the graph (the input graph itself is never mutated).

    `rng` is an integer seed or a numpy SeedSequence.
    """
    if reps < 1:
        raise ValueError("repetition count must be >= 1")
    if g.n < 2 or g.edge_count < 1:
        raise ValueError("need at least 2 vertices and 1 edge")
    if len(connected_components(g)) != 1:
        raise ValueError("graph must be connected")

    indptr, nbrs, eids = g.csr()
    seed = _seed_from(rng)
    freqs, max_freq, paths_built = kernel.accumulate_frequencies(
        indptr, nbrs, eids, g.edge_count, int(reps), seed,
        EXTRA_CAP_FACTOR * int(reps),
    )

    if int(freqs.max()) != max_freq:
        raise RuntimeError("peak frequency drifted from its saved value")
    survivors = freqs < max_freq
    comps = connected_components(g, edge_mask=survivors)
    if len(comps) < 2:
        raise RuntimeError("peak-frequency edges do not contain a cut")

    sizes = [len(c) for c in comps]
    # components are ordered by smallest member, so ties pick the one
    # containing the smallest vertex id
    part_one = tuple(comps[sizes.index(max(sizes))])
    cut = cut_edges(g, part_one)
    return DichotomyResult(
        cut=cut,
        max_freq=int(max_freq),
        paths_built=int(paths_built),
        part_one=part_one,
        freqs=freqs,
    )


def decomposition_value(cut: Cut) -> float:
    """|A| * |B| / d(A, B); the quantity a good dichotomy makes large."""
    if cut.size < 1:
        raise ValueError("cut has no crossing edges")
    return len(cut.part_a) * len(cut.part_b) / cut.size


def ratio_cut_value(cut: Cut) -> float:
    """d(A, B) * (1/|A| + 1/|B|); minimized exactly when the
    decomposition value is maximized."""
    if not cut.part_a or not cut.part_b:
        raise ValueError("cut parts must be nonempty")
    return cut.size * (1.0 / len(cut.part_a) + 1.0 / len(cut.part_b))


BRUTE_FORCE_LIMIT = 20


def brute_force_best_cut(g: FrequencyGraph) -> Cut:
    """Exhaustive decomposition-value maximizer (small graphs only).

    Enumerates every one of the 2^(n-1) - 1 cuts of a connected graph
    and returns the one maximizing |A|*|B|/d; ties resolve to the
    lexicographically smallest part containing vertex 0.
    """
    n = g.n
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_LIMIT} vertices")
    if n < 2:
        raise ValueError("need at least 2 vertices")
    total = 1 << (n - 1)
    # masks over vertices 1..n-1; vertex 0 always in part a
    masks = np.arange(total, dtype=np.uint32)
    d = np.zeros(total, dtype=np.int64)
    for u, v in g.edges:
        in_a_u = np.ones(total, dtype=bool) if u == 0 else ((masks >> (u - 1)) & 1).astype(bool)
        in_a_v = np.ones(total, dtype=bool) if v == 0 else ((masks >> (v - 1)) & 1).astype(bool)
        d += in_a_u != in_a_v
    size_a = np.ones(total, dtype=np.int64)
    for bit in range(n - 1):
        size_a += ((masks >> bit) & 1).astype(np.int64)
    valid = (size_a < n) & (d > 0)
    if not valid.any():
        raise ValueError("graph has no cut with crossing edges (disconnected?)")
    score = np.where(valid, size_a * (n - size_a) / np.maximum(d, 1), -np.inf)
    best = score.max()
    candidates = np.flatnonzero(score == best)
    parts = []
    for m in candidates:
        part = [0] + [b + 1 for b in range(n - 1) if (int(m) >> b) & 1]
        parts.append(tuple(part))
    return cut_edges(g, min(parts))


def _seed_from(rng):
    if isinstance(rng, np.random.SeedSequence):
        return int(rng.generate_state(1, np.uint64)[0])
    return int(rng)
