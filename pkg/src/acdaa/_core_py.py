"""Pure-Python dichotomy kernel; fallback for the compiled extension.

Implements the frequency-accumulation loop: repeatedly draw a random
vertex pair, route a bottleneck-optimal path between them (Dijkstra with
path cost = maximum edge frequency) and increment the counters along it.
After the configured number of repetitions the loop continues until some
path is forced over a peak-frequency edge; that last path is undone.

The compiled twin in ``_core.pyx`` must reproduce this module exactly:
same SplitMix64 draw sequence, same (cost, vertex) heap ordering, same
strict-improvement relaxation.  Any change here needs a mirrored change
there (the parity test suite compares them on random graphs).
"""

from __future__ import annotations

from heapq import heappop, heappush

import numpy as np

_MASK = (1 << 64) - 1


def splitmix64(state):
    """One SplitMix64 step: (new_state, 64-bit output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def accumulate_frequencies(indptr, nbrs, eids, n_edges, reps, seed, extra_cap):
    """Run the accumulation loop; returns (freq, peak, paths_built).

    `freq` is the counter array after the final path has been undone,
    `peak` the maximum counter value saved after `reps` repetitions and
    `paths_built` the number of paths that remain counted.  Raises
    RuntimeError if the closing stage exceeds `extra_cap` extra paths.
    """
    n = len(indptr) - 1
    indptr = [int(x) for x in indptr]
    nbrs = [int(x) for x in nbrs]
    eids = [int(x) for x in eids]
    freq = [0] * n_edges
    state = int(seed) & _MASK

    inf = float("inf")

    def draw_pair():
        nonlocal state
        state, z = splitmix64(state)
        a = z % n
        state, z = splitmix64(state)
        b = z % n
        while b == a:
            state, z = splitmix64(state)
            b = z % n
        return a, b

    def bottleneck_path(src, dst):
        dist = [inf] * n
        done = bytearray(n)
        pred_v = [-1] * n
        pred_e = [-1] * n
        dist[src] = 0
        heap = [(0, src)]
        while heap:
            cost, v = heappop(heap)
            if done[v]:
                continue
            done[v] = 1
            if v == dst:
                break
            for idx in range(indptr[v], indptr[v + 1]):
                w = nbrs[idx]
                if done[w]:
                    continue
                nd = freq[eids[idx]]
                if cost > nd:
                    nd = cost
                if nd < dist[w]:
                    dist[w] = nd
                    pred_v[w] = v
                    pred_e[w] = eids[idx]
                    heappush(heap, (nd, w))
        if not done[dst]:
            raise RuntimeError("vertices are disconnected")
        path = []
        v = dst
        while v != src:
            path.append(pred_e[v])
            v = pred_v[v]
        return path

    peak = 0
    for _ in range(reps):
        a, b = draw_pair()
        for e in bottleneck_path(a, b):
            freq[e] += 1
            if freq[e] > peak:
                peak = freq[e]

    extras = 0
    while True:
        a, b = draw_pair()
        path = bottleneck_path(a, b)
        path_max = 0
        for e in path:
            freq[e] += 1
            if freq[e] > path_max:
                path_max = freq[e]
        if path_max > peak:
            for e in path:
                freq[e] -= 1
            break
        extras += 1
        if extras > extra_cap:
            raise RuntimeError(
                "closing stage exceeded its iteration cap; "
                "this indicates an implementation bug"
            )

    return np.array(freq, dtype=np.int64), peak, reps + extras
