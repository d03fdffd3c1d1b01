"""Neighborhood graphs, connectivity machinery and cut bookkeeping.

The central structure is an undirected graph whose edges carry integer
frequency counters (the number of constructed bottleneck paths that
crossed the edge so far).  Graph topology is fixed after construction;
only the counters mutate, and only inside a single dichotomy execution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matrix_io import DissimilarityMatrix

DEFAULT_NEIGHBORS = 4


@dataclass
class FrequencyGraph:
    """Undirected graph on vertices 0..n-1 with per-edge frequency counters.

    `edges` is an (e, 2) int32 array with u < v in every row, sorted
    lexicographically; `freq` a parallel int64 counter array.
    """

    n: int
    edges: np.ndarray
    freq: np.ndarray = None
    _csr: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int32).reshape(-1, 2)
        if e.size:
            if (e[:, 0] >= e[:, 1]).any():
                raise ValueError("edges must satisfy u < v")
            if e.min() < 0 or e.max() >= self.n:
                raise ValueError("edge endpoint out of range")
            order = np.lexsort((e[:, 1], e[:, 0]))
            e = e[order]
            if len(e) > 1 and (e[1:] == e[:-1]).all(axis=1).any():
                raise ValueError("duplicate edges")
        self.edges = e
        if self.freq is None:
            self.freq = np.zeros(len(e), dtype=np.int64)
        else:
            self.freq = np.asarray(self.freq, dtype=np.int64).copy()
            if len(self.freq) != len(e):
                raise ValueError("freq length must match edge count")
            if (self.freq < 0).any():
                raise ValueError("frequencies must be nonnegative")

    @property
    def edge_count(self):
        return len(self.edges)

    def copy(self):
        return FrequencyGraph(self.n, self.edges.copy(), self.freq.copy())

    def csr(self):
        """(indptr, neighbor vertex, edge id) arrays; neighbors ascending."""
        if self._csr is None:
            e = self.edges
            both_src = np.concatenate([e[:, 0], e[:, 1]])
            both_dst = np.concatenate([e[:, 1], e[:, 0]])
            eids = np.tile(np.arange(len(e), dtype=np.int32), 2)
            order = np.lexsort((both_dst, both_src))
            nbrs = both_dst[order].astype(np.int32)
            ids = eids[order]
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.add.at(indptr, both_src + 1, 1)
            np.cumsum(indptr, out=indptr)
            self._csr = (indptr, nbrs, ids)
        return self._csr

    def with_extra_edges(self, extra):
        """New graph with `extra` (u, v) pairs added at frequency 0."""
        extra = np.asarray(extra, dtype=np.int32).reshape(-1, 2)
        lo = np.minimum(extra[:, 0], extra[:, 1])
        hi = np.maximum(extra[:, 0], extra[:, 1])
        merged = np.vstack([self.edges, np.column_stack([lo, hi])])
        freq = np.concatenate([self.freq, np.zeros(len(extra), dtype=np.int64)])
        # re-sorting keeps the frequency array aligned with its edge
        order = np.lexsort((merged[:, 1], merged[:, 0]))
        return FrequencyGraph(self.n, merged[order], freq[order])


@dataclass(frozen=True)
class Cut:
    """A two-part split of a graph's vertices with its crossing edges."""

    part_a: tuple
    part_b: tuple
    crossing: tuple

    @property
    def size(self):
        """Number of crossing edges, d(A, B)."""
        return len(self.crossing)


def build_neighborhood_graph(d: DissimilarityMatrix, neighbors=DEFAULT_NEIGHBORS) -> FrequencyGraph:
    """Connect every object to its `neighbors` nearest others plus ties.

    A vertex is adjacent to the `neighbors` closest other vertices and to
    every vertex whose distance ties the last of them; adjacency is the
    union over both endpoints, so the result does not depend on how
    equidistant vertices are enumerated.  With fewer than `neighbors`
    candidates the vertex is connected to all others.  All counters start
    at 0.
    """
    n = d.size
    if n < 2:
        raise ValueError("need at least 2 objects")
    if neighbors < 1:
        raise ValueError("neighbors must be >= 1")
    m = min(neighbors, n - 1)
    dist = d.entries.copy()
    np.fill_diagonal(dist, np.inf)
    kth = np.partition(dist, m - 1, axis=1)[:, m - 1]
    adj = dist <= kth[:, None]
    adj |= adj.T
    iu, ju = np.where(np.triu(adj, 1))
    return FrequencyGraph(n, np.column_stack([iu, ju]).astype(np.int32))


def connected_components(g: FrequencyGraph, restrict_to=None, edge_mask=None):
    """Components as sorted vertex lists, ordered by smallest member.

    `restrict_to` limits the search to an induced vertex subset;
    `edge_mask` (bool per edge) drops masked-out edges.
    """
    indptr, nbrs, eids = g.csr()
    if restrict_to is not None:
        allowed = np.zeros(g.n, dtype=bool)
        allowed[list(restrict_to)] = True
    else:
        allowed = np.ones(g.n, dtype=bool)
    seen = ~allowed
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for idx in range(indptr[v], indptr[v + 1]):
                w = nbrs[idx]
                if seen[w]:
                    continue
                if edge_mask is not None and not edge_mask[eids[idx]]:
                    continue
                seen[w] = True
                stack.append(w)
        comp.sort()
        comps.append(comp)
    return comps


def is_connected(g: FrequencyGraph, restrict_to=None):
    return len(connected_components(g, restrict_to)) == 1


def repair_connectivity(g: FrequencyGraph, d: DissimilarityMatrix,
                        vertex_ids=None) -> FrequencyGraph:
    """Bridge components with closest-pair edges until connected.

    Each added edge joins the globally closest pair of vertices lying in
    different current components (ties resolved by the smallest (i, j)
    pair); repeats until one component remains.  Added edges start at
    frequency 0.  `vertex_ids` maps graph vertices to rows of `d` when
    the graph is an extracted subgraph; identity when omitted.
    """
    comps = connected_components(g)
    if len(comps) <= 1:
        return g
    ids = np.arange(g.n) if vertex_ids is None else np.asarray(vertex_ids)
    sub = d.entries[np.ix_(ids, ids)].copy()
    label = np.empty(g.n, dtype=np.int64)
    for ci, comp in enumerate(comps):
        label[comp] = ci
    added = []
    remaining = len(comps)
    while remaining > 1:
        blocked = label[:, None] == label[None, :]
        masked = np.where(blocked, np.inf, sub)
        flat = int(np.argmin(masked))
        i, j = divmod(flat, g.n)
        added.append((min(i, j), max(i, j)))
        label[label == label[j]] = label[i]
        remaining -= 1
    return g.with_extra_edges(added)


def cut_edges(g: FrequencyGraph, part_a) -> Cut:
    """Cut determined by `part_a` with its crossing edges enumerated."""
    part_a = sorted(set(part_a))
    if not part_a or len(part_a) >= g.n:
        raise ValueError("part_a must be a nonempty proper subset of the vertices")
    in_a = np.zeros(g.n, dtype=bool)
    in_a[part_a] = True
    part_b = tuple(int(v) for v in np.flatnonzero(~in_a))
    e = g.edges
    crossing = e[in_a[e[:, 0]] != in_a[e[:, 1]]] if len(e) else e
    return Cut(
        part_a=tuple(part_a),
        part_b=part_b,
        crossing=tuple((int(u), int(v)) for u, v in crossing),
    )


def induced_subgraph(g: FrequencyGraph, vertices):
    """Subgraph on `vertices` relabelled 0..m-1 (ascending original id).

    Returns (subgraph, mapping) where mapping[local] = original id.
    """
    mapping = np.array(sorted(set(vertices)), dtype=np.int64)
    if mapping.size == 0:
        raise ValueError("empty vertex set")
    local = np.full(g.n, -1, dtype=np.int64)
    local[mapping] = np.arange(len(mapping))
    e = g.edges
    keep = (local[e[:, 0]] >= 0) & (local[e[:, 1]] >= 0) if len(e) else np.zeros(0, bool)
    sub_edges = np.column_stack([local[e[keep, 0]], local[e[keep, 1]]]).astype(np.int32)
    sub = FrequencyGraph(len(mapping), sub_edges, g.freq[keep])
    return sub, mapping


def export_edges_csv(path, g: FrequencyGraph):
    """Edge list as `u,v,freq` rows (debug / plotting aid)."""
    with open(path, "w") as fh:
        for (u, v), f in zip(g.edges, g.freq):
            fh.write(f"{u},{v},{f}\n")
