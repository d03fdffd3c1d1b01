"""Divisive-agglomerative construction of one run's classification family.

One run alternates divisive and agglomerative stages: the dichotomy
splits the largest class of the current partition, and after every split
an agglomeration chain merges the most edge-connected class pairs back
down to two classes.  With k splits this yields (k+1)*k/2 partitions:
for every stage j the split partition itself (direct) plus the merged
ones derived from it.  Merged partitions matter because the visually
correct answer is sometimes reachable only by re-joining pieces that no
sequence of splits can produce directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dichotomy import DEFAULT_REPETITIONS, frequency_dichotomy
from .graph import FrequencyGraph, connected_components, induced_subgraph, \
    repair_connectivity
from .matrix_io import DissimilarityMatrix


@dataclass(frozen=True)
class Classification:
    """A partition of {0..N-1} in canonical form.

    Classes are ascending index tuples, ordered by smallest member;
    equality of canonical forms is partition equality.
    """

    classes: tuple

    def __post_init__(self):
        seen = set()
        for cls in self.classes:
            if not cls:
                raise ValueError("empty class")
            if list(cls) != sorted(cls):
                raise ValueError("class members must be ascending")
            if seen & set(cls):
                raise ValueError("classes overlap")
            seen |= set(cls)
        if seen != set(range(len(seen))):
            raise ValueError("classes must cover 0..N-1 without gaps")
        firsts = [cls[0] for cls in self.classes]
        if firsts != sorted(firsts):
            raise ValueError("classes must be ordered by smallest member")

    @classmethod
    def from_groups(cls, groups):
        canon = sorted((tuple(sorted(int(v) for v in grp)) for grp in groups),
                       key=lambda t: t[0])
        return cls(tuple(canon))

    @classmethod
    def from_labels(cls, labels):
        groups = {}
        for idx, lab in enumerate(labels):
            groups.setdefault(lab, []).append(idx)
        return cls.from_groups(groups.values())

    @property
    def num_classes(self):
        return len(self.classes)

    @property
    def n_objects(self):
        return sum(len(c) for c in self.classes)

    def labels(self):
        out = np.empty(self.n_objects, dtype=np.int64)
        for i, cls in enumerate(self.classes):
            out[list(cls)] = i
        return out

    def class_sizes(self):
        return tuple(len(c) for c in self.classes)


@dataclass(frozen=True)
class FamilyEntry:
    """One classification of a run family.

    `stage` is the split count + 1 it derives from (the j in the family
    layout), `num_classes` its class count, `kind` either "direct" for
    partitions produced by splits alone or "merged" for partitions
    obtained from a direct one by agglomeration.  In the padded slots of
    a truncated run both labels describe the slot, not the repeated
    classification.
    """

    stage: int
    num_classes: int
    kind: str
    classification: Classification


@dataclass(frozen=True)
class RunFamily:
    """All (k+1)*k/2 classifications of one run, in family order."""

    entries: tuple
    k: int
    padded: bool = False

    def __post_init__(self):
        expected = (self.k + 1) * self.k // 2
        if len(self.entries) != expected:
            raise ValueError(
                f"family must hold {expected} classifications, got {len(self.entries)}"
            )

    def classifications(self):
        return [e.classification for e in self.entries]

    def direct(self):
        return [e for e in self.entries if e.kind == "direct"]

    def merged(self):
        return [e for e in self.entries if e.kind == "merged"]


# kind tags; "direct" partitions come straight out of the split sequence,
# "merged" ones out of the agglomeration chains
DIRECT = "direct"
MERGED = "merged"


def select_class_to_split(c: Classification) -> int:
    """Index of the largest class; ties pick the smallest index."""
    if not c.classes:
        raise ValueError("empty classification")
    sizes = [len(cls) for cls in c.classes]
    return sizes.index(max(sizes))


def splice_dichotomy(c: Classification, split_class: int, cut) -> Classification:
    """Replace one class by the two parts of its cut."""
    target = c.classes[split_class]
    if set(cut.part_a) | set(cut.part_b) != set(target) or set(cut.part_a) & set(cut.part_b):
        raise ValueError("cut does not partition the selected class")
    groups = [cls for i, cls in enumerate(c.classes) if i != split_class]
    groups.append(tuple(cut.part_a))
    groups.append(tuple(cut.part_b))
    return Classification.from_groups(groups)


def inter_class_edge_counts(c: Classification, g: FrequencyGraph):
    """Edge counts between every class pair, as {(i, j): count} with i < j."""
    labels = c.labels()
    counts = {}
    for u, v in g.edges:
        a, b = int(labels[u]), int(labels[v])
        if a == b:
            continue
        key = (a, b) if a < b else (b, a)
        counts[key] = counts.get(key, 0) + 1
    return counts


def merge_classes(c: Classification, i: int, j: int) -> Classification:
    groups = [cls for k, cls in enumerate(c.classes) if k not in (i, j)]
    groups.append(tuple(sorted(c.classes[i] + c.classes[j])))
    return Classification.from_groups(groups)


def agglomerate_chain(c: Classification, g: FrequencyGraph):
    """Merge the most edge-connected class pair down to 2 classes.

    Returns the chain of merged classifications in decreasing class
    count (j-1, ..., 2); empty for fewer than 3 classes.  Edge counts
    are taken on `g`, the graph the run started from, at every step.
    Ties merge the smallest (i, j) class-index pair.
    """
    if c.num_classes < 3:
        return []
    chain = []
    cur = c
    while cur.num_classes > 2:
        counts = inter_class_edge_counts(cur, g)
        best = max(counts.values()) if counts else 0
        pair = min([k for k, v in counts.items() if v == best]) if counts else (0, 1)
        cur = merge_classes(cur, *pair)
        chain.append(cur)
    return chain


def run_daa(g: FrequencyGraph, d: DissimilarityMatrix, k: int,
            reps=DEFAULT_REPETITIONS, rng=None) -> RunFamily:
    """One full divisive-agglomerative run of k successive splits.

    `g` must be connected (bridge it with `repair_connectivity` first).
    Split i uses a seed spawned from `rng` (a numpy SeedSequence or an
    integer), so the first splits of runs with different k coincide.
    Before every split the chosen class's subgraph is re-bridged via the
    dissimilarity matrix if it is disconnected.

    If the largest class ever becomes a singleton (only possible for
    k >= N) the remaining slots repeat the last direct classification
    and the family is flagged `padded`.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(connected_components(g)) != 1:
        raise ValueError("graph must be connected; repair it first")
    seeds = _per_split_seeds(rng, k)

    current = None
    groups = []  # one list per stage, stage j holds j entries
    padded = False
    for split_idx in range(k):
        stage = split_idx + 2
        if current is None:
            target_vertices = list(range(g.n))
            split_class = None
        else:
            split_class = select_class_to_split(current)
            target_vertices = current.classes[split_class]
            if len(target_vertices) < 2:
                padded = True
                break
        sub, mapping = induced_subgraph(g, target_vertices)
        sub = repair_connectivity(sub, d, vertex_ids=mapping)
        result = frequency_dichotomy(sub, reps=reps, rng=seeds[split_idx])
        part_a = tuple(int(mapping[v]) for v in result.cut.part_a)
        part_b = tuple(int(mapping[v]) for v in result.cut.part_b)
        if current is None:
            current = Classification.from_groups([part_a, part_b])
        else:
            current = splice_dichotomy(
                current, split_class, _MappedCut(part_a, part_b))
        chain = agglomerate_chain(current, g)
        entries = [FamilyEntry(stage, m.num_classes, MERGED, m) for m in reversed(chain)]
        entries.append(FamilyEntry(stage, current.num_classes, DIRECT, current))
        groups.append(entries)

    while len(groups) < k:
        # unsplittable: repeat the last direct classification (flagged)
        stage = len(groups) + 2
        entries = [FamilyEntry(stage, i, MERGED, current) for i in range(2, stage)]
        entries.append(FamilyEntry(stage, stage, DIRECT, current))
        groups.append(entries)

    flat = tuple(e for grp in groups for e in grp)
    return RunFamily(entries=flat, k=k, padded=padded)


@dataclass(frozen=True)
class _MappedCut:
    part_a: tuple
    part_b: tuple


def _per_split_seeds(rng, k):
    if rng is None:
        rng = np.random.SeedSequence()
    elif not isinstance(rng, np.random.SeedSequence):
        rng = np.random.SeedSequence(int(rng))
    return rng.spawn(k)
