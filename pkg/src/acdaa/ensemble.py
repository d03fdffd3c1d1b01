"""Multi-run solution extraction, the complexity index and the metric suite.

Several independent runs of the divisive-agglomerative construction are
executed on the same neighborhood graph; the distinct classifications
collected across all runs form the solution set.  The ratio of distinct
classifications to the maximum possible count (k+1)*k/2 * r is the
problem's complexity: low values mean the same partitions keep coming
back, i.e. a clearly structured problem.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .daa import Classification, RunFamily, run_daa
from .dichotomy import DEFAULT_REPETITIONS
from .graph import DEFAULT_NEIGHBORS, build_neighborhood_graph, repair_connectivity
from .matrix_io import DissimilarityMatrix

THREADS_ENV = "ACDAA_THREADS"


@dataclass(frozen=True)
class Solution:
    """One distinct classification seen across the runs."""

    classification: Classification
    multiplicity: int
    stability: float
    degenerate: bool
    uniformity: float

    @property
    def num_classes(self):
        return self.classification.num_classes


@dataclass(frozen=True)
class SolutionSet:
    """All distinct classifications of r runs plus the complexity index."""

    solutions: tuple
    runs: int
    k: int
    reps: int
    seed: int
    complexity: float
    families: tuple = None

    def __post_init__(self):
        cap = (self.k + 1) * self.k // 2 * self.runs
        if not 1 <= len(self.solutions) <= cap:
            raise ValueError("distinct count out of range")
        if sum(s.multiplicity for s in self.solutions) != cap:
            raise ValueError("multiplicities must sum to the family total")

    def to_dict(self):
        return {
            "k": self.k,
            "r": self.runs,
            "T": self.reps,
            "seed": self.seed,
            "complexity": self.complexity,
            "distinct": [
                {
                    "classes": [list(cls) for cls in s.classification.classes],
                    "multiplicity": s.multiplicity,
                    "stability": s.stability,
                    "degenerate": s.degenerate,
                    "uniformity": s.uniformity,
                    "num_classes": s.num_classes,
                }
                for s in self.solutions
            ],
        }


def complexity(distinct_count, k, r) -> float:
    """distinct_count / ((k+1)*k/2 * r)."""
    cap = (k + 1) * k // 2 * r
    if not 1 <= distinct_count <= cap:
        raise ValueError(f"distinct count must lie in [1, {cap}]")
    return distinct_count / cap


def rand_index(a: Classification, b: Classification) -> float:
    """Fraction of object pairs the two partitions treat the same way.

    A pair agrees when it is co-clustered in both partitions or split in
    both; 1.0 means the partitions coincide.
    """
    n = a.n_objects
    if n != b.n_objects:
        raise ValueError("classifications cover different object sets")
    if n < 2:
        raise ValueError("need at least 2 objects")
    return _rand_from_labels(a.labels(), b.labels())


def _rand_from_labels(la, lb):
    n = len(la)
    ka = int(la.max()) + 1
    kb = int(lb.max()) + 1
    joint = np.bincount(la * kb + lb, minlength=ka * kb)
    s_joint = int((joint * (joint - 1) // 2).sum())
    ca = np.bincount(la, minlength=ka)
    cb = np.bincount(lb, minlength=kb)
    s_a = int((ca * (ca - 1) // 2).sum())
    s_b = int((cb * (cb - 1) // 2).sum())
    pairs = n * (n - 1) // 2
    return (pairs + 2 * s_joint - s_a - s_b) / pairs


def concordance(family) -> float:
    """Minimum pairwise agreement over a family of classifications.

    A family of one (or of identical members) has concordance 1.0.
    """
    family = list(family)
    if not family:
        raise ValueError("empty family")
    worst = 1.0
    for a, b in combinations(family, 2):
        worst = min(worst, rand_index(a, b))
    return worst


def stability(a: Classification, runs) -> float:
    """Best attainable concordance of a one-per-run family containing `a`.

    Greedy construction: starting from `a` (in the first run containing
    it), every other run contributes the member that keeps the family's
    minimum pairwise agreement highest (ties: first in family order).
    1.0 exactly when `a` recurs verbatim in every run.
    """
    distinct, index, fam_ids = _intern([_family_classifications(r) for r in runs])
    if a not in index:
        raise ValueError("classification not found in any run")
    return _greedy_stability(index[a], fam_ids, _rand_matrix(distinct))


def stability_exhaustive(a: Classification, runs) -> float:
    """True maximum concordance over one-per-run families containing `a`.

    Exponential in the run count; only a test oracle for tiny inputs.
    """
    families = [_family_classifications(r) for r in runs]
    if not any(a in fam for fam in families):
        raise ValueError("classification not found in any run")
    best = None
    for combo in product(*families):
        if a not in combo:
            continue
        value = concordance(combo)
        if best is None or value > best:
            best = value
    return best


def _family_classifications(run):
    if isinstance(run, RunFamily):
        return run.classifications()
    return list(run)


def _intern(families):
    """Map equal classifications to one id; families become id lists."""
    distinct = []
    index = {}
    fam_ids = []
    for fam in families:
        ids = []
        for c in fam:
            if c not in index:
                index[c] = len(distinct)
                distinct.append(c)
            ids.append(index[c])
        fam_ids.append(ids)
    return distinct, index, fam_ids


def _rand_matrix(distinct):
    """Pairwise agreement between all distinct classifications."""
    labels = [c.labels() for c in distinct]
    m = np.ones((len(distinct), len(distinct)))
    for i in range(len(distinct)):
        for j in range(i + 1, len(distinct)):
            m[i, j] = m[j, i] = _rand_from_labels(labels[i], labels[j])
    return m


def _greedy_stability(a_id, fam_ids, rand_m):
    home = next(i for i, ids in enumerate(fam_ids) if a_id in ids)
    chosen = [a_id]
    worst = 1.0
    for i, ids in enumerate(fam_ids):
        if i == home:
            continue
        scores = np.minimum(worst, rand_m[np.ix_(ids, chosen)].min(axis=1))
        pick = int(np.argmax(scores))  # first maximum = first in family order
        chosen.append(ids[pick])
        worst = float(scores[pick])
    return worst


def is_degenerate(c: Classification) -> bool:
    """True when any class has at most two members."""
    return any(len(cls) <= 2 for cls in c.classes)


def uniformity(c: Classification) -> float:
    """Largest class size over smallest class size (>= 1)."""
    sizes = c.class_sizes()
    return max(sizes) / min(sizes)


# ---------------------------------------------------------------------------
# external level
# ---------------------------------------------------------------------------


def run_external(d: DissimilarityMatrix, k, r, reps=DEFAULT_REPETITIONS,
                 master_seed=0, neighbors=DEFAULT_NEIGHBORS,
                 keep_families=False) -> SolutionSet:
    """Build the graph once, run r times, extract distinct classifications.

    Run i draws its seeds from SeedSequence([master_seed, i]), so results
    are reproducible and independent of execution order; the number of
    worker threads (env var ACDAA_THREADS, default 1) never changes the
    output.  The neighborhood graph is bridged into one component first
    when necessary.
    """
    if r < 1:
        raise ValueError("run count must be >= 1")
    g = build_neighborhood_graph(d, neighbors)
    g = repair_connectivity(g, d)
    master_seed = int(master_seed)

    def one_run(i):
        return run_daa(g, d, k, reps=reps,
                       rng=np.random.SeedSequence([master_seed, i]))

    workers = _thread_count()
    if workers > 1 and r > 1:
        with ThreadPoolExecutor(max_workers=min(workers, r)) as pool:
            families = list(pool.map(one_run, range(r)))
    else:
        families = [one_run(i) for i in range(r)]

    return collect_solutions(families, k, r, reps, master_seed,
                             keep_families=keep_families)


def collect_solutions(families, k, r, reps, master_seed,
                      keep_families=False) -> SolutionSet:
    """Deduplicate the run families and score every distinct solution."""
    distinct, _, fam_ids = _intern(
        [_family_classifications(f) for f in families])
    counts = [0] * len(distinct)
    for ids in fam_ids:
        for i in ids:
            counts[i] += 1
    rand_m = _rand_matrix(distinct)
    solutions = tuple(
        Solution(
            classification=c,
            multiplicity=counts[i],
            stability=_greedy_stability(i, fam_ids, rand_m),
            degenerate=is_degenerate(c),
            uniformity=uniformity(c),
        )
        for i, c in enumerate(distinct)
    )
    value = complexity(len(solutions), k, r)
    return SolutionSet(
        solutions=solutions,
        runs=r,
        k=k,
        reps=reps,
        seed=master_seed,
        complexity=value,
        families=tuple(families) if keep_families else None,
    )


def _thread_count():
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# K-means baseline
# ---------------------------------------------------------------------------


def kmeans_baseline(vectors, n_clusters, max_iters=1000, rng=0) -> Classification:
    """Plain Lloyd iteration from random distinct data points.

    Assignment ties go to the lowest centroid index; a cluster that
    empties is re-seeded with the point currently farthest from its own
    centroid.  Stops when assignments repeat or after `max_iters`.
    """
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("vectors must be 2-D")
    n = x.shape[0]
    if not 1 <= n_clusters <= n:
        raise ValueError("cluster count must be in [1, N]")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    centroids = x[gen.choice(n, size=n_clusters, replace=False)].copy()

    previous = None
    labels = np.zeros(n, dtype=np.int64)
    for _ in range(max_iters):
        d2 = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        labels = np.argmin(d2, axis=1)
        own = d2[np.arange(n), labels].copy()
        empties = [c for c in range(n_clusters) if not (labels == c).any()]
        if empties:
            for c in empties:
                far = int(np.argmax(own))
                own[far] = -np.inf
                centroids[c] = x[far]
            previous = None  # force another assignment pass
            continue
        if previous is not None and np.array_equal(labels, previous):
            break
        previous = labels
        for c in range(n_clusters):
            centroids[c] = x[labels == c].mean(axis=0)
    return Classification.from_labels(labels)
