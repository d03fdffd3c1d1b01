"""Input ingestion, synthetic dataset generation and serialization.

Three kinds of raw input are supported: vote matrices (entries in
{+1, -1, 0}), point clouds, and ready-made dissimilarity matrices.
Votes and points are converted to dissimilarities with the Euclidean
metric; loaded dissimilarity matrices only have to be symmetric,
nonnegative and zero on the diagonal (no triangle inequality required).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


class ParseError(ValueError):
    """Malformed input file; carries a 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class VoteMatrix:
    """m x n integer matrix, one row per voter, entries in {+1, -1, 0}."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] < 2 or a.shape[1] < 1:
            raise ValueError("vote matrix must be 2-D with >= 2 rows and >= 1 column")
        if not np.isin(a, (-1, 0, 1)).all():
            raise ValueError("vote entries must be -1, 0 or +1")
        object.__setattr__(self, "entries", a)

    @property
    def n_voters(self):
        return self.entries.shape[0]

    @property
    def n_votes(self):
        return self.entries.shape[1]


@dataclass(frozen=True)
class DissimilarityMatrix:
    """Symmetric nonnegative N x N matrix with zero diagonal."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
            raise ValueError("dissimilarity matrix must be square with N >= 2")
        if not np.array_equal(a, a.T):
            raise ValueError("dissimilarity matrix must be symmetric")
        if np.diagonal(a).any():
            raise ValueError("dissimilarity matrix must have a zero diagonal")
        if (a < 0).any():
            raise ValueError("dissimilarities must be nonnegative")
        object.__setattr__(self, "entries", a)

    @property
    def size(self):
        return self.entries.shape[0]


@dataclass(frozen=True)
class PointSet:
    """Fixed-dimension real vectors, one row per object."""

    points: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.points, dtype=np.float64)
        if a.ndim != 2:
            raise ValueError("points must form a 2-D array (one point per row)")
        object.__setattr__(self, "points", a)

    @property
    def n_points(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]


def votes_to_dissimilarity(votes: VoteMatrix) -> DissimilarityMatrix:
    """Euclidean distance between vote rows."""
    return points_to_dissimilarity(PointSet(votes.entries.astype(np.float64)))


def points_to_dissimilarity(pts: PointSet) -> DissimilarityMatrix:
    """Pairwise Euclidean distances between points."""
    if pts.n_points < 2:
        raise ValueError("need at least 2 points")
    a = pts.points
    sq = np.sum(a * a, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (a @ a.T)
    np.maximum(d2, 0.0, out=d2)
    d = np.sqrt(d2)
    # exact symmetry and a clean diagonal despite float round-off
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return DissimilarityMatrix(d)


# ---------------------------------------------------------------------------
# synthetic datasets (all bit-reproducible for a fixed seed)
# ---------------------------------------------------------------------------


def generate_two_blobs(n1=50, n2=50, separation=20.0, radius=1.0, seed=0):
    """Two Gaussian blobs on the x axis, `separation` apart.

    Returns (PointSet, labels) with labels 0 for the first blob, 1 for
    the second.
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("blob sizes must be positive")
    rng = np.random.default_rng(np.random.SeedSequence([_seed_int(seed), 1]))
    a = rng.normal(0.0, radius, size=(n1, 2))
    b = rng.normal(0.0, radius, size=(n2, 2)) + (separation, 0.0)
    labels = np.repeat([0, 1], [n1, n2])
    return PointSet(np.vstack([a, b])), labels


def generate_blob_plus_ring(n_blob=20, n_ring=160, ring_radius=10.0,
                            blob_sigma=0.8, blob_center=(6.5, 0.0), seed=0):
    """A circle of points with a much smaller dense blob inside it.

    The size imbalance makes the two-part split of this set genuinely
    ambiguous, which is the behaviour the stochastic-stability probes
    exercise.  Returns (PointSet, labels): ring points are label 0, blob
    points label 1.
    """
    if n_blob < 1 or n_ring < 1:
        raise ValueError("counts must be positive")
    rng = np.random.default_rng(np.random.SeedSequence([_seed_int(seed), 2]))
    ring = _ring_points(rng, n_ring, ring_radius)
    blob = _clipped_gaussian(rng, n_blob, blob_sigma) + np.asarray(blob_center)
    labels = np.repeat([0, 1], [n_ring, n_blob])
    return PointSet(np.vstack([ring, blob])), labels


def generate_two_rings_blob(n_outer=104, n_inner=66, n_blob=30,
                            outer_radius=10.0, inner_radius=6.0,
                            blob_sigma=1.0, seed=0):
    """Two concentric rings around a central blob; three planted classes.

    The ring classes are non-convex, so no centroid method can recover
    them.  The outer ring carries two antipodal low-density spots, so
    splitting it tears it into two arcs there; the whole ring is only
    recoverable by re-merging the arcs, never by a sequence of splits.
    Returns (PointSet, labels) with labels 0 (outer ring), 1 (inner
    ring), 2 (blob).
    """
    if min(n_outer, n_inner, n_blob) < 1:
        raise ValueError("counts must be positive")
    rng = np.random.default_rng(np.random.SeedSequence([_seed_int(seed), 3]))
    outer = _ring_points(rng, n_outer, outer_radius, gap_slots=2)
    inner = _ring_points(rng, n_inner, inner_radius)
    blob = _clipped_gaussian(rng, n_blob, blob_sigma)
    labels = np.repeat([0, 1, 2], [n_outer, n_inner, n_blob])
    return PointSet(np.vstack([outer, inner, blob])), labels


def generate_planted_votes(m=450, n=250, factions=4, noise=0.05, seed=0):
    """Vote matrix of `m` voters split into factions with shared stances.

    Every faction has one stance row drawn from {+1, -1}; each member
    copies it, then each entry is independently resampled from
    {+1, -1, 0} with probability `noise`.  Faction sizes shrink by a
    fifth from one faction to the next: real voting blocs are rarely
    uniform, and the imbalance is what defeats centroid baselines.
    Returns (VoteMatrix, labels).
    """
    if m < 2 or n < 1 or factions < 1 or factions > m:
        raise ValueError("invalid planted-votes shape")
    if not 0.0 <= noise <= 1.0:
        raise ValueError("noise must be in [0, 1]")
    rng = np.random.default_rng(np.random.SeedSequence([_seed_int(seed), 4]))
    stances = rng.choice((-1, 1), size=(factions, n))
    weights = np.array([0.8 ** i for i in range(factions)])
    sizes = np.maximum(1, np.floor(m * weights / weights.sum()).astype(int))
    sizes[0] += m - sizes.sum()
    labels = np.repeat(np.arange(factions), sizes)
    entries = stances[labels]
    if noise > 0.0:
        hit = rng.random(size=entries.shape) < noise
        entries = np.where(hit, rng.choice((-1, 0, 1), size=entries.shape), entries)
    return VoteMatrix(entries), labels


def _ring_points(rng, count, radius, radial_jitter=0.08, angular_jitter=0.15,
                 gap_slots=0):
    """Jittered circle; `gap_slots` empty slots at two antipodal spots."""
    slots = count + 2 * gap_slots
    idx = np.arange(slots)
    if gap_slots:
        half = slots // 2
        skipped = set(range(gap_slots)) | set(range(half, half + gap_slots))
        idx = np.array([i for i in idx if i not in skipped])[:count]
    step = 2.0 * np.pi / slots
    angles = idx * step + rng.normal(0.0, angular_jitter * step, count)
    radii = radius + rng.normal(0.0, radial_jitter, count)
    return np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])


def _clipped_gaussian(rng, count, sigma, max_norm_sigmas=2.2):
    pts = rng.normal(0.0, sigma, size=(count, 2))
    norms = np.linalg.norm(pts, axis=1)
    cap = max_norm_sigmas * sigma
    scale = np.where(norms > cap, cap / np.maximum(norms, 1e-300), 1.0)
    return pts * scale[:, None]


def _seed_int(seed):
    s = int(seed)
    if s < 0:
        raise ValueError("seed must be nonnegative")
    return s


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def load_dissimilarity_csv(path) -> DissimilarityMatrix:
    """N x N comma-separated reals, no header."""
    rows = _read_csv_floats(path)
    n = len(rows)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ParseError(f"expected {n} columns, got {len(row)}", line=i + 1)
    a = np.array(rows, dtype=np.float64)
    for i in range(n):
        if a[i, i] != 0.0:
            raise ParseError("nonzero diagonal entry", line=i + 1)
        for j in range(i):
            if a[i, j] != a[j, i]:
                raise ParseError(f"asymmetric at column {j + 1}", line=i + 1)
            if a[i, j] < 0.0:
                raise ParseError(f"negative entry at column {j + 1}", line=i + 1)
    return DissimilarityMatrix(a)


def save_dissimilarity_csv(path, d: DissimilarityMatrix):
    np.savetxt(path, d.entries, delimiter=",", fmt="%.17g")


def load_votes_csv(path, skip_header=False) -> VoteMatrix:
    """m x n comma-separated integers in {-1, 0, 1}."""
    rows = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            if skip_header and lineno == 1:
                continue
            row = []
            for tok in raw.split(","):
                tok = tok.strip()
                if tok not in ("-1", "0", "1"):
                    raise ParseError(f"invalid vote token {tok!r}", line=lineno)
                row.append(int(tok))
            rows.append(row)
    if not rows:
        raise ParseError("empty vote file", line=1)
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ParseError("ragged rows in vote file", line=1)
    try:
        return VoteMatrix(np.array(rows, dtype=np.int64))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def save_votes_csv(path, votes: VoteMatrix):
    np.savetxt(path, votes.entries, delimiter=",", fmt="%d")


def load_points_csv(path) -> PointSet:
    """One point per row, comma-separated reals."""
    rows = _read_csv_floats(path)
    if not rows:
        raise ParseError("empty points file", line=1)
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ParseError("inconsistent point dimensions", line=1)
    return PointSet(np.array(rows, dtype=np.float64))


def save_points_csv(path, pts: PointSet):
    np.savetxt(path, pts.points, delimiter=",", fmt="%.17g")


def save_labels_csv(path, labels):
    np.savetxt(path, np.asarray(labels, dtype=np.int64), fmt="%d")


def _read_csv_floats(path):
    rows = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                rows.append([float(tok) for tok in raw.split(",")])
            except ValueError as exc:
                raise ParseError(f"not a number: {exc}", line=lineno) from exc
    return rows


def save_classifications_json(path, classifications):
    """List of partitions; each partition a list of ascending index lists."""
    payload = [[list(cls) for cls in c.classes] for c in classifications]
    with open(path, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_classifications_json(path):
    from .daa import Classification

    with open(path) as fh:
        payload = json.load(fh)
    return [Classification.from_groups(groups) for groups in payload]
