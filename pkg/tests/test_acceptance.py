"""Acceptance suite: one test per release criterion, at stated tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion plus the logged context values.  The runtime criterion assumes
the compiled kernel (the pure fallback is an order of magnitude slower).
"""

import time

import numpy as np
import pytest

import acdaa
from acdaa.cli import sweep_grid
from acdaa.daa import Classification, run_daa
from acdaa.dichotomy import (
    brute_force_best_cut,
    decomposition_value,
    frequency_dichotomy,
    ratio_cut_value,
)
from acdaa.ensemble import (
    complexity,
    concordance,
    kmeans_baseline,
    rand_index,
    run_external,
)
from acdaa.graph import build_neighborhood_graph, connected_components, repair_connectivity
from acdaa.matrix_io import (
    generate_planted_votes,
    generate_two_blobs,
    generate_two_rings_blob,
    points_to_dissimilarity,
    votes_to_dissimilarity,
)

from helpers import all_cuts, rand_index_bruteforce, random_connected_graph, \
    random_dissimilarity, random_partition


def report(n, message):
    print(f"\nACCEPTANCE {n} PASS - {message}")


@pytest.fixture(scope="module")
def planted_votes_run():
    votes, labels = generate_planted_votes(450, 250, 4, noise=0.05, seed=0)
    d = votes_to_dissimilarity(votes)
    sol = run_external(d, k=10, r=10, reps=2000, master_seed=42)
    return votes, Classification.from_labels(labels), d, sol


def test_criterion_01_family_size_law_and_runtime():
    cases = [(20, 1), (35, 4), (80, 7), (200, 10)]
    for i, (n, k) in enumerate(cases):
        d = random_dissimilarity(n, seed=i)
        g = repair_connectivity(build_neighborhood_graph(d), d)
        fam = run_daa(g, d, k, reps=150, rng=i)
        assert len(fam.entries) == (k + 1) * k // 2
        sol = run_external(d, k=k, r=2, reps=150, master_seed=i)
        assert 0.0 < sol.complexity <= 1.0

    d = random_dissimilarity(500, seed=99)
    start = time.perf_counter()
    sol = run_external(d, k=10, r=10, reps=2000, master_seed=1)
    elapsed = time.perf_counter() - start
    assert sum(s.multiplicity for s in sol.solutions) == 55 * 10
    assert 0.0 < sol.complexity <= 1.0
    assert elapsed < 60.0
    report(1, f"family sizes exact; N=500 k=10 r=10 T=2000 took {elapsed:.1f}s (< 60s)")


def test_criterion_02_closing_stage_invariants():
    checked = 0
    for seed in range(100):
        n = 10 + (seed * 7) % 51  # 10..60
        g = random_connected_graph(n, extra_edges=(seed % 4) * n // 2, seed=seed)
        res = frequency_dichotomy(g, reps=100, rng=seed)
        assert int(res.freqs.max()) == res.max_freq  # exact, zero tolerance
        comps = connected_components(g, edge_mask=res.freqs < res.max_freq)
        assert len(comps) >= 2
        checked += 1
    assert checked == 100
    report(2, "saved peak holds and peak-edge removal disconnects, 100/100 dichotomies")


def test_criterion_03_ratio_cut_duality():
    for seed in range(6):
        n = 8 + seed % 5  # up to 12
        g = random_connected_graph(n, extra_edges=n, seed=seed + 200)
        best_d, min_r = -np.inf, np.inf
        argmax_d, argmin_r = set(), set()
        for cut in all_cuts(g):
            if cut.size == 0:
                continue
            dv = decomposition_value(cut)
            rv = ratio_cut_value(cut)
            assert abs(dv * rv - g.n) < 1e-12
            if dv > best_d:
                best_d, argmax_d = dv, {cut.part_a}
            elif dv == best_d:
                argmax_d.add(cut.part_a)
            if rv < min_r:
                min_r, argmin_r = rv, {cut.part_a}
            elif rv == min_r:
                argmin_r.add(cut.part_a)
        assert argmax_d == argmin_r
    report(3, "product equals N within 1e-12; optimizer sets coincide on full enumerations")


def test_criterion_04_bridge_determinism():
    size = 8
    edges = []
    for base in (0, size):
        for i in range(size):
            for j in range(i + 1, size):
                edges.append((base + i, base + j))
    edges.append((size - 1, size))
    g = acdaa.FrequencyGraph(16, np.array(edges, dtype=np.int32))

    best = brute_force_best_cut(g)
    assert decomposition_value(best) == 64.0
    hits = 0
    for seed in range(20):
        res = frequency_dichotomy(g, reps=2000, rng=seed)
        if res.cut.crossing == ((7, 8),) and \
                set(res.cut.part_a) in ({*range(8)}, {*range(8, 16)}):
            hits += 1
    assert hits == 20
    report(4, "bridge cut found for 20/20 seeds and matches the exhaustive maximizer (D=64)")


def test_criterion_05_ring_classes_recovered_by_merging_only():
    pts, labels = generate_two_rings_blob(seed=0)
    assert abs(pts.n_points - 200) <= 10
    planted = Classification.from_labels(labels)
    d = points_to_dissimilarity(pts)
    sol = run_external(d, k=3, r=10, reps=2000, master_seed=42, keep_families=True)

    as_direct = as_merged = 0
    for fam in sol.families:
        for e in fam.entries:
            if e.classification == planted:
                if e.kind == "direct":
                    as_direct += 1
                else:
                    as_merged += 1
    assert as_direct == 0
    assert as_merged >= 1
    match = next(s for s in sol.solutions if s.classification == planted)
    assert match.stability == 1.0
    assert rand_index(match.classification, planted) >= 0.98
    report(5, f"planted 3-class split is merge-only (x{as_merged}), stability 1.0; "
              f"logged: {len(sol.solutions)} distinct, complexity {sol.complexity:.3f}")


def test_criterion_06_pair_agreement_oracle():
    rng = np.random.default_rng(123)
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        a = random_partition(n, int(rng.integers(10 ** 9)))
        b = random_partition(n, int(rng.integers(10 ** 9)))
        assert rand_index(a, b) == rand_index_bruteforce(a, b)
    report(6, "agreement index equals pair enumeration on 1000 random partition pairs")


def test_criterion_07_complexity_arithmetic():
    v = complexity(10, k=3, r=4)
    # the quoted 0.41667 is the 5-decimal rounding of 10/24; the 1e-9
    # tolerance binds the computed value to the exact ratio
    assert abs(v - 10 / 24) <= 1e-9
    assert f"{v:.5f}" == "0.41667"
    assert f"{v:.3f}" == "0.417"
    assert (10 + 1) * 10 // 2 * 10 == 550
    assert complexity(550, k=10, r=10) == 1.0
    report(7, "complexity(10,3,4) prints 0.417; k=10,r=10 denominator is exactly 550")


def test_criterion_08_inverse_run_scaling():
    pts, _ = generate_two_blobs(50, 50, separation=25.0, seed=0)
    d = points_to_dissimilarity(pts)
    s5 = run_external(d, k=1, r=5, reps=2000, master_seed=7)
    s10 = run_external(d, k=1, r=10, reps=2000, master_seed=7)
    assert len(s5.solutions) == len(s10.solutions)
    assert s10.complexity == s5.complexity / 2
    report(8, f"distinct count stable at {len(s5.solutions)}; complexity halves exactly")


def test_criterion_09_vote_pipeline_and_sweep(planted_votes_run):
    votes, planted, d, sol = planted_votes_run
    best = max(
        (s for s in sol.solutions if not s.degenerate),
        key=lambda s: rand_index(s.classification, planted),
    )
    score = rand_index(best.classification, planted)
    assert score >= 0.95

    grid = sweep_grid(d, ks=list(range(5, 11)), rs=list(range(5, 11)),
                      reps=2000, master_seed=42)
    assert len(grid) == 6 and all(len(row) == 6 for row in grid)
    for col in range(6):
        column = [grid[row][col] for row in range(6)]
        for above, below in zip(column, column[1:]):
            assert abs(above - below) <= 0.15
    report(9, f"faction recovery RAND {score:.3f} (>= 0.95); 6x6 sweep grid smooth per column")


def test_criterion_10_stability_beats_kmeans(planted_votes_run):
    votes, planted, d, sol = planted_votes_run
    repeated = [s for s in sol.solutions if s.multiplicity >= 2]
    main_score = max(s.stability for s in repeated)
    km = [
        kmeans_baseline(votes.entries.astype(float), 4,
                        rng=np.random.default_rng(np.random.SeedSequence([0, i])))
        for i in range(5)
    ]
    km_score = concordance(km)
    assert main_score > km_score
    report(10, f"repeated-solution stability {main_score:.3f} strictly beats "
               f"K-means restart concordance {km_score:.3f}")
