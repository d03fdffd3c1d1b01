import numpy as np
import pytest

from acdaa.daa import (
    Classification,
    agglomerate_chain,
    inter_class_edge_counts,
    merge_classes,
    run_daa,
    select_class_to_split,
    splice_dichotomy,
)
from acdaa.graph import (
    FrequencyGraph,
    build_neighborhood_graph,
    cut_edges,
    repair_connectivity,
)
from acdaa.matrix_io import (
    generate_two_blobs,
    generate_two_rings_blob,
    points_to_dissimilarity,
)

from helpers import random_dissimilarity


def classification(*groups):
    return Classification.from_groups(groups)


def graph_from_edges(n, edges):
    return FrequencyGraph(n, np.array(edges, dtype=np.int32))


class TestClassification:
    def test_canonical_form_enforced(self):
        c = Classification.from_groups([[3, 1], [0, 2]])
        assert c.classes == ((0, 2), (1, 3))

    def test_equality_is_structural(self):
        a = Classification.from_groups([[1, 0], [2]])
        b = Classification.from_groups([[2], [0, 1]])
        assert a == b and hash(a) == hash(b)

    def test_invalid_partitions_rejected(self):
        with pytest.raises(ValueError):
            Classification(((0, 1), (1, 2)))
        with pytest.raises(ValueError):
            Classification(((0,), (2,)))
        with pytest.raises(ValueError):
            Classification(((0,), ()))

    def test_labels_round_trip(self):
        c = classification([0, 3], [1, 2], [4])
        assert Classification.from_labels(c.labels()) == c


class TestSelectClassToSplit:
    def test_largest_wins(self):
        c = classification(range(10), range(10, 13), range(13, 16))
        assert select_class_to_split(c) == 0

    def test_tie_takes_first(self):
        c = classification([0, 2, 4, 6, 8], [1, 3, 5, 7, 9])
        assert select_class_to_split(c) == 0

    def test_single_class(self):
        assert select_class_to_split(classification(range(4))) == 0


class TestSpliceDichotomy:
    def test_single_class_split(self):
        c = classification(range(6))
        g = graph_from_edges(6, [(0, 3), (1, 4), (2, 5)])
        cut = cut_edges(g, [0, 1, 2])
        assert splice_dichotomy(c, 0, cut).classes == ((0, 1, 2), (3, 4, 5))

    def test_untouched_class_is_preserved(self):
        c = classification([0, 1], [2, 3, 4, 5])
        g = graph_from_edges(6, [(2, 3), (4, 5), (3, 4)])
        cut = cut_edges(g, [2, 3])
        out = splice_dichotomy(c, 1, _SubsetCut((2, 3), (4, 5)))
        assert out.classes == ((0, 1), (2, 3), (4, 5))

    def test_result_is_canonical(self):
        c = classification([0, 5], [1, 2, 3, 4])
        out = splice_dichotomy(c, 1, _SubsetCut((3, 4), (1, 2)))
        assert out.classes == ((0, 5), (1, 2), (3, 4))

    def test_vertex_set_mismatch_rejected(self):
        c = classification([0, 1], [2, 3])
        with pytest.raises(ValueError):
            splice_dichotomy(c, 0, _SubsetCut((0,), (2,)))


class _SubsetCut:
    def __init__(self, part_a, part_b):
        self.part_a = part_a
        self.part_b = part_b


class TestAgglomerateChain:
    def make_weighted_pairs_graph(self):
        # classes {0,1}, {2,3}, {4,5}; inter-class edge counts 4 / 2 / 1
        edges = [(0, 2), (0, 3), (1, 2), (1, 3)]          # (0,1): 4 edges
        edges += [(2, 4)]                                  # (1,2): 1 edge
        edges += [(0, 4), (1, 5)]                          # (0,2): 2 edges
        edges += [(0, 1), (2, 3), (4, 5)]                  # intra
        return graph_from_edges(6, edges)

    def test_most_connected_pair_merges_first(self):
        g = self.make_weighted_pairs_graph()
        c = classification([0, 1], [2, 3], [4, 5])
        counts = inter_class_edge_counts(c, g)
        assert counts == {(0, 1): 4, (0, 2): 2, (1, 2): 1}
        chain = agglomerate_chain(c, g)
        assert len(chain) == 1
        assert chain[0].classes == ((0, 1, 2, 3), (4, 5))

    def test_all_counts_equal_merges_first_pair(self):
        g = graph_from_edges(6, [(0, 2), (2, 4), (0, 4)])
        c = classification([0, 1], [2, 3], [4, 5])
        chain = agglomerate_chain(c, g)
        assert chain[0].classes == ((0, 1, 2, 3), (4, 5))

    def test_no_inter_class_edges_fall_back_to_first_pair(self):
        g = graph_from_edges(6, [(0, 1), (2, 3), (4, 5)])
        c = classification([0, 1], [2, 3], [4, 5])
        chain = agglomerate_chain(c, g)
        assert chain[0].classes == ((0, 1, 2, 3), (4, 5))

    def test_short_classifications_yield_empty_chain(self):
        g = graph_from_edges(4, [(0, 1), (2, 3)])
        assert agglomerate_chain(classification([0, 1], [2, 3]), g) == []

    def test_chain_decreases_by_one_and_recounts(self):
        d = random_dissimilarity(20, seed=4)
        g = build_neighborhood_graph(d)
        rng = np.random.default_rng(0)
        c = Classification.from_labels(rng.integers(0, 6, size=20))
        chain = agglomerate_chain(c, g)
        assert [x.num_classes for x in chain] == list(range(c.num_classes - 1, 1, -1))
        # every merged pair must achieve the maximal count at its step
        cur = c
        for nxt in chain:
            counts = inter_class_edge_counts(cur, g)
            merged = [cls for cls in nxt.classes if cls not in cur.classes]
            assert len(merged) == 1
            parts = [i for i, cls in enumerate(cur.classes)
                     if set(cls) < set(merged[0])]
            key = (min(parts), max(parts))
            if counts:
                assert counts.get(key, 0) == max(counts.values())
            cur = nxt


class TestRunDaa:
    def small_problem(self, n=24, seed=0):
        d = random_dissimilarity(n, seed=seed)
        g = repair_connectivity(build_neighborhood_graph(d), d)
        return g, d

    def test_single_split_family(self):
        g, d = self.small_problem()
        fam = run_daa(g, d, 1, reps=100, rng=0)
        assert len(fam.entries) == 1
        e = fam.entries[0]
        assert (e.stage, e.num_classes, e.kind) == (2, 2, "direct")

    def test_three_split_family_layout(self):
        g, d = self.small_problem()
        fam = run_daa(g, d, 3, reps=100, rng=0)
        layout = [(e.stage, e.num_classes, e.kind) for e in fam.entries]
        assert layout == [
            (2, 2, "direct"),
            (3, 2, "merged"), (3, 3, "direct"),
            (4, 2, "merged"), (4, 3, "merged"), (4, 4, "direct"),
        ]

    @pytest.mark.parametrize("k", [1, 2, 4, 6])
    def test_family_size_law(self, k):
        g, d = self.small_problem(n=30, seed=k)
        fam = run_daa(g, d, k, reps=80, rng=k)
        assert len(fam.entries) == (k + 1) * k // 2
        for e in fam.entries:
            assert e.classification.n_objects == 30  # valid partition

    def test_direct_sequence_refines_one_class(self):
        g, d = self.small_problem(n=26, seed=7)
        fam = run_daa(g, d, 5, reps=80, rng=1)
        directs = [e.classification for e in fam.direct()]
        for prev, cur in zip(directs, directs[1:]):
            gone = [c for c in prev.classes if c not in cur.classes]
            new = [c for c in cur.classes if c not in prev.classes]
            assert len(gone) == 1 and len(new) == 2
            assert set(gone[0]) == set(new[0]) | set(new[1])

    def test_duplicates_are_retained(self):
        pts, _ = generate_two_rings_blob(seed=0)
        d = points_to_dissimilarity(pts)
        g = repair_connectivity(build_neighborhood_graph(d), d)
        fam = run_daa(g, d, 2, reps=1500, rng=3)
        # merging the two ring arcs reproduces the first split exactly
        assert fam.entries[1].classification == fam.entries[0].classification

    def test_correct_answer_reachable_only_by_merging(self):
        pts, labels = generate_two_rings_blob(seed=0)
        planted = Classification.from_labels(labels)
        d = points_to_dissimilarity(pts)
        g = repair_connectivity(build_neighborhood_graph(d), d)
        for run in range(3):
            fam = run_daa(g, d, 3, reps=2000,
                          rng=np.random.SeedSequence([99, run]))
            kinds = {e.kind for e in fam.entries if e.classification == planted}
            assert kinds == {"merged"}

    def test_unsplittable_classes_pad_the_family(self):
        d = random_dissimilarity(4, seed=1)
        g = repair_connectivity(build_neighborhood_graph(d), d)
        fam = run_daa(g, d, 5, reps=40, rng=2)
        assert fam.padded
        assert len(fam.entries) == 15
        assert fam.entries[-1].classification.num_classes == 4  # all singletons

    def test_rejects_bad_inputs(self):
        g, d = self.small_problem()
        with pytest.raises(ValueError):
            run_daa(g, d, 0, reps=10, rng=0)
        disconnected = FrequencyGraph(
            4, np.array([[0, 1], [2, 3]], dtype=np.int32))
        with pytest.raises(ValueError):
            run_daa(disconnected, random_dissimilarity(4, seed=0), 1, reps=10, rng=0)

    def test_reproducible_for_fixed_seed(self):
        g, d = self.small_problem(n=20, seed=9)
        fam1 = run_daa(g, d, 3, reps=60, rng=123)
        fam2 = run_daa(g, d, 3, reps=60, rng=123)
        assert fam1.classifications() == fam2.classifications()

    def test_two_blobs_first_split_recovers_labels(self):
        pts, labels = generate_two_blobs(50, 50, separation=25.0, seed=4)
        d = points_to_dissimilarity(pts)
        g = repair_connectivity(build_neighborhood_graph(d), d)
        fam = run_daa(g, d, 1, reps=2000, rng=8)
        assert fam.entries[0].classification == Classification.from_labels(labels)
