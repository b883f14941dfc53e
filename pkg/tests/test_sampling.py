import numpy as np
import pytest

from utterancesmith.errors import TooFewSentences
from utterancesmith.sampling import RepresentativeSampler, sample_representatives


class TableEmbedder:
    """Maps each sentence to a preset vector; lets tests control geometry."""

    def __init__(self, table):
        self.table = table

    def transform(self, texts):
        return np.array([self.table[t] for t in texts], dtype=np.float64)


def two_pair_embedder():
    return TableEmbedder(
        {
            "a one": [0.0, 0.0],
            "a two": [0.1, 0.0],
            "b one": [10.0, 0.0],
            "b two": [10.1, 0.0],
        }
    )


SENTS = ["a one", "a two", "b one", "b two"]


class TestSampleRepresentatives:
    def test_two_separated_pairs(self):
        result = sample_representatives(SENTS, 2, seed=3, embedder=two_pair_embedder())
        diverse_groups = {s[0] for s in result.diverse}
        assert diverse_groups == {"a", "b"}
        narrow_groups = {s[0] for s in result.narrow}
        assert len(narrow_groups) == 1

    def test_n_one_diverse_equals_narrow(self):
        result = sample_representatives(SENTS, 1, seed=5, embedder=two_pair_embedder())
        assert result.diverse == result.narrow
        assert len(result.diverse) == 1

    def test_n_equals_population_diverse_is_permutation(self):
        result = sample_representatives(SENTS, 4, seed=2, embedder=two_pair_embedder())
        assert sorted(result.diverse) == sorted(SENTS)

    def test_too_few_sentences(self):
        with pytest.raises(TooFewSentences):
            sample_representatives(["only one"], 2, seed=0)

    def test_narrow_first_is_global_nearest_to_smallest_center(self):
        # cluster sizes 3 vs 1: the singleton is the smallest cluster
        table = {
            "big one": [0.0, 0.0],
            "big two": [0.5, 0.0],
            "big three": [1.0, 0.0],
            "lonely": [40.0, 0.0],
        }
        sents = list(table)
        result = sample_representatives(sents, 2, seed=11, embedder=TableEmbedder(table))
        assert result.narrow[0] == "lonely"
        # next-nearest crosses into the big cluster: the literal procedure allows it
        assert result.narrow[1] == "big three"

    def test_random_is_distinct_and_seeded(self):
        result = sample_representatives(SENTS, 3, seed=9, embedder=two_pair_embedder())
        assert len(set(result.random)) == 3
        again = sample_representatives(SENTS, 3, seed=9, embedder=two_pair_embedder())
        assert result.random == again.random

    def test_bit_identical_result_for_fixed_seed(self):
        a = sample_representatives(SENTS, 2, seed=21, embedder=two_pair_embedder())
        b = sample_representatives(SENTS, 2, seed=21, embedder=two_pair_embedder())
        assert a == b

    def test_diverse_touches_every_cluster(self):
        result = sample_representatives(SENTS, 2, seed=13, embedder=two_pair_embedder())
        clusters = set()
        for sentence in result.diverse:
            clusters.add(result.cluster_assignments[SENTS.index(sentence)])
        assert len(clusters) == 2

    def test_smallest_cluster_tie_breaks_to_lowest_index(self):
        result = sample_representatives(SENTS, 2, seed=3, embedder=two_pair_embedder())
        sizes = {}
        for a in result.cluster_assignments:
            sizes[a] = sizes.get(a, 0) + 1
        smallest_size = min(sizes.values())
        candidates = [c for c, s in sizes.items() if s == smallest_size]
        assert result.smallest_cluster == min(candidates)

    def test_default_embedder_used_when_none(self):
        result = sample_representatives(["list invoices", "cancel order"], 1, seed=1)
        assert len(result.diverse) == 1

    def test_serialization_shape(self):
        result = sample_representatives(SENTS, 2, seed=3, embedder=two_pair_embedder())
        data = result.to_dict()
        assert set(data) == {
            "diverse", "random", "narrow", "cluster_assignments", "smallest_cluster",
        }


class TestRepresentativeSampler:
    def test_estimator_surface(self):
        sampler = RepresentativeSampler(n=2, seed=3, embedder=two_pair_embedder())
        params = sampler.get_params()
        assert params["n"] == 2 and params["seed"] == 3
        result = sampler.sample(SENTS)
        assert len(result.diverse) == 2
