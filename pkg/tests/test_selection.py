"""Selection tests, including the literal-procedure oracle.

The oracle below is an independent, unoptimized transcription of the greedy
procedure: no precomputed n-gram sets, no incremental union, similarity
recomputed through the same gate the implementation receives.  Equality of
its output with select_sentences on random instances is the core contract.
"""

import json

import pytest

from utterancesmith.generation import CandidateSentence
from utterancesmith.hashing import SplitMix64
from utterancesmith.selection import (
    SelectionConfig,
    SentenceSelector,
    embedding_similarity,
    fidelity_filter,
    jaccard_similarity,
    select_sentences,
)
from utterancesmith.text import tokenize


def cand(text, intent="i"):
    return CandidateSentence(text=text, generator_id="g", seed_text="s", intent_id=intent)


def oracle_count_ngrams(texts, orders):
    grams = set()
    for text in texts:
        toks = tokenize(text)
        for n in orders:
            for i in range(len(toks) - n + 1):
                grams.add((n,) + tuple(toks[i : i + n]))
    return len(grams)


def oracle_select(candidates, seed, config, similarity):
    """Literal transcription: filter, then loop argmax / threshold / remove."""
    filtered = [c for c in candidates if similarity(c.text, seed) > config.theta]
    selected = []
    while filtered and len(selected) < config.target_size:
        best, best_gain = None, None
        for c in filtered:
            gain = oracle_count_ngrams(
                [x.text for x in selected] + [c.text], config.ngram_orders
            ) - oracle_count_ngrams([x.text for x in selected], config.ngram_orders)
            if best_gain is None or gain > best_gain:
                best, best_gain = c, gain
        if best_gain > config.gamma:
            selected.append(best)
        filtered.remove(best)
    return [c.text for c in selected]


def random_instance(rng: SplitMix64):
    vocab = ["open", "case", "list", "show", "all", "my", "new", "old", "every",
             "ticket", "report", "please", "now"]
    n_cands = 1 + rng.below(12)
    cands = []
    for _ in range(n_cands):
        length = 1 + rng.below(8)
        cands.append(cand(" ".join(vocab[rng.below(len(vocab))] for _ in range(length))))
    seed_len = 1 + rng.below(8)
    seed = " ".join(vocab[rng.below(len(vocab))] for _ in range(seed_len))
    config = SelectionConfig(
        theta=[0.0, 0.3, 0.6][rng.below(3)],
        gamma=rng.below(3),
        target_size=1 + rng.below(6),
    )
    return cands, seed, config


class TestFidelityFilter:
    def test_theta_zero_keeps_all_positive(self):
        cands = [cand("list the invoices"), cand("show invoices")]
        kept = fidelity_filter(cands, "list the invoices", 0.0, jaccard_similarity)
        assert [c.text for c in kept] == ["list the invoices", "show invoices"]

    def test_candidate_equal_to_seed_kept_at_high_theta(self):
        kept = fidelity_filter([cand("list invoices")], "list invoices", 0.99)
        assert len(kept) == 1
        assert kept[0].similarity_to_seed == 1.0

    def test_strict_inequality(self):
        # jaccard("show the open invoices please", "list the open invoices") = 3/6
        kept = fidelity_filter(
            [cand("show the open invoices please")],
            "list the open invoices",
            0.5,
            jaccard_similarity,
        )
        assert kept == []

    def test_similarity_recorded_and_order_preserved(self):
        cands = [cand("a b"), cand("a b c"), cand("z z")]
        kept = fidelity_filter(cands, "a b", 0.1, jaccard_similarity)
        assert [c.text for c in kept] == ["a b", "a b c"]
        assert kept[0].similarity_to_seed == 1.0


class TestSelectSentences:
    def test_worked_example(self):
        seed = "list the open invoices"
        cands = [
            cand("show the open invoices"),
            cand("display open invoices"),
            cand("show the open invoices please"),
        ]
        config = SelectionConfig(theta=0.35, gamma=0, target_size=2)
        trace = select_sentences(cands, seed, config, jaccard_similarity)
        assert [c.text for c in trace.selected] == [
            "show the open invoices please",
            "display open invoices",
        ]
        assert [(s.delta_ngram, s.accepted) for s in trace.steps] == [(12, True), (3, True)]
        assert trace.filtered_out == []

    def test_empty_candidates(self):
        trace = select_sentences([], "seed text", SelectionConfig())
        assert trace.selected == []
        assert trace.steps == []

    def test_single_candidate_above_gamma(self):
        trace = select_sentences(
            [cand("brand new words")], "brand new words",
            SelectionConfig(theta=0.1, gamma=0, target_size=1), jaccard_similarity,
        )
        assert [c.text for c in trace.selected] == ["brand new words"]

    def test_rejected_candidates_still_removed(self):
        # "alpha beta" n-grams are inside "alpha beta gamma": zero gain, so
        # both copies are rejected yet still consumed from the pool
        cands = [cand("alpha beta"), cand("alpha beta"), cand("alpha beta gamma")]
        config = SelectionConfig(theta=0.0, gamma=0, target_size=3)
        trace = select_sentences(cands, "alpha beta", config, jaccard_similarity)
        assert [c.text for c in trace.selected] == ["alpha beta gamma"]
        rejected = [s for s in trace.steps if not s.accepted]
        assert len(rejected) == 2
        assert all(s.delta_ngram == 0 for s in rejected)

    def test_tie_broken_by_input_position(self):
        cands = [cand("one two"), cand("six ten")]
        config = SelectionConfig(theta=0.0, gamma=0, target_size=1)
        trace = select_sentences(cands, "unrelated", config, lambda a, b: 1.0)
        assert trace.selected[0].text == "one two"

    def test_oracle_equivalence_random_instances(self):
        rng = SplitMix64(2024)
        similarity = jaccard_similarity
        for _ in range(150):
            cands, seed, config = random_instance(rng)
            got = [c.text for c in select_sentences(cands, seed, config, similarity).selected]
            want = oracle_select(cands, seed, config, similarity)
            assert got == want

    def test_invariants_random_instances(self):
        rng = SplitMix64(77)
        for _ in range(100):
            cands, seed, config = random_instance(rng)
            trace = select_sentences(cands, seed, config, jaccard_similarity)
            assert len(trace.selected) <= config.target_size
            for c in trace.selected:
                assert c.similarity_to_seed > config.theta
            accepted = [s.delta_ngram for s in trace.steps if s.accepted]
            assert all(d > config.gamma for d in accepted)
            assert accepted == sorted(accepted, reverse=True)

    def test_default_similarity_is_embedding_cosine(self):
        trace = select_sentences(
            [cand("list the open invoices")], "list the open invoices",
            SelectionConfig(theta=0.9, gamma=0, target_size=1),
        )
        assert len(trace.selected) == 1


class TestTraceSerialization:
    def test_stable_keys(self):
        trace = select_sentences(
            [cand("a b c"), cand("zz yy")], "a b c",
            SelectionConfig(theta=0.5, gamma=0, target_size=1), jaccard_similarity,
        )
        data = json.loads(json.dumps(trace.to_dict()))
        assert set(data) == {"filtered_out", "steps", "selected"}
        assert data["filtered_out"][0]["candidate"]["text"] == "zz yy"
        assert {"candidate", "delta_ngram", "accepted"} <= set(data["steps"][0])


class TestSentenceSelector:
    def test_estimator_params(self):
        sel = SentenceSelector(theta=0.2, gamma=0, target_size=3)
        assert sel.get_params()["theta"] == 0.2
        trace = sel.select([cand("x y")], "unrelated words")
        assert isinstance(trace.selected, list)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SelectionConfig(theta=1.5)
        with pytest.raises(ValueError):
            SelectionConfig(gamma=-1)
        with pytest.raises(ValueError):
            SelectionConfig(target_size=0)

    def test_similarity_cache_consistent(self):
        sim = embedding_similarity()
        assert sim("a b", "a b") == sim("a b", "a b")
