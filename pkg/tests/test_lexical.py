"""Tokenization, ROUGE, and extractiveness statistics."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from faithbench.lexical import (
    RougeVariant,
    coverage,
    density,
    extractive_fragments,
    rouge,
    rouge_avg_f1,
    tokenize,
)
from faithbench.lexical.fragments import FragmentSet

from oracles import coverage_density, enumerate_fragments, rouge_avg_f1 as oracle_avg_f1

token_lists = st.lists(st.sampled_from(["a", "b", "c", "d", "e"]), max_size=12)


class TestTokenize:
    def test_strips_punctuation_and_lowercases(self):
        assert tokenize("HIV care.") == ["hiv", "care"]

    def test_empty(self):
        assert tokenize("") == []

    def test_numbers_kept(self):
        assert tokenize("500 CC return") == ["500", "cc", "return"]

    def test_whitespace_collapse(self):
        assert tokenize("a   b\t\nc") == ["a", "b", "c"]

    def test_internal_punctuation_kept(self):
        assert tokenize("x-ray, (stable)") == ["x-ray", "stable"]


class TestRouge:
    def test_identity_scores_one(self):
        toks = ["the", "patient", "was", "admitted"]
        for variant in RougeVariant:
            assert rouge(toks, toks, variant).f1 == 1.0

    def test_unigram_hand_example(self):
        s = rouge(["a", "b", "c"], ["a", "b", "d"], RougeVariant.R1)
        assert s.precision == pytest.approx(2 / 3)
        assert s.recall == pytest.approx(2 / 3)
        assert s.f1 == pytest.approx(2 / 3)

    def test_bigram_hand_example(self):
        s = rouge(["a", "b", "c"], ["a", "b", "d"], RougeVariant.R2)
        assert (s.precision, s.recall, s.f1) == (0.5, 0.5, 0.5)

    def test_lcs_hand_example(self):
        s = rouge(["a", "b", "c"], ["a", "b", "d"], RougeVariant.RL)
        assert s.f1 == pytest.approx(2 / 3)

    def test_empty_side_is_all_zero(self):
        for variant in RougeVariant:
            s = rouge([], ["a"], variant)
            assert (s.precision, s.recall, s.f1) == (0.0, 0.0, 0.0)

    def test_avg_f1_hand_example(self):
        got = rouge_avg_f1(["a", "b", "c"], ["a", "b", "d"])
        assert got == pytest.approx((2 / 3 + 1 / 2 + 2 / 3) / 3)

    def test_avg_f1_identity_and_disjoint(self):
        assert rouge_avg_f1(["a", "b"], ["a", "b"]) == 1.0
        assert rouge_avg_f1(["a", "b"], ["c", "d"]) == 0.0

    @given(token_lists, token_lists)
    def test_f1_symmetry(self, a, b):
        for variant in RougeVariant:
            assert rouge(a, b, variant).f1 == pytest.approx(rouge(b, a, variant).f1)

    @given(token_lists, token_lists)
    @settings(max_examples=300)
    def test_matches_oracle(self, a, b):
        assert rouge_avg_f1(a, b) == pytest.approx(oracle_avg_f1(a, b), abs=1e-12)


class TestFragments:
    def test_verbatim_containment(self):
        f = extractive_fragments(["a", "b", "c", "d"], ["x", "a", "b", "c", "d", "y"])
        assert f.fragments == ((0, 1, 4),)

    def test_disjoint_vocab(self):
        f = extractive_fragments(["a", "b"], ["c", "d"])
        assert f.fragments == ()

    def test_hand_example(self):
        f = extractive_fragments(["a", "b", "x", "c"], ["a", "b", "c"])
        assert f.fragments == ((0, 0, 2), (3, 2, 1))

    def test_tie_breaks_to_earliest_source_position(self):
        f = extractive_fragments(["a", "b"], ["a", "b", "z", "a", "b"])
        assert f.fragments == ((0, 0, 2),)

    def test_exhaustive_small_alphabet(self):
        # every summary of length <= 4 over {a,b,c} against a fixed source
        source = ["a", "b", "c", "a", "c", "c", "b"]
        alphabet = ["a", "b", "c"]
        for n in range(1, 5):
            for summary in itertools.product(alphabet, repeat=n):
                got = extractive_fragments(list(summary), source)
                assert list(got.fragments) == enumerate_fragments(list(summary), source)

    @given(token_lists.filter(bool), token_lists)
    @settings(max_examples=300)
    def test_matches_oracle(self, summary, source):
        got = extractive_fragments(summary, source)
        assert list(got.fragments) == enumerate_fragments(summary, source)
        cov, dens = coverage_density(summary, source)
        assert coverage(got) == pytest.approx(cov)
        assert density(got) == pytest.approx(dens)


class TestCoverageDensity:
    def test_full_copy(self):
        f = FragmentSet(((0, 0, 4),), 4)
        assert coverage(f) == 1.0
        assert density(f) == 4.0

    def test_no_fragments(self):
        f = FragmentSet((), 4)
        assert coverage(f) == 0.0
        assert density(f) == 0.0

    def test_mixed_lengths(self):
        f = FragmentSet(((0, 0, 2), (3, 2, 1)), 4)
        assert coverage(f) == 0.75
        assert density(f) == 1.25

    def test_empty_summary_rejected(self):
        with pytest.raises(ValueError, match="empty summary"):
            coverage(FragmentSet((), 0))
        with pytest.raises(ValueError, match="empty summary"):
            density(FragmentSet((), 0))

    @given(token_lists.filter(bool), token_lists)
    def test_bounds(self, summary, source):
        f = extractive_fragments(summary, source)
        cov = coverage(f)
        assert 0.0 <= cov <= 1.0
        assert density(f) >= cov or not f.fragments
        assert density(f) <= cov * f.summary_len + 1e-12


class TestKernelBackends:
    def test_backends_agree(self):
        from faithbench.lexical import _seq_py, kernels

        rng = np.random.default_rng(7)
        for _ in range(200):
            a = rng.integers(0, 6, size=rng.integers(0, 15)).astype(np.int32)
            b = rng.integers(0, 6, size=rng.integers(0, 15)).astype(np.int32)
            assert kernels.unigram_overlap(a, b) == _seq_py.unigram_overlap(a, b)
            assert kernels.bigram_overlap(a, b) == _seq_py.bigram_overlap(a, b)
            assert kernels.lcs_length(a, b) == _seq_py.lcs_length(a, b)
            assert kernels.greedy_fragments(a, b) == _seq_py.greedy_fragments(a, b)
