"""Benchmark the compiled sequence kernels against the pure-Python fallback.

The workload mirrors alignment: every summary sentence is ROUGE-scored
against every unique source sentence, which is dominated by LCS, n-gram
overlap, and greedy fragment matching. Run:

    python benchmarks/bench_kernels.py [--pairs 2000]
"""

import argparse
import time

import numpy as np

from faithbench.lexical import _seq_py

try:
    from faithbench.lexical import _seqext
except ImportError:
    _seqext = None


def make_pairs(n_pairs, rng, vocab=400, sum_len=(8, 25), src_len=(10, 40)):
    pairs = []
    for _ in range(n_pairs):
        a = rng.integers(0, vocab, size=rng.integers(*sum_len)).astype(np.int32)
        b = rng.integers(0, vocab, size=rng.integers(*src_len)).astype(np.int32)
        pairs.append((a, b))
    return pairs


def bench(impl, pairs):
    timings = {}
    for name, fn in (
        ("unigram_overlap", impl.unigram_overlap),
        ("bigram_overlap", impl.bigram_overlap),
        ("lcs_length", impl.lcs_length),
        ("greedy_fragments", impl.greedy_fragments),
    ):
        start = time.perf_counter()
        for a, b in pairs:
            fn(a, b)
        timings[name] = time.perf_counter() - start
    return timings


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--pairs", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    pairs = make_pairs(args.pairs, rng)

    python_times = bench(_seq_py, pairs)
    print(f"{'kernel':<18}{'python':>10}{'cython':>10}{'speedup':>9}")
    if _seqext is None:
        for name, t in python_times.items():
            print(f"{name:<18}{t:>9.3f}s{'n/a':>10}{'n/a':>9}")
        print("\ncompiled extension not built; only the fallback was timed")
        return

    # sanity: identical results before timing
    for a, b in pairs[:200]:
        assert _seq_py.lcs_length(a, b) == _seqext.lcs_length(a, b)
        assert _seq_py.unigram_overlap(a, b) == _seqext.unigram_overlap(a, b)
        assert _seq_py.bigram_overlap(a, b) == _seqext.bigram_overlap(a, b)
        assert _seq_py.greedy_fragments(a, b) == _seqext.greedy_fragments(a, b)

    cython_times = bench(_seqext, pairs)
    for name in python_times:
        tp, tc = python_times[name], cython_times[name]
        print(f"{name:<18}{tp:>9.3f}s{tc:>9.3f}s{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
