"""Pure-Python sequence kernels.

Reference implementations of the hot inner loops (clipped n-gram overlap,
longest common subsequence, greedy fragment matching). The compiled twin in
``_seqext.pyx`` must agree with these exactly; ``kernels`` picks one at
import time.

All functions take 1-D numpy int32 arrays of token ids.
"""

from collections import Counter

BACKEND = "python"


def unigram_overlap(a, b):
    """Clipped multiset overlap between two token-id sequences."""
    ca = Counter(a.tolist())
    cb = Counter(b.tolist())
    return sum(min(n, cb[tok]) for tok, n in ca.items())


def bigram_overlap(a, b):
    """Clipped multiset overlap between adjacent-pair sequences."""
    if len(a) < 2 or len(b) < 2:
        return 0
    la, lb = a.tolist(), b.tolist()
    ca = Counter(zip(la, la[1:]))
    cb = Counter(zip(lb, lb[1:]))
    return sum(min(n, cb[pair]) for pair, n in ca.items())


def lcs_length(a, b):
    """Length of the longest common subsequence (classic DP, two rows)."""
    la, lb = a.tolist(), b.tolist()
    if not la or not lb:
        return 0
    prev = [0] * (len(lb) + 1)
    for x in la:
        cur = [0]
        for j, y in enumerate(lb, start=1):
            if x == y:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def greedy_fragments(summary, source):
    """Greedy left-to-right longest-match fragments of summary in source.

    At each summary position the longest contiguous match in source wins,
    ties broken by the earliest source start; the scan then advances by the
    match length, or by one token when the position matches nowhere.
    Returns (summary_start, source_start, length) triples.
    """
    s = summary.tolist()
    t = source.tolist()
    n, m = len(s), len(t)
    fragments = []
    i = 0
    while i < n:
        best_len = 0
        best_j = -1
        for j in range(m):
            if t[j] != s[i]:
                continue
            k = 1
            while i + k < n and j + k < m and s[i + k] == t[j + k]:
                k += 1
            if k > best_len:
                best_len = k
                best_j = j
        if best_len == 0:
            i += 1
        else:
            fragments.append((i, best_j, best_len))
            i += best_len
    return fragments
