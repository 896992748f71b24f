"""Independent brute-force oracles used to check the library implementations.

Everything here is deliberately written from the definitions, without
importing any faithbench internals, so the two sides of each check stay
independent.
"""

import math
from collections import Counter


def ngram_overlap_count(cand, ref, n):
    """Clipped n-gram multiset overlap, straight from the definition."""
    grams_c = Counter(tuple(cand[i : i + n]) for i in range(len(cand) - n + 1))
    grams_r = Counter(tuple(ref[i : i + n]) for i in range(len(ref) - n + 1))
    return sum(min(c, grams_r[g]) for g, c in grams_c.items())


def rouge_n_prf(cand, ref, n):
    overlap = ngram_overlap_count(cand, ref, n)
    n_c = max(len(cand) - n + 1, 0)
    n_r = max(len(ref) - n + 1, 0)
    p = overlap / n_c if n_c else 0.0
    r = overlap / n_r if n_r else 0.0
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return p, r, f


def lcs_len_quadratic(a, b):
    """Full-table quadratic LCS."""
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[len(a)][len(b)]


def rouge_l_prf(cand, ref):
    if not cand or not ref:
        return 0.0, 0.0, 0.0
    lcs = lcs_len_quadratic(cand, ref)
    p, r = lcs / len(cand), lcs / len(ref)
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return p, r, f


def rouge_avg_f1(cand, ref):
    if not cand or not ref:
        return 0.0
    return (rouge_n_prf(cand, ref, 1)[2] + rouge_n_prf(cand, ref, 2)[2] + rouge_l_prf(cand, ref)[2]) / 3


def enumerate_fragments(summary, source):
    """Greedy fragments via exhaustive match enumeration at every position."""
    frags = []
    i = 0
    while i < len(summary):
        candidates = []  # (length, source_start)
        for j in range(len(source)):
            length = 0
            while (
                i + length < len(summary)
                and j + length < len(source)
                and summary[i + length] == source[j + length]
            ):
                length += 1
            if length > 0:
                candidates.append((length, j))
        if not candidates:
            i += 1
            continue
        best_len = max(length for length, _ in candidates)
        best_j = min(j for length, j in candidates if length == best_len)
        frags.append((i, best_j, best_len))
        i += best_len
    return frags


def coverage_density(summary, source):
    frags = enumerate_fragments(summary, source)
    total = sum(length for _, _, length in frags)
    sq = sum(length * length for _, _, length in frags)
    return total / len(summary), sq / len(summary)


def pearson_definitional(x, y):
    """Pearson r via fsum'd definitional sums."""
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    num = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    dx = math.fsum((a - mx) ** 2 for a in x)
    dy = math.fsum((b - my) ** 2 for b in y)
    return num / math.sqrt(dx * dy)


def williams_t(r12, r13, r23, n):
    """Second coding of the dependent-correlation t statistic."""
    det = 1 - r12 * r12 - r13 * r13 - r23 * r23 + 2 * r12 * r13 * r23
    rbar = (r12 + r13) / 2
    denom = 2 * det * (n - 1) / (n - 3) + rbar * rbar * (1 - r23) ** 3
    return (r12 - r13) * math.sqrt((n - 1) * (1 + r23) / denom)


def greedy_gain_order(sent_tokens, source_token_lists, cap=10):
    """Stepwise exhaustive greedy: at each step score every remaining source
    sentence by the marginal mean-ROUGE gain of adding it (concatenating the
    chosen set in source order) and take the argmax while the gain stays
    positive."""
    chosen = []
    current = 0.0
    while len(chosen) < cap:
        best_gain, best_i = 0.0, None
        for i, _ in enumerate(source_token_lists):
            if i in chosen:
                continue
            concat = [t for j in sorted(chosen + [i]) for t in source_token_lists[j]]
            gain = rouge_avg_f1(sent_tokens, concat) - current
            if gain > best_gain:
                best_gain, best_i = gain, i
        if best_i is None:
            break
        chosen.append(best_i)
        current += best_gain
    return chosen
