#!/usr/bin/env python3
"""Standalone chrF++ reference implementation used to freeze test fixtures.

Kept deliberately independent of the C++ code: classification comes from
Python's unicodedata, counting from collections.Counter.
"""

import unicodedata
from collections import Counter


def _is_punct(ch):
    return unicodedata.category(ch).startswith("P")


def char_ngrams(text, n):
    chars = [c for c in text if not c.isspace()]
    return Counter(tuple(chars[i : i + n]) for i in range(len(chars) - n + 1))


def word_tokens(text):
    tokens = []
    cur = []
    for ch in text:
        if ch.isspace():
            if cur:
                tokens.append("".join(cur))
                cur = []
        elif _is_punct(ch):
            if cur:
                tokens.append("".join(cur))
                cur = []
            tokens.append(ch)
        else:
            cur.append(ch)
    if cur:
        tokens.append("".join(cur))
    return tokens


def word_ngrams(text, n):
    toks = word_tokens(text)
    return Counter(tuple(toks[i : i + n]) for i in range(len(toks) - n + 1))


def sentence_stats(hyp, ref, char_order=6, word_order=2, lowercase=False):
    if lowercase:
        hyp, ref = hyp.lower(), ref.lower()
    stats = []
    for n in range(1, char_order + 1):
        h, r = char_ngrams(hyp, n), char_ngrams(ref, n)
        stats.append(_counts(h, r))
    for n in range(1, word_order + 1):
        h, r = word_ngrams(hyp, n), word_ngrams(ref, n)
        stats.append(_counts(h, r))
    return stats


def _counts(h, r):
    matched = sum(min(c, r[g]) for g, c in h.items() if g in r)
    return (matched, sum(h.values()), sum(r.values()))


def score_from_stats(stats, beta=2.0):
    b2 = beta * beta
    total = 0.0
    effective = 0
    for matched, hyp_count, ref_count in stats:
        if hyp_count == 0 and ref_count == 0:
            continue
        effective += 1
        p = matched / hyp_count if hyp_count else 0.0
        r = matched / ref_count if ref_count else 0.0
        denom = b2 * p + r
        total += (1 + b2) * p * r / denom if denom > 0 else 0.0
    return 100.0 * total / effective if effective else 0.0


def sentence_chrf(hyp, ref, char_order=6, word_order=2, beta=2.0, lowercase=False):
    return score_from_stats(
        sentence_stats(hyp, ref, char_order, word_order, lowercase), beta
    )


def corpus_chrf(hyps, refs, char_order=6, word_order=2, beta=2.0, lowercase=False):
    assert len(hyps) == len(refs)
    totals = None
    for h, r in zip(hyps, refs):
        stats = sentence_stats(h, r, char_order, word_order, lowercase)
        if totals is None:
            totals = [list(s) for s in stats]
        else:
            for t, s in zip(totals, stats):
                t[0] += s[0]
                t[1] += s[1]
                t[2] += s[2]
    return score_from_stats([tuple(t) for t in totals], beta)
