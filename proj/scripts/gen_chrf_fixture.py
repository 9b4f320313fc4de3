#!/usr/bin/env python3
"""Freezes chrF++ oracle scores for a 50-pair word-salad corpus into
tests/fixtures/chrf_cases.jsonl."""

import json
import random

from chrf_reference import corpus_chrf, sentence_chrf

VOCAB = (
    "the cat sat on mat dog ran fast blue sky "
    "сәлам привет дөнья жир су таң көн ай йолдыз "
    "epli kerek bar jok menin senin kop az "
).split()
PUNCT = list(".,!?;:—«»()\"'-")


def salad(rng, min_words=0, max_words=14):
    n = rng.randint(min_words, max_words)
    words = []
    for _ in range(n):
        w = rng.choice(VOCAB)
        if rng.random() < 0.25:
            w += rng.choice(PUNCT)
        if rng.random() < 0.08:
            w = rng.choice(PUNCT) + w
        words.append(w)
    return " ".join(words)


def mutate(rng, ref):
    words = ref.split()
    out = []
    for w in words:
        roll = rng.random()
        if roll < 0.55:
            out.append(w)
        elif roll < 0.75:
            out.append(rng.choice(VOCAB))
        elif roll < 0.9:
            out.append(w)
            out.append(rng.choice(VOCAB))
        # else drop the word
    return " ".join(out)


def main():
    rng = random.Random(73)
    pairs = []
    for i in range(50):
        ref = salad(rng, 1, 14)
        if i % 10 == 7:
            hyp = ""  # empty hypothesis segments stay in the corpus
        elif i % 10 == 3:
            hyp = ref  # exact matches too
        else:
            hyp = mutate(rng, ref)
        pairs.append((hyp, ref))

    records = []
    configs = [
        {"char_order": 6, "word_order": 2, "beta": 2.0, "lowercase": False},
        {"char_order": 6, "word_order": 0, "beta": 2.0, "lowercase": False},
        {"char_order": 1, "word_order": 0, "beta": 2.0, "lowercase": False},
        {"char_order": 6, "word_order": 2, "beta": 1.0, "lowercase": False},
        {"char_order": 6, "word_order": 2, "beta": 2.0, "lowercase": True},
    ]
    for hyp, ref in pairs:
        rec = {"kind": "sentence", "hyp": hyp, "ref": ref, "scores": []}
        for cfg in configs:
            rec["scores"].append({**cfg, "score": sentence_chrf(hyp, ref, **cfg)})
        records.append(rec)
    for cfg in configs:
        records.append(
            {
                "kind": "corpus",
                **cfg,
                "segments": len(pairs),
                "score": corpus_chrf([h for h, _ in pairs], [r for _, r in pairs], **cfg),
            }
        )

    with open("tests/fixtures/chrf_cases.jsonl", "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")
    print(f"wrote {len(records)} records")


if __name__ == "__main__":
    main()
