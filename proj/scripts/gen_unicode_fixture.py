#!/usr/bin/env python3
"""Freezes Unicode normalization test vectors into tests/fixtures/unicode_norm.jsonl.

Each line: {"input": s, "nfc": ..., "nfd": ..., "lower": ..., "casefold": ...}
Curated tricky cases plus seeded random strings over the scripts the toolkit
actually meets (Latin, Cyrillic, combining marks, Hangul, punctuation).
"""

import json
import random
import unicodedata

CURATED = [
    "",
    "hello world",
    "é",                      # e + acute -> é
    "ё",                # Cyrillic е + diaeresis -> ё
    "й",                # Cyrillic и + breve -> й
    "Й̈",                # й + diaeresis (no composite)
    "é́",                # é + another acute
    "q̣̇",               # ordering: dot-above(230) after dot-below(220)
    "q̣̇",
    "ḍ̇",                # ḋ + dot below -> reorders and recomposes
    "ḍ̇",
    "가",                      # Hangul GA
    "가",                # L+V -> GA
    "각",          # L+V+T
    "각",                # LV + T
    "Å",                      # Angstrom sign -> Å (singleton)
    "Å",
    "Å",
    "ẞ",                      # capital sharp s: lower ß, casefold ss
    "İ",                      # Turkish capital I with dot
    "Fußball STRASSE СЪЕЖ",
    "сәлам, привет! ĞÜŞİÖÇ ғүşıöç",
    "ﬁsh",                    # fi ligature (compat char: NFC keeps it)
    "  spaced out text  ",
    "Άͅ",
]

SCRIPT_POOLS = [
    (0x0020, 0x007E),
    (0x0400, 0x04FF),
    (0x0300, 0x036F),
    (0x00C0, 0x017F),
    (0x1100, 0x1112),
    (0x1161, 0x1175),
    (0x11A8, 0x11C2),
    (0xAC00, 0xAC60),
    (0x2000, 0x206F),
]


def random_string(rng):
    n = rng.randint(1, 24)
    out = []
    for _ in range(n):
        lo, hi = rng.choice(SCRIPT_POOLS)
        cp = rng.randint(lo, hi)
        if unicodedata.category(chr(cp)) in ("Cc", "Cs", "Cn"):
            cp = 0x20
        out.append(chr(cp))
    return "".join(out)


def main():
    rng = random.Random(20240817)
    cases = list(CURATED) + [random_string(rng) for _ in range(200)]
    with open("tests/fixtures/unicode_norm.jsonl", "w", encoding="utf-8") as f:
        for s in cases:
            rec = {
                "input": s,
                "nfc": unicodedata.normalize("NFC", s),
                "nfd": unicodedata.normalize("NFD", s),
                "lower": s.lower(),
                "casefold": s.casefold(),
            }
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")
    print(f"wrote {len(cases)} cases")


if __name__ == "__main__":
    main()
