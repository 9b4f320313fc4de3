#!/usr/bin/env python3
"""Regenerates include/ramt/unicode_tables.hpp from Python's unicodedata.

The header carries everything ramt needs for text handling: punctuation and
whitespace classification, canonical combining classes, fully expanded
canonical decompositions, primary composition pairs (exclusions already
dropped), and lowercase/casefold expansions.

Usage: python3 scripts/gen_unicode_tables.py > include/ramt/unicode_tables.hpp
"""

import sys
import unicodedata

MAX_CP = 0x110000
HANGUL_S_BASE, HANGUL_S_COUNT = 0xAC00, 11172


def ranges_of(pred):
    out = []
    start = None
    for cp in range(MAX_CP):
        if pred(cp):
            if start is None:
                start = cp
        elif start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, MAX_CP - 1))
    return out


def is_hangul_syllable(cp):
    return HANGUL_S_BASE <= cp < HANGUL_S_BASE + HANGUL_S_COUNT


def canonical_decomp(cp):
    """One-level canonical decomposition, or None."""
    if is_hangul_syllable(cp):
        return None  # algorithmic at runtime
    d = unicodedata.decomposition(chr(cp))
    if not d or d.startswith("<"):
        return None
    return [int(x, 16) for x in d.split()]


def full_decomp(cp, memo):
    if cp in memo:
        return memo[cp]
    d = canonical_decomp(cp)
    if d is None:
        memo[cp] = [cp]
        return memo[cp]
    out = []
    for c in d:
        out.extend(full_decomp(c, memo))
    memo[cp] = out
    return out


def emit_u32_list(name, values, per_line=12):
    print(f"inline constexpr char32_t {name}[] = {{")
    for i in range(0, len(values), per_line):
        row = ", ".join(f"0x{v:X}" for v in values[i : i + per_line])
        print(f"    {row},")
    print("};")
    print()


def main():
    punct = ranges_of(lambda cp: unicodedata.category(chr(cp)).startswith("P"))
    space = ranges_of(lambda cp: chr(cp).isspace())

    ccc = [
        (cp, unicodedata.combining(chr(cp)))
        for cp in range(MAX_CP)
        if unicodedata.combining(chr(cp)) != 0
    ]

    memo = {}
    decomp = {}
    for cp in range(MAX_CP):
        if is_hangul_syllable(cp):
            continue
        full = full_decomp(cp, memo)
        if full != [cp]:
            decomp[cp] = full

    # Primary composites: canonical pair decompositions whose NFD round-trips
    # back through NFC. That check drops the composition exclusions without
    # needing the exclusion list itself.
    compose = []
    for cp in range(MAX_CP):
        d = canonical_decomp(cp)
        if d is None or len(d) != 2:
            continue
        a, b = d
        if unicodedata.combining(chr(a)) != 0:
            continue
        nfd = unicodedata.normalize("NFD", chr(cp))
        if unicodedata.normalize("NFC", nfd) == chr(cp):
            compose.append((a, b, cp))
    compose.sort()

    lower = {}
    fold = {}
    for cp in range(MAX_CP):
        ch = chr(cp)
        lo = ch.lower()
        if lo != ch:
            lower[cp] = [ord(c) for c in lo]
        cf = ch.casefold()
        if cf != ch:
            fold[cp] = [ord(c) for c in cf]

    print("// Generated by scripts/gen_unicode_tables.py"
          f" (Unicode {unicodedata.unidata_version}). Do not edit.")
    print("#pragma once")
    print()
    print("#include <cstdint>")
    print("#include <cstddef>")
    print()
    print("namespace ramt::unicode_data {")
    print()
    print("struct Range { char32_t lo; char32_t hi; };")
    print("struct CccEntry { char32_t cp; uint8_t ccc; };")
    print("// Expansion of cp into expansions[] at [offset, offset + len).")
    print("struct Expansion { char32_t cp; uint32_t offset; uint8_t len; };")
    print("struct ComposePair { char32_t first; char32_t second; char32_t composed; };")
    print()

    def emit_ranges(name, rs):
        print(f"inline constexpr Range {name}[] = {{")
        for i in range(0, len(rs), 6):
            row = ", ".join(f"{{0x{a:X}, 0x{b:X}}}" for a, b in rs[i : i + 6])
            print(f"    {row},")
        print("};")
        print(f"inline constexpr size_t {name}_count = {len(rs)};")
        print()

    emit_ranges("kPunctRanges", punct)
    emit_ranges("kSpaceRanges", space)

    print("inline constexpr CccEntry kCombiningClasses[] = {")
    for i in range(0, len(ccc), 8):
        row = ", ".join(f"{{0x{cp:X}, {c}}}" for cp, c in ccc[i : i + 8])
        print(f"    {row},")
    print("};")
    print(f"inline constexpr size_t kCombiningClasses_count = {len(ccc)};")
    print()

    def emit_expansions(table_name, pool_name, mapping):
        pool = []
        entries = []
        for cp in sorted(mapping):
            seq = mapping[cp]
            entries.append((cp, len(pool), len(seq)))
            pool.extend(seq)
        emit_u32_list(pool_name, pool)
        print(f"inline constexpr Expansion {table_name}[] = {{")
        for i in range(0, len(entries), 6):
            row = ", ".join(
                f"{{0x{cp:X}, {off}, {ln}}}" for cp, off, ln in entries[i : i + 6]
            )
            print(f"    {row},")
        print("};")
        print(f"inline constexpr size_t {table_name}_count = {len(entries)};")
        print()

    emit_expansions("kDecompositions", "kDecompositionPool", decomp)

    print("inline constexpr ComposePair kCompositions[] = {")
    for i in range(0, len(compose), 4):
        row = ", ".join(
            f"{{0x{a:X}, 0x{b:X}, 0x{c:X}}}" for a, b, c in compose[i : i + 4]
        )
        print(f"    {row},")
    print("};")
    print(f"inline constexpr size_t kCompositions_count = {len(compose)};")
    print()

    emit_expansions("kLowercase", "kLowercasePool", lower)
    emit_expansions("kCasefold", "kCasefoldPool", fold)

    print("}  // namespace ramt::unicode_data")

    sys.stderr.write(
        f"punct ranges={len(punct)} space ranges={len(space)} ccc={len(ccc)} "
        f"decomp={len(decomp)} compose={len(compose)} lower={len(lower)} fold={len(fold)}\n"
    )


if __name__ == "__main__":
    main()
