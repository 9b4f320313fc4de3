#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ramt/unicode_tables.hpp"

namespace ramt::text {

// ---------------------------------------------------------------------------
// UTF-8 <-> code points. Malformed byte sequences decode to U+FFFD.
// ---------------------------------------------------------------------------

inline std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    size_t i = 0;
    const auto n = s.size();
    while (i < n) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        char32_t cp = 0xFFFD;
        size_t len = 1;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        if (len > 1) {
            if (i + len > n) {
                out.push_back(0xFFFD);
                ++i;
                continue;
            }
            bool ok = true;
            for (size_t k = 1; k < len; ++k) {
                const auto bk = static_cast<unsigned char>(s[i + k]);
                if ((bk & 0xC0) != 0x80) {
                    ok = false;
                    break;
                }
                cp = (cp << 6) | (bk & 0x3F);
            }
            // Reject overlong forms, surrogates and out-of-range values.
            static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
            if (!ok || cp < kMin[len] || cp > 0x10FFFF ||
                (cp >= 0xD800 && cp <= 0xDFFF)) {
                out.push_back(0xFFFD);
                ++i;
                continue;
            }
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string encode_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : s) append_utf8(out, cp);
    return out;
}

inline size_t codepoint_count(std::string_view s) {
    size_t count = 0;
    for (char c : s)
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
    return count;
}

// ---------------------------------------------------------------------------
// Classification.
// ---------------------------------------------------------------------------

namespace detail {

inline bool in_ranges(const unicode_data::Range* ranges, size_t count, char32_t cp) {
    const auto* end = ranges + count;
    const auto* it = std::upper_bound(
        ranges, end, cp,
        [](char32_t v, const unicode_data::Range& r) { return v < r.lo; });
    return it != ranges && cp <= (it - 1)->hi;
}

template <typename Entry>
inline const Entry* find_entry(const Entry* table, size_t count, char32_t cp) {
    const auto* end = table + count;
    const auto* it = std::lower_bound(
        table, end, cp, [](const Entry& e, char32_t v) { return e.cp < v; });
    if (it != end && it->cp == cp) return it;
    return nullptr;
}

}  // namespace detail

inline bool is_space(char32_t cp) {
    return detail::in_ranges(unicode_data::kSpaceRanges,
                             unicode_data::kSpaceRanges_count, cp);
}

inline bool is_punct(char32_t cp) {
    return detail::in_ranges(unicode_data::kPunctRanges,
                             unicode_data::kPunctRanges_count, cp);
}

inline int combining_class(char32_t cp) {
    const auto* e = detail::find_entry(unicode_data::kCombiningClasses,
                                       unicode_data::kCombiningClasses_count, cp);
    return e ? e->ccc : 0;
}

// ---------------------------------------------------------------------------
// Canonical normalization (NFD / NFC), Hangul handled algorithmically.
// ---------------------------------------------------------------------------

namespace detail {

constexpr char32_t kHangulSBase = 0xAC00;
constexpr char32_t kHangulLBase = 0x1100;
constexpr char32_t kHangulVBase = 0x1161;
constexpr char32_t kHangulTBase = 0x11A7;
constexpr int kHangulVCount = 21;
constexpr int kHangulTCount = 28;
constexpr int kHangulNCount = kHangulVCount * kHangulTCount;  // 588
constexpr int kHangulSCount = 11172;

inline bool is_hangul_syllable(char32_t cp) {
    return cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount;
}

inline void append_expansion(std::u32string& out, const unicode_data::Expansion& e,
                             const char32_t* pool) {
    for (uint8_t k = 0; k < e.len; ++k) out.push_back(pool[e.offset + k]);
}

inline char32_t compose_pair(char32_t a, char32_t b) {
    // Hangul LV / LVT composition.
    if (a >= kHangulLBase && a < kHangulLBase + 19 && b >= kHangulVBase &&
        b < kHangulVBase + kHangulVCount) {
        return kHangulSBase +
               ((a - kHangulLBase) * kHangulVCount + (b - kHangulVBase)) *
                   kHangulTCount;
    }
    if (is_hangul_syllable(a) && (a - kHangulSBase) % kHangulTCount == 0 &&
        b > kHangulTBase && b < kHangulTBase + kHangulTCount) {
        return a + (b - kHangulTBase);
    }
    const auto* table = unicode_data::kCompositions;
    const auto* end = table + unicode_data::kCompositions_count;
    const auto* it = std::lower_bound(
        table, end, std::pair<char32_t, char32_t>{a, b},
        [](const unicode_data::ComposePair& p, const std::pair<char32_t, char32_t>& v) {
            return p.first != v.first ? p.first < v.first : p.second < v.second;
        });
    if (it != end && it->first == a && it->second == b) return it->composed;
    return 0;
}

// Stable-sorts each run of nonzero-ccc code points by combining class.
inline void canonical_order(std::u32string& s) {
    size_t i = 0;
    while (i < s.size()) {
        if (combining_class(s[i]) == 0) {
            ++i;
            continue;
        }
        size_t j = i + 1;
        while (j < s.size() && combining_class(s[j]) != 0) ++j;
        std::stable_sort(s.begin() + i, s.begin() + j,
                         [](char32_t a, char32_t b) {
                             return combining_class(a) < combining_class(b);
                         });
        i = j;
    }
}

}  // namespace detail

inline std::u32string nfd(std::u32string_view in) {
    std::u32string out;
    out.reserve(in.size());
    for (char32_t cp : in) {
        if (detail::is_hangul_syllable(cp)) {
            const char32_t s = cp - detail::kHangulSBase;
            out.push_back(detail::kHangulLBase + s / detail::kHangulNCount);
            out.push_back(detail::kHangulVBase +
                          (s % detail::kHangulNCount) / detail::kHangulTCount);
            const char32_t t = s % detail::kHangulTCount;
            if (t != 0) out.push_back(detail::kHangulTBase + t);
            continue;
        }
        const auto* e = detail::find_entry(unicode_data::kDecompositions,
                                           unicode_data::kDecompositions_count, cp);
        if (e) {
            detail::append_expansion(out, *e, unicode_data::kDecompositionPool);
        } else {
            out.push_back(cp);
        }
    }
    detail::canonical_order(out);
    return out;
}

inline std::u32string nfc(std::u32string_view in) {
    std::u32string buf = nfd(in);
    if (buf.empty()) return buf;
    std::u32string out;
    out.reserve(buf.size());
    // -1 marks "no starter yet"; -2 marks "directly after the starter".
    ptrdiff_t starter = -1;
    int max_ccc = -2;
    for (char32_t cp : buf) {
        const int ccc = combining_class(cp);
        if (starter >= 0 && (max_ccc == -2 || ccc > max_ccc)) {
            if (const char32_t composed = detail::compose_pair(out[starter], cp)) {
                out[starter] = composed;
                continue;
            }
        }
        if (ccc == 0) {
            starter = static_cast<ptrdiff_t>(out.size());
            max_ccc = -2;
        } else {
            max_ccc = std::max(max_ccc, ccc);
        }
        out.push_back(cp);
    }
    return out;
}

inline std::string nfc_utf8(std::string_view s) {
    return encode_utf8(nfc(decode_utf8(s)));
}

// ---------------------------------------------------------------------------
// Case mapping.
// ---------------------------------------------------------------------------

namespace detail {

inline std::u32string map_expansions(std::u32string_view in,
                                     const unicode_data::Expansion* table,
                                     size_t count, const char32_t* pool) {
    std::u32string out;
    out.reserve(in.size());
    for (char32_t cp : in) {
        if (const auto* e = find_entry(table, count, cp)) {
            append_expansion(out, *e, pool);
        } else {
            out.push_back(cp);
        }
    }
    return out;
}

}  // namespace detail

inline std::u32string to_lower(std::u32string_view in) {
    return detail::map_expansions(in, unicode_data::kLowercase,
                                  unicode_data::kLowercase_count,
                                  unicode_data::kLowercasePool);
}

inline std::u32string casefold(std::u32string_view in) {
    return detail::map_expansions(in, unicode_data::kCasefold,
                                  unicode_data::kCasefold_count,
                                  unicode_data::kCasefoldPool);
}

inline std::string to_lower_utf8(std::string_view s) {
    return encode_utf8(to_lower(decode_utf8(s)));
}

inline std::string casefold_utf8(std::string_view s) {
    return encode_utf8(casefold(decode_utf8(s)));
}

// ---------------------------------------------------------------------------
// Matching normalization: NFC, trim, collapse whitespace runs to one space,
// optional casefold.
// ---------------------------------------------------------------------------

inline std::string normalize_text(std::string_view s, bool fold_case = false) {
    std::u32string cps = nfc(decode_utf8(s));
    if (fold_case) cps = casefold(cps);
    std::u32string out;
    out.reserve(cps.size());
    bool pending_space = false;
    for (char32_t cp : cps) {
        if (is_space(cp)) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(U' ');
            pending_space = false;
        }
        out.push_back(cp);
    }
    return encode_utf8(out);
}

inline std::string trim(std::string_view s) {
    std::u32string cps = decode_utf8(s);
    size_t b = 0, e = cps.size();
    while (b < e && is_space(cps[b])) ++b;
    while (e > b && is_space(cps[e - 1])) --e;
    return encode_utf8(std::u32string_view(cps).substr(b, e - b));
}

inline bool is_blank(std::string_view s) {
    for (char32_t cp : decode_utf8(s))
        if (!is_space(cp)) return false;
    return true;
}

// Splits on Unicode whitespace; never yields empty tokens.
inline std::vector<std::string> whitespace_tokens(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char32_t cp : decode_utf8(s)) {
        if (is_space(cp)) {
            if (!cur.empty()) out.push_back(std::exchange(cur, {}));
        } else {
            append_utf8(cur, cp);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// Strips Unicode punctuation from both ends of a token.
inline std::string strip_edge_punct(std::string_view token) {
    std::u32string cps = decode_utf8(token);
    size_t b = 0, e = cps.size();
    while (b < e && is_punct(cps[b])) ++b;
    while (e > b && is_punct(cps[e - 1])) --e;
    return encode_utf8(std::u32string_view(cps).substr(b, e - b));
}

}  // namespace ramt::text
