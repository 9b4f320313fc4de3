#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ramt/text.hpp"

namespace ramt::metrics {

// chrF++ on a 0..100 scale: character n-gram F-beta averaged with word n-gram
// F-beta over all orders.
struct ChrfConfig {
    int char_order = 6;
    int word_order = 2;
    double beta = 2.0;
    bool lowercase = false;
};

struct OrderStats {
    uint64_t matched = 0;
    uint64_t hyp = 0;
    uint64_t ref = 0;
};

// Char orders 1..char_order followed by word orders 1..word_order.
struct ChrfStats {
    std::vector<OrderStats> orders;

    explicit ChrfStats(const ChrfConfig& cfg)
        : orders(static_cast<size_t>(cfg.char_order + cfg.word_order)) {}

    void add(const ChrfStats& other) {
        if (other.orders.size() != orders.size())
            throw std::invalid_argument("chrf: mismatched order counts");
        for (size_t i = 0; i < orders.size(); ++i) {
            orders[i].matched += other.orders[i].matched;
            orders[i].hyp += other.orders[i].hyp;
            orders[i].ref += other.orders[i].ref;
        }
    }
};

// Multiset of character n-grams over the code-point sequence with all
// whitespace removed first.
inline std::unordered_map<std::u32string, uint64_t> char_ngrams(
    std::string_view utf8, int n) {
    if (n < 1) throw std::invalid_argument("char_ngrams: n must be >= 1");
    std::u32string chars;
    for (char32_t cp : text::decode_utf8(utf8))
        if (!text::is_space(cp)) chars.push_back(cp);
    std::unordered_map<std::u32string, uint64_t> out;
    if (chars.size() < static_cast<size_t>(n)) return out;
    for (size_t i = 0; i + n <= chars.size(); ++i)
        ++out[chars.substr(i, n)];
    return out;
}

// Every Unicode punctuation character becomes a standalone token.
inline std::vector<std::string> word_tokens(std::string_view utf8) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) tokens.push_back(std::exchange(cur, {}));
    };
    for (char32_t cp : text::decode_utf8(utf8)) {
        if (text::is_space(cp)) {
            flush();
        } else if (text::is_punct(cp)) {
            flush();
            std::string p;
            text::append_utf8(p, cp);
            tokens.push_back(std::move(p));
        } else {
            text::append_utf8(cur, cp);
        }
    }
    flush();
    return tokens;
}

// Word n-grams keyed by space-joined tokens (tokens never contain spaces).
inline std::unordered_map<std::string, uint64_t> word_ngrams(
    std::string_view utf8, int n) {
    if (n < 1) throw std::invalid_argument("word_ngrams: n must be >= 1");
    const auto tokens = word_tokens(utf8);
    std::unordered_map<std::string, uint64_t> out;
    if (tokens.size() < static_cast<size_t>(n)) return out;
    for (size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (size_t k = 1; k < static_cast<size_t>(n); ++k) {
            key += ' ';
            key += tokens[i + k];
        }
        ++out[std::move(key)];
    }
    return out;
}

namespace detail {

template <typename Key>
inline OrderStats match_counts(const std::unordered_map<Key, uint64_t>& hyp,
                               const std::unordered_map<Key, uint64_t>& ref) {
    OrderStats s;
    for (const auto& [g, c] : hyp) s.hyp += c;
    for (const auto& [g, c] : ref) s.ref += c;
    const auto& small = hyp.size() <= ref.size() ? hyp : ref;
    const auto& large = hyp.size() <= ref.size() ? ref : hyp;
    for (const auto& [g, c] : small) {
        auto it = large.find(g);
        if (it != large.end()) s.matched += std::min(c, it->second);
    }
    return s;
}

}  // namespace detail

inline double f_measure(double precision, double recall, double beta) {
    const double b2 = beta * beta;
    const double denom = b2 * precision + recall;
    if (denom <= 0.0) return 0.0;
    return (1.0 + b2) * precision * recall / denom;
}

inline ChrfStats sentence_stats(std::string_view hyp, std::string_view ref,
                                const ChrfConfig& cfg) {
    if (cfg.char_order < 1) throw std::invalid_argument("chrf: char_order < 1");
    if (cfg.word_order < 0) throw std::invalid_argument("chrf: word_order < 0");
    if (cfg.beta <= 0) throw std::invalid_argument("chrf: beta <= 0");
    std::string hyp_cased, ref_cased;
    if (cfg.lowercase) {
        hyp_cased = text::to_lower_utf8(hyp);
        ref_cased = text::to_lower_utf8(ref);
        hyp = hyp_cased;
        ref = ref_cased;
    }
    ChrfStats stats(cfg);
    for (int n = 1; n <= cfg.char_order; ++n)
        stats.orders[n - 1] =
            detail::match_counts(char_ngrams(hyp, n), char_ngrams(ref, n));
    for (int n = 1; n <= cfg.word_order; ++n)
        stats.orders[cfg.char_order + n - 1] =
            detail::match_counts(word_ngrams(hyp, n), word_ngrams(ref, n));
    return stats;
}

// Mean F-beta over orders. Orders with no n-grams on either side carry no
// signal and are excluded; an order where only one side has n-grams scores 0.
inline double score_from_stats(const ChrfStats& stats, double beta) {
    double sum = 0.0;
    size_t effective = 0;
    for (const OrderStats& o : stats.orders) {
        if (o.hyp == 0 && o.ref == 0) continue;
        ++effective;
        const double p = o.hyp > 0 ? double(o.matched) / double(o.hyp) : 0.0;
        const double r = o.ref > 0 ? double(o.matched) / double(o.ref) : 0.0;
        sum += f_measure(p, r, beta);
    }
    if (effective == 0) return 0.0;
    return 100.0 * sum / double(effective);
}

inline double sentence_chrf(std::string_view hyp, std::string_view ref,
                            const ChrfConfig& cfg = {}) {
    if (text::is_blank(ref))
        throw std::invalid_argument("chrf: empty reference");
    return score_from_stats(sentence_stats(hyp, ref, cfg), cfg.beta);
}

// Micro-average: per-order statistics summed over all segments first.
inline double corpus_chrf(std::span<const std::string> hyps,
                          std::span<const std::string> refs,
                          const ChrfConfig& cfg = {}) {
    if (hyps.size() != refs.size())
        throw std::invalid_argument(
            "chrf: hypothesis/reference length mismatch (" +
            std::to_string(hyps.size()) + " vs " + std::to_string(refs.size()) +
            ")");
    ChrfStats total(cfg);
    for (size_t i = 0; i < hyps.size(); ++i) {
        if (text::is_blank(refs[i]))
            throw std::invalid_argument("chrf: empty reference at segment " +
                                        std::to_string(i));
        total.add(sentence_stats(hyps[i], refs[i], cfg));
    }
    return score_from_stats(total, cfg.beta);
}

}  // namespace ramt::metrics
