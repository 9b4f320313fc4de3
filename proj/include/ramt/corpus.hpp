#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <ostream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ramt/backends.hpp"
#include "ramt/text.hpp"

namespace ramt::corpus {

struct ParallelPair {
    std::string id;
    std::string source_text;
    std::string target_text;
    std::string lang_pair;
    nlohmann::json attrs = nlohmann::json::object();
};

inline nlohmann::json to_json(const ParallelPair& p) {
    nlohmann::json j = {{"id", p.id},
                        {"source", p.source_text},
                        {"target", p.target_text},
                        {"lang_pair", p.lang_pair}};
    if (!p.attrs.empty()) j["attrs"] = p.attrs;
    return j;
}

// Matching normalization shared by dedup and contamination filtering:
// NFC, trim, collapse whitespace; casefold stays opt-in.
struct NormRule {
    bool casefold = false;

    std::string apply(std::string_view s) const {
        return text::normalize_text(s, casefold);
    }
    std::string name() const { return casefold ? "nfc_casefold" : "nfc"; }

    static NormRule from_name(std::string_view name) {
        if (name == "nfc") return {false};
        if (name == "nfc_casefold") return {true};
        throw std::invalid_argument("unknown normalization rule: " +
                                    std::string(name));
    }
};

// ---------------------------------------------------------------------------
// Ingestion.
// ---------------------------------------------------------------------------

enum class Format { jsonl, tsv };

inline Format format_from_name(std::string_view name) {
    if (name == "jsonl") return Format::jsonl;
    if (name == "tsv") return Format::tsv;
    throw std::invalid_argument("unknown corpus format: " + std::string(name));
}

struct RecordError {
    size_t line;
    std::string message;
};

struct IngestReport {
    size_t lines = 0;
    size_t records = 0;
    size_t malformed = 0;
    std::vector<RecordError> errors;

    nlohmann::json to_json() const {
        nlohmann::json errs = nlohmann::json::array();
        for (const auto& e : errors)
            errs.push_back({{"line", e.line}, {"message", e.message}});
        return {{"lines", lines},
                {"records", records},
                {"malformed", malformed},
                {"errors", errs}};
    }
};

struct ReaderOptions {
    Format format = Format::jsonl;
    std::string tsv_lang_pair;  // required for tsv input
    std::vector<std::string> allowed_lang_pairs;  // empty = accept any
};

namespace detail {

inline std::optional<std::string> validate_pair(ParallelPair& p,
                                                const ReaderOptions& opt) {
    p.source_text = text::trim(p.source_text);
    p.target_text = text::trim(p.target_text);
    if (p.source_text.empty()) return "empty source text";
    if (p.target_text.empty()) return "empty target text";
    if (p.lang_pair.empty()) return "missing lang_pair";
    if (!opt.allowed_lang_pairs.empty() &&
        std::find(opt.allowed_lang_pairs.begin(), opt.allowed_lang_pairs.end(),
                  p.lang_pair) == opt.allowed_lang_pairs.end())
        return "lang_pair '" + p.lang_pair + "' is not configured";
    if (p.attrs.contains("only_index1")) {
        const auto& v = p.attrs["only_index1"];
        if (!v.is_number_integer() ||
            (v.get<int64_t>() != 0 && v.get<int64_t>() != 1))
            return "attrs.only_index1 must be 0 or 1";
    }
    return std::nullopt;
}

}  // namespace detail

// Parses one JSONL corpus record. Returns the pair or a record-level error.
inline std::pair<std::optional<ParallelPair>, std::optional<std::string>>
parse_jsonl_record(std::string_view line, size_t line_no,
                   const ReaderOptions& opt) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        return {std::nullopt, std::string("bad JSON: ") + e.what()};
    }
    if (!j.is_object()) return {std::nullopt, "record is not an object"};
    ParallelPair p;
    for (const char* key : {"source", "target", "lang_pair"})
        if (!j.contains(key) || !j[key].is_string())
            return {std::nullopt, std::string("missing or non-string '") + key + "'"};
    p.source_text = j["source"].get<std::string>();
    p.target_text = j["target"].get<std::string>();
    p.lang_pair = j["lang_pair"].get<std::string>();
    if (j.contains("id")) {
        if (!j["id"].is_string()) return {std::nullopt, "non-string 'id'"};
        p.id = j["id"].get<std::string>();
    } else {
        p.id = std::to_string(line_no);
    }
    if (j.contains("attrs")) {
        if (!j["attrs"].is_object()) return {std::nullopt, "'attrs' is not an object"};
        p.attrs = j["attrs"];
    }
    if (auto err = detail::validate_pair(p, opt)) return {std::nullopt, *err};
    return {std::move(p), std::nullopt};
}

inline std::pair<std::optional<ParallelPair>, std::optional<std::string>>
parse_tsv_record(std::string_view line, size_t line_no,
                 const ReaderOptions& opt) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos)
        return {std::nullopt, "expected source<TAB>target"};
    ParallelPair p;
    p.id = std::to_string(line_no);
    p.source_text = std::string(line.substr(0, tab));
    p.target_text = std::string(line.substr(tab + 1));
    p.lang_pair = opt.tsv_lang_pair;
    if (auto err = detail::validate_pair(p, opt)) return {std::nullopt, *err};
    return {std::move(p), std::nullopt};
}

// Streams records in file order; malformed records are counted and reported
// with their line number, never silently dropped.
class CorpusReader {
public:
    CorpusReader(const std::string& path, ReaderOptions opt)
        : in_(path), opt_(std::move(opt)) {
        if (!in_) throw std::runtime_error("cannot open corpus file: " + path);
        if (opt_.format == Format::tsv && opt_.tsv_lang_pair.empty())
            throw std::invalid_argument("tsv input requires a lang_pair");
    }

    std::optional<ParallelPair> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++report_.lines;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            auto [pair, err] =
                opt_.format == Format::jsonl
                    ? parse_jsonl_record(line, report_.lines, opt_)
                    : parse_tsv_record(line, report_.lines, opt_);
            if (err) {
                ++report_.malformed;
                report_.errors.push_back({report_.lines, std::move(*err)});
                continue;
            }
            ++report_.records;
            return std::move(pair);
        }
        return std::nullopt;
    }

    std::vector<ParallelPair> read_all() {
        std::vector<ParallelPair> out;
        while (auto p = next()) out.push_back(std::move(*p));
        return out;
    }

    const IngestReport& report() const { return report_; }

private:
    std::ifstream in_;
    ReaderOptions opt_;
    IngestReport report_;
};

inline void write_jsonl(std::ostream& out, const ParallelPair& p) {
    out << to_json(p).dump() << '\n';
}

// ---------------------------------------------------------------------------
// Filters. Each is pure per record apart from its counters; survivors keep
// input order.
// ---------------------------------------------------------------------------

struct FilterReport {
    size_t input = 0;
    size_t kept = 0;
    size_t removed = 0;
    std::string rule;

    nlohmann::json to_json() const {
        return {{"input", input}, {"kept", kept}, {"removed", removed}, {"rule", rule}};
    }
};

// Membership set of normalized test-set source strings.
class TestSetGuard {
public:
    explicit TestSetGuard(NormRule rule = {}) : rule_(rule) {}

    template <typename Iterable>
    static TestSetGuard build(const Iterable& entries, NormRule rule = {}) {
        TestSetGuard g(rule);
        for (const auto& e : entries) g.insert(e);
        return g;
    }

    void insert(std::string_view raw) { entries_.insert(rule_.apply(raw)); }

    bool contains(std::string_view raw_source) const {
        return entries_.count(rule_.apply(raw_source)) > 0;
    }

    bool contains_normalized(const std::string& normalized) const {
        return entries_.count(normalized) > 0;
    }

    size_t size() const { return entries_.size(); }
    const NormRule& rule() const { return rule_; }

private:
    NormRule rule_;
    std::unordered_set<std::string> entries_;
};

class ContaminationFilter {
public:
    explicit ContaminationFilter(const TestSetGuard& guard) : guard_(guard) {
        report_.rule = "contamination";
    }

    bool keep(const ParallelPair& p) {
        ++report_.input;
        if (guard_.contains(p.source_text)) {
            ++report_.removed;
            return false;
        }
        ++report_.kept;
        return true;
    }

    const FilterReport& report() const { return report_; }

private:
    const TestSetGuard& guard_;
    FilterReport report_;
};

// Keeps the first occurrence of each (normalized source, normalized target).
class DedupFilter {
public:
    explicit DedupFilter(NormRule rule = {}) : rule_(rule) {
        report_.rule = "dedup";
    }

    bool keep(const ParallelPair& p) {
        ++report_.input;
        std::string key = rule_.apply(p.source_text);
        key.push_back('\x1f');
        key += rule_.apply(p.target_text);
        if (!seen_.insert(std::move(key)).second) {
            ++report_.removed;
            return false;
        }
        ++report_.kept;
        return true;
    }

    const FilterReport& report() const { return report_; }

private:
    NormRule rule_;
    std::unordered_set<std::string> seen_;
    FilterReport report_;
};

// Removes pairs whose target contains a token of length >= min_word_len
// (code points, edge punctuation stripped) that is not in the allowed list.
class WordlistFilter {
public:
    WordlistFilter(const std::vector<std::string>& allowed_words,
                   size_t min_word_len = 2, NormRule rule = {})
        : min_word_len_(min_word_len), rule_(rule) {
        if (allowed_words.empty())
            throw std::invalid_argument("word list must be non-empty");
        for (const auto& w : allowed_words) allowed_.insert(rule_.apply(w));
        report_.rule = "wordlist";
    }

    bool keep(const ParallelPair& p) {
        ++report_.input;
        for (const std::string& token : text::whitespace_tokens(p.target_text)) {
            const std::string word = text::strip_edge_punct(token);
            if (word.empty()) continue;
            if (text::codepoint_count(word) < min_word_len_) continue;
            if (!allowed_.count(rule_.apply(word))) {
                ++report_.removed;
                return false;
            }
        }
        ++report_.kept;
        return true;
    }

    const FilterReport& report() const { return report_; }

private:
    size_t min_word_len_;
    NormRule rule_;
    std::unordered_set<std::string> allowed_;
    FilterReport report_;
};

template <typename Filter>
inline std::vector<ParallelPair> apply_filter(std::vector<ParallelPair> pairs,
                                              Filter& filter) {
    std::vector<ParallelPair> out;
    out.reserve(pairs.size());
    for (auto& p : pairs)
        if (filter.keep(p)) out.push_back(std::move(p));
    return out;
}

// ---------------------------------------------------------------------------
// Chunking.
// ---------------------------------------------------------------------------

inline constexpr size_t kChunkSizeMin = 50000;
inline constexpr size_t kChunkSizeMax = 200000;

struct ChunkPlan {
    size_t chunk_size = kChunkSizeMin;
    bool allow_override = false;  // permits out-of-range sizes (tests, smoke runs)

    void validate() const {
        if (chunk_size == 0)
            throw std::invalid_argument("chunk_size must be > 0");
        if (!allow_override &&
            (chunk_size < kChunkSizeMin || chunk_size > kChunkSizeMax))
            throw std::invalid_argument(
                "chunk_size " + std::to_string(chunk_size) + " outside [" +
                std::to_string(kChunkSizeMin) + ", " +
                std::to_string(kChunkSizeMax) + "] (use the override flag)");
    }
};

// All chunks except possibly the last have exactly chunk_size records;
// concatenating them reproduces the input order.
template <typename T>
inline std::vector<std::vector<T>> chunk(std::vector<T> items,
                                         const ChunkPlan& plan) {
    plan.validate();
    std::vector<std::vector<T>> out;
    std::vector<T> cur;
    cur.reserve(std::min(items.size(), plan.chunk_size));
    for (auto& item : items) {
        cur.push_back(std::move(item));
        if (cur.size() == plan.chunk_size) {
            out.push_back(std::move(cur));
            cur = {};
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// ---------------------------------------------------------------------------
// Pivot pseudolabeling: source -> pivot -> target, chunk by chunk.
// ---------------------------------------------------------------------------

struct PseudolabelOptions {
    std::string source_lang;
    std::string pivot_lang;
    std::string target_lang;
    ChunkPlan plan{kChunkSizeMin, false};
    int max_retries = 2;  // extra attempts per hop on failure or empty output
};

struct PseudolabelFailure {
    size_t index;
    std::string message;
};

struct PseudolabelReport {
    size_t processed = 0;
    size_t emitted = 0;
    size_t failed = 0;
    std::vector<PseudolabelFailure> failures;

    nlohmann::json to_json() const {
        nlohmann::json fails = nlohmann::json::array();
        for (const auto& f : failures)
            fails.push_back({{"index", f.index}, {"message", f.message}});
        return {{"processed", processed},
                {"emitted", emitted},
                {"failed", failed},
                {"failures", fails}};
    }
};

namespace detail {

inline std::optional<std::string> translate_with_retries(
    backends::Translator& translator, const std::string& text,
    const std::string& from, const std::string& to, int max_retries,
    int& retries_used, std::string& error) {
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        if (attempt > 0) ++retries_used;
        try {
            std::string out = translator.translate(text, from, to);
            if (!ramt::text::is_blank(out)) return out;
            error = "empty translation";
        } catch (const std::exception& e) {
            error = e.what();
        }
    }
    return std::nullopt;
}

}  // namespace detail

// Emits (source, target) pairs through `sink` in input order. Failed records
// are skipped and reported, never silently lost.
inline PseudolabelReport pivot_pseudolabel(
    std::span<const std::string> sources, const PseudolabelOptions& opt,
    backends::Translator& translator,
    const std::function<void(ParallelPair&&)>& sink) {
    opt.plan.validate();
    PseudolabelReport report;
    const bool direct = opt.source_lang == opt.pivot_lang;

    size_t index = 0;
    while (index < sources.size()) {
        const size_t chunk_end =
            std::min(sources.size(), index + opt.plan.chunk_size);
        for (; index < chunk_end; ++index) {
            ++report.processed;
            const std::string& src = sources[index];
            if (text::is_blank(src)) {
                ++report.failed;
                report.failures.push_back({index, "blank source"});
                continue;
            }
            int retries = 0;
            std::string error;
            std::string pivot_text = src;
            if (!direct) {
                auto hop = detail::translate_with_retries(
                    translator, src, opt.source_lang, opt.pivot_lang,
                    opt.max_retries, retries, error);
                if (!hop) {
                    ++report.failed;
                    report.failures.push_back(
                        {index, "pivot hop failed: " + error});
                    continue;
                }
                pivot_text = std::move(*hop);
            }
            auto target = detail::translate_with_retries(
                translator, pivot_text, opt.pivot_lang, opt.target_lang,
                opt.max_retries, retries, error);
            if (!target) {
                ++report.failed;
                report.failures.push_back({index, "target hop failed: " + error});
                continue;
            }

            ParallelPair p;
            p.id = std::to_string(index + 1);
            p.source_text = src;
            p.target_text = std::move(*target);
            p.lang_pair = opt.source_lang + "-" + opt.target_lang;
            p.attrs["provenance"] = "pseudolabel";
            p.attrs["backend"] = translator.name();
            p.attrs["pivot_lang"] = opt.pivot_lang;
            p.attrs["pivot_text"] = pivot_text;
            if (retries > 0) p.attrs["retries"] = retries;
            ++report.emitted;
            sink(std::move(p));
        }
    }
    return report;
}

}  // namespace ramt::corpus
