#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "ramt/detail/binio.hpp"

namespace ramt::vectors {

inline constexpr std::string_view kStoreMagic = "VSTR1";

struct EmbeddingVector {
    std::vector<float> values;

    EmbeddingVector() = default;
    explicit EmbeddingVector(std::vector<float> v) : values(std::move(v)) {}

    size_t dim() const { return values.size(); }
    std::span<const float> span() const { return values; }
};

// Dot product with 64-bit accumulation.
inline double dot(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("vector dim mismatch: " +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return acc;
}

inline double norm(std::span<const float> a) {
    double acc = 0.0;
    for (float v : a) acc += static_cast<double>(v) * static_cast<double>(v);
    return std::sqrt(acc);
}

inline double cosine_similarity(std::span<const float> a,
                                std::span<const float> b) {
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("cosine similarity undefined for zero vector");
    return dot(a, b) / (na * nb);
}

inline double cosine_similarity(const EmbeddingVector& a,
                                const EmbeddingVector& b) {
    return cosine_similarity(a.span(), b.span());
}

inline void normalize_in_place(std::span<float> v) {
    const double n = norm(v);
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
    const double inv = 1.0 / n;
    for (float& x : v) x = static_cast<float>(x * inv);
}

inline EmbeddingVector normalize(const EmbeddingVector& v) {
    EmbeddingVector out = v;
    normalize_in_place(out.values);
    return out;
}

// Immutable after load; ids map 1:1 onto dense row-major f32 rows.
class VectorStore {
public:
    VectorStore() = default;
    explicit VectorStore(size_t dim) : dim_(dim) {}

    size_t dim() const { return dim_; }
    size_t size() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }
    const std::string& id(size_t row) const { return ids_.at(row); }
    const std::vector<float>& data() const { return data_; }

    std::span<const float> row(size_t i) const {
        return {data_.data() + i * dim_, dim_};
    }

    bool contains(std::string_view id) const {
        return by_id_.find(std::string(id)) != by_id_.end();
    }

    size_t row_of(std::string_view id) const {
        auto it = by_id_.find(std::string(id));
        if (it == by_id_.end())
            throw std::out_of_range("id not in vector store: " + std::string(id));
        return it->second;
    }

    void add(std::string id, std::span<const float> values) {
        if (dim_ == 0 && ids_.empty()) dim_ = values.size();
        if (values.size() != dim_)
            throw std::invalid_argument(
                "row '" + id + "' has dim " + std::to_string(values.size()) +
                ", store expects " + std::to_string(dim_));
        for (float v : values)
            if (!std::isfinite(v))
                throw std::invalid_argument("non-finite component in row '" + id +
                                            "'");
        auto [it, inserted] = by_id_.emplace(id, ids_.size());
        if (!inserted)
            throw std::invalid_argument("duplicate vector id: " + id);
        ids_.push_back(std::move(id));
        data_.insert(data_.end(), values.begin(), values.end());
    }

    static VectorStore load(const std::string& path, size_t expected_dim) {
        std::ifstream probe(path, std::ios::binary);
        if (!probe) throw std::runtime_error("cannot open vectors file: " + path);
        char head[5] = {};
        probe.read(head, 5);
        probe.close();
        if (std::string_view(head, 5) == kStoreMagic)
            return load_binary(path, expected_dim);
        return load_jsonl(path, expected_dim);
    }

    static VectorStore load_jsonl(const std::string& path, size_t expected_dim) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open vectors file: " + path);
        VectorStore store(expected_dim);
        std::string line;
        size_t row = 0;
        std::vector<float> buf;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw std::runtime_error("vectors row " + std::to_string(row) +
                                         ": bad JSON: " + e.what());
            }
            if (!j.contains("id") || !j.contains("vector"))
                throw std::runtime_error("vectors row " + std::to_string(row) +
                                         ": missing id/vector");
            buf.clear();
            for (const auto& v : j.at("vector")) {
                if (!v.is_number())
                    throw std::runtime_error("vectors row " + std::to_string(row) +
                                             ": non-numeric component");
                buf.push_back(v.get<float>());
            }
            if (buf.size() != expected_dim)
                throw std::runtime_error(
                    "vectors row " + std::to_string(row) + " ('" +
                    j.at("id").get<std::string>() + "') has dim " +
                    std::to_string(buf.size()) + ", expected " +
                    std::to_string(expected_dim));
            try {
                store.add(j.at("id").get<std::string>(), buf);
            } catch (const std::invalid_argument& e) {
                throw std::runtime_error("vectors row " + std::to_string(row) +
                                         ": " + e.what());
            }
            ++row;
        }
        return store;
    }

    static VectorStore load_binary(const std::string& path, size_t expected_dim) {
        detail::BinReader r(path);
        r.expect_magic(kStoreMagic);
        const uint32_t dim = r.u32();
        if (dim != expected_dim)
            throw std::runtime_error("vectors file " + path + " has dim " +
                                     std::to_string(dim) + ", expected " +
                                     std::to_string(expected_dim));
        const uint64_t count = r.u64();
        VectorStore store(dim);
        store.ids_.reserve(count);
        for (uint64_t i = 0; i < count; ++i) {
            std::string id = r.cstring();
            auto [it, inserted] = store.by_id_.emplace(id, i);
            if (!inserted)
                throw std::runtime_error("duplicate vector id in " + path + ": " +
                                         id);
            store.ids_.push_back(std::move(id));
        }
        store.data_.resize(count * dim);
        for (uint64_t i = 0; i < count * dim; ++i) {
            const float v = r.f32();
            if (!std::isfinite(v))
                throw std::runtime_error("non-finite component at row " +
                                         std::to_string(i / dim) + " in " + path);
            store.data_[i] = v;
        }
        return store;
    }

    void save_binary(const std::string& path) const {
        detail::BinWriter w(path);
        w.magic(kStoreMagic);
        w.u32(static_cast<uint32_t>(dim_));
        w.u64(ids_.size());
        for (const auto& id : ids_) w.cstring(id);
        for (float v : data_) w.f32(v);
    }

private:
    size_t dim_ = 0;
    std::vector<std::string> ids_;
    std::vector<float> data_;
    std::unordered_map<std::string, size_t> by_id_;
};

}  // namespace ramt::vectors
