#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ramt/detail/binio.hpp"
#include "ramt/detail/rng.hpp"
#include "ramt/vectors.hpp"

namespace ramt::ann {

inline constexpr std::string_view kIndexMagic = "ANNF1";
inline constexpr uint32_t kIndexVersion = 1;

enum class Metric : uint8_t { angular = 0 };

struct IndexConfig {
    uint32_t dim = 384;
    uint32_t n_trees = 100;
    Metric metric = Metric::angular;
    uint32_t leaf_capacity = 16;
    uint64_t seed = 0;

    void validate() const {
        if (dim == 0) throw std::invalid_argument("index dim must be > 0");
        if (n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");
        if (leaf_capacity < 2)
            throw std::invalid_argument("leaf_capacity must be >= 2");
    }
};

struct QueryParams {
    int64_t top_n = 10;
    int64_t search_k = 0;  // 0 => default_search_k(n_trees, top_n)

    void validate() const {
        if (top_n < 1) throw std::invalid_argument("top_n must be >= 1");
        if (search_k < top_n)
            throw std::invalid_argument("search_k must be >= top_n");
    }
};

inline int64_t default_search_k(int64_t n_trees, int64_t top_n) {
    if (n_trees < 1 || top_n < 1)
        throw std::invalid_argument("default_search_k: arguments must be >= 1");
    return 2 * n_trees * top_n;
}

struct Neighbor {
    uint32_t item;
    double similarity;
};

// Forest of random-hyperplane partition trees over unit-normalized vectors,
// queried best-first with a single priority queue across all roots.
class AnnForest {
public:
    struct NodeView {
        bool leaf;
        int32_t left;
        int32_t right;
        float offset;
        std::span<const float> normal;      // inner only
        std::span<const uint32_t> items;    // leaf only
    };

    static AnnForest build(const vectors::VectorStore& store, IndexConfig config,
                           unsigned n_threads = 0) {
        config.validate();
        if (store.size() == 0)
            throw std::invalid_argument("cannot build index over empty store");
        if (store.dim() != config.dim)
            throw std::invalid_argument("store dim " + std::to_string(store.dim()) +
                                        " does not match index dim " +
                                        std::to_string(config.dim));

        AnnForest f;
        f.config_ = config;
        f.ids_ = store.ids();
        f.items_ = store.data();
        const size_t n = store.size();
        const size_t dim = config.dim;
        for (size_t i = 0; i < n; ++i) {
            std::span<float> row(f.items_.data() + i * dim, dim);
            if (vectors::norm(row) == 0.0)
                throw std::invalid_argument("zero vector at row " +
                                            std::to_string(i) +
                                            " cannot be indexed under angular metric");
            vectors::normalize_in_place(row);
        }

        // Trees are independent given per-tree seeds, so build in parallel and
        // merge in tree order to keep the arena layout deterministic.
        std::vector<TreeScratch> scratch(config.n_trees);
        if (n_threads == 0) n_threads = std::thread::hardware_concurrency();
        n_threads = std::max(1u, std::min(n_threads, config.n_trees));
        std::atomic<uint32_t> next_tree{0};
        auto worker = [&] {
            for (;;) {
                const uint32_t t = next_tree.fetch_add(1);
                if (t >= config.n_trees) break;
                scratch[t] = f.build_tree(config.seed + t);
            }
        };
        if (n_threads == 1) {
            worker();
        } else {
            std::vector<std::thread> threads;
            for (unsigned i = 0; i < n_threads; ++i) threads.emplace_back(worker);
            for (auto& th : threads) th.join();
        }

        for (const TreeScratch& s : scratch) {
            const int32_t node_base = static_cast<int32_t>(f.nodes_.size());
            const uint32_t normal_base =
                static_cast<uint32_t>(f.normals_.size() / dim);
            const uint32_t items_base = static_cast<uint32_t>(f.leaf_items_.size());
            for (Node nd : s.nodes) {
                if (nd.left >= 0) {
                    nd.left += node_base;
                    nd.right += node_base;
                    nd.slot += normal_base;
                } else {
                    nd.slot += items_base;
                }
                f.nodes_.push_back(nd);
            }
            f.normals_.insert(f.normals_.end(), s.normals.begin(), s.normals.end());
            f.leaf_items_.insert(f.leaf_items_.end(), s.leaf_items.begin(),
                                 s.leaf_items.end());
            f.roots_.push_back(s.root + node_base);
        }
        return f;
    }

    std::vector<Neighbor> query(std::span<const float> probe,
                                QueryParams params) const {
        params.validate();
        if (probe.size() != config_.dim)
            throw std::invalid_argument("probe dim " + std::to_string(probe.size()) +
                                        " does not match index dim " +
                                        std::to_string(config_.dim));
        std::vector<float> q(probe.begin(), probe.end());
        if (vectors::norm(q) == 0.0)
            throw std::invalid_argument("cannot query with zero probe vector");
        vectors::normalize_in_place(q);

        // Best-first traversal, one queue across all roots; search_k bounds the
        // number of nodes inspected.
        using Entry = std::pair<double, int32_t>;
        std::priority_queue<Entry> pq;
        constexpr double kInf = std::numeric_limits<double>::infinity();
        for (int32_t root : roots_) pq.emplace(kInf, root);

        std::vector<uint8_t> seen(ids_.size(), 0);
        std::vector<uint32_t> pool;
        int64_t inspected = 0;
        while (!pq.empty() && inspected < params.search_k) {
            const auto [priority, idx] = pq.top();
            pq.pop();
            ++inspected;
            const Node& nd = nodes_[static_cast<size_t>(idx)];
            if (nd.left < 0) {
                for (uint32_t k = 0; k < nd.count; ++k) {
                    const uint32_t item = leaf_items_[nd.slot + k];
                    if (!seen[item]) {
                        seen[item] = 1;
                        pool.push_back(item);
                    }
                }
            } else {
                const double m =
                    vectors::dot(normal_of(nd), q) - static_cast<double>(nd.offset);
                pq.emplace(std::min(priority, m), nd.right);
                pq.emplace(std::min(priority, -m), nd.left);
            }
        }

        std::vector<Neighbor> ranked;
        ranked.reserve(pool.size());
        for (uint32_t item : pool)
            ranked.push_back({item, vectors::dot(item_row(item), q)});
        const size_t keep =
            std::min<size_t>(static_cast<size_t>(params.top_n), ranked.size());
        auto better = [](const Neighbor& a, const Neighbor& b) {
            if (a.similarity != b.similarity) return a.similarity > b.similarity;
            return a.item < b.item;
        };
        std::partial_sort(ranked.begin(), ranked.begin() + keep, ranked.end(),
                          better);
        ranked.resize(keep);
        return ranked;
    }

    void save(const std::string& path) const {
        detail::BinWriter w(path);
        w.magic(kIndexMagic);
        w.u32(kIndexVersion);
        w.u32(config_.dim);
        w.u32(config_.n_trees);
        w.u8(static_cast<uint8_t>(config_.metric));
        w.u32(config_.leaf_capacity);
        w.u64(config_.seed);
        w.u64(ids_.size());
        for (const auto& id : ids_) w.cstring(id);
        for (float v : items_) w.f32(v);
        w.u64(nodes_.size());
        for (const Node& nd : nodes_) {
            w.i32(nd.left);
            w.i32(nd.right);
            w.f32(nd.offset);
            w.u32(nd.slot);
            w.u32(nd.count);
        }
        w.array(normals_);
        w.array(leaf_items_);
        w.u64(roots_.size());
        for (int32_t r : roots_) w.i32(r);
    }

    static AnnForest load(const std::string& path) {
        detail::BinReader r(path);
        r.expect_magic(kIndexMagic);
        const uint32_t version = r.u32();
        if (version != kIndexVersion)
            throw std::runtime_error("unsupported index version " +
                                     std::to_string(version) + " in " + path);
        AnnForest f;
        f.config_.dim = r.u32();
        f.config_.n_trees = r.u32();
        f.config_.metric = static_cast<Metric>(r.u8());
        f.config_.leaf_capacity = r.u32();
        f.config_.seed = r.u64();
        f.config_.validate();
        const uint64_t count = r.u64();
        f.ids_.reserve(count);
        for (uint64_t i = 0; i < count; ++i) f.ids_.push_back(r.cstring());
        f.items_.resize(count * f.config_.dim);
        for (auto& v : f.items_) v = r.f32();
        const uint64_t node_count = r.u64();
        f.nodes_.reserve(node_count);
        for (uint64_t i = 0; i < node_count; ++i) {
            Node nd;
            nd.left = r.i32();
            nd.right = r.i32();
            nd.offset = r.f32();
            nd.slot = r.u32();
            nd.count = r.u32();
            f.nodes_.push_back(nd);
        }
        f.normals_ = r.array<float>();
        f.leaf_items_ = r.array<uint32_t>();
        const uint64_t root_count = r.u64();
        if (root_count != f.config_.n_trees)
            throw std::runtime_error("corrupt index: tree count mismatch in " +
                                     path);
        for (uint64_t i = 0; i < root_count; ++i) {
            const int32_t root = r.i32();
            if (root < 0 || static_cast<uint64_t>(root) >= node_count)
                throw std::runtime_error("corrupt index: root out of range in " +
                                         path);
            f.roots_.push_back(root);
        }
        return f;
    }

    const IndexConfig& config() const { return config_; }
    size_t item_count() const { return ids_.size(); }
    const std::string& id(uint32_t item) const { return ids_.at(item); }
    const std::vector<std::string>& ids() const { return ids_; }
    std::span<const float> item_row(uint32_t item) const {
        return {items_.data() + static_cast<size_t>(item) * config_.dim,
                config_.dim};
    }

    size_t node_count() const { return nodes_.size(); }
    const std::vector<int32_t>& roots() const { return roots_; }

    NodeView node(size_t i) const {
        const Node& nd = nodes_.at(i);
        NodeView v{};
        v.leaf = nd.left < 0;
        v.left = nd.left;
        v.right = nd.right;
        v.offset = nd.offset;
        if (v.leaf)
            v.items = {leaf_items_.data() + nd.slot, nd.count};
        else
            v.normal = normal_of(nd);
        return v;
    }

    // All items reachable from one tree's leaves, in traversal order.
    std::vector<uint32_t> leaf_partition(size_t tree) const {
        std::vector<uint32_t> out;
        std::vector<int32_t> stack{roots_.at(tree)};
        while (!stack.empty()) {
            const Node& nd = nodes_[static_cast<size_t>(stack.back())];
            stack.pop_back();
            if (nd.left < 0) {
                for (uint32_t k = 0; k < nd.count; ++k)
                    out.push_back(leaf_items_[nd.slot + k]);
            } else {
                stack.push_back(nd.right);
                stack.push_back(nd.left);
            }
        }
        return out;
    }

private:
    struct Node {
        int32_t left = -1;   // < 0 marks a leaf
        int32_t right = -1;
        float offset = 0.0f;
        uint32_t slot = 0;   // inner: row in normals; leaf: start in leaf_items
        uint32_t count = 0;  // leaf: item count
    };

    struct TreeScratch {
        std::vector<Node> nodes;
        std::vector<float> normals;
        std::vector<uint32_t> leaf_items;
        int32_t root = 0;
    };

    std::span<const float> normal_of(const Node& nd) const {
        return {normals_.data() + static_cast<size_t>(nd.slot) * config_.dim,
                config_.dim};
    }

    TreeScratch build_tree(uint64_t seed) const {
        const size_t dim = config_.dim;
        const size_t n = ids_.size();
        detail::SplitMix64 rng(seed);
        TreeScratch t;

        std::vector<uint32_t> all(n);
        for (size_t i = 0; i < n; ++i) all[i] = static_cast<uint32_t>(i);

        struct Work {
            std::vector<uint32_t> items;
            int32_t parent;
            bool is_left;
        };
        std::vector<Work> stack;
        stack.push_back({std::move(all), -1, false});

        auto attach = [&](const Work& w, int32_t nd) {
            if (w.parent >= 0) {
                if (w.is_left)
                    t.nodes[static_cast<size_t>(w.parent)].left = nd;
                else
                    t.nodes[static_cast<size_t>(w.parent)].right = nd;
            } else {
                t.root = nd;
            }
        };

        std::vector<float> normal(dim);
        std::vector<uint32_t> left_items, right_items;
        while (!stack.empty()) {
            Work w = std::move(stack.back());
            stack.pop_back();
            const int32_t nd = static_cast<int32_t>(t.nodes.size());

            if (w.items.size() <= config_.leaf_capacity) {
                Node leaf;
                leaf.slot = static_cast<uint32_t>(t.leaf_items.size());
                leaf.count = static_cast<uint32_t>(w.items.size());
                t.leaf_items.insert(t.leaf_items.end(), w.items.begin(),
                                    w.items.end());
                t.nodes.push_back(leaf);
                attach(w, nd);
                continue;
            }

            float offset = 0.0f;
            choose_hyperplane(w.items, rng, normal, offset);

            left_items.clear();
            right_items.clear();
            for (uint32_t item : w.items) {
                const double m = vectors::dot(item_vec(item), normal) -
                                 static_cast<double>(offset);
                (m >= 0.0 ? right_items : left_items).push_back(item);
            }
            if (left_items.empty() || right_items.empty()) {
                // Hyperplane failed to separate (duplicate-heavy subsets).
                left_items.clear();
                right_items.clear();
                std::vector<uint32_t> shuffled = w.items;
                for (size_t i = shuffled.size(); i > 1; --i)
                    std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
                const size_t half = shuffled.size() / 2;
                left_items.assign(shuffled.begin(), shuffled.begin() + half);
                right_items.assign(shuffled.begin() + half, shuffled.end());
            }

            Node inner;
            inner.left = 0;  // patched when children pop
            inner.right = 0;
            inner.offset = offset;
            inner.slot = static_cast<uint32_t>(t.normals.size() / dim);
            t.normals.insert(t.normals.end(), normal.begin(), normal.end());
            t.nodes.push_back(inner);
            attach(w, nd);

            stack.push_back({std::move(right_items), nd, false});
            stack.push_back({std::move(left_items), nd, true});
            left_items = {};
            right_items = {};
        }
        return t;
    }

    // Hyperplane through two sampled items: normal is the difference of their
    // unit vectors, offset puts the midpoint on the plane. Falls back to a
    // random direction through the subset centroid after 3 degenerate draws.
    void choose_hyperplane(const std::vector<uint32_t>& items,
                           detail::SplitMix64& rng, std::vector<float>& normal,
                           float& offset) const {
        const size_t dim = config_.dim;
        const size_t n = items.size();
        for (int attempt = 0; attempt < 3; ++attempt) {
            const size_t i = rng.below(n);
            size_t j = rng.below(n - 1);
            if (j >= i) ++j;
            const auto a = item_vec(items[i]);
            const auto b = item_vec(items[j]);
            double norm_sq = 0.0;
            for (size_t k = 0; k < dim; ++k) {
                const double d = double(a[k]) - double(b[k]);
                normal[k] = static_cast<float>(d);
                norm_sq += d * d;
            }
            if (norm_sq < 1e-12) continue;
            const double inv = 1.0 / std::sqrt(norm_sq);
            double off = 0.0;
            for (size_t k = 0; k < dim; ++k) {
                normal[k] = static_cast<float>(normal[k] * inv);
                off += double(normal[k]) * (double(a[k]) + double(b[k])) * 0.5;
            }
            offset = static_cast<float>(off);
            return;
        }
        double norm_sq = 0.0;
        for (size_t k = 0; k < dim; ++k) {
            const double d = rng.symmetric();
            normal[k] = static_cast<float>(d);
            norm_sq += d * d;
        }
        const double inv = 1.0 / std::sqrt(norm_sq);
        std::vector<double> centroid(dim, 0.0);
        for (uint32_t item : items) {
            const auto v = item_vec(item);
            for (size_t k = 0; k < dim; ++k) centroid[k] += v[k];
        }
        double off = 0.0;
        for (size_t k = 0; k < dim; ++k) {
            normal[k] = static_cast<float>(normal[k] * inv);
            off += double(normal[k]) * centroid[k] / double(items.size());
        }
        offset = static_cast<float>(off);
    }

    std::span<const float> item_vec(uint32_t item) const {
        return {items_.data() + static_cast<size_t>(item) * config_.dim,
                config_.dim};
    }

    IndexConfig config_;
    std::vector<std::string> ids_;
    std::vector<float> items_;  // unit-normalized, row-major
    std::vector<Node> nodes_;
    std::vector<float> normals_;
    std::vector<uint32_t> leaf_items_;
    std::vector<int32_t> roots_;
};

}  // namespace ramt::ann
