#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "readlab/error.hpp"
#include "readlab/ml/matrix.hpp"

namespace readlab::ml {

enum class MaxFeatures { Sqrt, Log2, All };

inline std::string to_string(MaxFeatures m) {
    switch (m) {
    case MaxFeatures::Sqrt: return "sqrt";
    case MaxFeatures::Log2: return "log2";
    case MaxFeatures::All: return "all";
    }
    return "?";
}

/// "auto" is an alias of "sqrt" for classification.
inline MaxFeatures parse_max_features(std::string_view s) {
    if (s == "sqrt" || s == "auto") return MaxFeatures::Sqrt;
    if (s == "log2") return MaxFeatures::Log2;
    if (s == "all" || s == "none" || s == "None") return MaxFeatures::All;
    throw UsageError("unknown max_features '" + std::string(s) + "' (expected sqrt, auto, log2 or all)");
}

inline std::size_t resolve_max_features(MaxFeatures m, std::size_t d) {
    if (d == 0) return 0;
    switch (m) {
    case MaxFeatures::Sqrt: return std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
    case MaxFeatures::Log2: return std::max<std::size_t>(1, static_cast<std::size_t>(std::log2(static_cast<double>(d))));
    case MaxFeatures::All: return d;
    }
    return d;
}

struct ForestParams {
    std::size_t n_trees = 800;
    int max_depth = -1; ///< negative means unbounded
    MaxFeatures max_features = MaxFeatures::Sqrt;
    std::size_t min_samples_split = 2;
    bool bootstrap = true;
    unsigned jobs = 1; ///< training threads; does not affect the result
};

/// CART tree with Gini splits. Rows with x[feature] <= threshold go left.
class DecisionTree {
public:
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        std::vector<double> dist; ///< class distribution at leaves
        friend bool operator==(const Node&, const Node&) = default;
    };

    static DecisionTree fit(const Matrix& x, std::span<const int> y, std::size_t k, std::span<const std::size_t> sample,
                            const ForestParams& p, std::uint64_t seed) {
        DecisionTree t;
        t.classes_ = k;
        Builder b{x, y, k, p, std::mt19937_64(seed), t.nodes_,
                  resolve_max_features(p.max_features, x.cols())};
        std::vector<std::size_t> idx(sample.begin(), sample.end());
        b.build(idx, 0);
        return t;
    }

    std::span<const double> leaf_distribution(std::span<const double> row) const {
        int n = 0;
        while (nodes_[static_cast<std::size_t>(n)].feature >= 0) {
            const auto& node = nodes_[static_cast<std::size_t>(n)];
            n = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
        }
        return nodes_[static_cast<std::size_t>(n)].dist;
    }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t depth() const { return depth_from(0); }
    const std::vector<Node>& nodes() const { return nodes_; }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& n : nodes_) {
            if (n.feature < 0) arr.push_back({{"dist", n.dist}});
            else arr.push_back({{"f", n.feature}, {"t", n.threshold}, {"l", n.left}, {"r", n.right}});
        }
        return arr;
    }

    static DecisionTree from_json(const nlohmann::json& j, std::size_t k) {
        DecisionTree t;
        t.classes_ = k;
        for (const auto& jn : j) {
            Node n;
            if (jn.contains("dist")) {
                n.dist = jn.at("dist").get<std::vector<double>>();
                if (n.dist.size() != k) throw ParseError("tree leaf has the wrong class count");
            } else {
                n.feature = jn.at("f").get<int>();
                n.threshold = jn.at("t").get<double>();
                n.left = jn.at("l").get<int>();
                n.right = jn.at("r").get<int>();
            }
            t.nodes_.push_back(std::move(n));
        }
        const auto count = static_cast<int>(t.nodes_.size());
        if (count == 0) throw ParseError("empty tree");
        for (const auto& n : t.nodes_)
            if (n.feature >= 0 && (n.left <= 0 || n.right <= 0 || n.left >= count || n.right >= count))
                throw ParseError("tree child index out of range");
        return t;
    }

    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

private:
    struct Builder {
        const Matrix& x;
        std::span<const int> y;
        std::size_t k;
        const ForestParams& p;
        std::mt19937_64 rng;
        std::vector<Node>& nodes;
        std::size_t max_features;

        static double gini(std::span<const double> counts, double total) {
            if (total <= 0.0) return 0.0;
            double s = 0.0;
            for (double c : counts) s += (c / total) * (c / total);
            return 1.0 - s;
        }

        int make_leaf(const std::vector<double>& counts, double total) {
            Node n;
            n.dist.resize(k);
            for (std::size_t c = 0; c < k; ++c) n.dist[c] = counts[c] / total;
            nodes.push_back(std::move(n));
            return static_cast<int>(nodes.size() - 1);
        }

        int build(std::vector<std::size_t>& idx, int depth) {
            std::vector<double> counts(k, 0.0);
            for (auto i : idx) counts[static_cast<std::size_t>(y[i])] += 1.0;
            const double total = static_cast<double>(idx.size());
            const double parent = gini(counts, total);
            const bool depth_ok = p.max_depth < 0 || depth < p.max_depth;
            if (parent <= 0.0 || !depth_ok || idx.size() < std::max<std::size_t>(2, p.min_samples_split))
                return make_leaf(counts, total);

            // Features are drawn without replacement until max_features
            // non-constant ones have been examined.
            std::vector<std::size_t> order(x.cols());
            std::iota(order.begin(), order.end(), 0);
            int best_feature = -1;
            double best_threshold = 0.0, best_impurity = 0.0;
            std::size_t examined = 0;
            std::vector<std::pair<double, int>> vals(idx.size());
            for (std::size_t pos = 0; pos < order.size() && examined < max_features; ++pos) {
                std::uniform_int_distribution<std::size_t> pick(pos, order.size() - 1);
                std::swap(order[pos], order[pick(rng)]);
                const std::size_t f = order[pos];
                for (std::size_t i = 0; i < idx.size(); ++i) vals[i] = {x(idx[i], f), y[idx[i]]};
                std::sort(vals.begin(), vals.end());
                if (vals.front().first == vals.back().first) continue;
                ++examined;
                std::vector<double> left(k, 0.0), right = counts;
                for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                    left[static_cast<std::size_t>(vals[i].second)] += 1.0;
                    right[static_cast<std::size_t>(vals[i].second)] -= 1.0;
                    if (vals[i].first == vals[i + 1].first) continue;
                    const double nl = static_cast<double>(i + 1), nr = total - nl;
                    const double imp = (nl * gini(left, nl) + nr * gini(right, nr)) / total;
                    if (best_feature < 0 || imp < best_impurity) {
                        best_feature = static_cast<int>(f);
                        best_impurity = imp;
                        best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
                        if (best_threshold >= vals[i + 1].first) best_threshold = vals[i].first;
                    }
                }
            }
            if (best_feature < 0) return make_leaf(counts, total);

            std::vector<std::size_t> li, ri;
            for (auto i : idx) (x(i, static_cast<std::size_t>(best_feature)) <= best_threshold ? li : ri).push_back(i);
            idx.clear();
            idx.shrink_to_fit();
            const int self = static_cast<int>(nodes.size());
            nodes.push_back(Node{best_feature, best_threshold, -1, -1, {}});
            const int l = build(li, depth + 1);
            const int r = build(ri, depth + 1);
            nodes[static_cast<std::size_t>(self)].left = l;
            nodes[static_cast<std::size_t>(self)].right = r;
            return self;
        }
    };

    std::size_t depth_from(int n) const {
        const auto& node = nodes_[static_cast<std::size_t>(n)];
        if (node.feature < 0) return 0;
        return 1 + std::max(depth_from(node.left), depth_from(node.right));
    }

    std::size_t classes_ = 0;
    std::vector<Node> nodes_;
};

/// Bagged Gini trees. Tree t is grown from seed + t, so the model does not
/// depend on the number of training threads.
class RandomForest {
public:
    static RandomForest fit(const Matrix& x, std::span<const int> y, std::size_t k, const ForestParams& p,
                            std::uint64_t seed) {
        if (k < 2) throw ValidationError("random forest needs at least 2 classes");
        if (p.n_trees == 0) throw UsageError("random forest needs at least one tree");
        if (y.size() != x.rows()) throw ValidationError("label count does not match row count");
        if (x.rows() == 0) throw ValidationError("random forest needs training rows");
        for (int v : y)
            if (v < 0 || static_cast<std::size_t>(v) >= k)
                throw ValidationError("label " + std::to_string(v) + " outside 0.." + std::to_string(k - 1));
        if (std::set<int>(y.begin(), y.end()).size() < 2)
            throw ValidationError("training set contains a single class; random forest needs two or more");

        RandomForest f;
        f.params_ = p;
        f.seed_ = seed;
        f.classes_ = k;
        f.features_ = x.cols();
        f.trees_.resize(p.n_trees);

        auto grow = [&](std::size_t t) {
            const std::uint64_t tree_seed = seed + t;
            std::vector<std::size_t> sample(x.rows());
            if (p.bootstrap) {
                std::mt19937_64 rng(tree_seed ^ 0x9e3779b97f4a7c15ULL);
                std::uniform_int_distribution<std::size_t> pick(0, x.rows() - 1);
                for (auto& s : sample) s = pick(rng);
            } else {
                std::iota(sample.begin(), sample.end(), 0);
            }
            f.trees_[t] = DecisionTree::fit(x, y, k, sample, p, tree_seed);
        };

        const unsigned jobs = std::max(1u, std::min<unsigned>(p.jobs, static_cast<unsigned>(p.n_trees)));
        if (jobs == 1) {
            for (std::size_t t = 0; t < p.n_trees; ++t) grow(t);
        } else {
            std::atomic<std::size_t> next{0};
            std::exception_ptr failure;
            std::mutex m;
            std::vector<std::thread> pool;
            for (unsigned j = 0; j < jobs; ++j)
                pool.emplace_back([&] {
                    for (std::size_t t = next++; t < p.n_trees; t = next++) {
                        try {
                            grow(t);
                        } catch (...) {
                            std::lock_guard lock(m);
                            if (!failure) failure = std::current_exception();
                        }
                    }
                });
            for (auto& th : pool) th.join();
            if (failure) std::rethrow_exception(failure);
        }
        return f;
    }

    std::vector<double> predict_proba(std::span<const double> row) const {
        if (row.size() != features_) throw ValidationError("row width does not match the model");
        std::vector<double> out(classes_, 0.0);
        for (const auto& t : trees_) {
            const auto d = t.leaf_distribution(row);
            for (std::size_t c = 0; c < classes_; ++c) out[c] += d[c];
        }
        const double n = static_cast<double>(trees_.size());
        for (auto& v : out) v /= n;
        return out;
    }

    int predict(std::span<const double> row) const { return argmax(predict_proba(row)); }

    const std::vector<DecisionTree>& trees() const { return trees_; }
    const ForestParams& params() const { return params_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t class_count() const { return classes_; }
    std::size_t feature_count() const { return features_; }

    nlohmann::json to_json() const {
        nlohmann::json trees = nlohmann::json::array();
        for (const auto& t : trees_) trees.push_back(t.to_json());
        return {{"n_trees", params_.n_trees},
                {"max_depth", params_.max_depth},
                {"max_features", to_string(params_.max_features)},
                {"min_samples_split", params_.min_samples_split},
                {"bootstrap", params_.bootstrap},
                {"seed", seed_},
                {"classes", classes_},
                {"features", features_},
                {"trees", trees}};
    }

    static RandomForest from_json(const nlohmann::json& j) {
        RandomForest f;
        f.params_.n_trees = j.at("n_trees").get<std::size_t>();
        f.params_.max_depth = j.at("max_depth").get<int>();
        f.params_.max_features = parse_max_features(j.at("max_features").get<std::string>());
        f.params_.min_samples_split = j.at("min_samples_split").get<std::size_t>();
        f.params_.bootstrap = j.at("bootstrap").get<bool>();
        f.seed_ = j.at("seed").get<std::uint64_t>();
        f.classes_ = j.at("classes").get<std::size_t>();
        f.features_ = j.at("features").get<std::size_t>();
        for (const auto& jt : j.at("trees")) f.trees_.push_back(DecisionTree::from_json(jt, f.classes_));
        if (f.trees_.size() != f.params_.n_trees) throw ParseError("forest tree count does not match n_trees");
        for (const auto& t : f.trees_)
            for (const auto& n : t.nodes())
                if (n.feature >= static_cast<int>(f.features_)) throw ParseError("tree splits on an unknown feature");
        return f;
    }

    /// Structural equality (used to compare serial and parallel training).
    bool same_model(const RandomForest& o) const {
        return classes_ == o.classes_ && features_ == o.features_ && trees_ == o.trees_;
    }

private:
    ForestParams params_;
    std::uint64_t seed_ = 0;
    std::size_t classes_ = 0;
    std::size_t features_ = 0;
    std::vector<DecisionTree> trees_;
};

} // namespace readlab::ml
