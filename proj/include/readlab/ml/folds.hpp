#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "readlab/error.hpp"

namespace readlab::ml {

inline constexpr std::size_t kBucketCount = 10;

struct FoldSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

/// Per class, items are shuffled and dealt into ten buckets. Fold f tests on
/// bucket f, validates on bucket f+1 (mod 10) and trains on the rest, which
/// gives the 0.8/0.1/0.1 proportions. Index lists are in ascending order.
inline std::vector<FoldSplit> stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
    if (k < 1 || k > kBucketCount)
        throw UsageError("fold count must be between 1 and " + std::to_string(kBucketCount) + ", got " +
                         std::to_string(k));
    int max_label = -1;
    for (int y : labels) {
        if (y < 0) throw ValidationError("fold construction needs non-negative labels");
        max_label = std::max(max_label, y);
    }
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(max_label + 1));
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[static_cast<std::size_t>(labels[i])].push_back(i);

    std::mt19937_64 rng(seed);
    std::vector<int> bucket(labels.size(), -1);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& members = by_class[c];
        if (members.empty()) continue;
        if (members.size() < kBucketCount)
            throw ValidationError("class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                                  " items; stratified folds need at least " + std::to_string(kBucketCount));
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t i = 0; i < members.size(); ++i) bucket[members[i]] = static_cast<int>(i % kBucketCount);
    }

    std::vector<FoldSplit> folds(k);
    for (std::size_t f = 0; f < k; ++f) {
        const int test_b = static_cast<int>(f);
        const int val_b = static_cast<int>((f + 1) % kBucketCount);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (bucket[i] == test_b) folds[f].test.push_back(i);
            else if (bucket[i] == val_b) folds[f].val.push_back(i);
            else folds[f].train.push_back(i);
        }
    }
    return folds;
}

} // namespace readlab::ml
