#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "readlab/annotation.hpp"
#include "readlab/error.hpp"
#include "readlab/features.hpp"
#include "readlab/lda.hpp"
#include "readlab/preprocess.hpp"

namespace readlab {

/// Topic probabilities with topic identities dropped, sorted descending,
/// keeping only entries strictly above the inclusion threshold.
struct SortedTopicList {
    std::vector<double> probs;

    std::size_t size() const { return probs.size(); }
    bool empty() const { return probs.empty(); }
};

inline constexpr double kDefaultTopicThreshold = 0.01;

inline SortedTopicList sorted_list(std::span<const double> theta, double threshold = kDefaultTopicThreshold) {
    SortedTopicList list;
    for (double p : theta) {
        if (p > threshold) list.probs.push_back(p);
    }
    std::sort(list.probs.begin(), list.probs.end(), std::greater<>());
    return list;
}

/// Sum of p_i * i with 1-based rank i. Rewards long lists of substantial topics.
inline double richness(const SortedTopicList& list) {
    double r = 0.0;
    for (std::size_t i = 0; i < list.probs.size(); ++i) r += list.probs[i] * static_cast<double>(i + 1);
    return r;
}

/// Mean gap between the leading topic and every listed topic.
inline double clarity(const SortedTopicList& list) {
    if (list.empty()) return 0.0;
    const double top = *std::max_element(list.probs.begin(), list.probs.end());
    double gap = 0.0;
    for (double p : list.probs) gap += top - p;
    return gap / static_cast<double>(list.size());
}

/// n * sum (p - mean)^4 / (sum (p - mean)^2)^2, the tailedness of the list.
/// Zero for lists shorter than two or with (near) zero spread.
inline double noise(const SortedTopicList& list) {
    const auto n = list.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (double p : list.probs) mean += p;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m4 = 0.0;
    for (double p : list.probs) {
        const double d = p - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    if (m2 < 1e-12) return 0.0;
    return static_cast<double>(n) * m4 / (m2 * m2);
}

/// Training-corpus families of the knowledge features.
enum class TopicFamily { Wikipedia, WeeBit, OneStop };

inline constexpr std::array<TopicFamily, 3> kTopicFamilies = {TopicFamily::Wikipedia, TopicFamily::WeeBit,
                                                               TopicFamily::OneStop};
inline constexpr std::array<std::size_t, 4> kTopicSizes = {50, 100, 150, 200};

inline char family_letter(TopicFamily f) {
    switch (f) {
    case TopicFamily::Wikipedia: return 'W';
    case TopicFamily::WeeBit: return 'B';
    case TopicFamily::OneStop: return 'O';
    }
    return '?';
}

inline std::string family_subgroup(TopicFamily f) {
    switch (f) {
    case TopicFamily::Wikipedia: return "WoKF";
    case TopicFamily::WeeBit: return "WBKF";
    case TopicFamily::OneStop: return "OSKF";
    }
    return "?";
}

/// Code for one measure, e.g. adsem_code('W', "Rich", 50) == "WRich05_S".
inline std::string adsem_code(char family, const char* measure, std::size_t topics) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%c%s%02zu_S", family, measure, topics / 10);
    return buf;
}

/// The twelve trained topic models behind the knowledge features.
class AdSemConfig {
public:
    double threshold = kDefaultTopicThreshold;
    StopwordList stopwords = StopwordList::english();

    void set_model(TopicFamily f, std::size_t topics, lda::LdaModel m) { models_[{f, topics}] = std::move(m); }

    const lda::LdaModel* model(TopicFamily f, std::size_t topics) const {
        auto it = models_.find({f, topics});
        return it == models_.end() ? nullptr : &it->second;
    }

    bool has_family(TopicFamily f) const {
        return std::all_of(kTopicSizes.begin(), kTopicSizes.end(), [&](auto k) { return model(f, k) != nullptr; });
    }

    /// Model file name inside a model directory, e.g. "W50.json".
    static std::string file_name(TopicFamily f, std::size_t topics) {
        return std::string(1, family_letter(f)) + std::to_string(topics) + ".json";
    }

    /// Loads the four models of each requested family from `dir`.
    static AdSemConfig load(const std::filesystem::path& dir, const std::vector<TopicFamily>& families) {
        AdSemConfig cfg;
        for (auto f : families) {
            for (auto k : kTopicSizes) {
                const auto path = dir / file_name(f, k);
                if (!std::filesystem::exists(path))
                    throw ValidationError("missing topic model for " + family_subgroup(f) + " (" +
                                          adsem_code(family_letter(f), "Rich", k) + ".." +
                                          adsem_code(family_letter(f), "Topc", k) + "): " + path.string());
                cfg.set_model(f, k, lda::LdaModel::load(path.string()));
            }
        }
        return cfg;
    }

private:
    std::map<std::pair<TopicFamily, std::size_t>, lda::LdaModel> models_;
};

/// Sorted list for one document under one model. A document without any
/// in-vocabulary evidence yields an empty list.
inline SortedTopicList document_topics(const std::vector<std::string>& tokens, const lda::LdaModel& model,
                                       double threshold) {
    if (model.known_token_count(tokens) == 0) return {};
    const auto theta = model.infer(tokens);
    return sorted_list(theta, threshold);
}

inline void put_adsem(FeatureMap& out, char family, std::size_t topics, const SortedTopicList& list) {
    out[adsem_code(family, "Rich", topics)] = richness(list);
    out[adsem_code(family, "Clar", topics)] = clarity(list);
    out[adsem_code(family, "Nois", topics)] = noise(list);
    out[adsem_code(family, "Topc", topics)] = static_cast<double>(list.size());
}

/// Knowledge features for the requested families (16 codes each).
inline FeatureMap extract_adsem(const AnnotatedDocument& doc, const AdSemConfig& cfg,
                                const std::vector<TopicFamily>& families = {kTopicFamilies.begin(),
                                                                            kTopicFamilies.end()}) {
    const auto tokens = preprocess_for_lda(doc, cfg.stopwords);
    FeatureMap out;
    for (auto f : families) {
        for (auto k : kTopicSizes) {
            const auto* m = cfg.model(f, k);
            if (!m) throw ValidationError("no topic model loaded for " + family_subgroup(f) + " with " +
                                          std::to_string(k) + " topics");
            put_adsem(out, family_letter(f), k, document_topics(tokens, *m, cfg.threshold));
        }
    }
    return out;
}

} // namespace readlab
