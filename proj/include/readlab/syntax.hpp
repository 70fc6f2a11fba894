#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

#include "readlab/annotation.hpp"
#include "readlab/features.hpp"

namespace readlab {

/// Constituent categories counted by the phrasal features, keyed by the
/// two-letter abbreviation used in feature codes.
struct PhraseCategory {
    std::string_view abbrev;
    std::string_view label;
};

inline constexpr std::array<PhraseCategory, 6> kPhraseCategories = {{
    {"No", "NP"}, {"Ve", "VP"}, {"Su", "SBAR"}, {"Pr", "PP"}, {"Aj", "ADJP"}, {"Av", "ADVP"}}};

/// Penn label with function tags and indices removed: NP-SBJ-1 -> NP.
inline std::string_view base_label(std::string_view label) {
    if (label.starts_with('-')) return label; // -NONE-, -LRB-
    const auto cut = label.find_first_of("-=", 1);
    return cut == std::string_view::npos ? label : label.substr(0, cut);
}

struct PhraseCounts {
    std::array<double, 6> counts{};

    double operator[](std::size_t i) const { return counts[i]; }
};

/// Every matching node counts, nested phrases included.
inline PhraseCounts count_phrases(const AnnotatedDocument& doc) {
    PhraseCounts pc;
    for (const auto& s : doc.sentences) {
        s.tree.for_each_internal([&](const ConstituencyTree& node) {
            const auto base = base_label(node.label);
            for (std::size_t i = 0; i < kPhraseCategories.size(); ++i) {
                if (base == kPhraseCategories[i].label) pc.counts[i] += 1.0;
            }
        });
    }
    return pc;
}

namespace detail {
template <std::size_t N, class Names>
void put_count_block(FeatureMap& out, const Names& names, const std::array<double, N>& counts, char suffix,
                     std::string_view total_stem, double S, double T) {
    for (std::size_t i = 0; i < N; ++i) {
        const std::string a(names[i]);
        put_triple(out, a + std::string(total_stem), counts[i], S, T);
        for (std::size_t j = 0; j < N; ++j) {
            if (i == j) continue;
            out["ra_" + a + std::string(names[j]) + suffix + "_C"] = safe_div(counts[i], counts[j]);
        }
    }
}
} // namespace detail

/// 48 phrasal features: per category total / per sentence / per token
/// counts plus its ratio to each other category.
inline FeatureMap extract_phrf(const AnnotatedDocument& doc) {
    const auto pc = count_phrases(doc);
    std::array<std::string_view, 6> names{};
    for (std::size_t i = 0; i < 6; ++i) names[i] = kPhraseCategories[i].abbrev;
    FeatureMap out;
    detail::put_count_block(out, names, pc.counts, 'P', "Phr", static_cast<double>(doc.sentence_count()),
                            static_cast<double>(doc.word_count()));
    return out;
}

/// Tree height (root to deepest leaf, leaves included) and flattened
/// length (all nodes), summed over sentences.
inline FeatureMap extract_trsf(const AnnotatedDocument& doc) {
    double height = 0.0, flat = 0.0;
    for (const auto& s : doc.sentences) {
        if (s.tree.children.empty() && !s.tree.is_leaf()) continue; // default-constructed tree
        height += static_cast<double>(s.tree.height());
        flat += static_cast<double>(s.tree.node_count());
    }
    const double S = static_cast<double>(doc.sentence_count());
    const double T = static_cast<double>(doc.word_count());
    FeatureMap out;
    put_triple(out, "TreeH", height, S, T);
    put_triple(out, "FTree", flat, S, T);
    return out;
}

inline constexpr std::array<std::pair<std::string_view, Upos>, 6> kPosCategories = {{
    {"No", Upos::NOUN}, {"Ve", Upos::VERB}, {"Aj", Upos::ADJ}, {"Av", Upos::ADV}, {"Su", Upos::SCONJ},
    {"Co", Upos::CCONJ}}};

inline bool is_content_word(Upos u) {
    return u == Upos::NOUN || u == Upos::PROPN || u == Upos::VERB || u == Upos::ADJ || u == Upos::ADV;
}

inline bool is_function_word(Upos u) {
    return !is_content_word(u) && u != Upos::PUNCT && u != Upos::SYM && u != Upos::X;
}

/// 55 part-of-speech features over Universal POS tags.
inline FeatureMap extract_posf(const AnnotatedDocument& doc) {
    std::array<double, 6> counts{};
    double content = 0.0, function = 0.0;
    doc.for_each_token([&](const Token& t) {
        for (std::size_t i = 0; i < kPosCategories.size(); ++i) {
            if (t.upos == kPosCategories[i].second) counts[i] += 1.0;
        }
        if (is_content_word(t.upos)) content += 1.0;
        else if (is_function_word(t.upos)) function += 1.0;
    });
    std::array<std::string_view, 6> names{};
    for (std::size_t i = 0; i < 6; ++i) names[i] = kPosCategories[i].first;
    const double S = static_cast<double>(doc.sentence_count());
    const double T = static_cast<double>(doc.word_count());
    FeatureMap out;
    detail::put_count_block(out, names, counts, 'T', "Tag", S, T);
    put_triple(out, "ContW", content, S, T);
    put_triple(out, "FuncW", function, S, T);
    out["ra_CoFuW_C"] = safe_div(content, function);
    return out;
}

} // namespace readlab
