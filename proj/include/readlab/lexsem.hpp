#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "readlab/annotation.hpp"
#include "readlab/features.hpp"
#include "readlab/lexicons.hpp"
#include "readlab/log.hpp"
#include "readlab/text.hpp"

namespace readlab {

inline constexpr double kMtldThreshold = 0.72;

/// Casefolded surface forms of the document's word tokens.
inline std::vector<std::string> word_types(const AnnotatedDocument& doc) {
    std::vector<std::string> out;
    doc.for_each_token([&](const Token& t) {
        if (t.is_word()) out.push_back(text::casefold(t.text));
    });
    return out;
}

/// 12 variation ratios: unique/total, unique^2/total and
/// unique/sqrt(2 total) for nouns, verbs, adjectives and adverbs.
inline FeatureMap extract_varf(const AnnotatedDocument& doc) {
    static constexpr std::array<std::pair<std::string_view, Upos>, 4> kClasses = {
        {{"No", Upos::NOUN}, {"Ve", Upos::VERB}, {"Aj", Upos::ADJ}, {"Av", Upos::ADV}}};
    FeatureMap out;
    for (const auto& [abbrev, upos] : kClasses) {
        std::unordered_set<std::string> uniq;
        double total = 0.0;
        doc.for_each_token([&, upos = upos](const Token& t) {
            if (t.upos != upos) return;
            uniq.insert(text::casefold(t.text));
            total += 1.0;
        });
        const double u = static_cast<double>(uniq.size());
        const std::string a(abbrev);
        out["Simp" + a + "V_S"] = safe_div(u, total);
        out["Squa" + a + "V_S"] = safe_div(u * u, total);
        out["Corr" + a + "V_S"] = safe_div(u, std::sqrt(2.0 * total));
    }
    return out;
}

namespace detail {
/// One directional MTLD pass: number of factors (segments whose running
/// TTR dropped to the threshold) plus the partial factor left at the end.
inline double mtld_factors(const std::vector<std::string>& tokens, bool reverse, double threshold) {
    double factors = 0.0;
    std::unordered_set<std::string_view> types;
    double count = 0.0;
    double ttr = 1.0;
    const std::size_t n = tokens.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& tok = tokens[reverse ? n - 1 - i : i];
        types.insert(tok);
        count += 1.0;
        ttr = static_cast<double>(types.size()) / count;
        if (ttr <= threshold) {
            factors += 1.0;
            types.clear();
            count = 0.0;
            ttr = 1.0;
        }
    }
    if (count > 0.0) factors += (1.0 - ttr) / (1.0 - threshold);
    return factors;
}
} // namespace detail

/// Bidirectional measure of textual lexical diversity: token count over
/// factor count, averaged over the forward and backward passes. Returns 0
/// when a pass finds no factor at all (every token unique).
inline double mtld(const std::vector<std::string>& tokens, double threshold = kMtldThreshold) {
    if (tokens.empty()) return 0.0;
    const double n = static_cast<double>(tokens.size());
    const double fwd = detail::mtld_factors(tokens, false, threshold);
    const double bwd = detail::mtld_factors(tokens, true, threshold);
    if (fwd == 0.0 || bwd == 0.0) {
        log::warn("MTLD undefined for a stream without any repeated type; reporting 0");
        return 0.0;
    }
    return 0.5 * (n / fwd + n / bwd);
}

/// Five type-token ratio variants over casefolded word tokens.
inline FeatureMap extract_ttrf(const AnnotatedDocument& doc) {
    const auto tokens = word_types(doc);
    FeatureMap out{{"SimpTTR_S", 0.0}, {"CorrTTR_S", 0.0}, {"BiLoTTR_S", 0.0}, {"UberTTR_S", 0.0}, {"MTLDTTR_S", 0.0}};
    if (tokens.empty()) return out;
    const double t = static_cast<double>(tokens.size());
    const double u = static_cast<double>(std::unordered_set<std::string>(tokens.begin(), tokens.end()).size());
    out["SimpTTR_S"] = u / t;
    out["CorrTTR_S"] = u / std::sqrt(2.0 * t);
    out["BiLoTTR_S"] = safe_div(std::log(u), std::log(t));
    out["UberTTR_S"] = safe_div(std::log(u) * std::log(u), std::log(t / u));
    out["MTLDTTR_S"] = mtld(tokens);
    return out;
}

/// 15 age-of-acquisition features. Word norms look up the surface form,
/// lemma norms the lemma; absent entries add 0.
inline FeatureMap extract_psyf(const AnnotatedDocument& doc, const AoaLexicon& aoa) {
    static constexpr std::array<std::pair<std::string_view, AoaNorm>, 5> kNorms = {
        {{"AAKuW", AoaNorm::KupermanWord},
         {"AAKuL", AoaNorm::KupermanLemma},
         {"AABiL", AoaNorm::BirdLemma},
         {"AABrL", AoaNorm::BristolLemma},
         {"AACoL", AoaNorm::CorteseLemma}}};
    std::array<double, 5> totals{};
    doc.for_each_token([&](const Token& t) {
        if (!t.is_word()) return;
        for (std::size_t i = 0; i < kNorms.size(); ++i) {
            const auto norm = kNorms[i].second;
            const auto& key = norm == AoaNorm::KupermanWord ? t.text : t.lemma;
            totals[i] += aoa.lookup(norm, key).value_or(0.0);
        }
    });
    const double S = static_cast<double>(doc.sentence_count());
    const double T = static_cast<double>(doc.word_count());
    FeatureMap out;
    for (std::size_t i = 0; i < kNorms.size(); ++i) put_triple(out, std::string(kNorms[i].first), totals[i], S, T);
    return out;
}

/// 24 word-familiarity features from the eight SubtlexUS statistics of
/// each word's surface form.
inline FeatureMap extract_worf(const AnnotatedDocument& doc, const SubtlexLexicon& subtlex) {
    static constexpr std::array<std::string_view, 8> kStems = {"SbFrQ", "SbCDC", "SbFrL", "SbCDL",
                                                               "SbSBW", "SbL1W", "SbSBC", "SbL1C"};
    std::array<double, 8> totals{};
    doc.for_each_token([&](const Token& t) {
        if (!t.is_word()) return;
        if (auto e = subtlex.lookup(t.text)) {
            for (std::size_t i = 0; i < 8; ++i) totals[i] += e->values[i];
        }
    });
    const double S = static_cast<double>(doc.sentence_count());
    const double T = static_cast<double>(doc.word_count());
    FeatureMap out;
    for (std::size_t i = 0; i < kStems.size(); ++i) put_triple(out, std::string(kStems[i]), totals[i], S, T);
    return out;
}

} // namespace readlab
