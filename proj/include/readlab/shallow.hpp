#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include "readlab/annotation.hpp"
#include "readlab/features.hpp"
#include "readlab/text.hpp"

namespace readlab {

/// Heuristic English syllable count: vowel groups (y counts as a vowel),
/// minus a silent final e after a consonant, plus one back for a
/// consonant + "le" ending. Never below 1.
inline std::size_t count_syllables(std::string_view word) {
    std::string w;
    for (unsigned char c : word) {
        if (text::is_ascii_alpha(c)) w.push_back(static_cast<char>(std::tolower(c)));
    }
    if (w.empty()) return 1;
    auto vowel = [](char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; };
    long count = 0;
    bool prev = false;
    for (char c : w) {
        const bool v = vowel(c);
        if (v && !prev) ++count;
        prev = v;
    }
    const auto n = w.size();
    if (n >= 2 && w[n - 1] == 'e' && !vowel(w[n - 2])) {
        --count;
        if (n >= 3 && w[n - 2] == 'l' && !vowel(w[n - 3])) ++count;
    }
    return count < 1 ? 1 : static_cast<std::size_t>(count);
}

/// Surface statistics shared by the shallow features and the formulas.
struct SurfaceCounts {
    double sentences = 0;   // S
    double tokens = 0;      // T, word tokens
    double syllables = 0;   // Y
    double letters = 0;     // C
    double polysyllabic = 0; // words with >= 3 syllables
};

inline SurfaceCounts surface_counts(const AnnotatedDocument& doc) {
    SurfaceCounts c;
    c.sentences = static_cast<double>(doc.sentence_count());
    doc.for_each_token([&](const Token& t) {
        if (!t.is_word()) return;
        c.tokens += 1;
        const auto syl = count_syllables(t.text);
        c.syllables += static_cast<double>(syl);
        c.letters += static_cast<double>(text::letter_count(t.text));
        if (syl >= 3) c.polysyllabic += 1;
    });
    return c;
}

/// Eight shallow features.
inline FeatureMap shallow_features(const SurfaceCounts& c) {
    const double T = c.tokens, S = c.sentences;
    return FeatureMap{
        {"TokSenM_S", T * S},
        {"TokSenS_S", std::sqrt(T * S)},
        {"TokSenL_S", (S <= 1.0 || T <= 0.0) ? 0.0 : std::log(T) / std::log(S)},
        {"as_Token_C", safe_div(T, S)},
        {"as_Sylla_C", safe_div(c.syllables, S)},
        {"at_Sylla_C", safe_div(c.syllables, T)},
        {"as_Chara_C", safe_div(c.letters, S)},
        {"at_Chara_C", safe_div(c.letters, T)},
    };
}

inline FeatureMap extract_shaf(const AnnotatedDocument& doc) { return shallow_features(surface_counts(doc)); }

/// The six traditional readability formulas. All zero when the document has
/// no sentence or no word.
inline FeatureMap traditional_formulas(const SurfaceCounts& c) {
    const double T = c.tokens, S = c.sentences;
    if (T < 1.0 || S < 1.0) {
        return FeatureMap{{"SmogInd_S", 0.0}, {"ColeLia_S", 0.0}, {"Gunning_S", 0.0},
                          {"AutoRea_S", 0.0}, {"FleschG_S", 0.0}, {"LinseaW_S", 0.0}};
    }
    const double words_per_sentence = T / S;
    const double flesch = 0.39 * words_per_sentence + 11.8 * (c.syllables / T) - 15.59;
    const double ari = 4.71 * (c.letters / T) + 0.5 * words_per_sentence - 21.43;
    const double fog = 0.4 * (words_per_sentence + 100.0 * (c.polysyllabic / T));
    const double smog = 3.1291 + 1.0430 * std::sqrt(30.0 * c.polysyllabic / S);
    const double L = 100.0 * c.letters / T;
    const double Sc = 100.0 * S / T;
    const double coleman = 0.0588 * L - 0.296 * Sc - 15.8;
    const double easy = T - c.polysyllabic;
    const double raw = (easy * 1.0 + c.polysyllabic * 3.0) / S;
    const double linsear = raw > 20.0 ? raw / 2.0 : raw / 2.0 - 1.0;
    return FeatureMap{{"SmogInd_S", smog},   {"ColeLia_S", coleman}, {"Gunning_S", fog},
                      {"AutoRea_S", ari},    {"FleschG_S", flesch},  {"LinseaW_S", linsear}};
}

inline FeatureMap extract_traf(const AnnotatedDocument& doc) { return traditional_formulas(surface_counts(doc)); }

} // namespace readlab
