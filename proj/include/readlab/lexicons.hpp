#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "readlab/csv.hpp"
#include "readlab/error.hpp"
#include "readlab/log.hpp"
#include "readlab/text.hpp"

namespace readlab {

/// Age-of-acquisition norm families. Kuperman has both word and lemma
/// columns; the others are lemma norms.
enum class AoaNorm { KupermanWord, KupermanLemma, BirdLemma, BristolLemma, CorteseLemma };

inline constexpr std::array<std::string_view, 5> kAoaColumns = {
    "aoa_kuperman_word", "aoa_kuperman_lemma", "aoa_bird_lemma", "aoa_bristol_lemma", "aoa_cortese_lemma"};

class AoaLexicon {
public:
    using Entry = std::array<std::optional<double>, 5>;

    /// Casefolded exact match; absent key or blank cell gives nullopt.
    std::optional<double> lookup(AoaNorm norm, std::string_view key) const {
        auto it = entries_.find(text::casefold(key));
        if (it == entries_.end()) return std::nullopt;
        return it->second[static_cast<std::size_t>(norm)];
    }

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    void insert(std::string_view word, Entry e) { entries_[text::casefold(word)] = e; }

    static AoaLexicon parse(std::string_view content, std::string_view what = "AoA lexicon") {
        const auto table = csv::parse(content, what);
        const auto word_col = table.require_column("word", what);
        std::array<std::size_t, 5> cols{};
        for (std::size_t i = 0; i < kAoaColumns.size(); ++i) cols[i] = table.require_column(kAoaColumns[i], what);

        AoaLexicon lex;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& row = table.rows[r];
            const auto line = table.line_numbers[r];
            const auto word = text::casefold(text::trim(row[word_col]));
            if (word.empty()) continue;
            Entry e;
            for (std::size_t i = 0; i < cols.size(); ++i) {
                const auto cell = text::trim(row[cols[i]]);
                if (cell.empty()) continue;
                double v = 0.0;
                try {
                    v = text::parse_double(cell);
                } catch (const ParseError&) {
                    throw ParseError(std::string(what) + ": row " + std::to_string(line) + ", column " +
                                     std::string(kAoaColumns[i]) + ": unparseable value '" + std::string(cell) + "'");
                }
                if (!std::isfinite(v) || v < 0.0)
                    throw ValidationError(std::string(what) + ": row " + std::to_string(line) +
                                          ": AoA must be finite and >= 0");
                e[i] = v;
            }
            if (lex.entries_.count(word))
                log::warn(std::string(what) + ": duplicate word '" + word + "' at row " + std::to_string(line) +
                          ", keeping the later row");
            lex.entries_[word] = e;
        }
        return lex;
    }

    static AoaLexicon load(const std::string& path) { return parse(csv::read_file(path), path); }

private:
    std::unordered_map<std::string, Entry> entries_;
};

/// The eight SubtlexUS statistics, in file column order.
enum class SubtlexField { FreqCount, CdCount, FreqLow, CdLow, SubtlWf, Lg10Wf, SubtlCd, Lg10Cd };

inline constexpr std::array<std::string_view, 8> kSubtlexColumns = {
    "FREQcount", "CDcount", "FREQlow", "CDlow", "SUBTLWF", "Lg10WF", "SUBTLCD", "Lg10CD"};

struct SubtlexEntry {
    std::array<double, 8> values{};
    double operator[](SubtlexField f) const { return values[static_cast<std::size_t>(f)]; }
};

class SubtlexLexicon {
public:
    std::optional<SubtlexEntry> lookup(std::string_view key) const {
        auto it = entries_.find(text::casefold(key));
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    void insert(std::string_view word, SubtlexEntry e) { entries_[text::casefold(word)] = e; }

    static SubtlexLexicon parse(std::string_view content, std::string_view what = "SubtlexUS lexicon") {
        const auto table = csv::parse(content, what);
        const auto word_col = table.require_column("Word", what);
        std::array<std::size_t, 8> cols{};
        for (std::size_t i = 0; i < kSubtlexColumns.size(); ++i)
            cols[i] = table.require_column(kSubtlexColumns[i], what);

        SubtlexLexicon lex;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& row = table.rows[r];
            const auto line = table.line_numbers[r];
            const auto word = text::casefold(text::trim(row[word_col]));
            if (word.empty()) continue;
            SubtlexEntry e;
            for (std::size_t i = 0; i < cols.size(); ++i) {
                const auto cell = row[cols[i]];
                try {
                    e.values[i] = text::parse_double(cell);
                } catch (const ParseError&) {
                    throw ParseError(std::string(what) + ": row " + std::to_string(line) + ", column " +
                                     std::string(kSubtlexColumns[i]) + ": unparseable value '" + cell + "'");
                }
                if (!std::isfinite(e.values[i]) || e.values[i] < 0.0)
                    throw ValidationError(std::string(what) + ": row " + std::to_string(line) + ", column " +
                                          std::string(kSubtlexColumns[i]) + ": must be finite and >= 0");
            }
            if (lex.entries_.count(word))
                log::warn(std::string(what) + ": duplicate word '" + word + "' at row " + std::to_string(line) +
                          ", keeping the later row");
            lex.entries_[word] = e;
        }
        return lex;
    }

    static SubtlexLexicon load(const std::string& path) { return parse(csv::read_file(path), path); }

private:
    std::unordered_map<std::string, SubtlexEntry> entries_;
};

} // namespace readlab
