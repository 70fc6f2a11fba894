#pragma once

#include <cctype>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "readlab/annotation.hpp"
#include "readlab/csv.hpp"
#include "readlab/embedded_data.hpp"
#include "readlab/text.hpp"

namespace readlab {

/// A casefolded stopword set, one word per line in its file form.
class StopwordList {
public:
    StopwordList() = default;

    static StopwordList parse(std::string_view text) {
        StopwordList list;
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            auto w = text::trim(line);
            if (!w.empty() && w.front() != '#') list.words_.insert(text::casefold(w));
        }
        return list;
    }

    static StopwordList load(const std::string& path) { return parse(csv::read_file(path)); }

    /// The 179-word English list shipped in data/stopwords_en.txt.
    static const StopwordList& english() {
        static const StopwordList list = parse(embedded::kEnglishStopwords);
        return list;
    }

    bool contains(std::string_view w) const { return words_.count(std::string(w)) > 0; }
    std::size_t size() const { return words_.size(); }

private:
    std::set<std::string> words_;
};

/// Topic-model token cleanup, applied in order: keep only [A-Za-z0-9],
/// drop tokens shorter than 3 characters, lowercase, drop stopwords.
inline std::vector<std::string> preprocess_tokens(const std::vector<std::string_view>& tokens,
                                                  const StopwordList& stopwords) {
    std::vector<std::string> out;
    for (auto tok : tokens) {
        std::string cleaned;
        for (unsigned char c : tok) {
            if (text::is_ascii_alnum(c)) cleaned.push_back(static_cast<char>(c));
        }
        if (cleaned.size() < 3) continue;
        cleaned = text::casefold(cleaned);
        if (stopwords.contains(cleaned)) continue;
        out.push_back(std::move(cleaned));
    }
    return out;
}

/// Whitespace-tokenizes `text` and preprocesses the result.
inline std::vector<std::string> preprocess_text(std::string_view text, const StopwordList& stopwords) {
    std::vector<std::string_view> toks;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        const auto start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) toks.push_back(text.substr(start, i - start));
    }
    return preprocess_tokens(toks, stopwords);
}

inline std::vector<std::string> preprocess_for_lda(const AnnotatedDocument& doc,
                                                   const StopwordList& stopwords = StopwordList::english()) {
    std::vector<std::string_view> toks;
    doc.for_each_token([&](const Token& t) { toks.push_back(t.text); });
    return preprocess_tokens(toks, stopwords);
}

} // namespace readlab
