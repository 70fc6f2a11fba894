#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "readlab/adsem.hpp"
#include "readlab/annotation.hpp"
#include "readlab/log.hpp"
#include "readlab/tree.hpp"

namespace readlab::testing {

inline Token tok(std::string text, Upos upos, std::string lemma = {}) {
    Token t;
    t.lemma = lemma.empty() ? text : std::move(lemma);
    t.text = std::move(text);
    t.upos = upos;
    return t;
}

/// A sentence with a flat tree (S (TAG word) ...) unless one is given.
inline Sentence sentence(std::vector<Token> tokens, std::string_view tree = {}) {
    Sentence s;
    if (tree.empty()) {
        std::string b = "(S";
        for (const auto& t : tokens) b += " (" + std::string(to_string(t.upos)) + " " + detail::escape_leaf(t.text) + ")";
        b += ")";
        s.tree = parse_tree(b);
    } else {
        s.tree = parse_tree(tree);
    }
    s.tokens = std::move(tokens);
    return s;
}

inline AnnotatedDocument document(std::vector<Sentence> sentences, std::vector<EntityMention> mentions = {},
                                  std::string id = "d") {
    AnnotatedDocument d;
    d.doc_id = std::move(id);
    d.sentences = std::move(sentences);
    d.mentions = std::move(mentions);
    return d;
}

/// Every token tagged NOUN; one inner vector per sentence.
inline AnnotatedDocument noun_doc(const std::vector<std::vector<std::string>>& words) {
    std::vector<Sentence> s;
    for (const auto& sent : words) {
        std::vector<Token> toks;
        for (const auto& w : sent) toks.push_back(tok(w, Upos::NOUN));
        s.push_back(sentence(std::move(toks)));
    }
    return document(std::move(s));
}

inline EntityMention mention(std::string entity, std::size_t sentence_index, Role role, std::size_t begin = 0,
                             std::size_t end = 1) {
    return EntityMention{std::move(entity), sentence_index, begin, end, role};
}

/// Concatenation of a document with itself.
inline AnnotatedDocument doubled(const AnnotatedDocument& d) {
    auto out = d;
    const auto n = d.sentences.size();
    out.sentences.insert(out.sentences.end(), d.sentences.begin(), d.sentences.end());
    for (auto m : d.mentions) {
        m.sentence_index += n;
        out.mentions.push_back(m);
    }
    return out;
}

/// Collects warnings for the lifetime of the object.
class WarningCapture {
public:
    WarningCapture() {
        previous_ = log::set_sink([this](const std::string& m) { messages.push_back(m); });
    }
    ~WarningCapture() { log::set_sink(previous_); }
    std::vector<std::string> messages;

private:
    log::Sink previous_;
};

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        std::random_device rd;
        path_ = std::filesystem::path(READLAB_TEST_TMP) /
                ("t" + std::to_string(rd()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Small topic model over a fixed eight-word vocabulary with random lambda.
inline lda::LdaModel synthetic_model(std::size_t k, std::uint64_t seed) {
    std::vector<std::string> terms{"apple", "banana", "cherry", "engine", "piston", "wheel", "river", "stone"};
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> g(0.5, 2.0);
    std::vector<double> lambda(k * terms.size());
    for (auto& v : lambda) v = g(rng) + 1e-3;
    return lda::LdaModel(k, lda::Vocabulary::from_terms(terms, std::vector<std::size_t>(terms.size(), 1)),
                         1.0 / static_cast<double>(k), 1.0 / static_cast<double>(k), lambda);
}

inline AdSemConfig synthetic_adsem() {
    AdSemConfig cfg;
    std::uint64_t seed = 1;
    for (auto f : kTopicFamilies)
        for (auto k : kTopicSizes) cfg.set_model(f, k, synthetic_model(k, seed++));
    return cfg;
}

inline const char* kAoaCsv =
    "word,aoa_kuperman_word,aoa_kuperman_lemma,aoa_bird_lemma,aoa_bristol_lemma,aoa_cortese_lemma\n"
    "dog,4.0,4.0,3.1,,2.5\n"
    "runs,3.6,,,,\n"
    "run,,3.5,3.0,2.9,\n"
    "apple,3.2,3.2,,,\n";

inline const char* kSubtlexCsv =
    "Word,FREQcount,CDcount,FREQlow,CDlow,SUBTLWF,Lg10WF,SUBTLCD,Lg10CD\n"
    "the,1501908,8388,1339811,8388,29449.18,6.1766,100.00,3.9237\n"
    "dog,9433,3151,7715,2934,184.96,3.9747,37.57,3.4985\n"
    "apple,1018,630,900,600,19.96,3.0082,7.51,2.8000\n";

/// Writes lexicons/{aoa,subtlex}.csv and lda/<family><K>.json under `root`.
inline void write_resources(const std::filesystem::path& root) {
    std::filesystem::create_directories(root / "lexicons");
    std::filesystem::create_directories(root / "lda");
    write_file((root / "lexicons" / "aoa.csv").string(), kAoaCsv);
    write_file((root / "lexicons" / "subtlex.csv").string(), kSubtlexCsv);
    std::uint64_t seed = 1;
    for (auto f : kTopicFamilies)
        for (auto k : kTopicSizes) synthetic_model(k, seed++).save((root / "lda" / AdSemConfig::file_name(f, k)).string());
}

/// Two-sentence document with trees, mentions and a mix of tags.
inline AnnotatedDocument rich_doc(std::string id, std::optional<int> label = std::nullopt, int variant = 0) {
    std::vector<Sentence> s;
    s.push_back(sentence({tok("The", Upos::DET, "the"), tok("dog", Upos::NOUN), tok("runs", Upos::VERB, "run"),
                          tok(".", Upos::PUNCT)},
                         "(ROOT (S (NP (DT The) (NN dog)) (VP (VBZ runs)) (. .)))"));
    std::vector<Token> t{tok("An", Upos::DET, "a"), tok("apple", Upos::NOUN), tok("fell", Upos::VERB, "fall"),
                         tok("quickly", Upos::ADV)};
    std::string tree = "(ROOT (S (NP (DT An) (NN apple)) (VP (VBD fell) (ADVP (RB quickly)))))";
    for (int i = 0; i < variant; ++i) {
        t.push_back(tok("and", Upos::CCONJ));
        t.push_back(tok("banana", Upos::NOUN));
    }
    if (variant > 0) tree.clear();
    s.push_back(sentence(t, tree));
    auto d = document(std::move(s), {mention("E1", 0, Role::S), mention("E2", 1, Role::S), mention("E1", 1, Role::X, 1, 2)},
                      std::move(id));
    d.label = label;
    return d;
}

} // namespace readlab::testing
