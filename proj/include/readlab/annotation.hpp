#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "readlab/csv.hpp"
#include "readlab/error.hpp"
#include "readlab/log.hpp"
#include "readlab/tree.hpp"

namespace readlab {

/// The 17 Universal POS tags.
enum class Upos {
    ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM, PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X
};

inline constexpr std::array<std::string_view, 17> kUposNames = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

inline std::string_view to_string(Upos u) { return kUposNames[static_cast<std::size_t>(u)]; }

inline std::optional<Upos> parse_upos(std::string_view s) {
    for (std::size_t i = 0; i < kUposNames.size(); ++i) {
        if (kUposNames[i] == s) return static_cast<Upos>(i);
    }
    return std::nullopt;
}

/// Grammatical role of an entity mention: subject, object, other.
enum class Role { S, O, X };

inline char to_char(Role r) { return r == Role::S ? 'S' : r == Role::O ? 'O' : 'X'; }

inline std::optional<Role> parse_role(std::string_view s) {
    if (s == "S") return Role::S;
    if (s == "O") return Role::O;
    if (s == "X") return Role::X;
    return std::nullopt;
}

struct Token {
    std::string text;
    std::string lemma;
    Upos upos = Upos::X;
    bool is_stop = false;

    /// Punctuation and symbols are not words for counting purposes.
    bool is_word() const { return upos != Upos::PUNCT && upos != Upos::SYM; }

    friend bool operator==(const Token&, const Token&) = default;
};

struct EntityMention {
    std::string entity_id;
    std::size_t sentence_index = 0;
    std::size_t span_begin = 0; // [begin, end) token indices within the sentence
    std::size_t span_end = 0;
    Role role = Role::X;

    friend bool operator==(const EntityMention&, const EntityMention&) = default;
};

struct Sentence {
    std::vector<Token> tokens;
    ConstituencyTree tree;

    friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct AnnotatedDocument {
    std::string doc_id;
    std::optional<int> label;
    std::string raw_text;
    std::vector<Sentence> sentences;
    std::vector<EntityMention> mentions;

    std::size_t sentence_count() const { return sentences.size(); }

    /// Number of word tokens (punctuation and symbols excluded).
    std::size_t word_count() const {
        std::size_t n = 0;
        for (const auto& s : sentences)
            for (const auto& t : s.tokens) n += t.is_word() ? 1 : 0;
        return n;
    }

    template <class F>
    void for_each_token(F&& f) const {
        for (const auto& s : sentences)
            for (const auto& t : s.tokens) f(t);
    }

    friend bool operator==(const AnnotatedDocument&, const AnnotatedDocument&) = default;
};

struct Dataset {
    std::vector<AnnotatedDocument> documents;
    int class_count = 2;
    std::vector<std::string> class_names;

    std::string class_name(int k) const {
        if (k >= 0 && static_cast<std::size_t>(k) < class_names.size()) return class_names[k];
        return std::to_string(k);
    }

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

namespace detail {

using nlohmann::json;

inline std::string where(const std::string& doc_id, const std::string& field) {
    return "document '" + doc_id + "': " + field;
}

inline const json& require(const json& obj, const char* key, const std::string& ctx) {
    if (!obj.is_object() || !obj.contains(key)) throw ValidationError(ctx + ": missing field '" + key + "'");
    return obj.at(key);
}

inline std::string require_string(const json& obj, const char* key, const std::string& ctx) {
    const auto& v = require(obj, key, ctx);
    if (!v.is_string()) throw ValidationError(ctx + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

inline std::size_t require_index(const json& v, const std::string& ctx) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ValidationError(ctx + " must be a non-negative integer");
    return v.get<std::size_t>();
}

inline AnnotatedDocument parse_document(const json& d, std::size_t position, int class_count) {
    if (!d.is_object()) throw ValidationError("documents[" + std::to_string(position) + "] is not an object");
    AnnotatedDocument doc;
    doc.doc_id = require_string(d, "doc_id", "documents[" + std::to_string(position) + "]");
    if (doc.doc_id.empty()) throw ValidationError("documents[" + std::to_string(position) + "]: empty doc_id");
    const auto& id = doc.doc_id;

    const auto& label = require(d, "label", where(id, "label"));
    if (!label.is_null()) {
        if (!label.is_number_integer()) throw ValidationError(where(id, "label must be an integer or null"));
        const auto k = label.get<long long>();
        if (k < 0 || k >= class_count)
            throw ValidationError(where(id, "label " + std::to_string(k) + " outside 0.." +
                                                std::to_string(class_count - 1)));
        doc.label = static_cast<int>(k);
    }
    doc.raw_text = require_string(d, "raw_text", where(id, "raw_text"));

    const auto& sentences = require(d, "sentences", where(id, "sentences"));
    if (!sentences.is_array()) throw ValidationError(where(id, "sentences must be an array"));
    for (std::size_t si = 0; si < sentences.size(); ++si) {
        const auto ctx = where(id, "sentences[" + std::to_string(si) + "]");
        const auto& s = sentences[si];
        Sentence sent;
        const auto& tokens = require(s, "tokens", ctx);
        if (!tokens.is_array()) throw ValidationError(ctx + ": tokens must be an array");
        for (std::size_t ti = 0; ti < tokens.size(); ++ti) {
            const auto tctx = ctx + ".tokens[" + std::to_string(ti) + "]";
            const auto& t = tokens[ti];
            Token tok;
            tok.text = require_string(t, "text", tctx);
            if (tok.text.empty()) throw ValidationError(tctx + ": empty token text");
            tok.lemma = require_string(t, "lemma", tctx);
            const auto upos = require_string(t, "upos", tctx);
            auto u = parse_upos(upos);
            if (!u) throw ValidationError(tctx + ": unknown upos '" + upos + "'");
            tok.upos = *u;
            const auto& stop = require(t, "is_stop", tctx);
            if (!stop.is_boolean()) throw ValidationError(tctx + ": is_stop must be a boolean");
            tok.is_stop = stop.get<bool>();
            sent.tokens.push_back(std::move(tok));
        }
        const auto tree = require_string(s, "tree", ctx);
        try {
            sent.tree = parse_tree(tree);
        } catch (const ParseError& e) {
            throw ValidationError(ctx + ".tree: " + e.what());
        }
        const auto leaves = sent.tree.leaf_count();
        if (leaves != sent.tokens.size()) {
            log::warn(ctx + ": tree has " + std::to_string(leaves) + " leaves but sentence has " +
                      std::to_string(sent.tokens.size()) + " tokens");
        }
        doc.sentences.push_back(std::move(sent));
    }

    if (d.contains("mentions")) {
        const auto& mentions = d.at("mentions");
        if (!mentions.is_array()) throw ValidationError(where(id, "mentions must be an array"));
        for (std::size_t mi = 0; mi < mentions.size(); ++mi) {
            const auto ctx = where(id, "mentions[" + std::to_string(mi) + "]");
            const auto& m = mentions[mi];
            EntityMention em;
            em.entity_id = require_string(m, "entity_id", ctx);
            em.sentence_index = require_index(require(m, "sentence_index", ctx), ctx + ".sentence_index");
            const auto& span = require(m, "token_span", ctx);
            if (!span.is_array() || span.size() != 2)
                throw ValidationError(ctx + ": token_span must be [start, end)");
            em.span_begin = require_index(span[0], ctx + ".token_span[0]");
            em.span_end = require_index(span[1], ctx + ".token_span[1]");
            const auto role = require_string(m, "role", ctx);
            auto r = parse_role(role);
            if (!r) throw ValidationError(ctx + ": role must be S, O or X, got '" + role + "'");
            em.role = *r;
            if (em.sentence_index >= doc.sentences.size())
                throw ValidationError(ctx + " (entity '" + em.entity_id + "'): sentence_index " +
                                      std::to_string(em.sentence_index) + " out of range");
            const auto len = doc.sentences[em.sentence_index].tokens.size();
            if (em.span_begin >= em.span_end || em.span_end > len)
                throw ValidationError(ctx + " (entity '" + em.entity_id + "'): token_span [" +
                                      std::to_string(em.span_begin) + ", " + std::to_string(em.span_end) +
                                      ") exceeds sentence of " + std::to_string(len) + " tokens");
            doc.mentions.push_back(std::move(em));
        }
    }
    return doc;
}

inline std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace detail

/// Parses and validates an annotation document held in memory.
inline Dataset parse_annotations(std::string_view text) {
    using nlohmann::json;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = detail::line_col(text, e.byte);
        throw ParseError("annotation JSON, line " + std::to_string(line) + " column " + std::to_string(col) +
                         ": " + e.what());
    }
    if (!root.is_object()) throw ValidationError("annotation file: top level must be an object");

    Dataset ds;
    const auto& k = detail::require(root, "class_count", "annotation file");
    if (!k.is_number_integer() || k.get<long long>() < 2)
        throw ValidationError("annotation file: class_count must be an integer >= 2");
    ds.class_count = k.get<int>();
    if (root.contains("class_names")) {
        const auto& names = root.at("class_names");
        if (!names.is_array()) throw ValidationError("annotation file: class_names must be an array");
        for (const auto& n : names) {
            if (!n.is_string()) throw ValidationError("annotation file: class_names entries must be strings");
            ds.class_names.push_back(n.get<std::string>());
        }
        if (!ds.class_names.empty() && ds.class_names.size() != static_cast<std::size_t>(ds.class_count))
            throw ValidationError("annotation file: class_names has " + std::to_string(ds.class_names.size()) +
                                  " entries but class_count is " + std::to_string(ds.class_count));
    }
    const auto& docs = detail::require(root, "documents", "annotation file");
    if (!docs.is_array()) throw ValidationError("annotation file: documents must be an array");

    std::set<std::string> seen;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        auto doc = detail::parse_document(docs[i], i, ds.class_count);
        if (!seen.insert(doc.doc_id).second)
            throw ValidationError("duplicate doc_id '" + doc.doc_id + "'");
        ds.documents.push_back(std::move(doc));
    }
    return ds;
}

inline Dataset load_annotations(const std::string& path) { return parse_annotations(csv::read_file(path)); }

inline nlohmann::json to_json(const Dataset& ds) {
    using nlohmann::json;
    json root;
    root["class_count"] = ds.class_count;
    root["class_names"] = ds.class_names;
    json docs = json::array();
    for (const auto& d : ds.documents) {
        json jd;
        jd["doc_id"] = d.doc_id;
        jd["label"] = d.label ? json(*d.label) : json(nullptr);
        jd["raw_text"] = d.raw_text;
        json sents = json::array();
        for (const auto& s : d.sentences) {
            json toks = json::array();
            for (const auto& t : s.tokens) {
                toks.push_back({{"text", t.text}, {"lemma", t.lemma}, {"upos", std::string(to_string(t.upos))},
                                {"is_stop", t.is_stop}});
            }
            sents.push_back({{"tokens", toks}, {"tree", to_bracketed(s.tree)}});
        }
        jd["sentences"] = sents;
        json ments = json::array();
        for (const auto& m : d.mentions) {
            ments.push_back({{"entity_id", m.entity_id},
                             {"sentence_index", m.sentence_index},
                             {"token_span", {m.span_begin, m.span_end}},
                             {"role", std::string(1, to_char(m.role))}});
        }
        jd["mentions"] = ments;
        docs.push_back(std::move(jd));
    }
    root["documents"] = std::move(docs);
    return root;
}

inline void save_annotations(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << to_json(ds).dump(1) << '\n';
}

/// Keeps exactly `per_class` labeled documents of every class, chosen
/// uniformly at random under `seed`. Surviving documents keep their
/// original relative order; unlabeled documents are dropped.
inline Dataset downsample(const Dataset& ds, std::size_t per_class, std::uint64_t seed) {
    if (per_class == 0) throw UsageError("downsample: per_class must be positive");
    std::vector<std::vector<std::size_t>> by_class(ds.class_count);
    for (std::size_t i = 0; i < ds.documents.size(); ++i) {
        if (const auto& l = ds.documents[i].label) by_class[*l].push_back(i);
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> keep;
    for (int k = 0; k < ds.class_count; ++k) {
        auto& members = by_class[k];
        if (members.size() < per_class)
            throw ValidationError("downsample: class '" + ds.class_name(k) + "' has " +
                                  std::to_string(members.size()) + " documents, fewer than " +
                                  std::to_string(per_class));
        std::shuffle(members.begin(), members.end(), rng);
        keep.insert(keep.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(per_class));
    }
    std::sort(keep.begin(), keep.end());
    Dataset out;
    out.class_count = ds.class_count;
    out.class_names = ds.class_names;
    out.documents.reserve(keep.size());
    for (auto i : keep) out.documents.push_back(ds.documents[i]);
    return out;
}

} // namespace readlab
