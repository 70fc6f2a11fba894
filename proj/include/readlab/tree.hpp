#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "readlab/error.hpp"

namespace readlab {

/// A constituency tree node. Leaves carry token text and no children;
/// internal nodes carry a label and at least one child.
struct ConstituencyTree {
    std::string label;
    std::vector<ConstituencyTree> children;
    std::optional<std::string> leaf;

    static ConstituencyTree make_leaf(std::string text) {
        ConstituencyTree t;
        t.leaf = std::move(text);
        return t;
    }

    bool is_leaf() const { return leaf.has_value(); }

    /// Levels from this node down to its deepest leaf, both inclusive.
    std::size_t height() const {
        std::size_t h = 0;
        for (const auto& c : children) h = std::max(h, c.height());
        return h + 1;
    }

    /// Every node in the tree: internal labels plus leaf tokens.
    std::size_t node_count() const {
        std::size_t n = 1;
        for (const auto& c : children) n += c.node_count();
        return n;
    }

    std::size_t leaf_count() const {
        if (is_leaf()) return 1;
        std::size_t n = 0;
        for (const auto& c : children) n += c.leaf_count();
        return n;
    }

    /// Calls f(node) for every internal node in preorder.
    template <class F>
    void for_each_internal(F&& f) const {
        if (is_leaf()) return;
        f(*this);
        for (const auto& c : children) c.for_each_internal(f);
    }

    friend bool operator==(const ConstituencyTree&, const ConstituencyTree&) = default;
};

namespace detail {

inline std::string escape_leaf(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '(') out += "-LRB-";
        else if (c == ')') out += "-RRB-";
        else out.push_back(c);
    }
    return out;
}

inline std::string unescape_leaf(std::string_view s) {
    if (s == "-LRB-") return "(";
    if (s == "-RRB-") return ")";
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
        if (s.substr(i, 5) == "-LRB-") {
            out.push_back('(');
            i += 5;
        } else if (s.substr(i, 5) == "-RRB-") {
            out.push_back(')');
            i += 5;
        } else {
            out.push_back(s[i++]);
        }
    }
    return out;
}

class TreeParser {
public:
    explicit TreeParser(std::string_view text) : text_(text) {}

    ConstituencyTree parse() {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '(') fail("expected '('");
        ConstituencyTree t = node();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters after tree");
        return t;
    }

private:
    ConstituencyTree node() {
        ++pos_; // '('
        skip_ws();
        ConstituencyTree t;
        if (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')') t.label = atom();
        for (;;) {
            skip_ws();
            if (pos_ >= text_.size()) fail("unbalanced parentheses");
            const char c = text_[pos_];
            if (c == ')') {
                ++pos_;
                break;
            }
            if (c == '(') t.children.push_back(node());
            else t.children.push_back(ConstituencyTree::make_leaf(unescape_leaf(atom())));
        }
        if (t.children.empty()) fail("node '" + t.label + "' has no children");
        return t;
    }

    std::string atom() {
        const auto start = pos_;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '(' || c == ')' || c == ' ' || c == '\t' || c == '\n' || c == '\r') break;
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("bracketed tree, offset " + std::to_string(pos_) + ": " + msg);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

inline void write_tree(const ConstituencyTree& t, std::string& out) {
    if (t.is_leaf()) {
        out += escape_leaf(*t.leaf);
        return;
    }
    out.push_back('(');
    out += t.label;
    for (const auto& c : t.children) {
        if (!out.empty() && out.back() != '(') out.push_back(' ');
        write_tree(c, out);
    }
    out.push_back(')');
}

} // namespace detail

/// Parses `(LABEL child ...)` notation. Leaves are bare tokens; literal
/// parentheses inside tokens are written -LRB- / -RRB-.
inline ConstituencyTree parse_tree(std::string_view text) { return detail::TreeParser(text).parse(); }

inline std::string to_bracketed(const ConstituencyTree& t) {
    std::string out;
    detail::write_tree(t, out);
    return out;
}

} // namespace readlab
