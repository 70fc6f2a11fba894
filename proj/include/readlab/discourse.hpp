#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "readlab/annotation.hpp"
#include "readlab/features.hpp"

namespace readlab {

/// Entity density: mention and unique-entity counts, each as total, per
/// sentence and per word token.
inline FeatureMap extract_endf(const AnnotatedDocument& doc) {
    const double S = static_cast<double>(doc.sentence_count());
    const double T = static_cast<double>(doc.word_count());
    std::set<std::string> unique;
    for (const auto& m : doc.mentions) unique.insert(m.entity_id);
    FeatureMap out;
    put_triple(out, "EntiM", static_cast<double>(doc.mentions.size()), S, T);
    put_triple(out, "UEnti", static_cast<double>(unique.size()), S, T);
    return out;
}

/// Grid cell: role of an entity in a sentence, or N when absent.
enum class GridCell { S, O, X, N };

inline constexpr std::array<GridCell, 4> kGridCells = {GridCell::S, GridCell::O, GridCell::X, GridCell::N};

inline char to_char(GridCell c) {
    switch (c) {
    case GridCell::S: return 'S';
    case GridCell::O: return 'O';
    case GridCell::X: return 'X';
    case GridCell::N: return 'N';
    }
    return '?';
}

/// Sentence x entity matrix of grammatical roles. Entities are columns in
/// order of first mention.
struct EntityGrid {
    std::size_t sentences = 0;
    std::vector<std::string> entities;
    std::vector<GridCell> cells; // row-major: sentences x entities

    GridCell at(std::size_t sentence, std::size_t entity) const { return cells[sentence * entities.size() + entity]; }
};

namespace detail {
inline GridCell cell_of(Role r) {
    switch (r) {
    case Role::S: return GridCell::S;
    case Role::O: return GridCell::O;
    case Role::X: return GridCell::X;
    }
    return GridCell::N;
}
// S outranks O outranks X outranks N.
inline int precedence(GridCell c) { return c == GridCell::S ? 3 : c == GridCell::O ? 2 : c == GridCell::X ? 1 : 0; }
} // namespace detail

inline EntityGrid build_grid(const AnnotatedDocument& doc) {
    EntityGrid g;
    g.sentences = doc.sentence_count();
    std::map<std::string, std::size_t> column;
    for (const auto& m : doc.mentions) {
        if (column.emplace(m.entity_id, g.entities.size()).second) g.entities.push_back(m.entity_id);
    }
    g.cells.assign(g.sentences * g.entities.size(), GridCell::N);
    for (const auto& m : doc.mentions) {
        if (m.sentence_index >= g.sentences) continue;
        auto& cell = g.cells[m.sentence_index * g.entities.size() + column[m.entity_id]];
        const auto role = detail::cell_of(m.role);
        if (detail::precedence(role) > detail::precedence(cell)) cell = role;
    }
    return g;
}

/// Share of each of the 16 adjacent-sentence role transitions among all
/// entities x (sentences - 1) transitions.
inline FeatureMap transition_ratios(const EntityGrid& g) {
    std::array<std::array<double, 4>, 4> counts{};
    const std::size_t E = g.entities.size();
    for (std::size_t s = 0; s + 1 < g.sentences; ++s) {
        for (std::size_t e = 0; e < E; ++e) {
            counts[static_cast<int>(g.at(s, e))][static_cast<int>(g.at(s + 1, e))] += 1.0;
        }
    }
    const double total = g.sentences >= 2 ? static_cast<double>(E * (g.sentences - 1)) : 0.0;
    FeatureMap out;
    for (auto a : kGridCells) {
        for (auto b : kGridCells) {
            std::string code = "ra_";
            code += to_char(a);
            code += to_char(b);
            code += "ToT_C";
            out[code] = safe_div(counts[static_cast<int>(a)][static_cast<int>(b)], total);
        }
    }
    return out;
}

/// Graph-based local coherence. Sentences are linked to later sentences
/// that share an entity; the three one-mode projections weight a link by 1
/// (PU), by the number of shared entities (PW), or by the sum over shared
/// entities of role-weight products with S=3, O=2, X=1 (PA). A score is the
/// total link weight divided by the sentence count. The distance variants
/// divide each link weight by the sentence distance first.
inline FeatureMap local_coherence(const EntityGrid& g) {
    auto weight = [](GridCell c) { return c == GridCell::S ? 3.0 : c == GridCell::O ? 2.0 : c == GridCell::X ? 1.0 : 0.0; };
    double pu = 0, pw = 0, pa = 0, dpu = 0, dpw = 0, dpa = 0;
    const std::size_t E = g.entities.size();
    for (std::size_t i = 0; i < g.sentences; ++i) {
        for (std::size_t j = i + 1; j < g.sentences; ++j) {
            double shared = 0.0, acc = 0.0;
            for (std::size_t e = 0; e < E; ++e) {
                const auto a = g.at(i, e), b = g.at(j, e);
                if (a != GridCell::N && b != GridCell::N) {
                    shared += 1.0;
                    acc += weight(a) * weight(b);
                }
            }
            if (shared == 0.0) continue;
            const double dist = static_cast<double>(j - i);
            pu += 1.0;
            pw += shared;
            pa += acc;
            dpu += 1.0 / dist;
            dpw += shared / dist;
            dpa += acc / dist;
        }
    }
    const double S = static_cast<double>(g.sentences);
    return FeatureMap{{"LoCohPA_S", safe_div(pa, S)},  {"LoCohPW_S", safe_div(pw, S)},
                      {"LoCohPU_S", safe_div(pu, S)},  {"LoCoDPA_S", safe_div(dpa, S)},
                      {"LoCoDPW_S", safe_div(dpw, S)}, {"LoCoDPU_S", safe_div(dpu, S)}};
}

/// The 22 entity-grid features.
inline FeatureMap extract_engf(const AnnotatedDocument& doc) {
    const auto grid = build_grid(doc);
    auto out = transition_ratios(grid);
    out.merge(local_coherence(grid));
    return out;
}

} // namespace readlab
