#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "readlab/error.hpp"
#include "readlab/ml/classifier.hpp"
#include "readlab/ml/folds.hpp"
#include "readlab/ml/metrics.hpp"

namespace readlab::ml {

namespace detail {
template <class T>
std::vector<T> grid_values(const nlohmann::json& j, const char* key, std::vector<T> fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    std::vector<T> out;
    if (v.is_array())
        for (const auto& e : v) out.push_back(e.get<T>());
    else
        out.push_back(v.get<T>());
    if (out.empty()) throw UsageError(std::string("grid entry '") + key + "' is empty");
    return out;
}
} // namespace detail

/// Expands a grid file into cells, last key varying fastest.
///   {"model": "logreg", "C": [0.1, 1, 10], "Pen": ["l1", "l2"]}
///   {"model": "rf", "nEst": [100, 800], "MDep": [null, 10], "Mfea": ["auto", "log2"]}
inline std::vector<ClassifierSpec> parse_grid(const nlohmann::json& j, const ClassifierSpec& base = {}) {
    ClassifierSpec proto = base;
    if (j.contains("model")) proto.kind = parse_classifier_kind(j.at("model").get<std::string>());
    std::vector<ClassifierSpec> cells;
    try {
        if (proto.kind == ClassifierKind::LogReg) {
            for (double c : detail::grid_values<double>(j, "C", {proto.logreg.C}))
                for (const auto& pen : detail::grid_values<std::string>(j, "Pen", {to_string(proto.logreg.penalty)})) {
                    auto s = proto;
                    s.logreg.C = c;
                    s.logreg.penalty = parse_penalty(pen);
                    cells.push_back(s);
                }
        } else {
            std::vector<nlohmann::json> depths;
            if (j.contains("MDep") && j.at("MDep").is_array()) depths = j.at("MDep").get<std::vector<nlohmann::json>>();
            else if (j.contains("MDep")) depths = {j.at("MDep")};
            else depths = {proto.forest.max_depth < 0 ? nlohmann::json(nullptr) : nlohmann::json(proto.forest.max_depth)};
            for (auto n : detail::grid_values<std::size_t>(j, "nEst", {proto.forest.n_trees}))
                for (const auto& d : depths)
                    for (const auto& mf :
                         detail::grid_values<std::string>(j, "Mfea", {to_string(proto.forest.max_features)})) {
                        auto s = proto;
                        s.forest.n_trees = n;
                        s.forest.max_depth = d.is_null() ? -1 : d.get<int>();
                        s.forest.max_features = parse_max_features(mf);
                        cells.push_back(s);
                    }
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed grid: ") + e.what());
    }
    if (cells.empty()) throw UsageError("grid has no cells");
    return cells;
}

struct GridResult {
    std::size_t best = 0;
    std::vector<ClassifierSpec> cells;
    std::vector<double> scores; ///< mean validation accuracy per cell

    const ClassifierSpec& best_spec() const { return cells[best]; }

    nlohmann::json to_json() const {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < cells.size(); ++i)
            rows.push_back({{"params", cells[i].params_json()}, {"val_accuracy", scores[i]}});
        return {{"best", cells[best].params_json()}, {"cells", rows}};
    }
};

/// Scores each cell by mean validation accuracy over the folds; the first
/// cell wins ties. `build` maps (fold index, row indices) to a design matrix,
/// so callers control which columns each fold sees.
template <class BuildFn>
GridResult grid_search(const std::vector<ClassifierSpec>& cells, const std::vector<FoldSplit>& folds,
                       std::span<const int> labels, std::size_t k, std::uint64_t seed, BuildFn&& build,
                       const std::vector<bool>& passthrough = {}) {
    if (cells.empty()) throw UsageError("grid has no cells");
    if (folds.empty()) throw UsageError("grid search needs at least one fold");
    GridResult r;
    r.cells = cells;
    r.scores.assign(cells.size(), 0.0);
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const Matrix xtr = build(f, std::span<const std::size_t>(folds[f].train));
        const Matrix xva = build(f, std::span<const std::size_t>(folds[f].val));
        const auto ytr = select(labels, std::span<const std::size_t>(folds[f].train));
        const auto yva = select(labels, std::span<const std::size_t>(folds[f].val));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto model = TrainedClassifier::fit(cells[c], xtr, ytr, k, seed, passthrough);
            r.scores[c] += evaluate(yva, model.predict(xva), k).accuracy / static_cast<double>(folds.size());
        }
    }
    for (std::size_t c = 1; c < cells.size(); ++c)
        if (r.scores[c] > r.scores[r.best]) r.best = c;
    return r;
}

} // namespace readlab::ml
