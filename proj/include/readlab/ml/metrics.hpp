#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "readlab/error.hpp"

namespace readlab::ml {

struct Metrics {
    double accuracy = 0.0;
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double qwk = 0.0;
};

inline constexpr std::array<const char*, 5> kMetricNames = {"accuracy", "f1", "precision", "recall", "qwk"};

inline double metric_value(const Metrics& m, std::size_t i) {
    switch (i) {
    case 0: return m.accuracy;
    case 1: return m.f1;
    case 2: return m.precision;
    case 3: return m.recall;
    default: return m.qwk;
    }
}

namespace detail {
inline std::vector<std::vector<double>> confusion(std::span<const int> truth, std::span<const int> pred, std::size_t k) {
    if (truth.size() != pred.size())
        throw ValidationError("label vectors differ in length (" + std::to_string(truth.size()) + " vs " +
                              std::to_string(pred.size()) + ")");
    std::vector<std::vector<double>> o(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] < 0 || pred[i] < 0 || static_cast<std::size_t>(truth[i]) >= k ||
            static_cast<std::size_t>(pred[i]) >= k)
            throw ValidationError("label outside 0.." + std::to_string(k - 1));
        o[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(pred[i])] += 1.0;
    }
    return o;
}
} // namespace detail

/// Quadratic weighted kappa. When the expected disagreement is zero the
/// result is 1 if the observed disagreement is also zero, else 0.
inline double quadratic_weighted_kappa(std::span<const int> truth, std::span<const int> pred, std::size_t k) {
    const auto o = detail::confusion(truth, pred, k);
    if (k < 2 || truth.empty()) return 1.0;
    std::vector<double> rows(k, 0.0), cols(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            rows[i] += o[i][j];
            cols[j] += o[i][j];
        }
    const double n = static_cast<double>(truth.size());
    const double km1 = static_cast<double>(k - 1);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const double d = static_cast<double>(i) - static_cast<double>(j);
            const double w = d * d / (km1 * km1);
            num += w * o[i][j];
            den += w * rows[i] * cols[j] / n;
        }
    if (den == 0.0) return num == 0.0 ? 1.0 : 0.0;
    return 1.0 - num / den;
}

/// Accuracy, support-weighted precision/recall/F1 (undefined ratios count as
/// 0) and QWK.
inline Metrics evaluate(std::span<const int> truth, std::span<const int> pred, std::size_t k) {
    const auto o = detail::confusion(truth, pred, k);
    Metrics m;
    if (truth.empty()) return m;
    const double n = static_cast<double>(truth.size());
    double correct = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        correct += o[c][c];
        double support = 0.0, predicted = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            support += o[c][j];
            predicted += o[j][c];
        }
        if (support == 0.0) continue;
        const double tp = o[c][c];
        const double p = predicted > 0.0 ? tp / predicted : 0.0;
        const double r = tp / support;
        const double f = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
        const double w = support / n;
        m.precision += w * p;
        m.recall += w * r;
        m.f1 += w * f;
    }
    m.accuracy = correct / n;
    m.qwk = quadratic_weighted_kappa(truth, pred, k);
    return m;
}

/// Per-fold metrics and their means.
struct EvaluationReport {
    std::vector<Metrics> folds;

    Metrics mean() const {
        Metrics m;
        if (folds.empty()) return m;
        for (const auto& f : folds) {
            m.accuracy += f.accuracy;
            m.f1 += f.f1;
            m.precision += f.precision;
            m.recall += f.recall;
            m.qwk += f.qwk;
        }
        const double n = static_cast<double>(folds.size());
        m.accuracy /= n;
        m.f1 /= n;
        m.precision /= n;
        m.recall /= n;
        m.qwk /= n;
        return m;
    }

    /// {"accuracy": {"folds": [...], "mean": x}, "f1": ..., ...}
    nlohmann::json to_json() const {
        nlohmann::json j = nlohmann::json::object();
        const auto avg = mean();
        for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
            nlohmann::json per = nlohmann::json::array();
            for (const auto& f : folds) per.push_back(metric_value(f, i));
            j[kMetricNames[i]] = {{"folds", per}, {"mean", metric_value(avg, i)}};
        }
        return j;
    }
};

} // namespace readlab::ml
