#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "readlab/error.hpp"
#include "readlab/ml/forest.hpp"
#include "readlab/ml/logreg.hpp"
#include "readlab/ml/matrix.hpp"
#include "readlab/ml/scaler.hpp"

namespace readlab::ml {

enum class ClassifierKind { LogReg, RandomForest };

inline std::string to_string(ClassifierKind k) { return k == ClassifierKind::LogReg ? "logreg" : "rf"; }

inline ClassifierKind parse_classifier_kind(std::string_view s) {
    if (s == "logreg" || s == "lr" || s == "LogR") return ClassifierKind::LogReg;
    if (s == "rf" || s == "random_forest" || s == "RandF") return ClassifierKind::RandomForest;
    throw UsageError("unknown model '" + std::string(s) + "' (expected logreg or rf)");
}

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::LogReg;
    LogRegParams logreg;
    ForestParams forest;

    /// Parameter names follow the grid file: C/Pen or nEst/MDep/Mfea.
    nlohmann::json params_json() const {
        if (kind == ClassifierKind::LogReg) return {{"C", logreg.C}, {"Pen", to_string(logreg.penalty)}};
        return {{"nEst", forest.n_trees},
                {"MDep", forest.max_depth < 0 ? nlohmann::json(nullptr) : nlohmann::json(forest.max_depth)},
                {"Mfea", to_string(forest.max_features)}};
    }
};

/// A fitted model. Logistic regression standardizes its inputs (except
/// passthrough columns); the forest sees raw values.
class TrainedClassifier {
public:
    static TrainedClassifier fit(const ClassifierSpec& spec, const Matrix& x, std::span<const int> y, std::size_t k,
                                 std::uint64_t seed, const std::vector<bool>& passthrough = {}) {
        TrainedClassifier t;
        t.kind_ = spec.kind;
        t.seed_ = seed;
        t.classes_ = k;
        if (spec.kind == ClassifierKind::LogReg) {
            StandardScaler s;
            const auto xs = s.fit_transform(x, passthrough);
            t.logreg_ = LogisticRegression::fit(xs, y, k, spec.logreg);
            t.scaler_ = std::move(s);
        } else {
            t.forest_ = RandomForest::fit(x, y, k, spec.forest, seed);
        }
        return t;
    }

    std::vector<double> predict_proba(std::span<const double> row) const {
        if (logreg_) {
            Matrix m(0, 0);
            m.push_row(row);
            const auto xs = scaler_->transform(m);
            return logreg_->predict_proba(xs.row(0));
        }
        return forest_->predict_proba(row);
    }

    int predict(std::span<const double> row) const { return argmax(predict_proba(row)); }

    std::vector<int> predict(const Matrix& x) const {
        std::vector<int> out(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict(x.row(i));
        return out;
    }

    ClassifierKind kind() const { return kind_; }
    std::size_t class_count() const { return classes_; }
    std::uint64_t seed() const { return seed_; }
    const std::optional<StandardScaler>& scaler() const { return scaler_; }
    const std::optional<LogisticRegression>& logreg() const { return logreg_; }
    const std::optional<RandomForest>& forest() const { return forest_; }

    nlohmann::json to_json() const {
        nlohmann::json j = {{"format", "readlab-classifier"},
                            {"version", 1},
                            {"kind", to_string(kind_)},
                            {"classes", classes_},
                            {"seed", seed_}};
        if (scaler_) j["scaler"] = scaler_->to_json();
        if (logreg_) j["model"] = logreg_->to_json();
        if (forest_) j["model"] = forest_->to_json();
        return j;
    }

    static TrainedClassifier from_json(const nlohmann::json& j) {
        if (j.value("format", "") != "readlab-classifier") throw ParseError("not a readlab classifier file");
        if (j.value("version", 0) != 1) throw ParseError("unsupported classifier file version");
        TrainedClassifier t;
        t.kind_ = parse_classifier_kind(j.at("kind").get<std::string>());
        t.classes_ = j.at("classes").get<std::size_t>();
        t.seed_ = j.at("seed").get<std::uint64_t>();
        if (t.kind_ == ClassifierKind::LogReg) {
            t.scaler_ = StandardScaler::from_json(j.at("scaler"));
            t.logreg_ = LogisticRegression::from_json(j.at("model"));
        } else {
            t.forest_ = RandomForest::from_json(j.at("model"));
        }
        return t;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw Error("cannot write '" + path + "'");
        out << to_json().dump() << '\n';
    }

    static TrainedClassifier load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open '" + path + "'");
        try {
            return from_json(nlohmann::json::parse(in));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path + ": " + e.what());
        }
    }

private:
    ClassifierKind kind_ = ClassifierKind::LogReg;
    std::uint64_t seed_ = 0;
    std::size_t classes_ = 0;
    std::optional<StandardScaler> scaler_;
    std::optional<LogisticRegression> logreg_;
    std::optional<RandomForest> forest_;
};

} // namespace readlab::ml
