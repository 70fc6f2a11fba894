#pragma once

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "readlab/ml/matrix.hpp"

namespace readlab::ml {

/// Column-wise z-scores with population statistics from the fitted rows.
/// Columns with (near) zero variance map to 0; columns marked passthrough are
/// copied unchanged.
class StandardScaler {
public:
    static constexpr double kMinStd = 1e-12;

    void fit(const Matrix& x, std::vector<bool> passthrough = {}) {
        passthrough.resize(x.cols(), false);
        passthrough_ = std::move(passthrough);
        mean_.assign(x.cols(), 0.0);
        std_.assign(x.cols(), 0.0);
        if (x.rows() == 0) return;
        const double n = static_cast<double>(x.rows());
        for (std::size_t r = 0; r < x.rows(); ++r)
            for (std::size_t c = 0; c < x.cols(); ++c) mean_[c] += x(r, c);
        for (auto& m : mean_) m /= n;
        for (std::size_t r = 0; r < x.rows(); ++r)
            for (std::size_t c = 0; c < x.cols(); ++c) {
                const double d = x(r, c) - mean_[c];
                std_[c] += d * d;
            }
        for (auto& s : std_) s = std::sqrt(s / n);
    }

    Matrix transform(const Matrix& x) const {
        if (x.cols() != mean_.size()) throw ValidationError("scaler was fitted on a different column count");
        Matrix out(x.rows(), x.cols());
        for (std::size_t r = 0; r < x.rows(); ++r)
            for (std::size_t c = 0; c < x.cols(); ++c) {
                if (passthrough_[c]) out(r, c) = x(r, c);
                else out(r, c) = std_[c] < kMinStd ? 0.0 : (x(r, c) - mean_[c]) / std_[c];
            }
        return out;
    }

    Matrix fit_transform(const Matrix& x, std::vector<bool> passthrough = {}) {
        fit(x, std::move(passthrough));
        return transform(x);
    }

    const std::vector<double>& means() const { return mean_; }
    const std::vector<double>& stds() const { return std_; }
    const std::vector<bool>& passthrough() const { return passthrough_; }

    nlohmann::json to_json() const {
        return {{"mean", mean_}, {"std", std_}, {"passthrough", passthrough_}};
    }
    static StandardScaler from_json(const nlohmann::json& j) {
        StandardScaler s;
        s.mean_ = j.at("mean").get<std::vector<double>>();
        s.std_ = j.at("std").get<std::vector<double>>();
        s.passthrough_ = j.at("passthrough").get<std::vector<bool>>();
        if (s.std_.size() != s.mean_.size() || s.passthrough_.size() != s.mean_.size())
            throw ParseError("scaler statistics have inconsistent lengths");
        return s;
    }

private:
    std::vector<double> mean_;
    std::vector<double> std_;
    std::vector<bool> passthrough_;
};

} // namespace readlab::ml
