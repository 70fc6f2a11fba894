#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "readlab/error.hpp"
#include "readlab/log.hpp"
#include "readlab/ml/matrix.hpp"

namespace readlab::ml {

enum class Penalty { L1, L2 };

inline std::string to_string(Penalty p) { return p == Penalty::L1 ? "l1" : "l2"; }

inline Penalty parse_penalty(std::string_view s) {
    if (s == "l1" || s == "L1") return Penalty::L1;
    if (s == "l2" || s == "L2") return Penalty::L2;
    throw UsageError("unknown penalty '" + std::string(s) + "' (expected l1 or l2)");
}

struct LogRegParams {
    Penalty penalty = Penalty::L2;
    double C = 1.0;
    std::size_t max_iterations = 5000;
    double tolerance = 1e-6;
};

/// Parameters are laid out per class as D weights followed by the bias.
/// Objective: mean cross-entropy + R(W) / (C N), with R = |W|^2 / 2 for l2 and
/// |W|_1 for l1. Biases are not penalized.
namespace detail {

inline void softmax_inplace(std::span<double> z) {
    const double m = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (auto& v : z) {
        v = std::exp(v - m);
        s += v;
    }
    for (auto& v : z) v /= s;
}

inline void check_labels(std::span<const int> y, std::size_t k, std::size_t rows) {
    if (y.size() != rows) throw ValidationError("label count does not match row count");
    for (int v : y)
        if (v < 0 || static_cast<std::size_t>(v) >= k)
            throw ValidationError("label " + std::to_string(v) + " outside 0.." + std::to_string(k - 1));
}

} // namespace detail

/// Smooth part of the objective (cross-entropy plus the l2 term when
/// penalty is l2). Writes the gradient when `grad` is non-null.
inline double logreg_smooth_objective(const Matrix& x, std::span<const int> y, std::size_t k,
                                      std::span<const double> theta, Penalty penalty, double C,
                                      std::vector<double>* grad = nullptr) {
    const std::size_t n = x.rows(), d = x.cols(), w = d + 1;
    if (theta.size() != k * w) throw ValidationError("parameter vector has the wrong length");
    if (grad) grad->assign(theta.size(), 0.0);
    const double inv_n = n ? 1.0 / static_cast<double>(n) : 0.0;
    double loss = 0.0;
    std::vector<double> z(k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = x.row(i);
        for (std::size_t c = 0; c < k; ++c) {
            double s = theta[c * w + d];
            for (std::size_t j = 0; j < d; ++j) s += theta[c * w + j] * xi[j];
            z[c] = s;
        }
        const double m = *std::max_element(z.begin(), z.end());
        double se = 0.0;
        for (double v : z) se += std::exp(v - m);
        const double lse = m + std::log(se);
        loss += lse - z[static_cast<std::size_t>(y[i])];
        if (grad) {
            for (std::size_t c = 0; c < k; ++c) {
                const double r = (std::exp(z[c] - lse) - (static_cast<std::size_t>(y[i]) == c ? 1.0 : 0.0)) * inv_n;
                for (std::size_t j = 0; j < d; ++j) (*grad)[c * w + j] += r * xi[j];
                (*grad)[c * w + d] += r;
            }
        }
    }
    loss *= inv_n;
    if (penalty == Penalty::L2 && n) {
        const double lam = 1.0 / (C * static_cast<double>(n));
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t j = 0; j < d; ++j) {
                const double t = theta[c * w + j];
                loss += 0.5 * lam * t * t;
                if (grad) (*grad)[c * w + j] += lam * t;
            }
    }
    return loss;
}

/// Full objective including the l1 term.
inline double logreg_objective(const Matrix& x, std::span<const int> y, std::size_t k, std::span<const double> theta,
                               Penalty penalty, double C) {
    double f = logreg_smooth_objective(x, y, k, theta, penalty, C);
    if (penalty == Penalty::L1 && x.rows()) {
        const std::size_t d = x.cols(), w = d + 1;
        double r = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t j = 0; j < d; ++j) r += std::abs(theta[c * w + j]);
        f += r / (C * static_cast<double>(x.rows()));
    }
    return f;
}

/// Multinomial logistic regression trained with accelerated proximal
/// gradient (backtracking, adaptive restart).
class LogisticRegression {
public:
    static LogisticRegression fit(const Matrix& x, std::span<const int> y, std::size_t k, const LogRegParams& p = {}) {
        if (k < 2) throw ValidationError("logistic regression needs at least 2 classes");
        if (!(p.C > 0.0) || !std::isfinite(p.C)) throw UsageError("C must be positive and finite");
        detail::check_labels(y, k, x.rows());
        if (std::set<int>(y.begin(), y.end()).size() < 2)
            throw ValidationError("training set contains a single class; logistic regression needs two or more");

        LogisticRegression m;
        m.params_ = p;
        m.classes_ = k;
        m.features_ = x.cols();
        const std::size_t d = x.cols(), w = d + 1, len = k * w;
        const double n = static_cast<double>(x.rows());

        // Lipschitz bound from the Frobenius norm of [X 1].
        double frob = 0.0;
        for (double v : x.data()) frob += v * v;
        frob += n;
        double lip = 0.5 * frob / n;
        if (p.penalty == Penalty::L2) lip += 1.0 / (p.C * n);
        double step = 1.0 / std::max(lip, 1e-12);
        const double l1 = p.penalty == Penalty::L1 ? 1.0 / (p.C * n) : 0.0;

        auto prox = [&](std::vector<double>& v, double t) {
            if (l1 == 0.0) return;
            const double thr = t * l1;
            for (std::size_t c = 0; c < k; ++c)
                for (std::size_t j = 0; j < d; ++j) {
                    double& a = v[c * w + j];
                    a = a > thr ? a - thr : a < -thr ? a + thr : 0.0;
                }
        };

        std::vector<double> xk(len, 0.0), yk = xk, g, cand(len), grad_p;
        double t = 1.0;
        m.converged_ = false;
        std::size_t it = 0;
        for (; it < p.max_iterations; ++it) {
            const double fy = logreg_smooth_objective(x, y, k, yk, p.penalty, p.C, &g);
            step *= 1.25;
            double fc = 0.0;
            for (int bt = 0; bt < 60; ++bt) {
                for (std::size_t i = 0; i < len; ++i) cand[i] = yk[i] - step * g[i];
                prox(cand, step);
                fc = logreg_smooth_objective(x, y, k, cand, p.penalty, p.C);
                double lin = 0.0, quad = 0.0;
                for (std::size_t i = 0; i < len; ++i) {
                    const double dlt = cand[i] - yk[i];
                    lin += g[i] * dlt;
                    quad += dlt * dlt;
                }
                if (fc <= fy + lin + quad / (2.0 * step) + 1e-12 * std::abs(fy)) break;
                step *= 0.5;
            }
            double gm = 0.0;
            for (std::size_t i = 0; i < len; ++i) {
                const double v = (yk[i] - cand[i]) / step;
                gm += v * v;
            }
            if (std::sqrt(gm) < p.tolerance) {
                xk = cand;
                m.converged_ = true;
                break;
            }
            double restart = 0.0;
            for (std::size_t i = 0; i < len; ++i) restart += (yk[i] - cand[i]) * (cand[i] - xk[i]);
            if (restart > 0.0) t = 1.0;
            const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            for (std::size_t i = 0; i < len; ++i) yk[i] = cand[i] + ((t - 1.0) / tn) * (cand[i] - xk[i]);
            xk = cand;
            t = tn;
        }
        m.iterations_ = it;
        if (!m.converged_)
            log::warn("logistic regression stopped after " + std::to_string(p.max_iterations) +
                      " iterations without reaching tolerance " + std::to_string(p.tolerance));
        m.theta_ = std::move(xk);
        return m;
    }

    std::vector<double> predict_proba(std::span<const double> row) const {
        if (row.size() != features_) throw ValidationError("row width does not match the model");
        const std::size_t w = features_ + 1;
        std::vector<double> z(classes_);
        for (std::size_t c = 0; c < classes_; ++c) {
            double s = theta_[c * w + features_];
            for (std::size_t j = 0; j < features_; ++j) s += theta_[c * w + j] * row[j];
            z[c] = s;
        }
        detail::softmax_inplace(z);
        return z;
    }

    int predict(std::span<const double> row) const { return argmax(predict_proba(row)); }

    double weight(std::size_t cls, std::size_t feature) const { return theta_[cls * (features_ + 1) + feature]; }
    double bias(std::size_t cls) const { return theta_[cls * (features_ + 1) + features_]; }
    const std::vector<double>& parameters() const { return theta_; }
    std::size_t class_count() const { return classes_; }
    std::size_t feature_count() const { return features_; }
    const LogRegParams& params() const { return params_; }
    bool converged() const { return converged_; }
    std::size_t iterations() const { return iterations_; }

    nlohmann::json to_json() const {
        return {{"penalty", to_string(params_.penalty)},
                {"C", params_.C},
                {"max_iterations", params_.max_iterations},
                {"tolerance", params_.tolerance},
                {"classes", classes_},
                {"features", features_},
                {"converged", converged_},
                {"iterations", iterations_},
                {"theta", theta_}};
    }

    static LogisticRegression from_json(const nlohmann::json& j) {
        LogisticRegression m;
        m.params_.penalty = parse_penalty(j.at("penalty").get<std::string>());
        m.params_.C = j.at("C").get<double>();
        m.params_.max_iterations = j.at("max_iterations").get<std::size_t>();
        m.params_.tolerance = j.at("tolerance").get<double>();
        m.classes_ = j.at("classes").get<std::size_t>();
        m.features_ = j.at("features").get<std::size_t>();
        m.converged_ = j.at("converged").get<bool>();
        m.iterations_ = j.at("iterations").get<std::size_t>();
        m.theta_ = j.at("theta").get<std::vector<double>>();
        if (m.theta_.size() != m.classes_ * (m.features_ + 1))
            throw ParseError("logistic regression parameters have the wrong length");
        return m;
    }

private:
    LogRegParams params_;
    std::size_t classes_ = 0;
    std::size_t features_ = 0;
    std::vector<double> theta_;
    bool converged_ = false;
    std::size_t iterations_ = 0;
};

} // namespace readlab::ml
