#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "readlab/csv.hpp"
#include "readlab/error.hpp"
#include "readlab/extractor.hpp"
#include "readlab/log.hpp"
#include "readlab/ml/classifier.hpp"
#include "readlab/ml/folds.hpp"
#include "readlab/ml/grid_search.hpp"
#include "readlab/ml/metrics.hpp"
#include "readlab/registry.hpp"
#include "readlab/text.hpp"

namespace readlab {

/// Extracted features for a corpus: one row per document, columns in a fixed
/// code order. CSV layout is doc_id,label,<codes>.
struct FeatureTable {
    std::vector<std::string> codes;
    std::vector<std::string> doc_ids;
    std::vector<std::optional<int>> labels;
    ml::Matrix values;

    std::size_t size() const { return doc_ids.size(); }

    static FeatureTable from_vectors(std::vector<std::string> codes, const std::vector<FeatureVector>& rows) {
        FeatureTable t;
        t.codes = std::move(codes);
        t.values = ml::Matrix(0, t.codes.size());
        for (const auto& r : rows) {
            t.doc_ids.push_back(r.doc_id);
            t.labels.push_back(r.label);
            t.values.push_row(r.values);
        }
        return t;
    }

    std::optional<std::size_t> column(std::string_view code) const {
        for (std::size_t i = 0; i < codes.size(); ++i)
            if (codes[i] == code) return i;
        return std::nullopt;
    }

    /// Every row must carry a label.
    std::vector<int> require_labels() const {
        std::vector<int> out;
        out.reserve(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (!labels[i]) throw ValidationError("document " + doc_ids[i] + " has no label");
            out.push_back(*labels[i]);
        }
        return out;
    }

    std::size_t class_count() const {
        int m = -1;
        for (const auto& l : labels)
            if (l) m = std::max(m, *l);
        return static_cast<std::size_t>(m + 1);
    }

    void write_csv(std::ostream& os) const {
        std::vector<std::string> fields{"doc_id", "label"};
        fields.insert(fields.end(), codes.begin(), codes.end());
        csv::write_row(os, fields);
        for (std::size_t r = 0; r < size(); ++r) {
            fields.assign({doc_ids[r], labels[r] ? std::to_string(*labels[r]) : std::string()});
            for (double v : values.row(r)) fields.push_back(text::format_double(v));
            csv::write_row(os, fields);
        }
    }

    static FeatureTable parse_csv(std::string_view content, std::string_view what = "feature table") {
        const auto tab = csv::parse(content, what);
        const std::string ctx(what);
        if (tab.header.size() < 2 || tab.header[0] != "doc_id" || tab.header[1] != "label")
            throw ValidationError(ctx + ": header must start with doc_id,label");
        FeatureTable t;
        std::set<std::string> seen;
        for (std::size_t c = 2; c < tab.header.size(); ++c) {
            const auto& code = tab.header[c];
            if (!find_feature(code)) throw ValidationError(ctx + ": unknown feature code '" + code + "'");
            if (!seen.insert(code).second) throw ValidationError(ctx + ": duplicate column '" + code + "'");
            t.codes.push_back(code);
        }
        t.values = ml::Matrix(0, t.codes.size());
        std::set<std::string> ids;
        std::vector<double> row(t.codes.size());
        for (std::size_t r = 0; r < tab.rows.size(); ++r) {
            const auto& rec = tab.rows[r];
            const auto where = ctx + " line " + std::to_string(tab.line_numbers[r]);
            if (rec[0].empty()) throw ValidationError(where + ": empty doc_id");
            if (!ids.insert(rec[0]).second) throw ValidationError(where + ": duplicate doc_id " + rec[0]);
            t.doc_ids.push_back(rec[0]);
            try {
                if (text::trim(rec[1]).empty()) {
                    t.labels.emplace_back();
                } else {
                    const auto l = text::parse_int(rec[1]);
                    if (l < 0) throw ParseError("negative label");
                    t.labels.emplace_back(static_cast<int>(l));
                }
                for (std::size_t c = 0; c < t.codes.size(); ++c) {
                    row[c] = text::parse_double(rec[c + 2]);
                    if (!std::isfinite(row[c])) throw ParseError("non-finite value for " + t.codes[c]);
                }
            } catch (const ParseError& e) {
                throw ParseError(where + ": " + e.what());
            }
            t.values.push_row(row);
        }
        return t;
    }

    static FeatureTable load(const std::string& path) { return parse_csv(csv::read_file(path), path); }
};

inline constexpr int kSharedFold = -1;

struct SoftLabelRecord {
    std::string doc_id;
    int fold = kSharedFold; ///< kSharedFold for "*" rows reused by every fold
    std::string split;
    std::vector<double> probs;
};

/// Reads doc_id,fold,split,p_0..p_{K-1}. A fold of "*" marks one prediction
/// per document shared by all folds.
inline std::vector<SoftLabelRecord> parse_soft_label_records(std::string_view content,
                                                             std::string_view what = "soft labels") {
    const auto tab = csv::parse(content, what);
    const std::string ctx(what);
    const auto cd = tab.require_column("doc_id", ctx);
    const auto cf = tab.require_column("fold", ctx);
    const auto cs = tab.require_column("split", ctx);
    std::vector<std::size_t> pcols;
    for (std::size_t k = 0;; ++k) {
        auto c = tab.column("p_" + std::to_string(k));
        if (!c) break;
        pcols.push_back(*c);
    }
    if (pcols.size() < 2) throw ValidationError(ctx + ": expected probability columns p_0..p_{K-1} with K >= 2");
    if (tab.header.size() != pcols.size() + 3) throw ValidationError(ctx + ": unexpected extra columns");
    std::vector<SoftLabelRecord> out;
    for (std::size_t r = 0; r < tab.rows.size(); ++r) {
        const auto& rec = tab.rows[r];
        const auto where = ctx + " line " + std::to_string(tab.line_numbers[r]);
        SoftLabelRecord s;
        s.doc_id = rec[cd];
        s.split = rec[cs];
        if (s.split != "train" && s.split != "val" && s.split != "test" && s.split != "*")
            throw ValidationError(where + ": split must be train, val, test or *");
        try {
            const auto fold = text::trim(rec[cf]);
            if (fold == "*") s.fold = kSharedFold;
            else {
                const auto f = text::parse_int(fold);
                if (f < 0) throw ParseError("negative fold");
                s.fold = static_cast<int>(f);
            }
            double sum = 0.0;
            for (auto c : pcols) {
                const double p = text::parse_double(rec[c]);
                if (!std::isfinite(p) || p < 0.0) throw ParseError("probabilities must be finite and non-negative");
                s.probs.push_back(p);
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-3)
                throw ValidationError("probabilities for " + s.doc_id + " sum to " + text::format_double(sum) +
                                      ", not 1");
            for (auto& p : s.probs) p /= sum;
        } catch (const Error& e) {
            throw ValidationError(where + ": " + e.what());
        }
        out.push_back(std::move(s));
    }
    return out;
}

/// Soft labels keyed by fold and document.
class SoftLabels {
public:
    std::size_t class_count() const { return classes_; }
    bool shared() const { return shared_; }

    const std::vector<double>& get(std::size_t fold, const std::string& doc_id) const {
        const int key = shared_ ? kSharedFold : static_cast<int>(fold);
        auto f = table_.find(key);
        if (f != table_.end()) {
            auto d = f->second.find(doc_id);
            if (d != f->second.end()) return d->second;
        }
        throw ValidationError("no soft label for " + doc_id + " in fold " + std::to_string(fold));
    }

    /// Uniform 1/K for every document (uninformative control).
    static SoftLabels uniform(const std::vector<std::string>& doc_ids, std::size_t k) {
        SoftLabels s;
        s.classes_ = k;
        s.shared_ = true;
        for (const auto& id : doc_ids) s.table_[kSharedFold][id] = std::vector<double>(k, 1.0 / static_cast<double>(k));
        return s;
    }

    /// Checks that every document of every fold split has a record and that
    /// per-fold records agree with the fold assignment.
    static SoftLabels ingest(const std::vector<SoftLabelRecord>& records, const std::vector<std::string>& doc_ids,
                             const std::vector<ml::FoldSplit>& folds) {
        SoftLabels s;
        if (records.empty()) throw ValidationError("soft-label file has no records");
        s.classes_ = records.front().probs.size();
        std::size_t shared_rows = 0;
        for (const auto& r : records) {
            if (r.probs.size() != s.classes_) throw ValidationError("soft-label rows differ in class count");
            if (r.fold == kSharedFold) ++shared_rows;
        }
        if (shared_rows != 0 && shared_rows != records.size())
            throw ValidationError("soft-label file mixes shared (*) and per-fold records");
        s.shared_ = shared_rows != 0;

        std::set<std::string> known(doc_ids.begin(), doc_ids.end());
        std::size_t unknown = 0, beyond = 0;
        std::map<std::pair<int, std::string>, std::string> split_of;
        for (const auto& r : records) {
            if (!known.count(r.doc_id)) {
                ++unknown;
                continue;
            }
            if (r.fold != kSharedFold && static_cast<std::size_t>(r.fold) >= folds.size()) {
                ++beyond;
                continue;
            }
            if (!s.table_[r.fold].emplace(r.doc_id, r.probs).second)
                throw ValidationError("duplicate soft label for " + r.doc_id + " in fold " +
                                      (r.fold == kSharedFold ? std::string("*") : std::to_string(r.fold)));
            split_of[{r.fold, r.doc_id}] = r.split;
        }
        if (unknown) log::warn(std::to_string(unknown) + " soft-label rows name unknown documents and were ignored");
        if (beyond) log::warn(std::to_string(beyond) + " soft-label rows belong to unused folds and were ignored");

        std::vector<std::string> gaps, mismatches;
        auto check = [&](std::size_t f, const std::vector<std::size_t>& idx, const char* split) {
            const int key = s.shared_ ? kSharedFold : static_cast<int>(f);
            for (auto i : idx) {
                auto it = split_of.find({key, doc_ids[i]});
                if (it == split_of.end()) {
                    gaps.push_back(doc_ids[i] + " (fold " + std::to_string(f) + ", " + split + ")");
                } else if (!s.shared_ && it->second != split && it->second != "*") {
                    mismatches.push_back(doc_ids[i] + " (fold " + std::to_string(f) + ": file says " + it->second +
                                         ", folds say " + split + ")");
                }
            }
        };
        for (std::size_t f = 0; f < folds.size(); ++f) {
            check(f, folds[f].train, "train");
            check(f, folds[f].val, "val");
            check(f, folds[f].test, "test");
            if (s.shared_) break;
        }
        auto listing = [](const std::vector<std::string>& v) {
            std::string out;
            for (std::size_t i = 0; i < v.size() && i < 10; ++i) out += (i ? ", " : "") + v[i];
            if (v.size() > 10) out += ", ... (" + std::to_string(v.size() - 10) + " more)";
            return out;
        };
        if (!gaps.empty())
            throw ValidationError("soft labels missing for " + std::to_string(gaps.size()) + " records: " +
                                  listing(gaps));
        if (!mismatches.empty())
            throw ValidationError("soft-label splits disagree with the folds: " + listing(mismatches));
        return s;
    }

    static SoftLabels load(const std::string& path, const std::vector<std::string>& doc_ids,
                           const std::vector<ml::FoldSplit>& folds) {
        return ingest(parse_soft_label_records(csv::read_file(path), path), doc_ids, folds);
    }

private:
    std::size_t classes_ = 0;
    bool shared_ = false;
    std::map<int, std::map<std::string, std::vector<double>>> table_;
};

/// Column codes of a set name within a table: "" keeps every table column,
/// "none" keeps none, anything else is resolved through the registry.
inline std::vector<std::string> set_columns(const FeatureTable& t, const std::string& set_name) {
    if (set_name.empty()) return t.codes;
    if (set_name == "none") return {};
    auto codes = resolve_set(set_name);
    std::vector<std::string> missing;
    for (const auto& c : codes)
        if (!t.column(c)) missing.push_back(c);
    if (!missing.empty())
        throw ValidationError("feature table lacks " + std::to_string(missing.size()) + " codes of set " + set_name +
                              " (first: " + missing.front() + ")");
    return codes;
}

struct Design {
    ml::Matrix x;
    std::vector<std::string> columns;
    std::vector<bool> passthrough; ///< soft-label columns are not standardized
};

/// Rows `rows` of the table restricted to `codes`, followed by the K soft
/// label columns of `fold` when `soft` is given.
inline Design assemble(const FeatureTable& t, const std::vector<std::string>& codes, const SoftLabels* soft,
                       std::size_t fold, std::span<const std::size_t> rows) {
    Design d;
    std::vector<std::size_t> src;
    for (const auto& c : codes) {
        auto i = t.column(c);
        if (!i) throw ValidationError("feature table has no column " + c);
        src.push_back(*i);
        d.columns.push_back(c);
    }
    const std::size_t k = soft ? soft->class_count() : 0;
    for (std::size_t j = 0; j < k; ++j) d.columns.push_back("p_" + std::to_string(j));
    d.passthrough.assign(d.columns.size(), false);
    std::fill(d.passthrough.begin() + static_cast<std::ptrdiff_t>(src.size()), d.passthrough.end(), true);
    d.x = ml::Matrix(rows.size(), d.columns.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto out = d.x.row(r);
        const auto in = t.values.row(rows[r]);
        for (std::size_t j = 0; j < src.size(); ++j) out[j] = in[src[j]];
        if (soft) {
            const auto& p = soft->get(fold, t.doc_ids[rows[r]]);
            std::copy(p.begin(), p.end(), out.begin() + static_cast<std::ptrdiff_t>(src.size()));
        }
    }
    return d;
}

enum class HybridMode { FeaturesOnly, SoftOnly, Hybrid };

inline std::string to_string(HybridMode m) {
    switch (m) {
    case HybridMode::FeaturesOnly: return "features";
    case HybridMode::SoftOnly: return "soft";
    case HybridMode::Hybrid: return "hybrid";
    }
    return "?";
}

struct HybridConfig {
    std::string set_name = "T1";
    ml::ClassifierSpec model;
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    unsigned jobs = 1; ///< folds evaluated concurrently
    std::vector<ml::ClassifierSpec> grid; ///< when non-empty, chosen by validation accuracy
};

struct FoldPrediction {
    std::size_t fold = 0;
    std::string doc_id;
    int truth = 0;
    int predicted = 0;
    std::vector<double> probs;
};

struct HybridResult {
    ml::EvaluationReport report;
    std::vector<FoldPrediction> predictions;
    std::optional<ml::GridResult> grid;
};

namespace detail {

inline std::size_t resolve_class_count(const FeatureTable& t, const SoftLabels* soft) {
    const std::size_t k = t.class_count();
    if (soft && soft->class_count() < k)
        throw ValidationError("soft labels have " + std::to_string(soft->class_count()) +
                              " classes but the features use labels up to " + std::to_string(k - 1));
    const std::size_t out = soft ? soft->class_count() : k;
    if (out < 2) throw ValidationError("evaluation needs at least 2 classes");
    return out;
}

template <class F>
void for_each_parallel(std::size_t n, unsigned jobs, F&& f) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex m;
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(m);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace detail

/// Cross-validated evaluation of one mode. Soft labels are required for the
/// soft and hybrid modes; features-only ignores them.
inline HybridResult run_hybrid(const FeatureTable& t, const SoftLabels* soft, const HybridConfig& cfg,
                               HybridMode mode) {
    if (mode != HybridMode::FeaturesOnly && !soft) throw UsageError(to_string(mode) + " mode needs soft labels");
    const SoftLabels* used = mode == HybridMode::FeaturesOnly ? nullptr : soft;
    const auto codes = mode == HybridMode::SoftOnly ? std::vector<std::string>{} : set_columns(t, cfg.set_name);
    if (codes.empty() && !used) throw UsageError("nothing to train on: empty feature set and no soft labels");
    const auto labels = t.require_labels();
    const std::size_t k = detail::resolve_class_count(t, used);
    const auto folds = ml::stratified_folds(labels, cfg.folds, cfg.seed);

    HybridResult res;
    ml::ClassifierSpec spec = cfg.model;
    if (!cfg.grid.empty()) {
        res.grid = ml::grid_search(
            cfg.grid, folds, labels, k, cfg.seed,
            [&](std::size_t f, std::span<const std::size_t> rows) { return assemble(t, codes, used, f, rows).x; },
            assemble(t, codes, used, 0, {}).passthrough);
        spec = res.grid->best_spec();
    }

    std::vector<ml::Metrics> per_fold(folds.size());
    std::vector<std::vector<FoldPrediction>> preds(folds.size());
    detail::for_each_parallel(folds.size(), cfg.jobs, [&](std::size_t f) {
        const auto train = assemble(t, codes, used, f, folds[f].train);
        const auto test = assemble(t, codes, used, f, folds[f].test);
        const auto ytr = ml::select(std::span<const int>(labels), std::span<const std::size_t>(folds[f].train));
        const auto yte = ml::select(std::span<const int>(labels), std::span<const std::size_t>(folds[f].test));
        const auto model = ml::TrainedClassifier::fit(spec, train.x, ytr, k, cfg.seed + f, train.passthrough);
        std::vector<int> yhat(yte.size());
        for (std::size_t i = 0; i < yte.size(); ++i) {
            auto p = model.predict_proba(test.x.row(i));
            yhat[i] = ml::argmax(p);
            preds[f].push_back({f, t.doc_ids[folds[f].test[i]], yte[i], yhat[i], std::move(p)});
        }
        per_fold[f] = ml::evaluate(yte, yhat, k);
    });
    res.report.folds = std::move(per_fold);
    for (auto& p : preds) res.predictions.insert(res.predictions.end(), p.begin(), p.end());
    return res;
}

inline void write_predictions_csv(std::ostream& os, const std::vector<FoldPrediction>& preds) {
    const std::size_t k = preds.empty() ? 0 : preds.front().probs.size();
    std::vector<std::string> fields{"fold", "doc_id", "label", "predicted"};
    for (std::size_t j = 0; j < k; ++j) fields.push_back("p_" + std::to_string(j));
    csv::write_row(os, fields);
    for (const auto& p : preds) {
        fields = {std::to_string(p.fold), p.doc_id, std::to_string(p.truth), std::to_string(p.predicted)};
        for (double v : p.probs) fields.push_back(text::format_double(v));
        csv::write_row(os, fields);
    }
}

/// "50:750:50" (start:stop:step, inclusive) or a comma list "50,100".
inline std::vector<std::size_t> parse_sizes(std::string_view spec) {
    std::vector<std::size_t> out;
    auto to_size = [&](std::string_view s) {
        const auto v = text::parse_int(s);
        if (v <= 0) throw UsageError("sizes must be positive: '" + std::string(spec) + "'");
        return static_cast<std::size_t>(v);
    };
    try {
        if (spec.find(':') != std::string_view::npos) {
            const auto a = spec.find(':'), b = spec.find(':', a + 1);
            if (b == std::string_view::npos) throw UsageError("size range must be start:stop:step");
            const auto start = to_size(spec.substr(0, a)), stop = to_size(spec.substr(a + 1, b - a - 1)),
                       step = to_size(spec.substr(b + 1));
            if (stop < start) throw UsageError("size range stop is below start");
            for (auto s = start; s <= stop; s += step) out.push_back(s);
        } else {
            while (!spec.empty()) {
                const auto c = spec.find(',');
                out.push_back(to_size(spec.substr(0, c)));
                spec = c == std::string_view::npos ? std::string_view{} : spec.substr(c + 1);
            }
        }
    } catch (const ParseError& e) {
        throw UsageError(std::string("bad size list: ") + e.what());
    }
    if (out.empty()) throw UsageError("empty size list");
    return out;
}

inline std::vector<std::size_t> default_curve_sizes() { return parse_sizes("50:750:50"); }

struct CurveConfig {
    std::vector<std::size_t> sizes = default_curve_sizes();
    bool nested = false; ///< prefixes of one shuffle instead of fresh samples per size
};

struct CurveRow {
    std::size_t size = 0;
    ml::Metrics features;
    std::optional<ml::Metrics> soft;
    std::optional<ml::Metrics> hybrid;
};

/// Per-class quotas for a balanced sample of `size` items; the remainder goes
/// to the lowest class indices.
inline std::vector<std::size_t> balanced_allocation(std::size_t size, std::size_t k) {
    std::vector<std::size_t> q(k, size / k);
    for (std::size_t c = 0; c < size % k; ++c) ++q[c];
    return q;
}

/// Learning curve on fold 0: the test split stays fixed while the training
/// set is a balanced subsample of the fold's train split.
inline std::vector<CurveRow> data_size_curve(const FeatureTable& t, const SoftLabels* soft, const HybridConfig& cfg,
                                             const CurveConfig& curve = {}) {
    const auto labels = t.require_labels();
    const std::size_t k = detail::resolve_class_count(t, soft);
    const auto folds = ml::stratified_folds(labels, std::max<std::size_t>(cfg.folds, 1), cfg.seed);
    const auto& split = folds.front();
    const auto codes = set_columns(t, cfg.set_name);

    std::vector<std::vector<std::size_t>> pool(k);
    for (auto i : split.train) pool[static_cast<std::size_t>(labels[i])].push_back(i);
    for (auto s : curve.sizes) {
        const auto q = balanced_allocation(s, k);
        for (std::size_t c = 0; c < k; ++c)
            if (q[c] > pool[c].size())
                throw ValidationError("size " + std::to_string(s) + " needs " + std::to_string(q[c]) +
                                      " training items of class " + std::to_string(c) + " but only " +
                                      std::to_string(pool[c].size()) + " are available");
    }

    auto shuffled = [&](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        auto p = pool;
        for (auto& members : p) std::shuffle(members.begin(), members.end(), rng);
        return p;
    };
    const auto nested_order = shuffled(cfg.seed);
    const auto yte = ml::select(std::span<const int>(labels), std::span<const std::size_t>(split.test));

    std::vector<CurveRow> rows(curve.sizes.size());
    detail::for_each_parallel(curve.sizes.size(), cfg.jobs, [&](std::size_t r) {
        const auto s = curve.sizes[r];
        const auto order = curve.nested ? nested_order : shuffled(cfg.seed + 0x51ed27ULL * (s + 1));
        const auto q = balanced_allocation(s, k);
        std::vector<std::size_t> train;
        for (std::size_t c = 0; c < k; ++c) train.insert(train.end(), order[c].begin(), order[c].begin() + q[c]);
        std::sort(train.begin(), train.end());
        const auto ytr = ml::select(std::span<const int>(labels), std::span<const std::size_t>(train));

        auto score = [&](const std::vector<std::string>& cols, const SoftLabels* sl) {
            const auto a = assemble(t, cols, sl, 0, train);
            const auto b = assemble(t, cols, sl, 0, split.test);
            const auto m = ml::TrainedClassifier::fit(cfg.model, a.x, ytr, k, cfg.seed, a.passthrough);
            return ml::evaluate(yte, m.predict(b.x), k);
        };
        rows[r].size = s;
        rows[r].features = score(codes, nullptr);
        if (soft) {
            rows[r].soft = score({}, soft);
            rows[r].hybrid = score(codes, soft);
        }
    });
    return rows;
}

/// size, then <mode>_<metric> for each available mode.
inline void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows) {
    const bool with_soft = !rows.empty() && rows.front().soft.has_value();
    std::vector<std::string> fields{"size"};
    std::vector<std::string> modes{"features"};
    if (with_soft) modes.insert(modes.end(), {"soft", "hybrid"});
    for (const auto& m : modes)
        for (auto name : ml::kMetricNames) fields.push_back(m + "_" + name);
    csv::write_row(os, fields);
    for (const auto& r : rows) {
        fields = {std::to_string(r.size)};
        auto put = [&](const ml::Metrics& m) {
            for (std::size_t i = 0; i < ml::kMetricNames.size(); ++i)
                fields.push_back(text::format_double(ml::metric_value(m, i)));
        };
        put(r.features);
        if (with_soft) {
            put(*r.soft);
            put(*r.hybrid);
        }
        csv::write_row(os, fields);
    }
}

} // namespace readlab
