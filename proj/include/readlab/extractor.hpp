#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "readlab/adsem.hpp"
#include "readlab/annotation.hpp"
#include "readlab/discourse.hpp"
#include "readlab/error.hpp"
#include "readlab/lexicons.hpp"
#include "readlab/lexsem.hpp"
#include "readlab/registry.hpp"
#include "readlab/shallow.hpp"
#include "readlab/syntax.hpp"

namespace readlab {

struct FeatureVector {
    std::string doc_id;
    std::optional<int> label;
    std::vector<double> values; ///< aligned with the extractor's code list
};

/// Computes any subset of the catalog for annotated documents. Lexicons and
/// topic models are only required when a requested code depends on them.
class FeatureExtractor {
public:
    std::optional<AoaLexicon> aoa;
    std::optional<SubtlexLexicon> subtlex;
    AdSemConfig adsem;

    /// Throws if a resource needed by `codes` is missing.
    void check_resources(const std::vector<std::string>& codes) const {
        const auto groups = subgroups_of(codes);
        if (groups.count("PsyF") && !aoa) throw ValidationError("subgroup PsyF needs an AoA lexicon");
        if (groups.count("WorF") && !subtlex) throw ValidationError("subgroup WorF needs a SubtlexUS lexicon");
        for (auto f : kTopicFamilies) {
            if (groups.count(family_subgroup(f)) && !adsem.has_family(f))
                throw ValidationError("subgroup " + family_subgroup(f) + " needs the " +
                                      std::string(1, family_letter(f)) + "{50,100,150,200} topic models");
        }
    }

    FeatureMap extract_map(const AnnotatedDocument& doc, const std::set<std::string>& groups) const {
        FeatureMap all;
        auto merge = [&](FeatureMap m) { all.merge(m); };
        std::vector<TopicFamily> families;
        for (auto f : kTopicFamilies)
            if (groups.count(family_subgroup(f))) families.push_back(f);
        if (!families.empty()) merge(extract_adsem(doc, adsem, families));
        if (groups.count("EnDF")) merge(extract_endf(doc));
        if (groups.count("EnGF")) merge(extract_engf(doc));
        if (groups.count("PhrF")) merge(extract_phrf(doc));
        if (groups.count("TrSF")) merge(extract_trsf(doc));
        if (groups.count("POSF")) merge(extract_posf(doc));
        if (groups.count("VarF")) merge(extract_varf(doc));
        if (groups.count("TTRF")) merge(extract_ttrf(doc));
        if (groups.count("PsyF")) merge(extract_psyf(doc, *aoa));
        if (groups.count("WorF")) merge(extract_worf(doc, *subtlex));
        if (groups.count("ShaF") || groups.count("TraF")) {
            const auto counts = surface_counts(doc);
            if (groups.count("ShaF")) merge(shallow_features(counts));
            if (groups.count("TraF")) merge(traditional_formulas(counts));
        }
        return all;
    }

    FeatureVector extract(const AnnotatedDocument& doc, const std::vector<std::string>& codes) const {
        const auto all = extract_map(doc, subgroups_of(codes));
        FeatureVector v{doc.doc_id, doc.label, {}};
        v.values.reserve(codes.size());
        for (const auto& c : codes) {
            auto it = all.find(c);
            if (it == all.end()) throw Error("feature " + c + " was not produced for " + doc.doc_id);
            v.values.push_back(it->second);
        }
        return v;
    }

    /// Extracts every document; output order follows the dataset regardless
    /// of `jobs`.
    std::vector<FeatureVector> extract_all(const Dataset& ds, const std::vector<std::string>& codes,
                                           unsigned jobs = 1) const {
        check_resources(codes);
        std::vector<FeatureVector> out(ds.documents.size());
        jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(ds.documents.size())));
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t i = next++; i < ds.documents.size(); i = next++) {
                try {
                    out[i] = extract(ds.documents[i], codes);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = ds.documents.size();
                }
            }
        };
        if (jobs == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
        if (failure) std::rethrow_exception(failure);
        return out;
    }
};

} // namespace readlab
