#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "readlab/extractor.hpp"
#include "readlab/registry.hpp"

using namespace readlab;
using namespace readlab::testing;

namespace {

FeatureExtractor full_extractor() {
    FeatureExtractor fx;
    fx.aoa = AoaLexicon::parse(kAoaCsv);
    fx.subtlex = SubtlexLexicon::parse(kSubtlexCsv);
    fx.adsem = synthetic_adsem();
    return fx;
}

Dataset corpus(std::size_t n) {
    Dataset ds;
    ds.class_count = 3;
    for (std::size_t i = 0; i < n; ++i)
        ds.documents.push_back(rich_doc("d" + std::to_string(i), static_cast<int>(i % 3), static_cast<int>(i % 4)));
    return ds;
}

} // namespace

TEST(Extractor, EverySubgroupEmitsItsCodes) {
    const auto fx = full_extractor();
    const auto doc = rich_doc("x", 0, 1);
    for (auto sg : kSubgroups) {
        const auto m = fx.extract_map(doc, {std::string(sg)});
        const auto expected = resolve_set(sg);
        EXPECT_EQ(m.size(), expected.size()) << sg;
        for (const auto& c : expected) EXPECT_TRUE(m.count(c)) << sg << " " << c;
    }
}

TEST(Extractor, FullCatalog) {
    const auto fx = full_extractor();
    const auto codes = resolve_set("T1");
    const auto v = fx.extract(rich_doc("x", 2), codes);
    EXPECT_EQ(v.doc_id, "x");
    EXPECT_EQ(v.label, 2);
    ASSERT_EQ(v.values.size(), 255u);
    for (std::size_t i = 0; i < codes.size(); ++i) EXPECT_TRUE(std::isfinite(v.values[i])) << codes[i];
    const auto at = [&](std::string_view c) {
        return v.values[static_cast<std::size_t>(std::find(codes.begin(), codes.end(), c) - codes.begin())];
    };
    EXPECT_DOUBLE_EQ(at("to_EntiM_C"), 3);
    EXPECT_DOUBLE_EQ(at("to_NoPhr_C"), 2);
    EXPECT_DOUBLE_EQ(at("to_AAKuW_C"), 4.0 + 3.6 + 3.2);
}

TEST(Extractor, SubsetFollowsRequestedOrder) {
    const auto fx = full_extractor();
    const std::vector<std::string> codes{"SimpTTR_S", "to_EntiM_C"};
    const auto v = fx.extract(rich_doc("x"), codes);
    ASSERT_EQ(v.values.size(), 2u);
    EXPECT_DOUBLE_EQ(v.values[1], 3);
}

TEST(Extractor, JobsDoNotChangeOutput) {
    const auto fx = full_extractor();
    const auto ds = corpus(23);
    const auto codes = resolve_set("T1");
    const auto a = fx.extract_all(ds, codes, 1);
    const auto b = fx.extract_all(ds, codes, 4);
    ASSERT_EQ(a.size(), 23u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].doc_id, "d" + std::to_string(i));
        EXPECT_EQ(a[i].values, b[i].values);
    }
}

TEST(Extractor, MissingResources) {
    FeatureExtractor fx;
    EXPECT_NO_THROW(fx.check_resources(resolve_set("Synta")));
    EXPECT_NO_THROW(fx.extract_all(corpus(3), resolve_set("Disco")));
    try {
        fx.check_resources(resolve_set("E3"));
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("PsyF"), std::string::npos);
    }
    fx.aoa = AoaLexicon{};
    EXPECT_THROW(fx.check_resources(resolve_set("WorF")), ValidationError);
    try {
        fx.check_resources(resolve_set("H1"));
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("WoKF"), std::string::npos);
    }
    EXPECT_THROW(fx.extract_all(corpus(2), resolve_set("T1")), ValidationError);
}
