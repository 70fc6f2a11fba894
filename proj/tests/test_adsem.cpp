#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "readlab/adsem.hpp"
#include "readlab/registry.hpp"

using namespace readlab;
using namespace readlab::testing;

namespace {

SortedTopicList L(std::vector<double> v) { return SortedTopicList{std::move(v)}; }

// Straightforward re-evaluation of the three measures in long double.
struct Oracle {
    static long double richness(const std::vector<double>& p) {
        long double s = 0;
        for (std::size_t i = 0; i < p.size(); ++i) s += static_cast<long double>(p[i]) * (i + 1);
        return s;
    }
    static long double clarity(const std::vector<double>& p) {
        if (p.empty()) return 0;
        long double mx = p[0], s = 0;
        for (double v : p) mx = std::max<long double>(mx, v);
        for (double v : p) s += mx - v;
        return s / p.size();
    }
    static long double noise(const std::vector<double>& p) {
        const auto n = p.size();
        if (n < 2) return 0;
        long double mean = 0;
        for (double v : p) mean += v;
        mean /= n;
        long double m2 = 0, m4 = 0;
        for (double v : p) {
            const long double d = v - mean;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        if (m2 < 1e-12L) return 0;
        return n * m4 / (m2 * m2);
    }
};

const std::vector<std::vector<double>> kTrendLists = {
    {9, 0.5, 0.5}, {6, 2, 1, 0.5, 0.3, 0.2}, {4, 4, 1, 1}, {4, 2, 1, 1, 0.6, 0.4}, {2.5, 1.5, 1.5, 1.5, 1.5, 1.5}};

} // namespace

TEST(Richness, Examples) {
    EXPECT_DOUBLE_EQ(richness(L({9, 0.5, 0.5})), 11.5);
    EXPECT_DOUBLE_EQ(richness(L({1.0})), 1.0);
    EXPECT_DOUBLE_EQ(richness(L({})), 0.0);
}

TEST(Clarity, Examples) {
    EXPECT_NEAR(clarity(L({9, 0.5, 0.5})), 5.667, 1e-3);
    EXPECT_DOUBLE_EQ(clarity(L({0.6})), 0.0);
    EXPECT_DOUBLE_EQ(clarity(L({4, 4, 1, 1})), 1.5);
    EXPECT_DOUBLE_EQ(clarity(L({})), 0.0);
}

TEST(Noise, Examples) {
    EXPECT_DOUBLE_EQ(noise(L({9, 0.5, 0.5})), 1.5);
    EXPECT_NEAR(noise(L({9, 0.5, 0.5})), 1.5003, 5e-4);
    EXPECT_DOUBLE_EQ(noise(L({0.5, 0.5})), 0.0);
    EXPECT_DOUBLE_EQ(noise(L({0.7})), 0.0);
    EXPECT_GT(noise(L({0.6, 0.1, 0.1, 0.1, 0.1})), noise(L({0.2, 0.2, 0.2, 0.2, 0.2})));
}

TEST(TrendLists, ScaledValuesMatchReference) {
    const std::vector<double> rich{115, 177, 190, 204, 325};
    const std::vector<double> clar{170.0 / 3, 130.0 / 3, 15, 25, 25.0 / 3};
    const std::vector<double> nois{1.50, 3.56, 1.00, 3.05, 4.20};
    for (std::size_t i = 0; i < kTrendLists.size(); ++i) {
        const auto l = L(kTrendLists[i]);
        EXPECT_NEAR(10 * richness(l), rich[i], 1e-9 * rich[i]) << i;
        EXPECT_NEAR(10 * clarity(l), clar[i], 1e-9 * clar[i]) << i;
        EXPECT_NEAR(noise(l), nois[i], 0.005) << i;
    }
    for (std::size_t i = 1; i < kTrendLists.size(); ++i) {
        EXPECT_LT(richness(L(kTrendLists[i - 1])), richness(L(kTrendLists[i])));
        EXPECT_GT(clarity(L(kTrendLists[i - 1])), clarity(L(kTrendLists[4]))) << "lowest clarity is list 5";
    }
}

TEST(TopicMeasures, AgreeWithOracleAndInvariants) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> len(0, 12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> theta(static_cast<std::size_t>(len(rng)));
        for (auto& v : theta) v = u(rng);
        const auto l = sorted_list(theta, 0.0);
        EXPECT_TRUE(std::is_sorted(l.probs.rbegin(), l.probs.rend()));
        EXPECT_NEAR(richness(l), static_cast<double>(Oracle::richness(l.probs)), 1e-9);
        EXPECT_NEAR(clarity(l), static_cast<double>(Oracle::clarity(l.probs)), 1e-9);
        EXPECT_NEAR(noise(l), static_cast<double>(Oracle::noise(l.probs)), 1e-9);
        EXPECT_GE(clarity(l), 0.0);
        if (!l.empty()) {
            EXPECT_GE(richness(l) + 1e-12, l.probs.front());
        }
        for (double c : {0.1, 10.0, 3.7}) {
            auto scaled = l;
            for (auto& v : scaled.probs) v *= c;
            EXPECT_NEAR(noise(scaled), noise(l), 1e-9);
        }
    }
}

TEST(AdSemCodes, Naming) {
    EXPECT_EQ(adsem_code('W', "Rich", 50), "WRich05_S");
    EXPECT_EQ(adsem_code('O', "Topc", 200), "OTopc20_S");
    EXPECT_EQ(AdSemConfig::file_name(TopicFamily::WeeBit, 150), "B150.json");
}

TEST(ExtractAdSem, ProducesTheFortyEightCodes) {
    const auto cfg = synthetic_adsem();
    const auto doc = noun_doc({{"apple", "engine", "apple"}, {"river", "stone", "banana"}});
    const auto f = extract_adsem(doc, cfg);
    const auto expected = resolve_set("AdSem");
    ASSERT_EQ(f.size(), 48u);
    for (const auto& c : expected) EXPECT_TRUE(f.count(c)) << c;
    EXPECT_EQ(extract_adsem(doc, cfg), f);
    for (const auto& [code, v] : f) EXPECT_TRUE(std::isfinite(v)) << code;
    EXPECT_GT(f.at("WTopc05_S"), 0.0);
}

TEST(ExtractAdSem, NoEvidenceGivesZeros) {
    const auto cfg = synthetic_adsem();
    for (const auto& doc : {noun_doc({{"the", "a", "zebra"}}), document({})}) {
        const auto f = extract_adsem(doc, cfg);
        ASSERT_EQ(f.size(), 48u);
        for (const auto& [code, v] : f) EXPECT_EQ(v, 0.0) << code;
    }
}

TEST(ExtractAdSem, TopicCountMatchesSortedList) {
    const auto cfg = synthetic_adsem();
    const auto doc = noun_doc({{"cherry", "cherry", "piston"}});
    const auto f = extract_adsem(doc, cfg);
    const auto* m = cfg.model(TopicFamily::OneStop, 100);
    const auto list = sorted_list(m->infer(preprocess_for_lda(doc)));
    EXPECT_EQ(f.at("OTopc10_S"), static_cast<double>(list.size()));
    EXPECT_DOUBLE_EQ(f.at("ORich10_S"), richness(list));
    EXPECT_DOUBLE_EQ(f.at("OClar10_S"), clarity(list));
    EXPECT_DOUBLE_EQ(f.at("ONois10_S"), noise(list));
}

TEST(AdSemConfigLoad, ReadsModelsAndNamesMissingOnes) {
    TempDir dir;
    std::uint64_t seed = 1;
    for (auto k : kTopicSizes) synthetic_model(k, seed++).save(dir.file(AdSemConfig::file_name(TopicFamily::Wikipedia, k)));
    const auto cfg = AdSemConfig::load(dir.path(), {TopicFamily::Wikipedia});
    EXPECT_TRUE(cfg.has_family(TopicFamily::Wikipedia));
    EXPECT_FALSE(cfg.has_family(TopicFamily::WeeBit));
    const auto f = extract_adsem(noun_doc({{"apple"}}), cfg, {TopicFamily::Wikipedia});
    EXPECT_EQ(f.size(), 16u);
    try {
        AdSemConfig::load(dir.path(), {TopicFamily::WeeBit});
        FAIL();
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("WBKF"), std::string::npos) << msg;
        EXPECT_NE(msg.find("BRich05_S"), std::string::npos) << msg;
    }
    EXPECT_THROW(extract_adsem(noun_doc({{"apple"}}), cfg, {TopicFamily::OneStop}), ValidationError);
}
