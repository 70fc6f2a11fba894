// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "readlab/readlab.hpp"
#include "synthetic.hpp"

using namespace readlab;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

std::string fmt(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << std::fixed << v;
    return os.str();
}

AnnotatedDocument make_doc(const std::vector<std::vector<Token>>& sents, std::vector<EntityMention> mentions = {}) {
    AnnotatedDocument d;
    d.doc_id = "x";
    for (const auto& s : sents) {
        Sentence se;
        se.tokens = s;
        d.sentences.push_back(std::move(se));
    }
    d.mentions = std::move(mentions);
    return d;
}

Token token(std::string text, Upos upos) {
    Token t;
    t.text = text;
    t.lemma = std::move(text);
    t.upos = upos;
    return t;
}

std::string random_word(std::mt19937_64& rng, std::size_t vocab = 0) {
    static const std::string letters = "abcdefghijklmnopqrstuvwxyz";
    if (vocab) return "w" + std::to_string(std::uniform_int_distribution<std::size_t>(0, vocab - 1)(rng));
    std::uniform_int_distribution<int> len(1, 12), ch(0, 25);
    std::string w;
    for (int i = len(rng); i > 0; --i) w.push_back(letters[static_cast<std::size_t>(ch(rng))]);
    return w;
}

// ---------------------------------------------------------------------------

Outcome reference_lists() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::vector<double>> lists = {
        {9, 0.5, 0.5}, {6, 2, 1, 0.5, 0.3, 0.2}, {4, 4, 1, 1}, {4, 2, 1, 1, 0.6, 0.4}, {2.5, 1.5, 1.5, 1.5, 1.5, 1.5}};
    const std::vector<double> rich{115, 177, 190, 204, 325};
    const std::vector<double> clar_exact{170.0 / 3, 130.0 / 3, 15, 25, 25.0 / 3};
    const std::vector<std::string> clar_display{"56.7", "43.3", "15.0", "25.0", "8.34"};
    std::string shown;
    for (std::size_t i = 0; i < lists.size(); ++i) {
        const SortedTopicList l{lists[i]};
        const double r = 10 * richness(l), c = 10 * clarity(l);
        o.require(std::abs(r - rich[i]) <= 1e-9 * rich[i], "richness list " + std::to_string(i + 1) + " = " + fmt(r, 6));
        o.require(std::abs(c - clar_exact[i]) <= 1e-9 * clar_exact[i],
                  "clarity list " + std::to_string(i + 1) + " = " + fmt(c, 6));
        shown += (i ? "/" : "") + fmt(c, i == 4 ? 3 : 2);
        if (fmt(c, clar_display[i].size() - clar_display[i].find('.') - 1) != clar_display[i])
            std::cout << "NOTE reference list " << i + 1 << ": clarity x10 = " << fmt(c, 6) << ", displayed reference "
                      << clar_display[i] << " is not a rounding of the value computed from the displayed list\n";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs < 1.0, "runtime " + fmt(secs) + " s");
    if (o.pass) o.detail = "richness 115/177/190/204/325, clarity " + shown + ", " + fmt(secs * 1e3, 3) + " ms";
    return o;
}

Outcome noise_properties() {
    Outcome o;
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.001, 1.0);
    double worst = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> p(static_cast<std::size_t>(std::uniform_int_distribution<int>(2, 20)(rng)));
        for (auto& v : p) v = u(rng);
        const SortedTopicList l{p};
        for (double c : {0.1, 1.0, 10.0}) {
            auto s = l;
            for (auto& v : s.probs) v *= c;
            worst = std::max(worst, std::abs(noise(s) - noise(l)));
        }
    }
    o.require(worst < 1e-9, "scale invariance deviation " + std::to_string(worst));
    const double flat = noise(SortedTopicList{{0.2, 0.2, 0.2, 0.2, 0.2}});
    o.require(flat == 0.0 && noise(SortedTopicList{{0.5}}) == 0.0 && noise(SortedTopicList{{}}) == 0.0,
              "zero-variance guard");
    const double heavy = noise(SortedTopicList{{0.6, 0.1, 0.1, 0.1, 0.1}});
    o.require(heavy > flat, "heavy-tailed list not noisier than uniform");
    if (o.pass)
        o.detail = "max |noise(cx)-noise(x)| = " + std::to_string(worst) + " over 3000 cases; noise([.6,.1x4]) = " +
                   fmt(heavy) + " > 0";
    return o;
}

Outcome registry_audit() {
    Outcome o;
    const auto& r = registry();
    o.require(r.size() == 255, "size " + std::to_string(r.size()));
    std::map<std::string, int> counts;
    for (const auto& d : r) {
        ++counts[d.subgroup];
        o.require(valid_feature_code(d.code, d.kind), "bad code " + d.code);
    }
    const std::vector<int> expected{16, 16, 16, 6, 22, 48, 6, 55, 12, 5, 15, 24, 8, 6};
    for (std::size_t i = 0; i < kSubgroups.size(); ++i)
        o.require(counts[std::string(kSubgroups[i])] == expected[i], std::string(kSubgroups[i]) + " size");
    auto as_set = [](const std::vector<std::string>& v) { return std::set<std::string>(v.begin(), v.end()); };
    auto minus = [&](const char* a, const char* b) {
        auto s = as_set(resolve_set(a));
        for (const auto& c : resolve_set(b)) s.erase(c);
        return s;
    };
    o.require(as_set(resolve_set("T2")) == minus("T1", "AdSem"), "T2 != T1 \\ AdSem");
    o.require(as_set(resolve_set("T3")) == minus("T1", "Disco"), "T3 != T1 \\ Disco");
    auto p3 = as_set(resolve_set("P2"));
    for (const auto& c : resolve_set("VarF")) p3.insert(c);
    o.require(as_set(resolve_set("P3")) == p3, "P3 != P2 u VarF");
    if (o.pass) o.detail = "255 codes, 14 subgroup sizes, naming rules, T2/T3/P3 algebra";
    return o;
}

Outcome formula_oracles() {
    Outcome o;
    std::mt19937_64 rng(2718);
    const int n = 200;
    int checked = 0;

    // Readability formulas.
    for (int trial = 0; trial < n; ++trial) {
        const int S = std::uniform_int_distribution<int>(1, 5)(rng);
        std::vector<std::vector<Token>> sents(static_cast<std::size_t>(S));
        std::vector<int> syl, let;
        for (auto& s : sents) {
            for (int i = std::uniform_int_distribution<int>(1, 15)(rng); i > 0; --i) {
                const auto w = random_word(rng);
                s.push_back(token(w, Upos::NOUN));
                syl.push_back(static_cast<int>(count_syllables(w)));
                let.push_back(static_cast<int>(w.size()));
            }
            s.push_back(token(".", Upos::PUNCT));
        }
        const auto got = extract_traf(make_doc(sents));
        for (const auto& [code, v] : oracle::formulas(syl, let, S))
            o.require(close(got.at(code), v, 1e-9), code + " trial " + std::to_string(trial));
    }
    checked += n;

    // Type-token ratios.
    for (int trial = 0; trial < n; ++trial) {
        std::vector<Token> s;
        std::vector<std::string> words;
        const std::size_t vocab = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
        for (int i = std::uniform_int_distribution<int>(2, 60)(rng); i > 0; --i) {
            words.push_back(random_word(rng, vocab));
            s.push_back(token(words.back(), Upos::NOUN));
        }
        log::Sink quiet = [](const std::string&) {};
        const auto previous = log::set_sink(quiet);
        const auto got = extract_ttrf(make_doc({s}));
        log::set_sink(previous);
        for (const auto& [code, v] : oracle::ttr(words))
            o.require(close(got.at(code), v, 1e-9), code + " trial " + std::to_string(trial));
    }
    checked += n;

    // Variation ratios.
    const std::vector<std::pair<std::string, Upos>> classes{
        {"No", Upos::NOUN}, {"Ve", Upos::VERB}, {"Aj", Upos::ADJ}, {"Av", Upos::ADV}};
    for (int trial = 0; trial < n; ++trial) {
        std::vector<Token> s;
        std::map<Upos, std::vector<std::string>> by_class;
        const Upos tags[] = {Upos::NOUN, Upos::VERB, Upos::ADJ, Upos::ADV, Upos::DET, Upos::PUNCT};
        for (int i = std::uniform_int_distribution<int>(1, 40)(rng); i > 0; --i) {
            const auto w = random_word(rng, 12);
            const auto t = tags[std::uniform_int_distribution<int>(0, 5)(rng)];
            s.push_back(token(w, t));
            by_class[t].push_back(w);
        }
        const auto got = extract_varf(make_doc({s}));
        for (const auto& [abbrev, upos] : classes) {
            const auto v = oracle::variation(by_class[upos]);
            o.require(close(got.at("Simp" + abbrev + "V_S"), v[0], 1e-9) &&
                          close(got.at("Squa" + abbrev + "V_S"), v[1], 1e-9) &&
                          close(got.at("Corr" + abbrev + "V_S"), v[2], 1e-9),
                      "variation " + abbrev + " trial " + std::to_string(trial));
        }
    }
    checked += n;

    // Entity-grid transition ratios.
    for (int trial = 0; trial < n; ++trial) {
        const int S = std::uniform_int_distribution<int>(1, 6)(rng), E = std::uniform_int_distribution<int>(0, 5)(rng);
        std::vector<std::string> grid(static_cast<std::size_t>(S), std::string(static_cast<std::size_t>(E), 'N'));
        std::vector<EntityMention> mentions;
        for (int e = 0; e < E; ++e) {
            const int forced = std::uniform_int_distribution<int>(0, S - 1)(rng);
            for (int s = 0; s < S; ++s) {
                int cell = std::uniform_int_distribution<int>(0, 3)(rng);
                if (s == forced && cell == 3) cell = 0;
                if (cell == 3) continue;
                const Role role = cell == 0 ? Role::S : cell == 1 ? Role::O : Role::X;
                grid[static_cast<std::size_t>(s)][static_cast<std::size_t>(e)] = "SOX"[cell];
                mentions.push_back({"E" + std::to_string(e), static_cast<std::size_t>(s), 0, 1, role});
                if (role != Role::X) mentions.push_back({"E" + std::to_string(e), static_cast<std::size_t>(s), 0, 1, Role::X});
            }
        }
        std::vector<std::vector<Token>> sents(static_cast<std::size_t>(S), {token("w", Upos::NOUN)});
        const auto got = transition_ratios(build_grid(make_doc(sents, mentions)));
        for (const auto& [code, v] : oracle::transitions(grid))
            o.require(close(got.at(code), v, 1e-9), code + " trial " + std::to_string(trial));
    }
    checked += n;

    // Evaluation metrics.
    for (int trial = 0; trial < n; ++trial) {
        const int k = std::uniform_int_distribution<int>(2, 6)(rng);
        const int len = std::uniform_int_distribution<int>(1, 30)(rng);
        std::uniform_int_distribution<int> lab(0, k - 1);
        std::vector<int> t, p;
        for (int i = 0; i < len; ++i) {
            t.push_back(lab(rng));
            p.push_back(trial % 4 == 0 ? t.back() : lab(rng));
        }
        const auto m = ml::evaluate(t, p, static_cast<std::size_t>(k));
        const auto r = oracle::metrics(t, p, k);
        o.require(close(m.accuracy, r.accuracy, 1e-9) && close(m.f1, r.f1, 1e-9) &&
                      close(m.precision, r.precision, 1e-9) && close(m.recall, r.recall, 1e-9) &&
                      close(m.qwk, r.qwk, 1e-9),
                  "metrics trial " + std::to_string(trial));
    }
    checked += n;
    if (o.pass) o.detail = std::to_string(checked) + " randomized instances (" + std::to_string(n) + " per family) within 1e-9";
    return o;
}

Outcome classifier_numerics() {
    Outcome o;
    std::mt19937_64 rng(77);
    std::normal_distribution<double> z(0, 1);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = static_cast<std::size_t>(std::uniform_int_distribution<int>(2, 4)(rng));
        const std::size_t n = static_cast<std::size_t>(std::uniform_int_distribution<int>(3, 12)(rng));
        const std::size_t d = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 5)(rng));
        ml::Matrix x(n, d);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) x(i, j) = z(rng);
            y[i] = static_cast<int>(i % k);
        }
        std::vector<double> theta(k * (d + 1));
        for (auto& t : theta) t = z(rng);
        const auto pen = trial % 2 ? ml::Penalty::L1 : ml::Penalty::L2;
        const double C = 0.3 + std::abs(z(rng));
        std::vector<double> g;
        ml::logreg_smooth_objective(x, y, k, theta, pen, C, &g);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const double h = 1e-6 * std::max(1.0, std::abs(theta[i]));
            auto up = theta, dn = theta;
            up[i] += h;
            dn[i] -= h;
            const double fd = (ml::logreg_smooth_objective(x, y, k, up, pen, C) -
                               ml::logreg_smooth_objective(x, y, k, dn, pen, C)) /
                              (2 * h);
            worst = std::max(worst, std::abs(g[i] - fd) / std::max(1.0, std::abs(fd)));
        }
    }
    o.require(worst < 1e-5, "gradient relative error " + std::to_string(worst));

    ml::Matrix xor_x(4, 2);
    const std::vector<int> xor_y{0, 1, 1, 0};
    xor_x(1, 1) = xor_x(2, 0) = xor_x(3, 0) = xor_x(3, 1) = 1;
    ml::ForestParams p;
    p.n_trees = 100;
    p.max_depth = 2;
    p.max_features = ml::MaxFeatures::All;
    p.bootstrap = false;
    const auto f = ml::RandomForest::fit(xor_x, xor_y, 2, p, 5);
    int correct = 0;
    for (std::size_t i = 0; i < 4; ++i) correct += f.predict(xor_x.row(i)) == xor_y[i];
    o.require(correct == 4, "XOR training accuracy " + std::to_string(correct) + "/4");

    ml::Matrix bx(300, 6);
    std::vector<int> by(300);
    for (std::size_t i = 0; i < 300; ++i) {
        by[i] = static_cast<int>(i % 3);
        for (std::size_t j = 0; j < 6; ++j) bx(i, j) = z(rng) + (j == 0 ? by[i] : 0);
    }
    ml::ForestParams q;
    q.n_trees = 200;
    const auto serial = ml::RandomForest::fit(bx, by, 3, q, 42);
    q.jobs = 8;
    const auto parallel = ml::RandomForest::fit(bx, by, 3, q, 42);
    o.require(serial.same_model(parallel) && serial.to_json().dump() == parallel.to_json().dump(),
              "parallel forest differs from serial");
    if (o.pass)
        o.detail = "max gradient rel. error " + std::to_string(worst) + ", XOR 4/4, 200-tree forest identical with 1 and 8 jobs";
    return o;
}

double mean_accuracy(const FeatureTable& t, const SoftLabels* soft, const HybridConfig& cfg, HybridMode mode) {
    return run_hybrid(t, soft, cfg, mode).report.mean().accuracy;
}

Outcome hybrid_property() {
    Outcome o;
    double gain = 0, uniform_delta = 0;
    std::string per_seed;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto c = testing::complementary_corpus(400, seed);
        HybridConfig cfg;
        cfg.set_name = "";
        cfg.seed = seed;
        cfg.jobs = 5;
        const auto soft = testing::shared_soft_labels(c, cfg.folds, seed);
        const double f = mean_accuracy(c.table, &soft, cfg, HybridMode::FeaturesOnly);
        const double s = mean_accuracy(c.table, &soft, cfg, HybridMode::SoftOnly);
        const double h = mean_accuracy(c.table, &soft, cfg, HybridMode::Hybrid);
        const auto uni = SoftLabels::uniform(c.table.doc_ids, 3);
        const double hu = mean_accuracy(c.table, &uni, cfg, HybridMode::Hybrid);
        gain += (h - std::max(f, s)) / 5;
        uniform_delta += (hu - f) / 5;
        per_seed += (seed > 1 ? " " : "") + fmt(f, 3) + "/" + fmt(s, 3) + "/" + fmt(h, 3);
    }
    o.require(gain >= 0.05, "mean hybrid gain " + fmt(gain));
    o.require(std::abs(uniform_delta) <= 0.05, "uniform soft labels shift accuracy by " + fmt(uniform_delta));
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("features/soft/hybrid per seed ") + per_seed +
                "; mean gain " + fmt(gain) + ", uniform delta " + fmt(uniform_delta);
    return o;
}

Outcome data_size_curve_property() {
    Outcome o;
    const auto c = testing::complementary_corpus(400, 11);
    HybridConfig cfg;
    cfg.set_name = "";
    cfg.seed = 11;
    cfg.jobs = 8;
    const auto soft = testing::shared_soft_labels(c, cfg.folds, cfg.seed);
    const auto a = data_size_curve(c.table, &soft, cfg);
    const auto b = data_size_curve(c.table, &soft, cfg);
    std::ostringstream sa, sb;
    write_curve_csv(sa, a);
    write_curve_csv(sb, b);
    o.require(a.size() == 15, std::to_string(a.size()) + " rows");
    o.require(sa.str() == sb.str(), "curve differs between runs");
    double min_gap = 1;
    for (const auto& r : a) {
        const double gap = r.hybrid->accuracy - r.features.accuracy;
        min_gap = std::min(min_gap, gap);
        o.require(gap >= 0, "size " + std::to_string(r.size) + ": hybrid " + fmt(r.hybrid->accuracy) +
                                " < features " + fmt(r.features.accuracy));
    }
    if (o.pass)
        o.detail = "15 rows (50..750), identical on rerun, smallest hybrid-minus-features gap " + fmt(min_gap) +
                   " (size 50: " + fmt(a.front().features.accuracy, 3) + " -> " + fmt(a.front().hybrid->accuracy, 3) + ")";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"reference topic lists (richness, clarity)", reference_lists},
        {"noise property suite", noise_properties},
        {"registry audit", registry_audit},
        {"formula oracles", formula_oracles},
        {"classifier numerics", classifier_numerics},
        {"hybrid complementarity", hybrid_property},
        {"data-size curve", data_size_curve_property},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome out;
        try {
            out = run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        failures += out.pass ? 0 : 1;
        std::cout << (out.pass ? "PASS " : "FAIL ") << name << ": " << out.detail << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failures ? 1 : 0;
}
