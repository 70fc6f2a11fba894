#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "readlab/readlab.hpp"

namespace fs = std::filesystem;
using namespace readlab;

namespace {

fs::path data_dir() {
    const char* env = std::getenv("READLAB_DATA_DIR");
    return env && *env ? fs::path(env) : fs::path("data");
}

/// Writes to a file, or to stdout for "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw Error("cannot write '" + path + "'");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct ModelOptions {
    std::string model = "logreg";
    double C = 1.0;
    std::string penalty = "l2";
    std::size_t n_trees = 800;
    int max_depth = -1;
    std::string max_features = "sqrt";
    std::string grid_path;

    void add(CLI::App* app) {
        app->add_option("--model", model, "Secondary predictor: logreg or rf")->capture_default_str();
        app->add_option("--C", C, "Inverse regularization strength (logreg)")->capture_default_str();
        app->add_option("--penalty", penalty, "l1 or l2 (logreg)")->capture_default_str();
        app->add_option("--n-trees", n_trees, "Number of trees (rf)")->capture_default_str();
        app->add_option("--max-depth", max_depth, "Tree depth limit, negative for none (rf)")->capture_default_str();
        app->add_option("--max-features", max_features, "sqrt, auto, log2 or all (rf)")->capture_default_str();
        app->add_option("--grid", grid_path, "Grid file (JSON) searched on the validation splits");
    }

    ml::ClassifierSpec spec(unsigned jobs) const {
        ml::ClassifierSpec s;
        s.kind = ml::parse_classifier_kind(model);
        s.logreg.C = C;
        s.logreg.penalty = ml::parse_penalty(penalty);
        s.forest.n_trees = n_trees;
        s.forest.max_depth = max_depth;
        s.forest.max_features = ml::parse_max_features(max_features);
        s.forest.jobs = jobs;
        return s;
    }

    std::vector<ml::ClassifierSpec> grid(const ml::ClassifierSpec& base) const {
        if (grid_path.empty()) return {};
        std::ifstream in(grid_path);
        if (!in) throw UsageError("cannot open grid file '" + grid_path + "'");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(grid_path + ": " + e.what());
        }
        return ml::parse_grid(j, base);
    }
};

HybridMode parse_mode(const std::string& s, bool have_soft) {
    if (s == "auto") return have_soft ? HybridMode::Hybrid : HybridMode::FeaturesOnly;
    if (s == "features") return HybridMode::FeaturesOnly;
    if (s == "soft") return HybridMode::SoftOnly;
    if (s == "hybrid") return HybridMode::Hybrid;
    throw UsageError("unknown mode '" + s + "' (expected auto, features, soft or hybrid)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"readlab: readability features, topic models and hybrid evaluation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "readlab 0.1.0");

    // extract
    auto* ex = app.add_subcommand("extract", "Compute a feature set for an annotated corpus");
    std::string ex_ann, ex_lex, ex_lda, ex_set = "T1", ex_out = "-", ex_stop;
    unsigned ex_jobs = 1;
    ex->add_option("--annotations", ex_ann, "Annotation JSON")->required();
    ex->add_option("--lexicons", ex_lex, "Directory with aoa.csv and subtlex.csv (default $READLAB_DATA_DIR/lexicons)");
    ex->add_option("--lda-models", ex_lda, "Directory with {W,B,O}{50,100,150,200}.json (default $READLAB_DATA_DIR/lda)");
    ex->add_option("--set", ex_set, "Feature set (T1..P3) or a branch/subgroup name")->capture_default_str();
    ex->add_option("--out", ex_out, "Output CSV, - for stdout")->capture_default_str();
    ex->add_option("--stopwords", ex_stop, "Stopword list for topic inference (default: built-in English list)");
    ex->add_option("--jobs", ex_jobs, "Documents extracted in parallel")->check(CLI::PositiveNumber);

    // lda-train
    auto* lt = app.add_subcommand("lda-train", "Train a topic model on a tokenized corpus");
    std::string lt_corpus, lt_out, lt_stop;
    std::size_t lt_topics = 0;
    bool lt_pre = false;
    lda::Hyperparameters hp;
    lt->add_option("--corpus", lt_corpus, "One whitespace-tokenized document per line")->required();
    lt->add_option("--topics", lt_topics, "Number of topics")->required();
    lt->add_option("--out", lt_out, "Model JSON")->required();
    lt->add_option("--passes", hp.passes)->capture_default_str();
    lt->add_option("--batch-size", hp.batch_size)->capture_default_str();
    lt->add_option("--tau0", hp.tau0)->capture_default_str();
    lt->add_option("--kappa", hp.kappa)->capture_default_str();
    lt->add_option("--alpha", hp.alpha, "Document prior, 0 for 1/K")->capture_default_str();
    lt->add_option("--eta", hp.eta, "Topic prior, 0 for 1/K")->capture_default_str();
    lt->add_option("--seed", hp.seed)->capture_default_str();
    lt->add_flag("--preprocess", lt_pre, "Apply the token filter (alphanumeric, length >= 3, stopwords) first");
    lt->add_option("--stopwords", lt_stop, "Stopword list used with --preprocess");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Cross-validate a classifier on features and/or soft labels");
    std::string ev_feat, ev_soft, ev_report = "-", ev_set, ev_mode = "auto", ev_pred;
    std::size_t ev_folds = 5;
    std::uint64_t ev_seed = 0;
    unsigned ev_jobs = 1;
    ModelOptions ev_model;
    ev->add_option("--features", ev_feat, "Feature CSV from extract")->required();
    ev->add_option("--soft-labels", ev_soft, "Soft-label CSV (doc_id,fold,split,p_0..p_{K-1})");
    ev->add_option("--set", ev_set, "Restrict to a feature set (default: every column)");
    ev->add_option("--mode", ev_mode, "auto, features, soft or hybrid")->capture_default_str();
    ev->add_option("--folds", ev_folds)->capture_default_str();
    ev->add_option("--seed", ev_seed)->capture_default_str();
    ev->add_option("--report", ev_report, "Report JSON, - for stdout")->capture_default_str();
    ev->add_option("--predictions", ev_pred, "Optional per-fold test predictions CSV");
    ev->add_option("--jobs", ev_jobs, "Folds evaluated in parallel")->check(CLI::PositiveNumber);
    ev_model.add(ev);

    // curve
    auto* cu = app.add_subcommand("curve", "Accuracy against balanced training-set size on a fixed test split");
    std::string cu_feat, cu_soft, cu_out = "-", cu_set, cu_sizes = "50:750:50";
    std::size_t cu_folds = 5;
    std::uint64_t cu_seed = 0;
    unsigned cu_jobs = 1;
    bool cu_nested = false;
    ModelOptions cu_model;
    cu->add_option("--features", cu_feat, "Feature CSV from extract")->required();
    cu->add_option("--soft-labels", cu_soft, "Soft-label CSV; adds soft-only and hybrid columns");
    cu->add_option("--set", cu_set, "Restrict to a feature set (default: every column)");
    cu->add_option("--sizes", cu_sizes, "start:stop:step or a comma list")->capture_default_str();
    cu->add_flag("--nested", cu_nested, "Grow one sample instead of drawing each size independently");
    cu->add_option("--folds", cu_folds)->capture_default_str();
    cu->add_option("--seed", cu_seed)->capture_default_str();
    cu->add_option("--out", cu_out, "Output CSV, - for stdout")->capture_default_str();
    cu->add_option("--jobs", cu_jobs, "Sizes evaluated in parallel")->check(CLI::PositiveNumber);
    cu_model.add(cu);

    // folds
    auto* fo = app.add_subcommand("folds", "Print the stratified fold assignment (doc_id,fold,split)");
    std::string fo_feat, fo_out = "-";
    std::size_t fo_folds = 5;
    std::uint64_t fo_seed = 0;
    fo->add_option("--features", fo_feat, "Feature CSV from extract")->required();
    fo->add_option("--folds", fo_folds)->capture_default_str();
    fo->add_option("--seed", fo_seed)->capture_default_str();
    fo->add_option("--out", fo_out)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*ex) {
            const auto codes = resolve_set(ex_set);
            const auto groups = subgroups_of(codes);
            const auto ds = load_annotations(ex_ann);
            FeatureExtractor fx;
            const fs::path lex = ex_lex.empty() ? data_dir() / "lexicons" : fs::path(ex_lex);
            const fs::path mod = ex_lda.empty() ? data_dir() / "lda" : fs::path(ex_lda);
            if (groups.count("PsyF")) fx.aoa = AoaLexicon::load((lex / "aoa.csv").string());
            if (groups.count("WorF")) fx.subtlex = SubtlexLexicon::load((lex / "subtlex.csv").string());
            std::vector<TopicFamily> families;
            for (auto f : kTopicFamilies)
                if (groups.count(family_subgroup(f))) families.push_back(f);
            if (!families.empty()) fx.adsem = AdSemConfig::load(mod, families);
            if (!ex_stop.empty()) fx.adsem.stopwords = StopwordList::load(ex_stop);
            const auto rows = fx.extract_all(ds, codes, ex_jobs);
            Output out(ex_out);
            FeatureTable::from_vectors(codes, rows).write_csv(out.stream());
        } else if (*lt) {
            if (lt_topics < 2) throw UsageError("--topics must be at least 2");
            auto corpus = lda::read_corpus(lt_corpus);
            if (lt_pre) {
                const auto sw = lt_stop.empty() ? StopwordList::english() : StopwordList::load(lt_stop);
                for (auto& doc : corpus) doc = preprocess_tokens({doc.begin(), doc.end()}, sw);
            }
            const auto model = lda::train(corpus, lt_topics, hp);
            model.save(lt_out);
            const auto& hist = model.perplexity_history();
            for (std::size_t i = 0; i < hist.size(); ++i)
                std::cerr << "pass " << i + 1 << " perplexity " << text::format_double(hist[i]) << '\n';
        } else if (*ev) {
            const auto table = FeatureTable::load(ev_feat);
            HybridConfig cfg;
            cfg.set_name = ev_set;
            cfg.model = ev_model.spec(1);
            cfg.grid = ev_model.grid(cfg.model);
            cfg.folds = ev_folds;
            cfg.seed = ev_seed;
            cfg.jobs = ev_jobs;
            const auto folds = ml::stratified_folds(table.require_labels(), ev_folds, ev_seed);
            std::optional<SoftLabels> soft;
            if (!ev_soft.empty()) soft = SoftLabels::load(ev_soft, table.doc_ids, folds);
            const auto mode = parse_mode(ev_mode, soft.has_value());
            const auto res = run_hybrid(table, soft ? &*soft : nullptr, cfg, mode);
            if (res.grid) std::cerr << "grid: " << res.grid->to_json().dump() << '\n';
            Output out(ev_report);
            out.stream() << res.report.to_json().dump(2) << '\n';
            if (!ev_pred.empty()) {
                Output p(ev_pred);
                write_predictions_csv(p.stream(), res.predictions);
            }
        } else if (*cu) {
            const auto table = FeatureTable::load(cu_feat);
            HybridConfig cfg;
            cfg.set_name = cu_set;
            cfg.model = cu_model.spec(1);
            cfg.folds = cu_folds;
            cfg.seed = cu_seed;
            cfg.jobs = cu_jobs;
            if (!cu_model.grid_path.empty()) throw UsageError("curve does not take --grid; pass fixed hyperparameters");
            CurveConfig cc;
            cc.sizes = parse_sizes(cu_sizes);
            cc.nested = cu_nested;
            const auto folds = ml::stratified_folds(table.require_labels(), cu_folds, cu_seed);
            std::optional<SoftLabels> soft;
            if (!cu_soft.empty()) soft = SoftLabels::load(cu_soft, table.doc_ids, folds);
            const auto rows = data_size_curve(table, soft ? &*soft : nullptr, cfg, cc);
            Output out(cu_out);
            write_curve_csv(out.stream(), rows);
        } else if (*fo) {
            const auto table = FeatureTable::load(fo_feat);
            const auto folds = ml::stratified_folds(table.require_labels(), fo_folds, fo_seed);
            Output out(fo_out);
            csv::write_row(out.stream(), {"doc_id", "fold", "split"});
            for (std::size_t f = 0; f < folds.size(); ++f) {
                auto emit = [&](const std::vector<std::size_t>& idx, const char* split) {
                    for (auto i : idx) csv::write_row(out.stream(), {table.doc_ids[i], std::to_string(f), split});
                };
                emit(folds[f].train, "train");
                emit(folds[f].val, "val");
                emit(folds[f].test, "test");
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
