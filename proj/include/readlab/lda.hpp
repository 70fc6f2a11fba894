#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>
#include <nlohmann/json.hpp>

#include "readlab/csv.hpp"
#include "readlab/error.hpp"

namespace readlab::lda {

/// Dense term ids 0..V-1, assigned in lexicographic term order.
class Vocabulary {
public:
    Vocabulary() = default;

    static Vocabulary build(const std::vector<std::vector<std::string>>& corpus) {
        std::map<std::string, std::size_t> df;
        for (const auto& doc : corpus) {
            std::vector<std::string_view> uniq(doc.begin(), doc.end());
            std::sort(uniq.begin(), uniq.end());
            uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
            for (auto t : uniq) ++df[std::string(t)];
        }
        Vocabulary v;
        for (auto& [term, count] : df) {
            v.ids_.emplace(term, v.terms_.size());
            v.terms_.push_back(term);
            v.doc_freq_.push_back(count);
        }
        return v;
    }

    static Vocabulary from_terms(std::vector<std::string> terms, std::vector<std::size_t> doc_freq) {
        Vocabulary v;
        if (doc_freq.size() != terms.size()) doc_freq.assign(terms.size(), 0);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (!v.ids_.emplace(terms[i], i).second) throw ValidationError("vocabulary: duplicate term '" + terms[i] + "'");
        }
        v.terms_ = std::move(terms);
        v.doc_freq_ = std::move(doc_freq);
        return v;
    }

    std::optional<std::size_t> id(std::string_view term) const {
        auto it = ids_.find(std::string(term));
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& term(std::size_t id) const { return terms_.at(id); }
    std::size_t doc_freq(std::size_t id) const { return doc_freq_.at(id); }
    std::size_t size() const { return terms_.size(); }
    const std::vector<std::string>& terms() const { return terms_; }
    const std::vector<std::size_t>& doc_freqs() const { return doc_freq_; }

private:
    std::map<std::string, std::size_t, std::less<>> ids_;
    std::vector<std::string> terms_;
    std::vector<std::size_t> doc_freq_;
};

/// Sparse term counts sorted by term id.
struct BagOfWords {
    std::vector<std::size_t> ids;
    std::vector<double> counts;

    double total() const {
        double t = 0.0;
        for (double c : counts) t += c;
        return t;
    }
};

inline BagOfWords to_bag(const Vocabulary& vocab, const std::vector<std::string>& tokens) {
    std::map<std::size_t, double> counts;
    for (const auto& t : tokens) {
        if (auto id = vocab.id(t)) counts[*id] += 1.0;
    }
    BagOfWords bag;
    for (auto [id, c] : counts) {
        bag.ids.push_back(id);
        bag.counts.push_back(c);
    }
    return bag;
}

struct Hyperparameters {
    double tau0 = 1.0;
    double kappa = 0.5;
    std::size_t batch_size = 256;
    std::size_t passes = 5;
    double alpha = 0.0; ///< symmetric document prior; 0 means 1/K
    double eta = 0.0;   ///< symmetric topic prior; 0 means 1/K
    std::size_t max_inner_iterations = 100;
    double inner_tolerance = 1e-3;
    std::uint64_t seed = 0;
};

/// Result of the document-level E-step.
struct DocumentPosterior {
    std::vector<double> gamma;
    std::vector<double> exp_elog_theta;
    std::vector<double> phi_norm; // one per bag entry
};

class LdaModel {
public:
    LdaModel() = default;

    LdaModel(std::size_t topics, Vocabulary vocab, double alpha, double eta, std::vector<double> lambda)
        : topics_(topics), vocab_(std::move(vocab)), alpha_(alpha), eta_(eta), lambda_(std::move(lambda)) {
        if (topics_ < 2) throw ValidationError("LDA: topic count must be >= 2");
        if (lambda_.size() != topics_ * vocab_.size()) throw ValidationError("LDA: lambda has wrong shape");
        if (!(alpha_ > 0.0) || !(eta_ > 0.0)) throw ValidationError("LDA: priors must be positive");
        refresh();
    }

    std::size_t topic_count() const { return topics_; }
    std::size_t vocabulary_size() const { return vocab_.size(); }
    const Vocabulary& vocabulary() const { return vocab_; }
    double alpha() const { return alpha_; }
    double eta() const { return eta_; }
    const Hyperparameters& hyperparameters() const { return hyper_; }
    const std::vector<double>& perplexity_history() const { return perplexity_; }

    /// Normalized topic-word probability.
    double topic_word(std::size_t k, std::size_t w) const { return lambda_[k * V() + w] / lambda_sum_[k]; }

    std::vector<double> topic_row(std::size_t k) const {
        std::vector<double> row(V());
        for (std::size_t w = 0; w < V(); ++w) row[w] = topic_word(k, w);
        return row;
    }

    /// Number of tokens that map to a vocabulary term.
    std::size_t known_token_count(const std::vector<std::string>& tokens) const {
        std::size_t n = 0;
        for (const auto& t : tokens) n += vocab_.id(t) ? 1 : 0;
        return n;
    }

    /// Variational E-step for one document. Pure given the current topics.
    DocumentPosterior e_step(const BagOfWords& bag) const {
        const std::size_t K = topics_;
        DocumentPosterior post;
        post.gamma.assign(K, alpha_ + bag.total() / static_cast<double>(K));
        post.exp_elog_theta.assign(K, 0.0);
        post.phi_norm.assign(bag.ids.size(), 0.0);

        std::vector<double> last(K);
        for (std::size_t iter = 0; iter < hyper_.max_inner_iterations; ++iter) {
            exp_elog(post.gamma, post.exp_elog_theta);
            compute_phi_norm(bag, post);
            last = post.gamma;
            for (std::size_t k = 0; k < K; ++k) {
                double acc = 0.0;
                for (std::size_t j = 0; j < bag.ids.size(); ++j)
                    acc += bag.counts[j] / post.phi_norm[j] * exp_elog_beta_[k * V() + bag.ids[j]];
                post.gamma[k] = alpha_ + post.exp_elog_theta[k] * acc;
            }
            double change = 0.0;
            for (std::size_t k = 0; k < K; ++k) change += std::abs(post.gamma[k] - last[k]);
            if (change / static_cast<double>(K) < hyper_.inner_tolerance) break;
        }
        exp_elog(post.gamma, post.exp_elog_theta);
        compute_phi_norm(bag, post);
        return post;
    }

    /// Posterior mean topic proportions. Unknown tokens are ignored; a
    /// document without known tokens gets the normalized prior.
    std::vector<double> infer(const std::vector<std::string>& tokens) const {
        return infer_bag(to_bag(vocab_, tokens));
    }

    std::vector<double> infer_bag(const BagOfWords& bag) const {
        auto post = e_step(bag);
        double sum = 0.0;
        for (double g : post.gamma) sum += g;
        for (double& g : post.gamma) g /= sum;
        return post.gamma;
    }

    /// exp(-loglik / tokens) of the corpus under inferred proportions.
    double perplexity(std::span<const BagOfWords> corpus) const {
        double loglik = 0.0, tokens = 0.0;
        for (const auto& bag : corpus) {
            const auto theta = infer_bag(bag);
            for (std::size_t j = 0; j < bag.ids.size(); ++j) {
                double p = 0.0;
                for (std::size_t k = 0; k < topics_; ++k) p += theta[k] * topic_word(k, bag.ids[j]);
                loglik += bag.counts[j] * std::log(std::max(p, 1e-300));
                tokens += bag.counts[j];
            }
        }
        return tokens > 0.0 ? std::exp(-loglik / tokens) : 1.0;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["format"] = "readlab-lda";
        j["version"] = 1;
        j["topics"] = topics_;
        j["alpha"] = alpha_;
        j["eta"] = eta_;
        j["hyperparameters"] = {{"tau0", hyper_.tau0},
                                {"kappa", hyper_.kappa},
                                {"batch_size", hyper_.batch_size},
                                {"passes", hyper_.passes},
                                {"seed", hyper_.seed}};
        j["vocabulary"] = vocab_.terms();
        j["doc_freq"] = vocab_.doc_freqs();
        auto rows = nlohmann::json::array();
        for (std::size_t k = 0; k < topics_; ++k)
            rows.push_back(std::vector<double>(lambda_.begin() + static_cast<std::ptrdiff_t>(k * V()),
                                               lambda_.begin() + static_cast<std::ptrdiff_t>((k + 1) * V())));
        j["lambda"] = std::move(rows);
        j["perplexity"] = perplexity_;
        return j;
    }

    static LdaModel from_json(const nlohmann::json& j) {
        try {
            if (j.at("format") != "readlab-lda") throw ValidationError("not an LDA model file");
            if (j.at("version").get<int>() != 1) throw ValidationError("unsupported LDA model version");
            const auto K = j.at("topics").get<std::size_t>();
            auto vocab = Vocabulary::from_terms(j.at("vocabulary").get<std::vector<std::string>>(),
                                                j.at("doc_freq").get<std::vector<std::size_t>>());
            std::vector<double> lambda;
            lambda.reserve(K * vocab.size());
            const auto& rows = j.at("lambda");
            if (rows.size() != K) throw ValidationError("LDA model: lambda row count != topics");
            for (const auto& row : rows) {
                auto r = row.get<std::vector<double>>();
                if (r.size() != vocab.size()) throw ValidationError("LDA model: lambda row width != vocabulary");
                lambda.insert(lambda.end(), r.begin(), r.end());
            }
            LdaModel m(K, std::move(vocab), j.at("alpha").get<double>(), j.at("eta").get<double>(), std::move(lambda));
            if (j.contains("hyperparameters")) {
                const auto& h = j.at("hyperparameters");
                m.hyper_.tau0 = h.value("tau0", m.hyper_.tau0);
                m.hyper_.kappa = h.value("kappa", m.hyper_.kappa);
                m.hyper_.batch_size = h.value("batch_size", m.hyper_.batch_size);
                m.hyper_.passes = h.value("passes", m.hyper_.passes);
                m.hyper_.seed = h.value("seed", m.hyper_.seed);
            }
            m.hyper_.alpha = m.alpha_;
            m.hyper_.eta = m.eta_;
            if (j.contains("perplexity")) m.perplexity_ = j.at("perplexity").get<std::vector<double>>();
            return m;
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("LDA model: ") + e.what());
        }
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write '" + path + "'");
        out << to_json().dump() << '\n';
    }

    static LdaModel load(const std::string& path) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(csv::read_file(path));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("LDA model '" + path + "': " + e.what());
        }
        return from_json(j);
    }

private:
    friend LdaModel train(const std::vector<std::vector<std::string>>&, std::size_t, const Hyperparameters&);

    std::size_t V() const { return vocab_.size(); }

    static void exp_elog(const std::vector<double>& params, std::vector<double>& out) {
        double sum = 0.0;
        for (double p : params) sum += p;
        const double psi_sum = boost::math::digamma(sum);
        out.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) out[i] = std::exp(boost::math::digamma(params[i]) - psi_sum);
    }

    void compute_phi_norm(const BagOfWords& bag, DocumentPosterior& post) const {
        for (std::size_t j = 0; j < bag.ids.size(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < topics_; ++k) s += post.exp_elog_theta[k] * exp_elog_beta_[k * V() + bag.ids[j]];
            post.phi_norm[j] = s + 1e-100;
        }
    }

    void refresh() {
        lambda_sum_.assign(topics_, 0.0);
        exp_elog_beta_.assign(lambda_.size(), 0.0);
        std::vector<double> row(V()), out(V());
        for (std::size_t k = 0; k < topics_; ++k) {
            std::copy_n(lambda_.begin() + static_cast<std::ptrdiff_t>(k * V()), V(), row.begin());
            for (double x : row) lambda_sum_[k] += x;
            exp_elog(row, out);
            std::copy(out.begin(), out.end(), exp_elog_beta_.begin() + static_cast<std::ptrdiff_t>(k * V()));
        }
    }

    std::size_t topics_ = 0;
    Vocabulary vocab_;
    double alpha_ = 0.0;
    double eta_ = 0.0;
    std::vector<double> lambda_;        // K x V variational topic parameters
    std::vector<double> lambda_sum_;    // row sums of lambda_
    std::vector<double> exp_elog_beta_; // exp(E[log beta]), K x V
    Hyperparameters hyper_;
    std::vector<double> perplexity_;
};

/// Online variational Bayes for LDA: minibatch E-steps followed by a
/// stochastic natural-gradient step on the topic parameters with step
/// size (tau0 + t)^-kappa. Training corpus perplexity is recorded after
/// every pass.
inline LdaModel train(const std::vector<std::vector<std::string>>& corpus, std::size_t topics,
                      const Hyperparameters& hp) {
    if (topics < 2) throw UsageError("LDA: topic count must be >= 2");
    if (hp.batch_size == 0) throw UsageError("LDA: batch size must be positive");
    auto vocab = Vocabulary::build(corpus);
    if (vocab.size() == 0) throw ValidationError("LDA: empty vocabulary (every token was filtered out)");

    const std::size_t K = topics, V = vocab.size();
    const double alpha = hp.alpha > 0.0 ? hp.alpha : 1.0 / static_cast<double>(K);
    const double eta = hp.eta > 0.0 ? hp.eta : 1.0 / static_cast<double>(K);

    std::vector<BagOfWords> bags;
    bags.reserve(corpus.size());
    for (const auto& doc : corpus) bags.push_back(to_bag(vocab, doc));

    std::mt19937_64 rng(hp.seed);
    std::gamma_distribution<double> init(100.0, 0.01);
    std::vector<double> lambda(K * V);
    for (double& x : lambda) x = init(rng);

    LdaModel model(K, std::move(vocab), alpha, eta, std::move(lambda));
    model.hyper_ = hp;
    model.hyper_.alpha = alpha;
    model.hyper_.eta = eta;

    const double D = static_cast<double>(bags.size());
    std::size_t updates = 0;
    std::vector<double> sstats(K * V);
    for (std::size_t pass = 0; pass < hp.passes; ++pass) {
        for (std::size_t start = 0; start < bags.size(); start += hp.batch_size) {
            const std::size_t end = std::min(bags.size(), start + hp.batch_size);
            std::fill(sstats.begin(), sstats.end(), 0.0);
            for (std::size_t d = start; d < end; ++d) {
                const auto& bag = bags[d];
                const auto post = model.e_step(bag);
                for (std::size_t j = 0; j < bag.ids.size(); ++j) {
                    const double w = bag.counts[j] / post.phi_norm[j];
                    for (std::size_t k = 0; k < K; ++k) {
                        const auto idx = k * V + bag.ids[j];
                        sstats[idx] += post.exp_elog_theta[k] * w * model.exp_elog_beta_[idx];
                    }
                }
            }
            const double rho = std::pow(hp.tau0 + static_cast<double>(updates), -hp.kappa);
            const double scale = D / static_cast<double>(end - start);
            for (std::size_t i = 0; i < model.lambda_.size(); ++i)
                model.lambda_[i] = (1.0 - rho) * model.lambda_[i] + rho * (eta + scale * sstats[i]);
            model.refresh();
            ++updates;
        }
        model.perplexity_.push_back(model.perplexity(bags));
    }
    return model;
}

/// One whitespace-tokenized document per line.
inline std::vector<std::vector<std::string>> read_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus '" + path + "'");
    std::vector<std::vector<std::string>> corpus;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::vector<std::string> doc;
        std::string tok;
        while (ss >> tok) doc.push_back(tok);
        corpus.push_back(std::move(doc));
    }
    return corpus;
}

} // namespace readlab::lda
