#include "debsum/labeling.hpp"

#include <algorithm>
#include <cmath>

#include "debsum/error.hpp"

namespace debsum {

namespace {

// (N_cell / N) * log2(N * N_cell / (row * col)); zero cells contribute nothing.
double cell_term(double cell, double n, double row, double col) {
    if (cell == 0.0) return 0.0;
    return cell / n * std::log2(n * cell / (row * col));
}

// Scores equal up to floating-point noise must tie, so that tie-breaking does
// not depend on how the counts were accumulated.
long long score_key(double score) { return std::llround(score * 1e12); }

const std::vector<std::string>& terms_of(const SentenceTerms& terms, const std::string& sentence_id) {
    static const std::vector<std::string> none;
    const auto it = terms.find(sentence_id);
    return it == terms.end() ? none : it->second;
}

}  // namespace

std::string_view to_string(LabelMethod method) {
    switch (method) {
        case LabelMethod::SharedTerm: return "shared";
        case LabelMethod::TfIdf: return "tfidf";
        case LabelMethod::MI: return "mi";
    }
    return "?";
}

LabelMethod label_method_from_string(std::string_view text) {
    if (text == "shared") return LabelMethod::SharedTerm;
    if (text == "tfidf") return LabelMethod::TfIdf;
    if (text == "mi") return LabelMethod::MI;
    throw ConfigError("unknown labeling method '" + std::string(text) + "' (expected shared|tfidf|mi)");
}

double mutual_information(const ContingencyCounts& c) {
    if (c.total() == 0) throw ComputationError("mutual information: all-zero contingency table");
    const double n = static_cast<double>(c.total());
    const double n11 = static_cast<double>(c.n11), n10 = static_cast<double>(c.n10);
    const double n01 = static_cast<double>(c.n01), n00 = static_cast<double>(c.n00);
    const double n1_ = static_cast<double>(c.n1dot()), n_1 = static_cast<double>(c.ndot1());
    const double n0_ = static_cast<double>(c.n0dot()), n_0 = static_cast<double>(c.ndot0());
    const double mi = cell_term(n11, n, n1_, n_1) + cell_term(n01, n, n0_, n_1) + cell_term(n10, n, n1_, n_0) +
                      cell_term(n00, n, n0_, n_0);
    return std::max(mi, 0.0);
}

LabelCandidate shared_term_label(const LabelingCluster& cluster) {
    if (!cluster.shared_term) {
        throw ComputationError("cluster '" + cluster.id +
                               "' has no shared term; label it with tf-idf or mutual information instead");
    }
    return {*cluster.shared_term, 1.0, LabelMethod::SharedTerm, std::nullopt};
}

std::vector<LabelCandidate> tfidf_labels(const std::vector<LabelingCluster>& clusters, const SentenceTerms& terms,
                                         const std::set<std::string>& stopwords) {
    if (clusters.empty()) throw ComputationError("tf-idf labeling needs at least one cluster");
    std::vector<std::map<std::string, long long>> tf(clusters.size());
    std::map<std::string, long long> cluster_freq;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (const auto& sid : clusters[c].members) {
            for (const auto& term : terms_of(terms, sid)) {
                if (!stopwords.contains(term)) ++tf[c][term];
            }
        }
        for (const auto& [term, _] : tf[c]) ++cluster_freq[term];
    }

    const double cluster_count = static_cast<double>(clusters.size());
    std::vector<LabelCandidate> out;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        struct Scored {
            std::string term;
            double score;
            long long tf;
        };
        std::vector<Scored> scored;
        for (const auto& [term, count] : tf[c]) {
            const double idf = std::log(cluster_count / static_cast<double>(cluster_freq.at(term)));
            scored.push_back({term, static_cast<double>(count) * idf, count});
        }
        if (scored.empty()) {
            out.push_back({std::string(kUnlabeled), 0.0, LabelMethod::TfIdf, std::nullopt});
            continue;
        }
        std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
            if (score_key(a.score) != score_key(b.score)) return a.score > b.score;
            if (a.tf != b.tf) return a.tf > b.tf;
            return a.term < b.term;
        });
        LabelCandidate label{scored[0].term, scored[0].score, LabelMethod::TfIdf, std::nullopt};
        if (scored.size() > 1) label.runner_up = std::make_pair(scored[1].term, scored[1].score);
        out.push_back(std::move(label));
    }
    return out;
}

ContingencyCounts contingency_for(const std::string& term, const LabelingCluster& target,
                                  const std::vector<LabelingCluster>& all_clusters, const SentenceTerms& terms) {
    std::set<std::string> universe;
    for (const auto& cluster : all_clusters) universe.insert(cluster.members.begin(), cluster.members.end());
    universe.insert(target.members.begin(), target.members.end());
    const std::set<std::string> inside(target.members.begin(), target.members.end());

    ContingencyCounts counts;
    for (const auto& sid : universe) {
        const auto& sentence_terms = terms_of(terms, sid);
        const bool has = std::find(sentence_terms.begin(), sentence_terms.end(), term) != sentence_terms.end();
        const bool in = inside.contains(sid);
        if (has && in) ++counts.n11;
        else if (has) ++counts.n10;
        else if (in) ++counts.n01;
        else ++counts.n00;
    }
    return counts;
}

LabelCandidate mi_label(const LabelingCluster& target, const std::vector<LabelingCluster>& all_clusters,
                        const SentenceTerms& terms, const std::optional<std::set<std::string>>& candidates) {
    std::set<std::string> pool;
    if (candidates) {
        pool = *candidates;
    } else {
        for (const auto& sid : target.members) {
            for (const auto& term : terms_of(terms, sid)) pool.insert(term);
        }
    }
    if (pool.empty()) return {std::string(kUnlabeled), 0.0, LabelMethod::MI, std::nullopt};

    // Tally presence once over the universe rather than rescanning per term.
    std::set<std::string> universe;
    for (const auto& cluster : all_clusters) universe.insert(cluster.members.begin(), cluster.members.end());
    universe.insert(target.members.begin(), target.members.end());
    const std::set<std::string> inside(target.members.begin(), target.members.end());
    const std::uint64_t n_in = inside.size();
    const std::uint64_t n_out = universe.size() - n_in;

    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> presence;  // term -> (in, out)
    for (const auto& sid : universe) {
        const auto& sentence_terms = terms_of(terms, sid);
        const std::set<std::string> distinct(sentence_terms.begin(), sentence_terms.end());
        const bool in = inside.contains(sid);
        for (const auto& term : distinct) {
            if (!pool.contains(term)) continue;
            auto& p = presence[term];
            (in ? p.first : p.second) += 1;
        }
    }

    struct Scored {
        std::string term;
        double mi;
        std::uint64_t n11;
    };
    std::vector<Scored> scored;
    for (const auto& term : pool) {
        const auto it = presence.find(term);
        const std::uint64_t in = it == presence.end() ? 0 : it->second.first;
        const std::uint64_t out = it == presence.end() ? 0 : it->second.second;
        const ContingencyCounts counts{in, out, n_in - in, n_out - out};
        scored.push_back({term, mutual_information(counts), in});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (score_key(a.mi) != score_key(b.mi)) return a.mi > b.mi;
        if (a.n11 != b.n11) return a.n11 > b.n11;
        return a.term < b.term;
    });
    LabelCandidate label{scored[0].term, scored[0].mi, LabelMethod::MI, std::nullopt};
    if (scored.size() > 1) label.runner_up = std::make_pair(scored[1].term, scored[1].mi);
    return label;
}

}  // namespace debsum
