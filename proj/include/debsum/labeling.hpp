#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace debsum {

enum class LabelMethod { SharedTerm, TfIdf, MI };

std::string_view to_string(LabelMethod method);
LabelMethod label_method_from_string(std::string_view text);  // "shared" | "tfidf" | "mi"

inline constexpr std::string_view kUnlabeled = "(unlabeled)";

/// 2x2 sentence counts for one (term, cluster) pair. The first index is term
/// presence, the second cluster membership.
struct ContingencyCounts {
    std::uint64_t n11 = 0;  // has term, in cluster
    std::uint64_t n10 = 0;  // has term, outside
    std::uint64_t n01 = 0;  // lacks term, in cluster
    std::uint64_t n00 = 0;  // lacks term, outside

    std::uint64_t n1dot() const { return n11 + n10; }
    std::uint64_t ndot1() const { return n11 + n01; }
    std::uint64_t n0dot() const { return n01 + n00; }
    std::uint64_t ndot0() const { return n10 + n00; }
    std::uint64_t total() const { return n11 + n10 + n01 + n00; }
};

/// Mutual information in bits between term presence and cluster membership
/// under maximum-likelihood cell probabilities. Empty cells contribute 0.
double mutual_information(const ContingencyCounts& counts);

struct LabelCandidate {
    std::string term;
    double score = 0.0;
    LabelMethod method = LabelMethod::SharedTerm;
    std::optional<std::pair<std::string, double>> runner_up;
};

/// A cluster as seen by the labelers: its member sentence ids and, for
/// clusters built around one term, that term.
struct LabelingCluster {
    std::string id;
    std::optional<std::string> shared_term;
    std::vector<std::string> members;
};

/// Terms (canonical, repeated per occurrence) of every sentence in play.
using SentenceTerms = std::map<std::string, std::vector<std::string>>;

/// The cluster's defining term with score 1. Clusters without one (X-means
/// output) are rejected.
LabelCandidate shared_term_label(const LabelingCluster& cluster);

/// One tf-idf label per cluster: tf counts term occurrences inside the
/// cluster, idf = ln(C / clusters containing the term). Ties go to higher tf,
/// then the lexicographically smaller term. Stopwords are never candidates.
std::vector<LabelCandidate> tfidf_labels(const std::vector<LabelingCluster>& clusters,
                                         const SentenceTerms& terms,
                                         const std::set<std::string>& stopwords = {});

/// Contingency counts of `term` against membership in `target`, over the
/// union of all clusters' sentences (each sentence counted once).
ContingencyCounts contingency_for(const std::string& term, const LabelingCluster& target,
                                  const std::vector<LabelingCluster>& all_clusters, const SentenceTerms& terms);

/// Highest-MI term among `candidates` (default: every term found in the
/// target's sentences). Ties go to higher n11, then the smaller term.
LabelCandidate mi_label(const LabelingCluster& target, const std::vector<LabelingCluster>& all_clusters,
                        const SentenceTerms& terms,
                        const std::optional<std::set<std::string>>& candidates = std::nullopt);

}  // namespace debsum
