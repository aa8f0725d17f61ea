#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "debsum/corpus.hpp"

namespace debsum {

enum class Feature { SP, SL, TT, CJ, CosTps, CosCcts, CosTts, CosStt, CB };

inline constexpr std::size_t kRawFeatureCount = 8;
inline constexpr std::array<Feature, 9> kAllFeatures = {
    Feature::SP,     Feature::SL,      Feature::TT,     Feature::CJ, Feature::CosTps,
    Feature::CosCcts, Feature::CosTts, Feature::CosStt, Feature::CB};

std::string_view to_string(Feature feature);
Feature feature_from_string(std::string_view text);  // case-insensitive; throws ConfigError

struct FeatureVector {
    std::array<double, kRawFeatureCount> raw{};
    std::array<double, kRawFeatureCount> normalized{};
    double cb = 0.0;
    bool stt_available = false;

    double raw_value(Feature feature) const;  // CB has no raw form and returns cb
};

struct TopicSignature {
    std::string term;
    double llr = 0.0;
};

struct Embeddings {
    int dim = 0;
    std::map<std::string, Eigen::VectorXd> vectors;
};

/// Plain-text vectors: "token v1 .. vd" per line, optional "count dim" header.
Embeddings load_embeddings(const std::filesystem::path& path);

struct Lexicons {
    std::set<std::string> conjunctive_adverbs;
    std::set<std::string> climate_terms;  // normalized, possibly multiword
    std::set<std::string> stopwords;
    std::optional<Embeddings> embeddings;
};

using TokenCounts = std::map<std::string, long long>;

TokenCounts count_tokens(const std::vector<std::vector<std::string>>& documents,
                         const std::set<std::string>& stopwords = {});

/// Binomial log-likelihood-ratio (-2 log lambda) of one term's occurrence rate in
/// foreground vs background. Always >= 0.
double log_likelihood_ratio(long long fg_count, long long fg_total, long long bg_count,
                            long long bg_total);

/// Terms of the foreground whose LLR reaches `threshold`, sorted by LLR
/// descending then term.
std::vector<TopicSignature> extract_topic_signatures(const TokenCounts& foreground,
                                                     const TokenCounts& background,
                                                     double threshold = 10.83);

/// Raw (unnormalized) feature scores of one sentence.
FeatureVector score_features(const Sentence& sentence, const Comment& comment,
                             const DebateTopic& topic, const Lexicons& lexicons,
                             const std::vector<TopicSignature>& signatures);

/// Raw scores for every sentence of a comment, then min-max normalized within
/// the comment and combined into cb.
std::vector<FeatureVector> score_comment(const Comment& comment, const DebateTopic& topic,
                                         const Lexicons& lexicons,
                                         const std::vector<TopicSignature>& signatures);

/// Top ceil(ratio * n) sentence ids by the chosen feature, reported in
/// position order. Ties favour the earlier sentence.
std::vector<std::string> select_salient(const Comment& comment,
                                        const std::vector<FeatureVector>& scores, Feature feature,
                                        double ratio = 0.2);

}  // namespace debsum
