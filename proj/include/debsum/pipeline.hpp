#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "debsum/alignment.hpp"
#include "debsum/annotate.hpp"
#include "debsum/chart.hpp"
#include "debsum/corpus.hpp"
#include "debsum/labeling.hpp"
#include "debsum/rouge.hpp"
#include "debsum/saliency.hpp"
#include "debsum/term_clustering.hpp"

namespace debsum {

enum class ClusteringMethod { Term, XMeans };

std::string_view to_string(ClusteringMethod method);
ClusteringMethod clustering_method_from_string(std::string_view text);

struct PipelineConfig {
    std::filesystem::path corpus_path;
    std::optional<std::filesystem::path> gold_path;
    std::filesystem::path gazetteer_path;
    std::filesystem::path synonyms_path;
    std::optional<std::filesystem::path> embeddings_path;
    std::filesystem::path stopwords_path;
    std::filesystem::path adverbs_path;

    Feature feature = Feature::SP;
    double ratio = 0.2;
    double signature_threshold = 10.83;
    ClusteringMethod clustering_method = ClusteringMethod::Term;
    std::optional<LabelMethod> labeling_method;  // unset: shared for term, mi for xmeans
    bool mi_token_candidates = false;            // MI over non-stopword tokens instead of terms
    double alignment_threshold = 0.6;
    double variance_target = 0.95;
    long k_min = 2;
    long k_max = 25;
    std::uint64_t seed = 42;
    std::filesystem::path output_dir = "out";
    int jobs = 1;
    RougeAggregate rouge_aggregate = RougeAggregate::Mean;

    std::optional<std::string> annotator_url;  // http://host:port/path
    int annotator_timeout_ms = 2000;

    LabelMethod effective_labeling() const;
};

/// Directory holding the shipped stopword and conjunctive-adverb lists.
std::filesystem::path default_data_dir();

PipelineConfig default_config();

/// Applies keys of a JSON config on top of `base`. Relative paths resolve
/// against `base_dir`.
PipelineConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                                PipelineConfig base = default_config());
nlohmann::json config_to_json(const PipelineConfig& config);

/// Range checks plus existence of every input file; throws ConfigError.
void validate_config(const PipelineConfig& config, bool needs_corpus = true);

struct Resources {
    std::vector<DebateTopic> corpus;
    std::optional<GoldSet> gold;
    Gazetteer gazetteer;
    SynonymTable synonyms;
    Lexicons lexicons;
    std::vector<std::string> vocabulary;  // canonical gazetteer terms
};

Resources load_resources(const PipelineConfig& config, bool needs_corpus = true);

// ---- stage documents -------------------------------------------------------

struct AnnotatedCorpus {
    std::vector<DebateTopic> topics;
    std::map<std::string, std::vector<TermAnnotation>> annotations;  // by sentence id
};

AnnotatedCorpus annotate_corpus(const Resources& resources, const PipelineConfig& config);

struct SideClusters {
    std::vector<LabelingCluster> clusters;
    std::vector<std::string> unclustered;  // salient sentences with no term
    std::vector<std::string> excluded;     // left out of the vector space (zero vectors)
    std::optional<double> bic;
    std::vector<LabelCandidate> labels;    // parallel to clusters once labeled
};

struct TopicState {
    std::string id;
    std::string title;
    std::array<std::vector<AnnotatedSentence>, 2> salient;  // indexed by Side
    std::array<SideClusters, 2> sides;
    std::optional<Alignment> alignment;
};

struct PipelineState {
    std::string stage;
    std::uint64_t seed = 0;
    Feature feature = Feature::SP;
    std::optional<ClusteringMethod> clustering;
    std::optional<LabelMethod> labeling;
    std::vector<TopicState> topics;
};

nlohmann::json annotated_to_json(const AnnotatedCorpus& annotated, std::uint64_t seed);
AnnotatedCorpus annotated_from_json(const nlohmann::json& doc);
nlohmann::json state_to_json(const PipelineState& state);
PipelineState state_from_json(const nlohmann::json& doc);

PipelineState select_stage(const AnnotatedCorpus& annotated, const Resources& resources,
                           const PipelineConfig& config);
void cluster_stage(PipelineState& state, const Resources& resources, const PipelineConfig& config);
void label_stage(PipelineState& state, const Resources& resources, const PipelineConfig& config);
void align_stage(PipelineState& state, const Resources& resources, const PipelineConfig& config);
std::vector<ChartSummary> chart_stage(const PipelineState& state);

/// Salient sentence ids for every comment under one feature.
std::map<std::string, std::vector<std::string>> select_all(const AnnotatedCorpus& annotated,
                                                           const Resources& resources, Feature feature,
                                                           double ratio, double signature_threshold);

/// Per-feature ROUGE table against the gold annotations, averaged over
/// comments: feature -> variant -> {recall, precision, f1}.
nlohmann::json rouge_report(const Resources& resources, const PipelineConfig& config);

/// Silhouette of both clustering methods on the same reduced vector space,
/// per topic and side and pooled over the whole corpus.
nlohmann::json silhouette_report(const PipelineState& selected, const Resources& resources,
                                 const PipelineConfig& config);

nlohmann::json label_report(const PipelineState& state);
nlohmann::json alignment_report(const PipelineState& state);

/// Mann-Whitney U between two score lists plus Krippendorff's alpha over a
/// coder x item matrix (null entries are missing ratings).
nlohmann::json stats_report(const nlohmann::json& ratings_doc);

struct Artifact {
    std::string name;
    std::string content;
};

/// Writes all artifacts into `dir`; if any write fails, removes the ones
/// already written and rethrows.
void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts);

std::string sha256_hex(std::string_view data);

std::string file_stem_for(std::string_view topic_id);

/// Full run: load, annotate, select, cluster, label, align, chart, evaluate.
/// Returns the artifacts (already written to config.output_dir).
std::vector<Artifact> run_pipeline(const PipelineConfig& config);

/// Serializes with sorted keys and a trailing newline.
std::string dump_json(const nlohmann::json& doc);

}  // namespace debsum
