#include "debsum/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <thread>

#include <openssl/evp.h>

#include "debsum/error.hpp"
#include "debsum/lexicon.hpp"
#include "debsum/linalg.hpp"
#include "debsum/pca.hpp"
#include "debsum/remote_annotator.hpp"
#include "debsum/silhouette.hpp"
#include "debsum/stats.hpp"
#include "debsum/vector_space.hpp"
#include "debsum/xmeans.hpp"

#ifndef DEBSUM_DATA_DIR
#define DEBSUM_DATA_DIR "data"
#endif

namespace debsum {

namespace fs = std::filesystem;
using nlohmann::json;

// ---- config ----------------------------------------------------------------

std::string_view to_string(ClusteringMethod method) {
    return method == ClusteringMethod::Term ? "term" : "xmeans";
}

ClusteringMethod clustering_method_from_string(std::string_view text) {
    if (text == "term") return ClusteringMethod::Term;
    if (text == "xmeans") return ClusteringMethod::XMeans;
    throw ConfigError("unknown clustering method '" + std::string(text) + "' (expected term|xmeans)");
}

LabelMethod PipelineConfig::effective_labeling() const {
    if (labeling_method) return *labeling_method;
    return clustering_method == ClusteringMethod::Term ? LabelMethod::SharedTerm : LabelMethod::MI;
}

fs::path default_data_dir() { return fs::path(DEBSUM_DATA_DIR); }

PipelineConfig default_config() {
    PipelineConfig config;
    config.stopwords_path = default_data_dir() / "stopwords.txt";
    config.adverbs_path = default_data_dir() / "conjunctive_adverbs.txt";
    config.gazetteer_path = default_data_dir() / "climate_terms.txt";
    config.synonyms_path = default_data_dir() / "synonyms.tsv";
    return config;
}

namespace {

fs::path resolve(const fs::path& base, const std::string& value) {
    fs::path p(value);
    return p.is_absolute() || base.empty() ? p : base / p;
}

template <typename T>
T get_as(const json& doc, const char* key) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config: key '") + key + "' has the wrong type");
    }
}

}  // namespace

PipelineConfig config_from_json(const json& doc, const fs::path& base_dir, PipelineConfig c) {
    if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
    static const std::set<std::string> known = {
        "corpus_path",     "gold_path",        "gazetteer_path",     "synonyms_path",   "embeddings_path",
        "stopwords_path",  "adverbs_path",     "feature",            "ratio",           "signature_threshold",
        "clustering_method", "labeling_method", "mi_candidates",     "alignment_threshold", "variance_target",
        "k_min",           "k_max",            "seed",               "output_dir",      "jobs",
        "rouge_aggregate", "annotator_url",    "annotator_timeout_ms"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
    }
    auto path_of = [&](const char* key) { return resolve(base_dir, get_as<std::string>(doc, key)); };
    if (doc.contains("corpus_path")) c.corpus_path = path_of("corpus_path");
    if (doc.contains("gold_path")) {
        if (doc["gold_path"].is_null()) c.gold_path.reset();
        else c.gold_path = path_of("gold_path");
    }
    if (doc.contains("gazetteer_path")) c.gazetteer_path = path_of("gazetteer_path");
    if (doc.contains("synonyms_path")) c.synonyms_path = path_of("synonyms_path");
    if (doc.contains("embeddings_path")) {
        if (doc["embeddings_path"].is_null()) c.embeddings_path.reset();
        else c.embeddings_path = path_of("embeddings_path");
    }
    if (doc.contains("stopwords_path")) c.stopwords_path = path_of("stopwords_path");
    if (doc.contains("adverbs_path")) c.adverbs_path = path_of("adverbs_path");
    if (doc.contains("output_dir")) c.output_dir = path_of("output_dir");
    if (doc.contains("feature")) c.feature = feature_from_string(get_as<std::string>(doc, "feature"));
    if (doc.contains("ratio")) c.ratio = get_as<double>(doc, "ratio");
    if (doc.contains("signature_threshold")) c.signature_threshold = get_as<double>(doc, "signature_threshold");
    if (doc.contains("clustering_method")) {
        c.clustering_method = clustering_method_from_string(get_as<std::string>(doc, "clustering_method"));
    }
    if (doc.contains("labeling_method")) {
        c.labeling_method = label_method_from_string(get_as<std::string>(doc, "labeling_method"));
    }
    if (doc.contains("mi_candidates")) {
        const auto v = get_as<std::string>(doc, "mi_candidates");
        if (v != "terms" && v != "tokens") throw ConfigError("config: mi_candidates must be terms|tokens");
        c.mi_token_candidates = v == "tokens";
    }
    if (doc.contains("alignment_threshold")) c.alignment_threshold = get_as<double>(doc, "alignment_threshold");
    if (doc.contains("variance_target")) c.variance_target = get_as<double>(doc, "variance_target");
    if (doc.contains("k_min")) c.k_min = get_as<long>(doc, "k_min");
    if (doc.contains("k_max")) c.k_max = get_as<long>(doc, "k_max");
    if (doc.contains("seed")) c.seed = get_as<std::uint64_t>(doc, "seed");
    if (doc.contains("jobs")) c.jobs = get_as<int>(doc, "jobs");
    if (doc.contains("rouge_aggregate")) {
        const auto v = get_as<std::string>(doc, "rouge_aggregate");
        if (v == "mean") c.rouge_aggregate = RougeAggregate::Mean;
        else if (v == "max") c.rouge_aggregate = RougeAggregate::Max;
        else throw ConfigError("config: rouge_aggregate must be mean|max");
    }
    if (doc.contains("annotator_url")) {
        if (doc["annotator_url"].is_null()) c.annotator_url.reset();
        else c.annotator_url = get_as<std::string>(doc, "annotator_url");
    }
    if (doc.contains("annotator_timeout_ms")) c.annotator_timeout_ms = get_as<int>(doc, "annotator_timeout_ms");
    return c;
}

json config_to_json(const PipelineConfig& c) {
    auto opt_path = [](const std::optional<fs::path>& p) { return p ? json(p->generic_string()) : json(nullptr); };
    return json{
        {"corpus_path", c.corpus_path.generic_string()},
        {"gold_path", opt_path(c.gold_path)},
        {"gazetteer_path", c.gazetteer_path.generic_string()},
        {"synonyms_path", c.synonyms_path.generic_string()},
        {"embeddings_path", opt_path(c.embeddings_path)},
        {"stopwords_path", c.stopwords_path.generic_string()},
        {"adverbs_path", c.adverbs_path.generic_string()},
        {"feature", std::string(to_string(c.feature))},
        {"ratio", c.ratio},
        {"signature_threshold", c.signature_threshold},
        {"clustering_method", std::string(to_string(c.clustering_method))},
        {"labeling_method", std::string(to_string(c.effective_labeling()))},
        {"mi_candidates", c.mi_token_candidates ? "tokens" : "terms"},
        {"alignment_threshold", c.alignment_threshold},
        {"variance_target", c.variance_target},
        {"k_min", c.k_min},
        {"k_max", c.k_max},
        {"seed", c.seed},
        {"rouge_aggregate", c.rouge_aggregate == RougeAggregate::Mean ? "mean" : "max"},
        {"annotator_url", c.annotator_url ? json(*c.annotator_url) : json(nullptr)},
    };
}

void validate_config(const PipelineConfig& c, bool needs_corpus) {
    auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!in_unit(c.ratio)) throw ConfigError("config: ratio must be in (0, 1]");
    if (!in_unit(c.alignment_threshold)) throw ConfigError("config: alignment_threshold must be in (0, 1]");
    if (!in_unit(c.variance_target)) throw ConfigError("config: variance_target must be in (0, 1]");
    if (!(c.signature_threshold >= 0.0)) throw ConfigError("config: signature_threshold must be >= 0");
    if (c.k_min < 1 || c.k_max < c.k_min) throw ConfigError("config: need 1 <= k_min <= k_max");
    if (c.jobs < 1) throw ConfigError("config: jobs must be >= 1");
    if (c.annotator_timeout_ms < 1) throw ConfigError("config: annotator_timeout_ms must be >= 1");

    auto require = [](const fs::path& p, const char* what) {
        if (p.empty()) throw ConfigError(std::string("config: ") + what + " is not set");
        std::error_code ec;
        if (!fs::is_regular_file(p, ec)) {
            throw ConfigError(std::string("config: ") + what + " '" + p.string() + "' does not exist");
        }
    };
    if (needs_corpus) require(c.corpus_path, "corpus_path");
    if (c.gold_path) require(*c.gold_path, "gold_path");
    require(c.gazetteer_path, "gazetteer_path");
    require(c.synonyms_path, "synonyms_path");
    require(c.stopwords_path, "stopwords_path");
    require(c.adverbs_path, "adverbs_path");
    if (c.embeddings_path) require(*c.embeddings_path, "embeddings_path");
}

Resources load_resources(const PipelineConfig& c, bool needs_corpus) {
    Resources r;
    if (needs_corpus) {
        r.corpus = load_corpus(c.corpus_path);
        if (c.gold_path) r.gold = load_gold(*c.gold_path, r.corpus);
    }
    r.gazetteer = load_gazetteer(c.gazetteer_path);
    r.synonyms = load_synonyms(c.synonyms_path);
    r.lexicons.stopwords = load_token_set(c.stopwords_path);
    r.lexicons.conjunctive_adverbs = load_token_set(c.adverbs_path);
    r.lexicons.climate_terms = r.gazetteer.terms();
    if (c.embeddings_path) r.lexicons.embeddings = load_embeddings(*c.embeddings_path);
    r.vocabulary = canonical_vocabulary(r.gazetteer, r.synonyms);
    return r;
}

// ---- helpers -----------------------------------------------------------------

namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception by
// index is rethrown after all workers finish.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derived_seed(std::uint64_t seed, std::size_t topic, Side side) {
    return splitmix64(seed ^ splitmix64(2 * topic + (side == Side::Agree ? 0 : 1)));
}

template <typename Fn>
auto tagged(const char* stage, Fn&& fn) -> decltype(fn()) {
    const std::string prefix = std::string(stage) + ": ";
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(prefix + e.what());
    } catch (const ComputationError& e) {
        throw ComputationError(prefix + e.what());
    }
}

constexpr std::array<Side, 2> kSides = {Side::Agree, Side::Disagree};

std::size_t idx(Side side) { return side == Side::Agree ? 0 : 1; }

json annotations_to_json(const std::vector<TermAnnotation>& terms) {
    json out = json::array();
    for (const auto& t : terms) out.push_back({{"term", t.term}, {"start", t.start}, {"end", t.end}});
    return out;
}

std::vector<TermAnnotation> annotations_from_json(const json& doc, const std::string& sentence_id) {
    std::vector<TermAnnotation> out;
    for (const auto& t : doc) {
        out.push_back({sentence_id, t.at("term").get<std::string>(), t.at("start").get<std::size_t>(),
                       t.at("end").get<std::size_t>()});
    }
    return out;
}

std::optional<std::tuple<std::string, int, std::string>> parse_url(const std::string& url) {
    const std::string scheme = "http://";
    if (url.rfind(scheme, 0) != 0) return std::nullopt;
    const auto rest = url.substr(scheme.size());
    const auto slash = rest.find('/');
    const auto authority = rest.substr(0, slash);
    const std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
    const auto colon = authority.rfind(':');
    if (colon == std::string::npos) return std::make_tuple(authority, 80, path);
    try {
        return std::make_tuple(authority.substr(0, colon), std::stoi(authority.substr(colon + 1)), path);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace

// ---- annotate --------------------------------------------------------------

AnnotatedCorpus annotate_corpus(const Resources& resources, const PipelineConfig& config) {
    AnnotatedCorpus out;
    out.topics = resources.corpus;
    std::optional<RemoteAnnotator> remote;
    if (config.annotator_url) {
        const auto parts = parse_url(*config.annotator_url);
        if (!parts) throw ConfigError("annotator_url must look like http://host:port/path");
        remote.emplace(std::get<0>(*parts), std::get<1>(*parts), std::get<2>(*parts),
                       std::chrono::milliseconds(config.annotator_timeout_ms), resources.gazetteer);
    }
    for (const auto& topic : out.topics) {
        for (const auto& comment : topic.comments) {
            for (const auto& sentence : comment.sentences) {
                out.annotations[sentence.id] =
                    remote ? remote->annotate(sentence) : annotate_sentence(sentence, resources.gazetteer);
            }
        }
    }
    return out;
}

json annotated_to_json(const AnnotatedCorpus& annotated, std::uint64_t seed) {
    json ann = json::object();
    for (const auto& [id, terms] : annotated.annotations) ann[id] = annotations_to_json(terms);
    return json{{"stage", "annotate"}, {"seed", seed}, {"corpus", corpus_to_json(annotated.topics)},
                {"annotations", ann}};
}

AnnotatedCorpus annotated_from_json(const json& doc) {
    try {
        if (doc.at("stage").get<std::string>() != "annotate") {
            throw ValidationError("expected the output of the annotate stage");
        }
        AnnotatedCorpus out;
        out.topics = parse_corpus(doc.at("corpus"));
        for (const auto& [id, terms] : doc.at("annotations").items()) {
            out.annotations[id] = annotations_from_json(terms, id);
        }
        return out;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("annotated document: ") + e.what());
    }
}

// ---- select ------------------------------------------------------------------

namespace {

std::vector<std::vector<std::string>> topic_documents(const DebateTopic& topic) {
    std::vector<std::vector<std::string>> docs;
    for (const auto& c : topic.comments) {
        for (const auto& s : c.sentences) docs.push_back(s.tokens);
    }
    return docs;
}

// Salient ids per comment for one topic, under every requested feature.
std::map<std::string, std::map<Feature, std::vector<std::string>>> select_topic(
    const DebateTopic& topic, const Resources& resources, const TokenCounts& background,
    const std::vector<Feature>& features, double ratio, double signature_threshold) {
    const auto foreground = count_tokens(topic_documents(topic), resources.lexicons.stopwords);
    std::vector<TopicSignature> signatures;
    if (!foreground.empty()) signatures = extract_topic_signatures(foreground, background, signature_threshold);
    std::map<std::string, std::map<Feature, std::vector<std::string>>> out;
    for (const auto& comment : topic.comments) {
        const auto scores = score_comment(comment, topic, resources.lexicons, signatures);
        for (Feature f : features) out[comment.id][f] = select_salient(comment, scores, f, ratio);
    }
    return out;
}

TokenCounts corpus_background(const std::vector<DebateTopic>& topics, const std::set<std::string>& stopwords) {
    std::vector<std::vector<std::string>> docs;
    for (const auto& t : topics) {
        auto d = topic_documents(t);
        docs.insert(docs.end(), std::make_move_iterator(d.begin()), std::make_move_iterator(d.end()));
    }
    return count_tokens(docs, stopwords);
}

}  // namespace

std::map<std::string, std::vector<std::string>> select_all(const AnnotatedCorpus& annotated,
                                                           const Resources& resources, Feature feature,
                                                           double ratio, double signature_threshold) {
    const auto background = corpus_background(annotated.topics, resources.lexicons.stopwords);
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& topic : annotated.topics) {
        for (auto& [cid, by_feature] :
             select_topic(topic, resources, background, {feature}, ratio, signature_threshold)) {
            out[cid] = std::move(by_feature[feature]);
        }
    }
    return out;
}

PipelineState select_stage(const AnnotatedCorpus& annotated, const Resources& resources,
                           const PipelineConfig& config) {
    PipelineState state;
    state.stage = "select";
    state.seed = config.seed;
    state.feature = config.feature;
    state.topics.resize(annotated.topics.size());
    const auto background = corpus_background(annotated.topics, resources.lexicons.stopwords);

    parallel_for(annotated.topics.size(), config.jobs, [&](std::size_t t) {
        const auto& topic = annotated.topics[t];
        auto selected = select_topic(topic, resources, background, {config.feature}, config.ratio,
                                     config.signature_threshold);
        auto& ts = state.topics[t];
        ts.id = topic.id;
        ts.title = topic.title;
        for (const auto& comment : topic.comments) {
            const auto& ids = selected.at(comment.id).at(config.feature);
            const std::set<std::string> keep(ids.begin(), ids.end());
            for (const auto& s : comment.sentences) {
                if (!keep.contains(s.id)) continue;
                const auto it = annotated.annotations.find(s.id);
                ts.salient[idx(comment.side)].push_back(
                    {s.id, comment.id, comment.side, s.tokens,
                     it == annotated.annotations.end() ? std::vector<TermAnnotation>{} : it->second});
            }
        }
    });
    return state;
}

// ---- cluster -----------------------------------------------------------------

namespace {

std::string cluster_id(const std::string& topic, Side side, const char* prefix, std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%s%02zu", prefix, i);
    return topic + "/" + std::string(to_string(side)) + "/" + buf;
}

struct ReducedSpace {
    std::vector<std::string> ids;
    std::vector<std::string> excluded;
    MatrixX<double> points;  // rows follow ids
    bool degenerate = false;
};

// Term-count vectors -> cosine similarity profiles -> PCA.
std::optional<ReducedSpace> reduce(const std::vector<AnnotatedSentence>& sentences, const Resources& resources,
                                   double variance_target) {
    auto vectors = build_term_vectors(sentences, resources.vocabulary, resources.synonyms);
    ReducedSpace space;
    space.ids = std::move(vectors.ids);
    space.excluded = std::move(vectors.excluded);
    if (space.ids.size() < 2) {
        space.points = MatrixX<double>::Zero(static_cast<Index>(space.ids.size()), 1);
        space.degenerate = true;
        return space;
    }
    const auto similarity = similarity_matrix(vectors.counts);
    auto fit = pca_fit_transform(similarity, variance_target);
    space.degenerate = fit.model.degenerate;
    space.points = std::move(fit.points);
    return space;
}

ClusteringResult<double> run_xmeans(const ReducedSpace& space, const PipelineConfig& config, std::uint64_t seed) {
    const auto n = static_cast<long>(space.ids.size());
    const long k_max = std::min(config.k_max, n);
    const long k_min = std::min(config.k_min, k_max);
    return xmeans(space.points, k_min, k_max, seed);
}

SideClusters term_side(const std::vector<AnnotatedSentence>& sentences, const std::string& topic, Side side,
                       const Resources& resources) {
    SideClusters out;
    const auto raw = cluster_by_shared_term(sentences, side);
    const auto merged = merge_synonymous_clusters(raw.clusters, resources.synonyms);
    out.unclustered = raw.unclustered;
    for (std::size_t i = 0; i < merged.size(); ++i) {
        LabelingCluster c;
        c.id = cluster_id(topic, side, "t", i);
        c.shared_term = merged[i].label;
        c.members.assign(merged[i].members.begin(), merged[i].members.end());
        out.clusters.push_back(std::move(c));
    }
    return out;
}

SideClusters xmeans_side(const std::vector<AnnotatedSentence>& sentences, const std::string& topic, Side side,
                         const Resources& resources, const PipelineConfig& config, std::uint64_t seed) {
    SideClusters out;
    for (const auto& s : sentences) {
        if (s.terms.empty()) out.unclustered.push_back(s.id);
    }
    auto space = reduce(sentences, resources, config.variance_target);
    out.excluded = space->excluded;
    std::erase_if(out.excluded, [&](const std::string& id) {
        return std::find(out.unclustered.begin(), out.unclustered.end(), id) != out.unclustered.end();
    });
    if (space->ids.empty()) return out;
    if (space->degenerate) {
        // One point, or all similarity profiles identical: a single cluster.
        LabelingCluster c{cluster_id(topic, side, "x", 0), std::nullopt, space->ids};
        std::sort(c.members.begin(), c.members.end());
        out.clusters.push_back(std::move(c));
        return out;
    }
    const auto result = run_xmeans(*space, config, seed);
    if (!std::isnan(result.bic)) out.bic = result.bic;
    std::vector<std::vector<std::string>> members(static_cast<std::size_t>(result.k));
    for (std::size_t i = 0; i < space->ids.size(); ++i) {
        members[static_cast<std::size_t>(result.assignments[i])].push_back(space->ids[i]);
    }
    std::size_t next = 0;
    for (auto& m : members) {
        if (m.empty()) continue;
        std::sort(m.begin(), m.end());
        out.clusters.push_back({cluster_id(topic, side, "x", next++), std::nullopt, std::move(m)});
    }
    return out;
}

}  // namespace

void cluster_stage(PipelineState& state, const Resources& resources, const PipelineConfig& config) {
    if (state.stage != "select") throw ValidationError("cluster expects the output of the select stage");
    state.clustering = config.clustering_method;
    parallel_for(state.topics.size(), config.jobs, [&](std::size_t t) {
        auto& topic = state.topics[t];
        for (Side side : kSides) {
            const auto& sentences = topic.salient[idx(side)];
            topic.sides[idx(side)] =
                config.clustering_method == ClusteringMethod::Term
                    ? term_side(sentences, topic.id, side, resources)
                    : xmeans_side(sentences, topic.id, side, resources, config, derived_seed(state.seed, t, side));
        }
    });
    state.stage = "cluster";
}

// ---- label -------------------------------------------------------------------

void label_stage(PipelineState& state, const Resources& resources, const PipelineConfig& config) {
    if (state.stage != "cluster") throw ValidationError("label expects the output of the cluster stage");
    const auto method = config.effective_labeling();
    state.labeling = method;
    parallel_for(state.topics.size(), config.jobs, [&](std::size_t t) {
        auto& topic = state.topics[t];
        for (Side side : kSides) {
            auto& sc = topic.sides[idx(side)];
            sc.labels.clear();
            if (sc.clusters.empty()) continue;
            SentenceTerms terms;
            for (const auto& s : topic.salient[idx(side)]) {
                auto& bag = terms[s.id];
                if (method == LabelMethod::MI && config.mi_token_candidates) {
                    for (const auto& tok : s.tokens) {
                        if (!resources.lexicons.stopwords.contains(tok)) bag.push_back(tok);
                    }
                } else {
                    for (const auto& a : s.terms) bag.push_back(canonical_label(a.term, resources.synonyms));
                }
            }
            switch (method) {
                case LabelMethod::SharedTerm:
                    for (const auto& c : sc.clusters) sc.labels.push_back(shared_term_label(c));
                    break;
                case LabelMethod::TfIdf:
                    sc.labels = tfidf_labels(sc.clusters, terms, resources.lexicons.stopwords);
                    break;
                case LabelMethod::MI:
                    for (const auto& c : sc.clusters) sc.labels.push_back(mi_label(c, sc.clusters, terms));
                    break;
            }
        }
    });
    state.stage = "label";
}

// ---- align / chart -------------------------------------------------------------

void align_stage(PipelineState& state, const Resources& resources, const PipelineConfig& config) {
    if (state.stage != "label") throw ValidationError("align expects the output of the label stage");
    parallel_for(state.topics.size(), config.jobs, [&](std::size_t t) {
        auto& topic = state.topics[t];
        std::array<std::vector<LabeledCluster>, 2> labeled;
        for (Side side : kSides) {
            const auto& sc = topic.sides[idx(side)];
            for (std::size_t i = 0; i < sc.clusters.size(); ++i) {
                labeled[idx(side)].push_back({sc.clusters[i].id, sc.labels.at(i).term});
            }
        }
        topic.alignment = align_clusters(labeled[0], labeled[1], resources.synonyms, config.alignment_threshold);
    });
    state.stage = "align";
}

std::vector<ChartSummary> chart_stage(const PipelineState& state) {
    if (state.stage != "align") throw ValidationError("chart expects the output of the align stage");
    std::vector<ChartSummary> charts;
    for (const auto& topic : state.topics) {
        std::map<std::string, long long> sizes;
        for (const auto& sc : topic.sides) {
            for (const auto& c : sc.clusters) sizes[c.id] = static_cast<long long>(c.members.size());
        }
        auto chart = build_chart(topic.id, topic.alignment ? topic.alignment->pairs : std::vector<AlignedPair>{},
                                 sizes);
        chart.seed = state.seed;
        charts.push_back(std::move(chart));
    }
    return charts;
}

// ---- state (de)serialization ------------------------------------------------------

json state_to_json(const PipelineState& state) {
    json topics = json::array();
    for (const auto& topic : state.topics) {
        json sides = json::object();
        for (Side side : kSides) {
            const auto& sc = topic.sides[idx(side)];
            json salient = json::array();
            for (const auto& s : topic.salient[idx(side)]) {
                salient.push_back({{"id", s.id},
                                   {"comment_id", s.comment_id},
                                   {"tokens", s.tokens},
                                   {"terms", annotations_to_json(s.terms)}});
            }
            json clusters = json::array();
            for (std::size_t i = 0; i < sc.clusters.size(); ++i) {
                const auto& c = sc.clusters[i];
                json jc{{"id", c.id},
                        {"shared_term", c.shared_term ? json(*c.shared_term) : json(nullptr)},
                        {"members", c.members}};
                if (i < sc.labels.size()) {
                    const auto& l = sc.labels[i];
                    jc["label"] = {{"term", l.term},
                                   {"score", l.score},
                                   {"method", std::string(to_string(l.method))},
                                   {"runner_up", l.runner_up ? json{{"term", l.runner_up->first},
                                                                    {"score", l.runner_up->second}}
                                                             : json(nullptr)}};
                }
                clusters.push_back(std::move(jc));
            }
            json js{{"salient", salient}};
            if (state.clustering) {
                js["clusters"] = clusters;
                js["unclustered"] = sc.unclustered;
                js["excluded"] = sc.excluded;
                js["bic"] = sc.bic ? json(*sc.bic) : json(nullptr);
            }
            sides[std::string(to_string(side))] = std::move(js);
        }
        json jt{{"id", topic.id}, {"title", topic.title}, {"sides", sides}};
        if (topic.alignment) {
            json pairs = json::array(), dropped = json::array();
            for (const auto& p : topic.alignment->pairs) {
                pairs.push_back({{"label", p.label},
                                 {"agree_cluster_id", p.agree_cluster_id},
                                 {"disagree_cluster_id", p.disagree_cluster_id},
                                 {"similarity", p.similarity}});
            }
            for (const auto& d : topic.alignment->dropped) {
                dropped.push_back({{"cluster_id", d.cluster_id},
                                   {"label", d.label},
                                   {"side", std::string(to_string(d.side))},
                                   {"best_similarity", d.best_similarity}});
            }
            jt["alignment"] = {{"pairs", pairs}, {"dropped", dropped}};
        }
        topics.push_back(std::move(jt));
    }
    json doc{{"stage", state.stage},
             {"seed", state.seed},
             {"feature", std::string(to_string(state.feature))},
             {"topics", topics}};
    if (state.clustering) doc["clustering_method"] = std::string(to_string(*state.clustering));
    if (state.labeling) doc["labeling_method"] = std::string(to_string(*state.labeling));
    return doc;
}

PipelineState state_from_json(const json& doc) {
    try {
        PipelineState state;
        state.stage = doc.at("stage").get<std::string>();
        static const std::set<std::string> stages = {"select", "cluster", "label", "align"};
        if (!stages.contains(state.stage)) throw ValidationError("unexpected stage '" + state.stage + "'");
        state.seed = doc.at("seed").get<std::uint64_t>();
        state.feature = feature_from_string(doc.at("feature").get<std::string>());
        if (doc.contains("clustering_method")) {
            state.clustering = clustering_method_from_string(doc["clustering_method"].get<std::string>());
        }
        if (doc.contains("labeling_method")) {
            state.labeling = label_method_from_string(doc["labeling_method"].get<std::string>());
        }
        for (const auto& jt : doc.at("topics")) {
            TopicState topic;
            topic.id = jt.at("id").get<std::string>();
            topic.title = jt.at("title").get<std::string>();
            for (Side side : kSides) {
                const auto& js = jt.at("sides").at(std::string(to_string(side)));
                for (const auto& s : js.at("salient")) {
                    const auto id = s.at("id").get<std::string>();
                    topic.salient[idx(side)].push_back({id, s.at("comment_id").get<std::string>(), side,
                                                        s.at("tokens").get<std::vector<std::string>>(),
                                                        annotations_from_json(s.at("terms"), id)});
                }
                auto& sc = topic.sides[idx(side)];
                if (!js.contains("clusters")) continue;
                for (const auto& c : js.at("clusters")) {
                    LabelingCluster lc;
                    lc.id = c.at("id").get<std::string>();
                    if (!c.at("shared_term").is_null()) lc.shared_term = c["shared_term"].get<std::string>();
                    lc.members = c.at("members").get<std::vector<std::string>>();
                    sc.clusters.push_back(std::move(lc));
                    if (c.contains("label")) {
                        const auto& l = c["label"];
                        LabelCandidate cand{l.at("term").get<std::string>(), l.at("score").get<double>(),
                                            label_method_from_string(l.at("method").get<std::string>()),
                                            std::nullopt};
                        if (!l.at("runner_up").is_null()) {
                            cand.runner_up = std::make_pair(l["runner_up"].at("term").get<std::string>(),
                                                            l["runner_up"].at("score").get<double>());
                        }
                        sc.labels.push_back(std::move(cand));
                    }
                }
                sc.unclustered = js.at("unclustered").get<std::vector<std::string>>();
                sc.excluded = js.at("excluded").get<std::vector<std::string>>();
                if (!js.at("bic").is_null()) sc.bic = js["bic"].get<double>();
                if (!sc.labels.empty() && sc.labels.size() != sc.clusters.size()) {
                    throw ValidationError("topic '" + topic.id + "': labels do not match clusters");
                }
            }
            if (jt.contains("alignment")) {
                Alignment a;
                for (const auto& p : jt["alignment"].at("pairs")) {
                    a.pairs.push_back({p.at("label").get<std::string>(), p.at("agree_cluster_id").get<std::string>(),
                                       p.at("disagree_cluster_id").get<std::string>(),
                                       p.at("similarity").get<double>()});
                }
                for (const auto& d : jt["alignment"].at("dropped")) {
                    a.dropped.push_back({d.at("cluster_id").get<std::string>(), d.at("label").get<std::string>(),
                                         side_from_string(d.at("side").get<std::string>()),
                                         d.at("best_similarity").get<double>()});
                }
                topic.alignment = std::move(a);
            }
            state.topics.push_back(std::move(topic));
        }
        return state;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("stage document: ") + e.what());
    }
}

// ---- reports -------------------------------------------------------------------

json rouge_report(const Resources& resources, const PipelineConfig& config) {
    if (!resources.gold) throw ConfigError("rouge evaluation needs gold_path");
    AnnotatedCorpus bare;
    bare.topics = resources.corpus;
    std::vector<Feature> features;
    for (Feature f : kAllFeatures) {
        if (f == Feature::CosStt && !resources.lexicons.embeddings) continue;
        features.push_back(f);
    }

    std::map<std::string, const Comment*> comments;
    std::map<std::string, const Sentence*> sentences;
    for (const auto& t : resources.corpus) {
        for (const auto& c : t.comments) {
            comments[c.id] = &c;
            for (const auto& s : c.sentences) sentences[s.id] = &s;
        }
    }
    const auto background = corpus_background(resources.corpus, resources.lexicons.stopwords);
    std::map<std::string, std::map<Feature, std::vector<std::string>>> selected;
    for (const auto& topic : resources.corpus) {
        for (auto& [cid, v] :
             select_topic(topic, resources, background, features, config.ratio, config.signature_threshold)) {
            selected[cid] = std::move(v);
        }
    }

    std::map<std::string, std::vector<std::vector<std::string>>> references;
    std::vector<std::string> order;
    for (const auto& g : resources.gold->annotations) {
        if (!references.contains(g.comment_id)) order.push_back(g.comment_id);
        std::vector<std::string> ref;
        for (const auto& s : comments.at(g.comment_id)->sentences) {
            if (g.selected_sentence_ids.contains(s.id)) ref.insert(ref.end(), s.tokens.begin(), s.tokens.end());
        }
        references[g.comment_id].push_back(std::move(ref));
    }
    if (order.empty()) throw ComputationError("rouge evaluation: gold set has no annotations");

    constexpr std::array<RougeVariant, 3> variants = {RougeVariant::R1, RougeVariant::R2, RougeVariant::RSU4};
    json table = json::object();
    for (Feature f : features) {
        json row = json::object();
        for (RougeVariant v : variants) {
            double r = 0.0, p = 0.0, f1 = 0.0;
            for (const auto& cid : order) {
                std::vector<std::string> system;
                for (const auto& sid : selected.at(cid).at(f)) {
                    const auto& toks = sentences.at(sid)->tokens;
                    system.insert(system.end(), toks.begin(), toks.end());
                }
                const auto score = rouge(system, references.at(cid), v, config.rouge_aggregate);
                r += score.recall;
                p += score.precision;
                f1 += score.f1;
            }
            const double n = static_cast<double>(order.size());
            row[std::string(to_string(v))] = {{"recall", r / n}, {"precision", p / n}, {"f1", f1 / n}};
        }
        table[std::string(to_string(f))] = std::move(row);
    }
    return json{{"comments", order.size()},
                {"aggregate", config.rouge_aggregate == RougeAggregate::Mean ? "mean" : "max"},
                {"features", table},
                {"warnings", resources.gold->warnings}};
}

namespace {

json silhouette_or_null(const MatrixX<double>& points, const std::vector<Index>& labels) {
    std::set<Index> distinct(labels.begin(), labels.end());
    if (distinct.size() < 2 || distinct.size() >= labels.size()) return nullptr;
    return silhouette(points, labels, DistanceMetric::Euclidean).mean;
}

json evaluate_space(const std::vector<AnnotatedSentence>& sentences, Side side, const Resources& resources,
                    const PipelineConfig& config, std::uint64_t seed) {
    const auto term = merge_synonymous_clusters(cluster_by_shared_term(sentences, side).clusters, resources.synonyms);
    json out{{"points", 0},
             {"term", {{"clusters", term.size()}, {"silhouette", nullptr}}},
             {"xmeans", {{"clusters", 0}, {"silhouette", nullptr}}}};
    const auto space = reduce(sentences, resources, config.variance_target);
    out["points"] = space->ids.size();
    if (space->ids.empty()) return out;
    if (space->degenerate) {
        out["xmeans"]["clusters"] = 1;
        return out;
    }

    const auto result = run_xmeans(*space, config, seed);
    out["xmeans"]["clusters"] = result.k;
    out["xmeans"]["silhouette"] = silhouette_or_null(space->points, result.assignments);

    // Soft memberships: a sentence contributes one copy of its point per
    // term cluster it belongs to.
    std::map<std::string, Index> row_of;
    for (std::size_t i = 0; i < space->ids.size(); ++i) row_of[space->ids[i]] = static_cast<Index>(i);
    std::vector<Index> rows, labels;
    for (std::size_t c = 0; c < term.size(); ++c) {
        for (const auto& id : term[c].members) {
            const auto it = row_of.find(id);
            if (it == row_of.end()) continue;
            rows.push_back(it->second);
            labels.push_back(static_cast<Index>(c));
        }
    }
    MatrixX<double> expanded(static_cast<Index>(rows.size()), space->points.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) expanded.row(static_cast<Index>(i)) = space->points.row(rows[i]);
    out["term"]["memberships"] = rows.size();
    out["term"]["silhouette"] = silhouette_or_null(expanded, labels);
    return out;
}

}  // namespace

json silhouette_report(const PipelineState& selected, const Resources& resources, const PipelineConfig& config) {
    std::vector<json> per_topic(selected.topics.size());
    parallel_for(selected.topics.size(), config.jobs, [&](std::size_t t) {
        const auto& topic = selected.topics[t];
        json sides = json::object();
        for (Side side : kSides) {
            sides[std::string(to_string(side))] =
                evaluate_space(topic.salient[idx(side)], side, resources, config, derived_seed(selected.seed, t, side));
        }
        per_topic[t] = {{"topic_id", topic.id}, {"sides", sides}};
    });
    std::vector<AnnotatedSentence> all;
    for (const auto& topic : selected.topics) {
        for (const auto& side : topic.salient) all.insert(all.end(), side.begin(), side.end());
    }
    return json{{"metric", "euclidean"},
                {"topics", per_topic},
                {"pooled", evaluate_space(all, Side::Agree, resources, config, selected.seed)}};
}

json label_report(const PipelineState& state) {
    json clusters = json::array();
    for (const auto& topic : state.topics) {
        for (Side side : kSides) {
            const auto& sc = topic.sides[idx(side)];
            for (std::size_t i = 0; i < sc.clusters.size() && i < sc.labels.size(); ++i) {
                const auto& l = sc.labels[i];
                clusters.push_back(
                    {{"cluster_id", sc.clusters[i].id},
                     {"topic_id", topic.id},
                     {"side", std::string(to_string(side))},
                     {"size", sc.clusters[i].members.size()},
                     {"method", std::string(to_string(l.method))},
                     {"label", l.term},
                     {"score", l.score},
                     {"runner_up",
                      l.runner_up ? json{{"term", l.runner_up->first}, {"score", l.runner_up->second}} : json(nullptr)}});
            }
        }
    }
    return json{{"seed", state.seed}, {"clusters", clusters}};
}

json alignment_report(const PipelineState& state) {
    const auto doc = state_to_json(state);
    json topics = json::array();
    for (const auto& jt : doc.at("topics")) {
        topics.push_back({{"topic_id", jt.at("id")},
                          {"pairs", jt.contains("alignment") ? jt["alignment"]["pairs"] : json::array()},
                          {"dropped", jt.contains("alignment") ? jt["alignment"]["dropped"] : json::array()}});
    }
    return json{{"seed", state.seed}, {"topics", topics}};
}

json stats_report(const json& doc) {
    try {
        json out = json::object();
        if (doc.contains("mann_whitney")) {
            const auto& mw = doc["mann_whitney"];
            const auto r = mann_whitney_u(mw.at("a").get<std::vector<double>>(), mw.at("b").get<std::vector<double>>());
            out["mann_whitney"] = {{"u_a", r.u_a}, {"u_b", r.u_b}, {"z", r.z}, {"p_two_sided", r.p_two_sided},
                                   {"effect_r", r.effect_r}};
        }
        if (doc.contains("krippendorff")) {
            const auto& ka = doc["krippendorff"];
            RatingMatrix ratings;
            for (const auto& coder : ka.at("ratings")) {
                auto& row = ratings.emplace_back();
                for (const auto& v : coder) row.push_back(v.is_null() ? std::nullopt : std::optional(v.get<double>()));
            }
            const auto metric = alpha_metric_from_string(ka.value("metric", std::string("ordinal")));
            out["krippendorff"] = {{"alpha", krippendorff_alpha(ratings, metric)},
                                   {"metric", ka.value("metric", std::string("ordinal"))}};
        }
        if (out.empty()) throw ValidationError("stats input needs a 'mann_whitney' or 'krippendorff' object");
        return out;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("stats input: ") + e.what());
    }
}

// ---- artifacts -------------------------------------------------------------------

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw ComputationError("sha256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string file_stem_for(std::string_view topic_id) {
    std::string out;
    for (char c : topic_id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                        c == '_' || c == '.';
        out.push_back(ok ? c : '_');
    }
    if (out.empty() || out == "." || out == "..") out = "_" + out;
    return out;
}

void write_artifacts(const fs::path& dir, const std::vector<Artifact>& artifacts) {
    std::vector<fs::path> written;
    std::error_code ec;
    const bool created = !fs::exists(dir, ec);
    try {
        fs::create_directories(dir, ec);
        if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
        for (const auto& a : artifacts) {
            const auto path = dir / a.name;
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out) throw ConfigError("cannot write '" + path.string() + "'");
            written.push_back(path);
            out.write(a.content.data(), static_cast<std::streamsize>(a.content.size()));
            out.close();
            if (!out) throw ConfigError("failed writing '" + path.string() + "'");
        }
    } catch (...) {
        for (const auto& p : written) fs::remove(p, ec);
        if (created) fs::remove(dir, ec);
        throw;
    }
}

std::vector<Artifact> run_pipeline(const PipelineConfig& config) {
    validate_config(config);
    const auto resources = tagged("load", [&] { return load_resources(config); });
    const auto annotated = tagged("annotate", [&] { return annotate_corpus(resources, config); });
    auto state = tagged("select", [&] { return select_stage(annotated, resources, config); });
    const auto selected = state;
    tagged("cluster", [&] { cluster_stage(state, resources, config); });
    tagged("label", [&] { label_stage(state, resources, config); });
    tagged("align", [&] { align_stage(state, resources, config); });
    const auto charts = tagged("chart", [&] { return chart_stage(state); });

    json evaluation = tagged("eval", [&] {
        json e{{"seed", config.seed}, {"silhouette", silhouette_report(selected, resources, config)}};
        e["rouge"] = resources.gold ? rouge_report(resources, config) : json(nullptr);
        return e;
    });

    std::vector<Artifact> artifacts;
    std::set<std::string> names;
    for (const auto& chart : charts) {
        auto stem = "chart_" + file_stem_for(chart.topic_id);
        for (int n = 2; names.contains(stem + ".json"); ++n) stem = "chart_" + file_stem_for(chart.topic_id) + "_" + std::to_string(n);
        names.insert(stem + ".json");
        artifacts.push_back({stem + ".json", render_chart(chart, ChartFormat::Json)});
        artifacts.push_back({stem + ".html", render_chart(chart, ChartFormat::Html)});
    }
    artifacts.push_back({"labels.json", dump_json(label_report(state))});
    artifacts.push_back({"alignment.json", dump_json(alignment_report(state))});
    artifacts.push_back({"evaluation.json", dump_json(evaluation)});

    json hashes = json::object();
    for (const auto& a : artifacts) hashes[a.name] = sha256_hex(a.content);
    const json manifest{{"seed", config.seed},
                        {"method", std::string(to_string(config.clustering_method))},
                        {"labeling", std::string(to_string(config.effective_labeling()))},
                        {"config", config_to_json(config)},
                        {"artifacts", hashes}};
    artifacts.push_back({"manifest.json", dump_json(manifest)});

    write_artifacts(config.output_dir, artifacts);
    return artifacts;
}

}  // namespace debsum
