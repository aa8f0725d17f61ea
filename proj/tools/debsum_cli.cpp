// debsum: command-line driver for the debate summarization pipeline.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "debsum/error.hpp"
#include "debsum/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace debsum;

namespace {

struct Overrides {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<std::string> out;
    std::optional<std::string> corpus, gold, gazetteer, synonyms, embeddings, stopwords, adverbs;
    std::optional<std::string> feature;
    std::optional<double> ratio, threshold, variance_target;
    std::optional<long> k_min, k_max;
    std::optional<std::string> annotator_url;
    std::optional<std::string> mi_candidates;
};

void add_common(CLI::App& app, Overrides& o) {
    app.add_option("--config", o.config, "JSON config file");
    app.add_option("--seed", o.seed, "Random seed");
    app.add_option("--jobs", o.jobs, "Topics processed concurrently");
    app.add_option("--out", o.out, "Output directory");
    app.add_option("--corpus", o.corpus, "Corpus JSON");
    app.add_option("--gold", o.gold, "Gold annotations JSON");
    app.add_option("--gazetteer", o.gazetteer, "Climate-term gazetteer");
    app.add_option("--synonyms", o.synonyms, "Synonym TSV");
    app.add_option("--embeddings", o.embeddings, "Word vectors");
    app.add_option("--stopwords", o.stopwords, "Stopword list");
    app.add_option("--adverbs", o.adverbs, "Conjunctive adverb list");
    app.add_option("--feature", o.feature, "Saliency feature (SP, SL, TT, CJ, COS_TPS, ...)");
    app.add_option("--ratio", o.ratio, "Fraction of sentences kept per comment");
    app.add_option("--threshold", o.threshold, "Alignment similarity threshold");
    app.add_option("--variance-target", o.variance_target, "PCA retained variance");
    app.add_option("--k-min", o.k_min, "X-means lower bound");
    app.add_option("--k-max", o.k_max, "X-means upper bound");
    app.add_option("--annotator-url", o.annotator_url, "Remote annotation service");
    app.add_option("--mi-candidates", o.mi_candidates, "terms|tokens");
}

PipelineConfig build_config(const Overrides& o) {
    PipelineConfig c = default_config();
    if (o.config) {
        const fs::path path(*o.config);
        c = config_from_json(read_json_file(path), path.parent_path(), c);
    }
    if (o.seed) c.seed = *o.seed;
    if (o.jobs) c.jobs = *o.jobs;
    if (o.out) c.output_dir = *o.out;
    if (o.corpus) c.corpus_path = *o.corpus;
    if (o.gold) c.gold_path = fs::path(*o.gold);
    if (o.gazetteer) c.gazetteer_path = *o.gazetteer;
    if (o.synonyms) c.synonyms_path = *o.synonyms;
    if (o.embeddings) c.embeddings_path = fs::path(*o.embeddings);
    if (o.stopwords) c.stopwords_path = *o.stopwords;
    if (o.adverbs) c.adverbs_path = *o.adverbs;
    if (o.feature) c.feature = feature_from_string(*o.feature);
    if (o.ratio) c.ratio = *o.ratio;
    if (o.threshold) c.alignment_threshold = *o.threshold;
    if (o.variance_target) c.variance_target = *o.variance_target;
    if (o.k_min) c.k_min = *o.k_min;
    if (o.k_max) c.k_max = *o.k_max;
    if (o.annotator_url) c.annotator_url = *o.annotator_url;
    if (o.mi_candidates) {
        if (*o.mi_candidates != "terms" && *o.mi_candidates != "tokens") {
            throw ConfigError("--mi-candidates must be terms|tokens");
        }
        c.mi_token_candidates = *o.mi_candidates == "tokens";
    }
    return c;
}

void emit(const PipelineConfig& c, const std::string& name, const json& doc) {
    write_artifacts(c.output_dir, {{name, dump_json(doc)}});
    std::cout << (c.output_dir / name).string() << "\n";
}

json read_input(const std::optional<std::string>& in) {
    if (!in) throw ConfigError("--in is required");
    return read_json_file(*in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Debate chart summaries: salient sentences, term clusters, aligned labels"};
    app.require_subcommand(1);
    Overrides o;

    std::optional<std::string> in;
    std::optional<std::string> method, labeling;

    auto* annotate = app.add_subcommand("annotate", "Tag corpus sentences with gazetteer terms");
    auto* select = app.add_subcommand("select", "Pick salient sentences per comment");
    select->add_option("--in", in, "Output of annotate");
    auto* cluster = app.add_subcommand("cluster", "Cluster salient sentences per topic side");
    cluster->add_option("--in", in, "Output of select");
    cluster->add_option("--method", method, "term|xmeans");
    auto* label = app.add_subcommand("label", "Label clusters");
    label->add_option("--in", in, "Output of cluster");
    label->add_option("--method", labeling, "shared|tfidf|mi");
    auto* align = app.add_subcommand("align", "Match agree and disagree clusters");
    align->add_option("--in", in, "Output of label");
    auto* chart = app.add_subcommand("chart", "Render chart summaries");
    chart->add_option("--in", in, "Output of align");
    auto* eval = app.add_subcommand("eval", "Evaluation kit");
    eval->require_subcommand(1);
    auto* eval_rouge = eval->add_subcommand("rouge", "ROUGE of each saliency feature against gold");
    auto* eval_sil = eval->add_subcommand("silhouette", "Silhouette of both clustering methods");
    eval_sil->add_option("--in", in, "Output of select (or any later stage)");
    auto* eval_stats = eval->add_subcommand("stats", "Mann-Whitney U and Krippendorff's alpha");
    eval_stats->add_option("--in", in, "Ratings JSON");
    auto* pipeline = app.add_subcommand("pipeline", "Run every stage and write all artifacts");
    pipeline->add_option("--method", method, "term|xmeans");
    pipeline->add_option("--labeling", labeling, "shared|tfidf|mi");

    for (auto* sub : {annotate, select, cluster, label, align, chart, eval_rouge, eval_sil, eval_stats, pipeline}) {
        add_common(*sub, o);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ConfigError("").exit_code();
    }

    try {
        auto config = build_config(o);
        if (method) config.clustering_method = clustering_method_from_string(*method);
        if (labeling) config.labeling_method = label_method_from_string(*labeling);

        if (pipeline->parsed()) {
            const auto artifacts = run_pipeline(config);
            for (const auto& a : artifacts) std::cout << (config.output_dir / a.name).string() << "\n";
            return 0;
        }
        if (eval_stats->parsed()) {
            emit(config, "stats.json", stats_report(read_input(in)));
            return 0;
        }

        const bool needs_corpus = annotate->parsed() || eval_rouge->parsed();
        validate_config(config, needs_corpus);
        const auto resources = load_resources(config, needs_corpus);

        if (annotate->parsed()) {
            emit(config, "annotated.json", annotated_to_json(annotate_corpus(resources, config), config.seed));
        } else if (select->parsed()) {
            const auto annotated = annotated_from_json(read_input(in));
            emit(config, "selected.json", state_to_json(select_stage(annotated, resources, config)));
        } else if (cluster->parsed()) {
            auto state = state_from_json(read_input(in));
            if (o.seed || o.config) state.seed = config.seed;
            cluster_stage(state, resources, config);
            emit(config, "clustered.json", state_to_json(state));
        } else if (label->parsed()) {
            auto state = state_from_json(read_input(in));
            if (!labeling && state.clustering) config.clustering_method = *state.clustering;
            label_stage(state, resources, config);
            write_artifacts(config.output_dir, {{"labeled.json", dump_json(state_to_json(state))},
                                                {"labels.json", dump_json(label_report(state))}});
            std::cout << (config.output_dir / "labeled.json").string() << "\n"
                      << (config.output_dir / "labels.json").string() << "\n";
        } else if (align->parsed()) {
            auto state = state_from_json(read_input(in));
            align_stage(state, resources, config);
            write_artifacts(config.output_dir, {{"aligned.json", dump_json(state_to_json(state))},
                                                {"alignment.json", dump_json(alignment_report(state))}});
            std::cout << (config.output_dir / "aligned.json").string() << "\n"
                      << (config.output_dir / "alignment.json").string() << "\n";
        } else if (chart->parsed()) {
            const auto state = state_from_json(read_input(in));
            std::vector<Artifact> artifacts;
            for (const auto& c : chart_stage(state)) {
                const auto stem = "chart_" + file_stem_for(c.topic_id);
                artifacts.push_back({stem + ".json", render_chart(c, ChartFormat::Json)});
                artifacts.push_back({stem + ".html", render_chart(c, ChartFormat::Html)});
            }
            write_artifacts(config.output_dir, artifacts);
            for (const auto& a : artifacts) std::cout << (config.output_dir / a.name).string() << "\n";
        } else if (eval_rouge->parsed()) {
            auto report = rouge_report(resources, config);
            report["seed"] = config.seed;
            emit(config, "rouge.json", report);
        } else if (eval_sil->parsed()) {
            const auto state = state_from_json(read_input(in));
            auto report = silhouette_report(state, resources, config);
            report["seed"] = state.seed;
            emit(config, "silhouette.json", report);
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "debsum: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "debsum: " << e.what() << "\n";
        return ComputationError("").exit_code();
    }
}
