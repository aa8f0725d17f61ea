#include <doctest.h>

#include "debsum/error.hpp"
#include "debsum/pipeline.hpp"
#include "test_util.hpp"

using namespace debsum;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kData = DEBSUM_TEST_DATA_DIR;

PipelineConfig fixture_config(const fs::path& out) {
    auto c = config_from_json(read_json_file(kData / "fixtures" / "config.json"), kData / "fixtures");
    c.output_dir = out;
    return c;
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = testutil::read_file(e.path());
    return files;
}

}  // namespace

TEST_CASE("config parsing") {
    const auto c = fixture_config("out");
    CHECK(c.seed == 7);
    CHECK(c.corpus_path == kData / "fixtures" / "corpus.json");
    CHECK(c.effective_labeling() == LabelMethod::SharedTerm);
    validate_config(c);

    auto x = c;
    x.clustering_method = ClusteringMethod::XMeans;
    CHECK(x.effective_labeling() == LabelMethod::MI);

    CHECK_THROWS_AS(config_from_json(json{{"sed", 1}}, ""), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"seed", "one"}}, ""), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"clustering_method", "kmeans"}}, ""), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::array(), ""), ConfigError);

    auto bad = c;
    bad.k_max = 1;
    bad.k_min = 2;
    CHECK_THROWS_AS(validate_config(bad), ConfigError);
    bad = c;
    bad.alignment_threshold = 0.0;
    CHECK_THROWS_AS(validate_config(bad), ConfigError);
    bad = c;
    bad.gazetteer_path = kData / "nope.txt";
    CHECK_THROWS_AS(validate_config(bad), ConfigError);
    bad = c;
    bad.corpus_path = kData / "nope.json";
    CHECK_THROWS_AS(validate_config(bad), ConfigError);
    CHECK_NOTHROW(validate_config(bad, false));

    const auto echo = config_to_json(c);
    CHECK(echo.at("seed") == 7);
    CHECK(echo.at("clustering_method") == "term");
    CHECK(config_from_json(echo, "").seed == 7);
}

TEST_CASE("sha256 and file names") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(file_stem_for("climate/change 1") == "climate_change_1");
    CHECK(file_stem_for("..") == "_..");
}

TEST_CASE("stages chained through their serialized documents match the in-memory run") {
    for (auto method : {ClusteringMethod::Term, ClusteringMethod::XMeans}) {
        auto c = fixture_config("unused");
        c.clustering_method = method;
        const auto r = load_resources(c);

        const auto annotated = annotate_corpus(r, c);
        const auto annotated2 = annotated_from_json(json::parse(dump_json(annotated_to_json(annotated, c.seed))));
        CHECK(annotated2.topics == annotated.topics);
        CHECK(annotated2.annotations == annotated.annotations);

        auto mem = select_stage(annotated, r, c);
        auto disk = state_from_json(json::parse(dump_json(state_to_json(select_stage(annotated2, r, c)))));
        CHECK(state_to_json(disk) == state_to_json(mem));

        cluster_stage(mem, r, c);
        cluster_stage(disk, r, c);
        disk = state_from_json(json::parse(dump_json(state_to_json(disk))));
        CHECK(state_to_json(disk) == state_to_json(mem));

        label_stage(mem, r, c);
        label_stage(disk, r, c);
        disk = state_from_json(json::parse(dump_json(state_to_json(disk))));
        CHECK(state_to_json(disk) == state_to_json(mem));

        align_stage(mem, r, c);
        align_stage(disk, r, c);
        disk = state_from_json(json::parse(dump_json(state_to_json(disk))));
        CHECK(state_to_json(disk) == state_to_json(mem));
        CHECK(chart_stage(disk) == chart_stage(mem));

        auto skipped = select_stage(annotated, r, c);
        CHECK_THROWS_AS(label_stage(skipped, r, c), ValidationError);
        CHECK_THROWS_AS(chart_stage(skipped), ValidationError);
    }
}

TEST_CASE("stage outputs respect their contracts") {
    auto c = fixture_config("unused");
    const auto r = load_resources(c);
    auto state = select_stage(annotate_corpus(r, c), r, c);
    std::size_t salient = 0;
    for (const auto& t : state.topics) salient += t.salient[0].size() + t.salient[1].size();
    std::size_t expected = 0;
    for (const auto& t : r.corpus) {
        for (const auto& cm : t.comments) expected += selection_count(cm.sentences.size());
    }
    CHECK(salient == expected);

    cluster_stage(state, r, c);
    label_stage(state, r, c);
    for (const auto& t : state.topics) {
        for (const auto& side : t.sides) {
            REQUIRE(side.labels.size() == side.clusters.size());
            for (std::size_t i = 0; i < side.clusters.size(); ++i) {
                CHECK(side.labels[i].term == *side.clusters[i].shared_term);
            }
        }
    }

    // Shared-term labels need term clusters.
    auto x = c;
    x.clustering_method = ClusteringMethod::XMeans;
    x.labeling_method = LabelMethod::SharedTerm;
    auto xs = select_stage(annotate_corpus(r, x), r, x);
    cluster_stage(xs, r, x);
    CHECK_THROWS_AS(label_stage(xs, r, x), ComputationError);
}

TEST_CASE("full run writes every artifact deterministically") {
    testutil::TempDir dir;
    auto c = fixture_config(dir / "a");
    const auto artifacts = run_pipeline(c);
    const auto files = read_dir(dir / "a");
    CHECK(files.size() == artifacts.size());
    for (const auto& name : {"labels.json", "alignment.json", "evaluation.json", "manifest.json",
                             "chart_climate-human.json", "chart_climate-human.html"}) {
        CHECK(files.contains(name));
    }
    const auto manifest = json::parse(files.at("manifest.json"));
    CHECK(manifest.at("method") == "term");
    CHECK(manifest.at("seed") == 7);
    for (const auto& [name, hash] : manifest.at("artifacts").items()) CHECK(sha256_hex(files.at(name)) == hash);
    for (const auto& [name, content] : files) {
        if (name.ends_with(".json")) CHECK(json::parse(content).contains("seed"));
        else CHECK(content.find("name=\"seed\" content=\"7\"") != std::string::npos);
    }
    const auto eval = json::parse(files.at("evaluation.json"));
    CHECK(eval.at("rouge").at("features").contains("SP"));
    CHECK(eval.at("rouge").at("features").at("SP").at("R1").contains("recall"));
    CHECK(eval.at("silhouette").at("pooled").at("term").contains("silhouette"));

    c.output_dir = dir / "b";
    c.jobs = 3;
    run_pipeline(c);
    CHECK(read_dir(dir / "b") == files);

    c.output_dir = dir / "x1";
    c.clustering_method = ClusteringMethod::XMeans;
    run_pipeline(c);
    c.output_dir = dir / "x2";
    run_pipeline(c);
    CHECK(read_dir(dir / "x1") == read_dir(dir / "x2"));
    CHECK(json::parse(read_dir(dir / "x1").at("manifest.json")).at("method") == "xmeans");
}

TEST_CASE("failed runs leave nothing behind") {
    testutil::TempDir dir;
    auto c = fixture_config(dir / "out");
    c.gazetteer_path = dir / "missing.txt";
    CHECK_THROWS_AS(run_pipeline(c), ConfigError);
    CHECK_FALSE(fs::exists(dir / "out"));

    c = fixture_config(dir / "out");
    c.corpus_path = testutil::write_file(dir / "bad.json", R"({"topics": [{"id": "t", "title": "x", "comments": []}]})");
    c.gold_path.reset();
    CHECK_THROWS_AS(run_pipeline(c), ValidationError);
    CHECK_FALSE(fs::exists(dir / "out"));

    fs::create_directories(dir / "ro" / "b.json");
    CHECK_THROWS_AS(write_artifacts(dir / "ro", {{"a.json", "{}"}, {"b.json", "{}"}}), ConfigError);
    CHECK_FALSE(fs::exists(dir / "ro" / "a.json"));
}

TEST_CASE("stats report") {
    const auto r = stats_report(json{{"mann_whitney", {{"a", {1, 2, 3}}, {"b", {4, 5, 6}}}},
                                     {"krippendorff", {{"metric", "nominal"}, {"ratings", {{1, 2}, {2, 1}}}}}});
    CHECK(r.at("mann_whitney").at("u_a") == 0.0);
    CHECK(r.at("krippendorff").at("alpha").get<double>() == doctest::Approx(-0.5));
    CHECK_THROWS_AS(stats_report(json::object()), ValidationError);
}
