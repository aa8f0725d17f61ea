#include <doctest.h>

#include "debsum/term_clustering.hpp"
#include "debsum/vector_space.hpp"

using namespace debsum;

namespace {

AnnotatedSentence sent(const std::string& id, const std::vector<std::string>& terms) {
    AnnotatedSentence s{id, "c", Side::Agree, {}, {}};
    std::size_t pos = 0;
    for (const auto& t : terms) {
        s.terms.push_back({id, t, pos, pos + 1});
        ++pos;
    }
    return s;
}

}  // namespace

TEST_CASE("one soft cluster per shared term") {
    const auto r = cluster_by_shared_term({sent("S1", {"co2"}), sent("S2", {"co2", "ice"}), sent("S3", {"ice"})},
                                          Side::Agree);
    REQUIRE(r.clusters.size() == 2);
    CHECK(r.clusters[0] == TermCluster{"co2", Side::Agree, {"S1", "S2"}});
    CHECK(r.clusters[1] == TermCluster{"ice", Side::Agree, {"S2", "S3"}});
    CHECK(r.unclustered.empty());

    const auto empty = cluster_by_shared_term({sent("S1", {})}, Side::Disagree);
    CHECK(empty.clusters.empty());
    CHECK(empty.unclustered == std::vector<std::string>{"S1"});

    const auto repeated = cluster_by_shared_term({sent("S1", {"ice", "ice"})}, Side::Agree);
    REQUIRE(repeated.clusters.size() == 1);
    CHECK(repeated.clusters[0].members.size() == 1);
}

TEST_CASE("cluster count equals distinct term count") {
    std::vector<AnnotatedSentence> sentences;
    for (int i = 0; i < 39; ++i) sentences.push_back(sent("S" + std::to_string(i), {"term" + std::to_string(i)}));
    sentences.push_back(sent("X", {"term0", "term5"}));
    CHECK(cluster_by_shared_term(sentences, Side::Agree).clusters.size() == 39);
}

TEST_CASE("synonymous clusters merge under the canonical label") {
    SynonymTable table;
    table.add_group({"co2", "carbon dioxide"});
    const std::vector<TermCluster> input{{"carbon dioxide", Side::Agree, {"S2"}}, {"co2", Side::Agree, {"S1", "S2"}},
                                         {"ice", Side::Agree, {"S3"}}};
    const auto merged = merge_synonymous_clusters(input, table);
    REQUIRE(merged.size() == 2);
    CHECK(merged[0] == TermCluster{"carbon dioxide", Side::Agree, {"S1", "S2"}});
    CHECK(merged[1] == TermCluster{"ice", Side::Agree, {"S3"}});

    CHECK(merge_synonymous_clusters(input, SynonymTable{}) == input);

    for (std::size_t i = 0; i < merged.size(); ++i) {
        for (std::size_t j = i + 1; j < merged.size(); ++j) {
            CHECK(canonical_label(merged[i].label, table) != canonical_label(merged[j].label, table));
        }
    }
}

TEST_CASE("term-count vectors over the vocabulary") {
    SynonymTable table;
    const auto v = build_term_vectors({sent("A", {"co2", "co2"}), sent("B", {}), sent("C", {"ice"})}, {"co2", "ice"},
                                      table);
    CHECK(v.ids == std::vector<std::string>{"A", "C"});
    CHECK(v.excluded == std::vector<std::string>{"B"});
    CHECK(v.counts(0, 0) == 2.0);
    CHECK(v.counts(0, 1) == 0.0);
    CHECK(v.counts(1, 1) == 1.0);

    std::vector<std::string> vocab;
    for (int i = 0; i < 64; ++i) vocab.push_back("t" + std::to_string(i));
    CHECK(build_term_vectors({sent("A", {"t3"})}, vocab, table).counts.cols() == 64);

    table.add_group({"co2", "carbon dioxide"});
    const Gazetteer g({"co2", "carbon dioxide", "ice"});
    CHECK(canonical_vocabulary(g, table) == std::vector<std::string>{"carbon dioxide", "ice"});
    const auto merged = build_term_vectors({sent("A", {"co2", "carbon dioxide"})}, {"carbon dioxide", "ice"}, table);
    CHECK(merged.counts(0, 0) == 2.0);
}
