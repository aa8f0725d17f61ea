#include <doctest.h>

#include <random>
#include <set>

#include "debsum/alignment.hpp"
#include "debsum/error.hpp"
#include "debsum/labeling.hpp"

using namespace debsum;

TEST_CASE("label vectors") {
    SynonymTable t;
    t.add_group({"co2", "carbon dioxide"});
    CHECK(label_vector("co2", t) == SparseVector{{"carbon", 1}, {"co2", 1}, {"dioxide", 1}});
    CHECK(label_vector("sea ice", t) == SparseVector{{"ice", 1}, {"sea", 1}});
    CHECK(sparse_cosine(label_vector("co2", t), label_vector("carbon dioxide", t)) == doctest::Approx(1.0));
    CHECK(label_vector(std::string(kUnlabeled), t).empty());
}

TEST_CASE("alignment examples") {
    SynonymTable t;
    t.add_group({"co2", "carbon dioxide"});
    const auto a = align_clusters({{"a1", "co2"}, {"a2", "ice"}}, {{"d1", "carbon dioxide"}, {"d2", "economy"}}, t);
    REQUIRE(a.pairs.size() == 1);
    CHECK(a.pairs[0].agree_cluster_id == "a1");
    CHECK(a.pairs[0].disagree_cluster_id == "d1");
    CHECK(a.pairs[0].similarity == doctest::Approx(1.0));
    CHECK(a.pairs[0].label == "co2");
    REQUIRE(a.dropped.size() == 2);
    CHECK(a.dropped[0].cluster_id == "a2");
    CHECK(a.dropped[0].best_similarity == 0.0);
    CHECK(a.dropped[1].side == Side::Disagree);

    const auto same = align_clusters({{"a", "ice"}}, {{"d", "ice"}}, SynonymTable{});
    REQUIRE(same.pairs.size() == 1);
    CHECK(same.pairs[0].similarity == doctest::Approx(1.0));

    CHECK_THROWS_AS(align_clusters({}, {}, t, 0.0), ConfigError);
    CHECK_THROWS_AS(align_clusters({}, {}, t, 1.5), ConfigError);
    CHECK(align_clusters({}, {{"d", "x"}}, t).dropped.size() == 1);
}

TEST_CASE("alignment is one-to-one and respects the threshold") {
    std::mt19937_64 rng(13);
    const std::vector<std::string> words{"ice", "sea", "co2", "heat", "coal", "wind", "rain"};
    for (int round = 0; round < 100; ++round) {
        std::vector<LabeledCluster> agree, disagree;
        auto label = [&] {
            std::string l = words[rng() % words.size()];
            if (rng() % 2) l += " " + words[rng() % words.size()];
            return l;
        };
        for (int i = 0; i < 1 + static_cast<int>(rng() % 6); ++i) agree.push_back({"a" + std::to_string(i), label()});
        for (int i = 0; i < 1 + static_cast<int>(rng() % 6); ++i) disagree.push_back({"d" + std::to_string(i), label()});
        const double threshold = 0.3 + 0.1 * static_cast<double>(rng() % 7);
        const auto r = align_clusters(agree, disagree, SynonymTable{}, threshold);
        std::set<std::string> used_a, used_d;
        for (const auto& p : r.pairs) {
            CHECK(used_a.insert(p.agree_cluster_id).second);
            CHECK(used_d.insert(p.disagree_cluster_id).second);
            CHECK(p.similarity >= threshold);
        }
        CHECK(r.pairs.size() * 2 + r.dropped.size() == agree.size() + disagree.size());
    }
}
