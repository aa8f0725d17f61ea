#pragma once

#include <set>
#include <string>
#include <vector>

#include "debsum/annotate.hpp"
#include "debsum/corpus.hpp"

namespace debsum {

/// A salient sentence carried through the clustering stages.
struct AnnotatedSentence {
    std::string id;
    std::string comment_id;
    Side side = Side::Agree;
    std::vector<std::string> tokens;
    std::vector<TermAnnotation> terms;
};

struct TermCluster {
    std::string label;
    Side side = Side::Agree;
    std::set<std::string> members;  // sentence ids

    bool operator==(const TermCluster&) const = default;
};

struct TermClustering {
    std::vector<TermCluster> clusters;    // sorted by label
    std::vector<std::string> unclustered; // sentences without any term, input order
};

/// One cluster per distinct term; a sentence with k distinct terms joins k
/// clusters.
TermClustering cluster_by_shared_term(const std::vector<AnnotatedSentence>& sentences, Side side);

/// Unions clusters whose labels fall in one synonym class and relabels them
/// with the canonical term. Output sorted by label.
std::vector<TermCluster> merge_synonymous_clusters(const std::vector<TermCluster>& clusters,
                                                   const SynonymTable& table);

}  // namespace debsum
