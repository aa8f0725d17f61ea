#pragma once

#include <map>
#include <string>
#include <vector>

#include "debsum/annotate.hpp"

namespace debsum {

using SparseVector = std::map<std::string, double>;

/// Unit-count bag of the label's tokens plus the tokens of every term in its
/// synonym class.
SparseVector label_vector(const std::string& label, const SynonymTable& table);

double sparse_cosine(const SparseVector& a, const SparseVector& b);  // 0 if either is empty

struct LabeledCluster {
    std::string cluster_id;
    std::string label;
};

struct AlignedPair {
    std::string label;  // display label, taken from the agree side
    std::string agree_cluster_id;
    std::string disagree_cluster_id;
    double similarity = 0.0;
};

struct DroppedCluster {
    std::string cluster_id;
    std::string label;
    Side side = Side::Agree;
    double best_similarity = 0.0;  // best cross-side similarity seen before matching
};

struct Alignment {
    std::vector<AlignedPair> pairs;  // in matching order (descending similarity)
    std::vector<DroppedCluster> dropped;
};

/// Greedy one-to-one matching of agree and disagree clusters by label-vector
/// cosine, highest similarity first; pairs below `threshold` are not formed.
Alignment align_clusters(const std::vector<LabeledCluster>& agree, const std::vector<LabeledCluster>& disagree,
                         const SynonymTable& table, double threshold = 0.6);

}  // namespace debsum
