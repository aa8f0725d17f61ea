#include "debsum/term_clustering.hpp"

#include <map>

namespace debsum {

TermClustering cluster_by_shared_term(const std::vector<AnnotatedSentence>& sentences, Side side) {
    std::map<std::string, std::set<std::string>> by_term;
    TermClustering result;
    for (const auto& s : sentences) {
        if (s.terms.empty()) {
            result.unclustered.push_back(s.id);
            continue;
        }
        for (const auto& ann : s.terms) by_term[ann.term].insert(s.id);
    }
    for (auto& [term, members] : by_term) result.clusters.push_back({term, side, std::move(members)});
    return result;
}

std::vector<TermCluster> merge_synonymous_clusters(const std::vector<TermCluster>& clusters,
                                                   const SynonymTable& table) {
    std::map<std::string, TermCluster> merged;
    for (const auto& cluster : clusters) {
        const std::string& label = table.canonical(cluster.label);
        auto [it, inserted] = merged.try_emplace(label, TermCluster{label, cluster.side, {}});
        it->second.members.insert(cluster.members.begin(), cluster.members.end());
    }
    std::vector<TermCluster> out;
    for (auto& [label, cluster] : merged) out.push_back(std::move(cluster));
    return out;
}

}  // namespace debsum
