#include "debsum/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "debsum/error.hpp"
#include "debsum/labeling.hpp"
#include "debsum/lexicon.hpp"

namespace debsum {

SparseVector label_vector(const std::string& label, const SynonymTable& table) {
    SparseVector v;
    // Unlabeled clusters carry no content to align on.
    if (label == kUnlabeled) return v;
    for (const auto& term : table.equivalence_class(label)) {
        for (const auto& token : split_term(term)) v[token] = 1.0;
    }
    return v;
}

double sparse_cosine(const SparseVector& a, const SparseVector& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [k, x] : a) {
        na += x * x;
        const auto it = b.find(k);
        if (it != b.end()) dot += x * it->second;
    }
    for (const auto& [k, y] : b) nb += y * y;
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

Alignment align_clusters(const std::vector<LabeledCluster>& agree, const std::vector<LabeledCluster>& disagree,
                         const SynonymTable& table, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("alignment threshold must be in (0, 1]");

    struct Edge {
        double similarity;
        const LabeledCluster* a;
        const LabeledCluster* d;
    };
    std::vector<SparseVector> agree_vecs, disagree_vecs;
    for (const auto& c : agree) agree_vecs.push_back(label_vector(c.label, table));
    for (const auto& c : disagree) disagree_vecs.push_back(label_vector(c.label, table));

    std::map<std::string, double> best;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < agree.size(); ++i) {
        for (std::size_t j = 0; j < disagree.size(); ++j) {
            const double sim = sparse_cosine(agree_vecs[i], disagree_vecs[j]);
            auto& ba = best["a:" + agree[i].cluster_id];
            auto& bd = best["d:" + disagree[j].cluster_id];
            ba = std::max(ba, sim);
            bd = std::max(bd, sim);
            if (sim >= threshold) edges.push_back({sim, &agree[i], &disagree[j]});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        if (std::llround(x.similarity * 1e12) != std::llround(y.similarity * 1e12)) return x.similarity > y.similarity;
        return std::tie(x.a->label, x.d->label, x.a->cluster_id, x.d->cluster_id) <
               std::tie(y.a->label, y.d->label, y.a->cluster_id, y.d->cluster_id);
    });

    Alignment out;
    std::set<std::string> used_agree, used_disagree;
    for (const auto& e : edges) {
        if (used_agree.contains(e.a->cluster_id) || used_disagree.contains(e.d->cluster_id)) continue;
        used_agree.insert(e.a->cluster_id);
        used_disagree.insert(e.d->cluster_id);
        out.pairs.push_back({e.a->label, e.a->cluster_id, e.d->cluster_id, e.similarity});
    }

    auto drop = [&](const std::vector<LabeledCluster>& side_clusters, const std::set<std::string>& used, Side side,
                    const char* prefix) {
        std::vector<DroppedCluster> dropped;
        for (const auto& c : side_clusters) {
            if (used.contains(c.cluster_id)) continue;
            const auto it = best.find(prefix + c.cluster_id);
            dropped.push_back({c.cluster_id, c.label, side, it == best.end() ? 0.0 : it->second});
        }
        std::sort(dropped.begin(), dropped.end(),
                  [](const DroppedCluster& x, const DroppedCluster& y) { return x.cluster_id < y.cluster_id; });
        out.dropped.insert(out.dropped.end(), dropped.begin(), dropped.end());
    };
    drop(agree, used_agree, Side::Agree, "a:");
    drop(disagree, used_disagree, Side::Disagree, "d:");
    return out;
}

}  // namespace debsum
