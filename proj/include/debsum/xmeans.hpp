#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "debsum/kmeans.hpp"

namespace debsum {

struct XMeansOptions {
    int max_iter = 300;
    /// Children start at centroid +/- this fraction of the cluster's RMS
    /// radius along its principal direction.
    double split_offset = 0.5;
};

namespace detail {

template <typename Scalar>
struct SplitCandidate {
    Index cluster = 0;
    Scalar gain = Scalar(0);
    MatrixX<Scalar> children;  // 2 x d
};

// Local BIC test for splitting one cluster in two. Returns a candidate only
// when the two-child model scores strictly higher than the parent.
template <typename Scalar>
std::optional<SplitCandidate<Scalar>> try_split(const MatrixX<Scalar>& members, Index cluster,
                                                const XMeansOptions& options) {
    const Index n = members.rows(), d = members.cols();
    if (n < 3) return std::nullopt;

    ClusteringResult<Scalar> parent;
    parent.k = 1;
    parent.assignments.assign(static_cast<std::size_t>(n), 0);
    parent.centroids = members.colwise().mean();
    const Scalar parent_sse = within_cluster_sse(members, parent.assignments, parent.centroids);
    // A cluster of coincident points cannot be improved by splitting.
    if (!(parent_sse > Scalar(0))) return std::nullopt;
    const Scalar parent_bic = bic_score(members, parent);

    const MatrixX<Scalar> centered = members.rowwise() - parent.centroids.row(0);
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(centered.transpose() * centered);
    RowVectorX<Scalar> direction = solver.eigenvectors().col(d - 1).transpose();
    Index pivot = 0;
    direction.cwiseAbs().maxCoeff(&pivot);
    if (direction[pivot] < Scalar(0)) direction *= Scalar(-1);
    const Scalar radius = std::sqrt(parent_sse / Scalar(n));
    const RowVectorX<Scalar> offset = direction * (Scalar(options.split_offset) * radius);

    MatrixX<Scalar> seeds(2, d);
    seeds.row(0) = parent.centroids.row(0) - offset;
    seeds.row(1) = parent.centroids.row(0) + offset;
    auto children = lloyd(members, std::move(seeds), options.max_iter);

    const Scalar child_sse = children.distortion_trace.back();
    const Scalar child_bic = child_sse > Scalar(0) ? bic_score(members, children)
                                                   : std::numeric_limits<Scalar>::infinity();
    if (!(child_bic > parent_bic)) return std::nullopt;
    return SplitCandidate<Scalar>{cluster, child_bic - parent_bic, std::move(children.centroids)};
}

}  // namespace detail

/// X-means: start from k-means at k_min, then repeatedly offer every cluster
/// a two-way split judged by local BIC, accepting the best improvements until
/// no split helps or k_max is reached. A global Lloyd refinement follows each
/// round of splits.
template <typename Derived>
ClusteringResult<typename Derived::Scalar> xmeans(const Eigen::MatrixBase<Derived>& points, Index k_min,
                                                  Index k_max, std::uint64_t seed,
                                                  const XMeansOptions& options = {}) {
    using Scalar = typename Derived::Scalar;
    const Index n = points.rows();
    if (!(k_min >= 1 && k_min <= k_max && k_max <= n)) {
        throw ComputationError("x-means: need 1 <= k_min <= k_max <= n (got k_min=" + std::to_string(k_min) +
                               ", k_max=" + std::to_string(k_max) + ", n=" + std::to_string(n) + ")");
    }
    const MatrixX<Scalar> data = points;
    auto result = kmeans(data, k_min, seed, options.max_iter);

    while (result.k < k_max) {
        std::vector<detail::SplitCandidate<Scalar>> candidates;
        for (Index c = 0; c < result.k; ++c) {
            std::vector<Index> rows;
            for (Index i = 0; i < n; ++i) {
                if (result.assignments[static_cast<std::size_t>(i)] == c) rows.push_back(i);
            }
            MatrixX<Scalar> members(static_cast<Index>(rows.size()), data.cols());
            for (std::size_t r = 0; r < rows.size(); ++r) members.row(static_cast<Index>(r)) = data.row(rows[r]);
            if (auto candidate = detail::try_split(members, c, options)) candidates.push_back(std::move(*candidate));
        }
        if (candidates.empty()) break;

        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const auto& a, const auto& b) { return a.gain > b.gain; });
        const auto room = static_cast<std::size_t>(k_max - result.k);
        if (candidates.size() > room) candidates.resize(room);

        std::vector<const detail::SplitCandidate<Scalar>*> by_cluster(static_cast<std::size_t>(result.k), nullptr);
        for (const auto& cand : candidates) by_cluster[static_cast<std::size_t>(cand.cluster)] = &cand;

        const Index new_k = result.k + static_cast<Index>(candidates.size());
        MatrixX<Scalar> centroids(new_k, data.cols());
        Index row = 0;
        for (Index c = 0; c < result.k; ++c) {
            if (const auto* cand = by_cluster[static_cast<std::size_t>(c)]) {
                centroids.row(row++) = cand->children.row(0);
                centroids.row(row++) = cand->children.row(1);
            } else {
                centroids.row(row++) = result.centroids.row(c);
            }
        }
        result = lloyd(data, std::move(centroids), options.max_iter);
    }

    // Final global refinement; a no-op when the last round already converged.
    result = lloyd(data, std::move(result.centroids), options.max_iter);
    result.seed = seed;
    return result;
}

}  // namespace debsum
