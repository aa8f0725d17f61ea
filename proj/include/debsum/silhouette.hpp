#pragma once

#include <limits>
#include <map>
#include <string_view>
#include <vector>

#include "debsum/linalg.hpp"

namespace debsum {

enum class DistanceMetric { Euclidean, CosineDistance };

std::string_view to_string(DistanceMetric metric);
DistanceMetric metric_from_string(std::string_view text);

template <typename Scalar>
struct SilhouetteReport {
    std::vector<Scalar> per_point;
    Scalar mean = Scalar(0);
    Index clusters = 0;
};

/// Silhouette index of a hard partition. Cluster ids may be any integers;
/// points alone in their cluster score 0.
template <typename Derived>
SilhouetteReport<typename Derived::Scalar> silhouette(const Eigen::MatrixBase<Derived>& points,
                                                      const std::vector<Index>& assignments,
                                                      DistanceMetric metric = DistanceMetric::Euclidean) {
    using Scalar = typename Derived::Scalar;
    const Index n = points.rows();
    if (static_cast<Index>(assignments.size()) != n) throw ComputationError("silhouette: assignment count mismatch");

    std::map<Index, Index> remap;
    for (Index a : assignments) remap.emplace(a, 0);
    Index next = 0;
    for (auto& [id, dense] : remap) dense = next++;
    const Index k = next;
    if (k < 2) throw ComputationError("silhouette undefined for k = 1");

    std::vector<Index> label(static_cast<std::size_t>(n));
    std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
        label[static_cast<std::size_t>(i)] = remap.at(assignments[static_cast<std::size_t>(i)]);
        ++sizes[static_cast<std::size_t>(label[static_cast<std::size_t>(i)])];
    }

    MatrixX<Scalar> unit;
    if (metric == DistanceMetric::CosineDistance) {
        const VectorX<Scalar> norms = points.rowwise().norm();
        if ((norms.array() == Scalar(0)).any()) throw ComputationError("silhouette: cosine distance of a zero vector");
        unit = norms.cwiseInverse().asDiagonal() * points;
    }
    const auto distance = [&](Index i, Index j) -> Scalar {
        if (metric == DistanceMetric::Euclidean) return (points.row(i) - points.row(j)).norm();
        return std::max(Scalar(0), Scalar(1) - unit.row(i).dot(unit.row(j)));
    };

    SilhouetteReport<Scalar> report;
    report.clusters = k;
    report.per_point.resize(static_cast<std::size_t>(n));
    std::vector<Scalar> sums(static_cast<std::size_t>(k));
    for (Index i = 0; i < n; ++i) {
        const Index own = label[static_cast<std::size_t>(i)];
        if (sizes[static_cast<std::size_t>(own)] == 1) {
            report.per_point[static_cast<std::size_t>(i)] = Scalar(0);
            continue;
        }
        std::fill(sums.begin(), sums.end(), Scalar(0));
        for (Index j = 0; j < n; ++j) {
            if (j != i) sums[static_cast<std::size_t>(label[static_cast<std::size_t>(j)])] += distance(i, j);
        }
        const Scalar a = sums[static_cast<std::size_t>(own)] / Scalar(sizes[static_cast<std::size_t>(own)] - 1);
        Scalar b = std::numeric_limits<Scalar>::infinity();
        for (Index c = 0; c < k; ++c) {
            if (c != own) b = std::min(b, sums[static_cast<std::size_t>(c)] / Scalar(sizes[static_cast<std::size_t>(c)]));
        }
        const Scalar denom = std::max(a, b);
        report.per_point[static_cast<std::size_t>(i)] = denom > Scalar(0) ? (b - a) / denom : Scalar(0);
    }
    Scalar total = Scalar(0);
    for (Scalar s : report.per_point) total += s;
    report.mean = total / Scalar(n);
    return report;
}

}  // namespace debsum
