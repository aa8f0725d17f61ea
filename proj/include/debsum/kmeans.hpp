#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <numbers>
#include <vector>

#include "debsum/linalg.hpp"

namespace debsum {

template <typename Scalar>
struct ClusteringResult {
    Index k = 0;
    std::vector<Index> assignments;  // one cluster index per point
    MatrixX<Scalar> centroids;       // k x d
    Scalar bic = std::numeric_limits<Scalar>::quiet_NaN();  // NaN when undefined (n == k, zero variance)
    int iterations = 0;
    std::uint64_t seed = 0;
    std::vector<Scalar> distortion_trace;  // within-cluster SSE after each iteration

    std::vector<Index> sizes() const {
        std::vector<Index> counts(static_cast<std::size_t>(k), 0);
        for (Index a : assignments) ++counts[static_cast<std::size_t>(a)];
        return counts;
    }
};

/// Sum of squared distances from each point to its assigned centroid.
template <typename DerivedP, typename DerivedC>
typename DerivedP::Scalar within_cluster_sse(const Eigen::MatrixBase<DerivedP>& points,
                                             const std::vector<Index>& assignments,
                                             const Eigen::MatrixBase<DerivedC>& centroids) {
    using Scalar = typename DerivedP::Scalar;
    Scalar sse = Scalar(0);
    for (Index i = 0; i < points.rows(); ++i) {
        sse += squared_distance(points.row(i), centroids.row(assignments[static_cast<std::size_t>(i)]));
    }
    return sse;
}

/// BIC of the identical-spherical-variance Gaussian mixture implied by a hard
/// partition: maximized log-likelihood minus (p/2) log n with p = k (d + 1).
/// The variance estimate pools squared distances over all dimensions and
/// divides by n - k.
template <typename Derived>
typename Derived::Scalar bic_score(const Eigen::MatrixBase<Derived>& points,
                                   const ClusteringResult<typename Derived::Scalar>& result) {
    using Scalar = typename Derived::Scalar;
    const Index n = points.rows(), d = points.cols(), k = result.k;
    if (static_cast<Index>(result.assignments.size()) != n) throw ComputationError("BIC: assignment count mismatch");
    if (n <= k) throw ComputationError("BIC undefined: n <= k leaves no degrees of freedom for the variance");
    const Scalar sse = within_cluster_sse(points, result.assignments, result.centroids);
    const Scalar variance = sse / Scalar(n - k);
    if (!(variance > Scalar(0))) throw ComputationError("BIC degenerate: zero within-cluster variance");

    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    Scalar log_likelihood = Scalar(0);
    for (Index size : result.sizes()) {
        if (size > 0) log_likelihood += Scalar(size) * std::log(Scalar(size) / Scalar(n));
    }
    log_likelihood -= Scalar(n) * Scalar(d) / Scalar(2) * std::log(two_pi * variance);
    log_likelihood -= sse / (Scalar(2) * variance);
    const Scalar params = Scalar(k) * Scalar(d + 1);
    return log_likelihood - params / Scalar(2) * std::log(Scalar(n));
}

namespace detail {

template <typename Derived, typename Scalar>
void assign_nearest(const Eigen::MatrixBase<Derived>& points, const MatrixX<Scalar>& centroids,
                    std::vector<Index>& assignments) {
    for (Index i = 0; i < points.rows(); ++i) {
        Index best = 0;
        Scalar best_dist = std::numeric_limits<Scalar>::infinity();
        for (Index c = 0; c < centroids.rows(); ++c) {
            const Scalar dist = squared_distance(points.row(i), centroids.row(c));
            if (dist < best_dist) {
                best_dist = dist;
                best = c;
            }
        }
        assignments[static_cast<std::size_t>(i)] = best;
    }
}

// Gives every empty cluster the point farthest from its current centroid,
// taken from a cluster that can spare it.
template <typename Derived, typename Scalar>
void reseed_empty(const Eigen::MatrixBase<Derived>& points, MatrixX<Scalar>& centroids,
                  std::vector<Index>& assignments) {
    const Index k = centroids.rows();
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index a : assignments) ++counts[static_cast<std::size_t>(a)];
    for (Index c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) continue;
        Index far = -1;
        Scalar far_dist = Scalar(-1);
        for (Index i = 0; i < points.rows(); ++i) {
            const Index owner = assignments[static_cast<std::size_t>(i)];
            if (counts[static_cast<std::size_t>(owner)] < 2) continue;
            const Scalar dist = squared_distance(points.row(i), centroids.row(owner));
            if (dist > far_dist) {
                far_dist = dist;
                far = i;
            }
        }
        if (far < 0) throw ComputationError("k-means: cannot fill empty cluster (k > n)");
        --counts[static_cast<std::size_t>(assignments[static_cast<std::size_t>(far)])];
        assignments[static_cast<std::size_t>(far)] = c;
        ++counts[static_cast<std::size_t>(c)];
        centroids.row(c) = points.row(far);
    }
}

template <typename Derived, typename Scalar>
void update_means(const Eigen::MatrixBase<Derived>& points, const std::vector<Index>& assignments,
                  MatrixX<Scalar>& centroids) {
    std::vector<Index> counts(static_cast<std::size_t>(centroids.rows()), 0);
    centroids.setZero();
    for (Index i = 0; i < points.rows(); ++i) {
        const Index c = assignments[static_cast<std::size_t>(i)];
        centroids.row(c) += points.row(i);
        ++counts[static_cast<std::size_t>(c)];
    }
    for (Index c = 0; c < centroids.rows(); ++c) centroids.row(c) /= Scalar(counts[static_cast<std::size_t>(c)]);
}

}  // namespace detail

/// Lloyd iterations from the given centroids until the assignment reaches a
/// fixpoint or `max_iter` is hit. Every cluster keeps at least one point.
template <typename Derived>
ClusteringResult<typename Derived::Scalar> lloyd(const Eigen::MatrixBase<Derived>& points,
                                                 MatrixX<typename Derived::Scalar> centroids, int max_iter = 300) {
    using Scalar = typename Derived::Scalar;
    const Index n = points.rows(), k = centroids.rows();
    if (k < 1) throw ComputationError("k-means: k must be >= 1");
    if (k > n) throw ComputationError("k-means: k = " + std::to_string(k) + " exceeds point count " + std::to_string(n));

    ClusteringResult<Scalar> result;
    result.k = k;
    result.assignments.assign(static_cast<std::size_t>(n), -1);
    std::vector<Index> next(static_cast<std::size_t>(n), 0);
    for (int iter = 0; iter < max_iter; ++iter) {
        detail::assign_nearest(points, centroids, next);
        detail::reseed_empty(points, centroids, next);
        detail::update_means(points, next, centroids);
        result.distortion_trace.push_back(within_cluster_sse(points, next, centroids));
        result.iterations = iter + 1;
        const bool converged = next == result.assignments;
        result.assignments = next;
        if (converged) break;
    }
    result.centroids = std::move(centroids);
    try {
        result.bic = bic_score(points, result);
    } catch (const ComputationError&) {
        result.bic = std::numeric_limits<Scalar>::quiet_NaN();
    }
    return result;
}

/// k-means++ seeding from `seed`, then Lloyd iterations. Deterministic for a
/// given (points, k, seed).
template <typename Derived>
ClusteringResult<typename Derived::Scalar> kmeans(const Eigen::MatrixBase<Derived>& points, Index k,
                                                  std::uint64_t seed, int max_iter = 300) {
    using Scalar = typename Derived::Scalar;
    const Index n = points.rows();
    if (k < 1) throw ComputationError("k-means: k must be >= 1");
    if (k > n) throw ComputationError("k-means: k = " + std::to_string(k) + " exceeds point count " + std::to_string(n));

    std::mt19937_64 rng(seed);
    MatrixX<Scalar> centroids(k, points.cols());
    const auto first = static_cast<Index>(uniform01(rng) * static_cast<double>(n));
    centroids.row(0) = points.row(std::min(first, n - 1));

    VectorX<Scalar> nearest(n);
    for (Index i = 0; i < n; ++i) nearest[i] = squared_distance(points.row(i), centroids.row(0));
    for (Index c = 1; c < k; ++c) {
        const Scalar total = nearest.sum();
        Index pick = n - 1;
        if (total > Scalar(0)) {
            const Scalar target = Scalar(uniform01(rng)) * total;
            Scalar running = Scalar(0);
            for (Index i = 0; i < n; ++i) {
                running += nearest[i];
                if (running > target) {
                    pick = i;
                    break;
                }
            }
        } else {
            // All remaining mass is zero: every point coincides with a centre.
            pick = std::min(static_cast<Index>(uniform01(rng) * static_cast<double>(n)), n - 1);
        }
        centroids.row(c) = points.row(pick);
        for (Index i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], squared_distance(points.row(i), centroids.row(c)));
        }
    }

    auto result = lloyd(points, std::move(centroids), max_iter);
    result.seed = seed;
    return result;
}

}  // namespace debsum
