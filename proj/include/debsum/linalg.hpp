#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "debsum/error.hpp"

namespace debsum {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVectorX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw, so seeded
/// sequences do not depend on the standard library's distributions.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Cosine similarity, clamped to [-1, 1]. Zero vectors have no direction and
/// are rejected.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA>& u, const Eigen::MatrixBase<DerivedB>& v) {
    using Scalar = typename DerivedA::Scalar;
    if (u.size() != v.size()) throw ComputationError("cosine: dimension mismatch");
    const Scalar nu = u.norm(), nv = v.norm();
    if (nu == Scalar(0) || nv == Scalar(0)) throw ComputationError("cosine: zero vector");
    const Scalar c = u.dot(v) / (nu * nv);
    return std::clamp(c, Scalar(-1), Scalar(1));
}

/// Pairwise cosine similarity of the rows of `rows`. Exactly symmetric with a
/// unit diagonal.
template <typename Derived>
MatrixX<typename Derived::Scalar> similarity_matrix(const Eigen::MatrixBase<Derived>& rows) {
    using Scalar = typename Derived::Scalar;
    const Index n = rows.rows();
    if (n < 2) throw ComputationError("similarity matrix needs at least 2 vectors");
    const VectorX<Scalar> norms = rows.rowwise().norm();
    if ((norms.array() == Scalar(0)).any()) throw ComputationError("similarity matrix: zero vector");
    const MatrixX<Scalar> unit = norms.cwiseInverse().asDiagonal() * rows;
    MatrixX<Scalar> sim = unit * unit.transpose();
    for (Index i = 0; i < n; ++i) {
        sim(i, i) = Scalar(1);
        for (Index j = i + 1; j < n; ++j) {
            const Scalar c = std::clamp(sim(i, j), Scalar(-1), Scalar(1));
            sim(i, j) = c;
            sim(j, i) = c;
        }
    }
    return sim;
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar squared_distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    return (a - b).squaredNorm();
}

}  // namespace debsum
