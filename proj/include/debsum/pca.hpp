#pragma once

#include <utility>

#include "debsum/linalg.hpp"

namespace debsum {

template <typename Scalar>
struct PcaModel {
    VectorX<Scalar> mean;
    MatrixX<Scalar> components;          // retained components as orthonormal rows
    VectorX<Scalar> explained_variance;  // retained prefix of `eigenvalues`
    VectorX<Scalar> eigenvalues;         // full covariance spectrum, descending
    Scalar total_variance = Scalar(0);   // trace of the sample covariance
    bool degenerate = false;

    Index retained() const { return components.rows(); }

    template <typename Derived>
    MatrixX<Scalar> transform(const Eigen::MatrixBase<Derived>& points) const {
        return (points.rowwise() - mean.transpose()) * components.transpose();
    }

    template <typename Derived>
    MatrixX<Scalar> inverse_transform(const Eigen::MatrixBase<Derived>& reduced) const {
        return (reduced * components).rowwise() + mean.transpose();
    }
};

template <typename Scalar>
struct PcaFit {
    PcaModel<Scalar> model;
    MatrixX<Scalar> points;  // n x retained
};

/// Principal components of the rows of `points` via eigendecomposition of the
/// sample covariance. Keeps the shortest prefix whose cumulative explained
/// variance ratio reaches `variance_target`, but never fewer than
/// min(2, dims) components. Each component's largest-magnitude loading is
/// made positive so results are reproducible.
template <typename Derived>
PcaFit<typename Derived::Scalar> pca_fit_transform(const Eigen::MatrixBase<Derived>& points,
                                                   typename Derived::Scalar variance_target) {
    using Scalar = typename Derived::Scalar;
    const Index n = points.rows(), m = points.cols();
    if (n < 2) throw ComputationError("PCA needs at least 2 points");
    if (!(variance_target > Scalar(0) && variance_target <= Scalar(1))) {
        throw ComputationError("PCA variance target must be in (0, 1]");
    }

    PcaFit<Scalar> fit;
    auto& model = fit.model;
    model.mean = points.colwise().mean().transpose();
    const MatrixX<Scalar> centered = points.rowwise() - model.mean.transpose();
    const MatrixX<Scalar> covariance = (centered.transpose() * centered) / Scalar(n - 1);
    model.total_variance = covariance.trace();

    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(covariance);
    if (solver.info() != Eigen::Success) throw ComputationError("PCA eigendecomposition failed");
    // Eigen returns ascending order.
    model.eigenvalues = solver.eigenvalues().reverse().cwiseMax(Scalar(0));
    const MatrixX<Scalar> vectors = solver.eigenvectors().rowwise().reverse();

    if (!(model.total_variance > Scalar(0))) {
        model.degenerate = true;
        model.components.resize(0, m);
        model.explained_variance.resize(0);
        fit.points.resize(n, 0);
        return fit;
    }

    const Scalar spectrum = model.eigenvalues.sum();
    Index keep = m;
    Scalar cumulative = Scalar(0);
    for (Index i = 0; i < m; ++i) {
        cumulative += model.eigenvalues[i];
        if (cumulative / spectrum >= variance_target - Scalar(1e-12)) {
            keep = i + 1;
            break;
        }
    }
    keep = std::max(keep, std::min<Index>(2, m));

    model.components = vectors.leftCols(keep).transpose();
    for (Index r = 0; r < keep; ++r) {
        Index pivot = 0;
        model.components.row(r).cwiseAbs().maxCoeff(&pivot);
        if (model.components(r, pivot) < Scalar(0)) model.components.row(r) *= Scalar(-1);
    }
    model.explained_variance = model.eigenvalues.head(keep);
    fit.points = centered * model.components.transpose();
    return fit;
}

}  // namespace debsum
