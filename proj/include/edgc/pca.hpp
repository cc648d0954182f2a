#pragma once

// Steps 1-4 of corrector training: centering, principal components,
// component selection, projection and whitening.

#include "edgc/dataset.hpp"
#include "edgc/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace edgc {

/// Population covariance (divide by row count). A single row has zero covariance.
Eigen::MatrixXd covariance(const Eigen::Ref<const RowMatrix>& rows);

struct CenteringStats {
    Vector centroid;
};

struct CenteredSets {
    CenteringStats stats;
    RowMatrix centered_x;  ///< X-class rows minus the X centroid
    RowMatrix shifted_y;   ///< Y-class rows minus the same centroid
};

/// Throws InvalidInput when `x_rows` is empty or widths disagree.
CenteredSets fit_centering(const RowMatrix& x_rows, const RowMatrix& y_rows);
CenteredSets fit_centering(const LabeledDataset& dataset);

/// Eigenpairs of a covariance matrix, sorted by non-increasing eigenvalue.
///
/// `vectors` holds one unit eigenvector per row. A truncated decomposition
/// carries only the leading pairs; `total_variance` (the covariance trace)
/// and `spectrum_size` describe the full spectrum so that selection rules
/// can still be evaluated against it.
struct Eigendecomposition {
    RowMatrix vectors;
    Vector values;
    double total_variance = 0.0;
    Index spectrum_size = 0;
    Index rank_bound = 0;  ///< upper bound on the number of positive eigenvalues
    bool complete = true;
};

enum class PcaMethod {
    automatic,   ///< randomized when only a small leading block is needed in high dimension
    exact,       ///< dense covariance eigensolver, or thin SVD when rows < columns
    randomized,  ///< subspace iteration with Rayleigh-Ritz on the leading block
};

/// Exact eigendecomposition of the covariance of `centered_x`.
/// Requires >= 2 rows; throws NumericalError when every row is identical.
Eigendecomposition fit_pca(const RowMatrix& centered_x);

/// Leading `count` eigenpairs by randomized subspace iteration.
///
/// The returned values are Ritz values of the covariance on an orthonormal
/// subspace, so the whitening built from them maps the training covariance
/// to the identity regardless of how well the subspace converged.
Eigendecomposition fit_pca_truncated(const RowMatrix& centered_x, Index count,
                                     std::uint64_t seed, int power_iterations = 4);

enum class SelectionRule { kaiser, broken_stick, conditioning, explicit_range };

std::string to_string(SelectionRule rule);

struct SelectionParams {
    SelectionRule rule = SelectionRule::kaiser;
    double condition_cap = 1e3;
    // 1-based inclusive ordinals, e.g. 20..40 keeps the 20th to the 40th component.
    Index first_ordinal = 1;
    Index last_ordinal = 1;

    static SelectionParams range(Index first, Index last)
    {
        SelectionParams p;
        p.rule = SelectionRule::explicit_range;
        p.first_ordinal = first;
        p.last_ordinal = last;
        return p;
    }
};

/// Components whose eigenvalue falls below this fraction of the largest are never kept.
inline constexpr double kEigenvalueFloor = 1e-12;

/// Zero-based indices of the retained components.
///
/// Throws InvalidInput when the spectrum has no positive eigenvalue or an
/// explicit range misses every usable index.
std::vector<Index> select_components(const Eigendecomposition& spectrum,
                                     const SelectionParams& params);

/// Convenience overload for a complete, sorted spectrum.
std::vector<Index> select_components(const Vector& eigenvalues, const SelectionParams& params);

/// Retained principal directions H (m x n, orthonormal rows) and their eigenvalues.
struct ProjectionBasis {
    RowMatrix components;
    Vector eigenvalues;
    SelectionRule rule = SelectionRule::kaiser;

    Index input_dim() const noexcept { return components.cols(); }
    Index reduced_dim() const noexcept { return components.rows(); }
};

ProjectionBasis make_basis(const Eigendecomposition& spectrum, const std::vector<Index>& retained,
                           SelectionRule rule);

/// Row-wise H z. Throws InvalidInput on a width mismatch.
RowMatrix project(const RowMatrix& points, const ProjectionBasis& basis);

/// Diagonal of W = diag(1/sqrt(lambda_i)).
struct WhiteningWeights {
    Vector inv_sqrt_eigenvalues;

    static WhiteningWeights from(const ProjectionBasis& basis);
};

RowMatrix whiten(const RowMatrix& points, const WhiteningWeights& weights);

}  // namespace edgc
