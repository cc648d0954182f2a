#pragma once

#include "edgc/types.hpp"

#include <optional>
#include <vector>

namespace edgc {

/// Unit Fisher discriminants, one per error cluster, with their thresholds.
struct DiscriminantSet {
    RowMatrix vectors;               ///< k rows, each of unit length
    std::vector<double> thresholds;  ///< one shared value or one per cluster
    double ridge = 0.0;

    Index count() const noexcept { return vectors.rows(); }

    double threshold_for(Index cluster) const
    {
        return thresholds.size() == 1 ? thresholds.front()
                                      : thresholds.at(static_cast<std::size_t>(cluster));
    }
};

/// Ridge applied when none is given: 1e-6 * trace(Cov(X_w)) / m.
double default_ridge(const RowMatrix& x_whitened);

/// w_i = -(Cov(X_w) + Cov(Y_i) + ridge I)^-1 ybar_i, normalised to unit length.
///
/// `y_whitened` rows are grouped by `assignments` into `k` clusters; ybar_i
/// is the mean of cluster i. A single-point cluster contributes zero
/// covariance. With ridge 0 a singular system throws NumericalError; a
/// cluster mean at the origin throws NumericalError. `thresholds` must hold
/// 1 or k values (InvalidInput otherwise).
DiscriminantSet fit_discriminants(const RowMatrix& x_whitened, const RowMatrix& y_whitened,
                                  const std::vector<Index>& assignments, Index k,
                                  std::optional<double> ridge, std::vector<double> thresholds);

/// Lower-level form on precomputed statistics; used by the routine above.
Vector fisher_direction(const Eigen::MatrixXd& x_cov, const Eigen::MatrixXd& y_cov,
                        const Vector& y_mean, double ridge);

/// (x,x) > kappa (x,y) for every row y of `set`. kappa = 1 is plain Fisher separability.
bool fisher_separable(const Eigen::Ref<const Vector>& point, const RowMatrix& set, double kappa = 1.0);

}  // namespace edgc
