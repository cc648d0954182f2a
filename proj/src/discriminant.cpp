#include "edgc/discriminant.hpp"

#include "edgc/pca.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <string>

namespace edgc {

double default_ridge(const RowMatrix& x_whitened)
{
    if (x_whitened.cols() == 0) {
        return 0.0;
    }
    return 1e-6 * covariance(x_whitened).trace() / static_cast<double>(x_whitened.cols());
}

Vector fisher_direction(const Eigen::MatrixXd& x_cov, const Eigen::MatrixXd& y_cov, const Vector& y_mean,
                        double ridge)
{
    if (!(ridge >= 0.0)) {
        throw InvalidInput("ridge must be non-negative");
    }
    const Index dim = y_mean.size();
    if (x_cov.rows() != dim || y_cov.rows() != dim) {
        throw InvalidInput("covariance and mean dimensions disagree");
    }
    Eigen::MatrixXd combined = x_cov + y_cov;
    combined.diagonal().array() += ridge;

    Eigen::LLT<Eigen::MatrixXd> llt(combined);
    bool ok = llt.info() == Eigen::Success;
    if (ok) {
        // LLT succeeds on some numerically singular matrices; reject a vanishing pivot.
        const Vector diag = llt.matrixLLT().diagonal();
        ok = diag.minCoeff() > 1e-12 * diag.maxCoeff();
    }
    if (!ok) {
        throw NumericalError(ridge == 0.0
                                 ? "combined covariance is singular; supply a nonzero ridge"
                                 : "combined covariance is singular even with ridge " + std::to_string(ridge));
    }
    Vector direction = -llt.solve(y_mean);
    const double norm = direction.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw NumericalError("error-cluster mean coincides with the X centroid; discriminant undefined");
    }
    return direction / norm;
}

DiscriminantSet fit_discriminants(const RowMatrix& x_whitened, const RowMatrix& y_whitened,
                                  const std::vector<Index>& assignments, Index k,
                                  std::optional<double> ridge, std::vector<double> thresholds)
{
    const Index dim = x_whitened.cols();
    if (y_whitened.cols() != dim) {
        throw InvalidInput("X and Y whitened widths disagree");
    }
    if (static_cast<Index>(assignments.size()) != y_whitened.rows()) {
        throw InvalidInput("one cluster assignment per Y point is required");
    }
    if (k < 1) {
        throw InvalidInput("cluster count must be >= 1");
    }
    if (thresholds.empty()) {
        thresholds.push_back(0.0);
    }
    if (thresholds.size() != 1 && static_cast<Index>(thresholds.size()) != k) {
        throw InvalidInput("thresholds must hold 1 or " + std::to_string(k) + " values, got " +
                           std::to_string(thresholds.size()));
    }

    std::vector<std::vector<Index>> members(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const Index a = assignments[i];
        if (a < 0 || a >= k) {
            throw InvalidInput("cluster assignment out of range");
        }
        members[static_cast<std::size_t>(a)].push_back(static_cast<Index>(i));
    }

    DiscriminantSet out;
    out.ridge = ridge ? *ridge : default_ridge(x_whitened);
    out.thresholds = std::move(thresholds);
    out.vectors.resize(k, dim);

    const Eigen::MatrixXd x_cov = covariance(x_whitened);
    for (Index c = 0; c < k; ++c) {
        const auto& rows = members[static_cast<std::size_t>(c)];
        if (rows.empty()) {
            throw InvalidInput("cluster " + std::to_string(c) + " is empty");
        }
        RowMatrix cluster(static_cast<Index>(rows.size()), dim);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            cluster.row(static_cast<Index>(i)) = y_whitened.row(rows[i]);
        }
        const Vector mean = cluster.colwise().mean().transpose();
        out.vectors.row(c) = fisher_direction(x_cov, covariance(cluster), mean, out.ridge).transpose();
    }
    return out;
}

bool fisher_separable(const Eigen::Ref<const Vector>& point, const RowMatrix& set, double kappa)
{
    if (set.cols() != point.size()) {
        throw InvalidInput("fisher_separable: dimension mismatch");
    }
    const double self = point.squaredNorm();
    const Vector cross = set * point;
    for (Index i = 0; i < cross.size(); ++i) {
        if (!(self > kappa * cross(i))) {
            return false;
        }
    }
    return true;
}

}  // namespace edgc
