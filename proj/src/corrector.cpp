#include "edgc/corrector.hpp"

#include "edgc/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace edgc {

namespace {

bool all_rows_identical(const RowMatrix& rows)
{
    for (Index i = 1; i < rows.rows(); ++i) {
        if (rows.row(i) != rows.row(0)) {
            return false;
        }
    }
    return true;
}

Eigendecomposition principal_components(const RowMatrix& centered_x, const TrainOptions& options)
{
    const bool range = options.selection.rule == SelectionRule::explicit_range;
    const Index limit = std::min(centered_x.rows(), centered_x.cols());
    bool randomized = options.pca == PcaMethod::randomized;
    if (options.pca == PcaMethod::automatic) {
        randomized = range && centered_x.cols() > 2048 && options.selection.last_ordinal * 4 <= limit;
    }
    if (!randomized) {
        return fit_pca(centered_x);
    }
    if (!range) {
        throw InvalidInput("randomized principal components need an explicit component range");
    }
    return fit_pca_truncated(centered_x, options.selection.last_ordinal, derive_seed(options.seed, 1));
}

void check_query(std::span<const double> x, const CorrectorModel& model)
{
    if (static_cast<Index>(x.size()) != model.input_dim()) {
        throw InvalidInput("query has " + std::to_string(x.size()) + " features, model expects " +
                           std::to_string(model.input_dim()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw InvalidInput("query has a non-finite entry");
        }
    }
}

Decision decide(const CorrectorModel& model, Index cluster, double score)
{
    Decision d;
    d.cluster = cluster;
    d.score = score;
    d.label = score < model.discriminants.threshold_for(cluster) ? Label::error : Label::correct;
    return d;
}

}  // namespace

void CorrectorModel::validate() const
{
    const Index n = input_dim();
    const Index m = basis.reduced_dim();
    const Index k = discriminants.count();
    auto fail = [](const std::string& what) { throw InvalidInput("inconsistent model: " + what); };
    if (n < 1 || m < 1 || k < 1) {
        fail("n, m and k must be positive");
    }
    if (m > n) {
        fail("more components than input features");
    }
    if (basis.components.cols() != n) {
        fail("basis width differs from centroid length");
    }
    if (basis.eigenvalues.size() != m || whitening.inv_sqrt_eigenvalues.size() != m) {
        fail("eigenvalue or whitening length differs from component count");
    }
    if (clusters.k != k || clusters.centroids.rows() != k) {
        fail("cluster count differs from discriminant count");
    }
    const Index centroid_dim = clusters.space == ClusterSpace::whitened ? m : n;
    if (clusters.centroids.cols() != centroid_dim) {
        fail("cluster centroid width does not match the clustering space");
    }
    if (discriminants.vectors.cols() != m) {
        fail("discriminant width differs from component count");
    }
    if (discriminants.thresholds.size() != 1 && static_cast<Index>(discriminants.thresholds.size()) != k) {
        fail("threshold count must be 1 or k");
    }
    if (fused_vectors && (fused_vectors->rows() != k || fused_vectors->cols() != n)) {
        fail("fused vectors must be k x n");
    }
}

RowMatrix fuse_discriminants(const ProjectionBasis& basis, const WhiteningWeights& whitening,
                             const DiscriminantSet& discriminants)
{
    // Row i is (H^T W w_i)^T = w_i^T W H.
    return discriminants.vectors * whitening.inv_sqrt_eigenvalues.asDiagonal() * basis.components;
}

CorrectorModel train_corrector(const LabeledDataset& dataset, const TrainOptions& options)
{
    const RowMatrix x_rows = dataset.rows_of(Label::correct);
    const RowMatrix y_rows = dataset.rows_of(Label::error);
    if (x_rows.rows() < 2) {
        throw InvalidInput("training needs at least two X-class rows, got " + std::to_string(x_rows.rows()));
    }
    if (y_rows.rows() < 1) {
        throw InvalidInput("training needs at least one Y-class row");
    }
    if (options.clusters < 1 || options.clusters > y_rows.rows()) {
        throw InvalidInput("cluster count " + std::to_string(options.clusters) + " must lie in [1, " +
                           std::to_string(y_rows.rows()) + "]");
    }
    if (all_rows_identical(x_rows)) {
        throw NumericalError("covariance has rank 0: all X-class rows are identical");
    }

    CorrectorModel model;
    CenteredSets sets = fit_centering(x_rows, y_rows);
    model.centering = sets.stats;

    const std::uint64_t cluster_seed = derive_seed(options.seed, 0);
    if (options.cluster_space == ClusterSpace::centered_original) {
        // Clustering precedes dimensionality reduction so that routing needs no projection.
        model.clusters = cluster_errors(sets.shifted_y, options.clusters, cluster_seed,
                                        ClusterSpace::centered_original, options.kmeans);
    }

    const Eigendecomposition spectrum = principal_components(sets.centered_x, options);
    model.basis = make_basis(spectrum, select_components(spectrum, options.selection), options.selection.rule);
    model.whitening = WhiteningWeights::from(model.basis);

    const RowMatrix x_whitened = whiten(project(sets.centered_x, model.basis), model.whitening);
    const RowMatrix y_whitened = whiten(project(sets.shifted_y, model.basis), model.whitening);

    if (options.cluster_space == ClusterSpace::whitened) {
        model.clusters = cluster_errors(y_whitened, options.clusters, cluster_seed, ClusterSpace::whitened,
                                        options.kmeans);
    }

    model.discriminants = fit_discriminants(x_whitened, y_whitened, model.clusters.assignments,
                                            options.clusters, options.ridge, options.thresholds);
    if (options.cluster_space == ClusterSpace::centered_original) {
        model.fused_vectors = fuse_discriminants(model.basis, model.whitening, model.discriminants);
    }
    model.validate();
    return model;
}

Decision apply_corrector(std::span<const double> x, const CorrectorModel& model)
{
    check_query(x, model);
    const Eigen::Map<const Vector> query(x.data(), static_cast<Index>(x.size()));
    const Vector centered = query - model.centering.centroid;
    const Vector whitened = model.whitening.inv_sqrt_eigenvalues.cwiseProduct(model.basis.components * centered);
    const Index cluster = model.clusters.space == ClusterSpace::whitened
                              ? nearest_centroid(whitened, model.clusters.centroids)
                              : nearest_centroid(centered, model.clusters.centroids);
    return decide(model, cluster, model.discriminants.vectors.row(cluster).dot(whitened.transpose()));
}

Decision apply_fused(std::span<const double> x, const CorrectorModel& model)
{
    if (!model.fused_vectors || model.clusters.space != ClusterSpace::centered_original) {
        throw InvalidInput("fused deployment needs a model clustered in the original space with fused vectors");
    }
    check_query(x, model);
    const Eigen::Map<const Vector> query(x.data(), static_cast<Index>(x.size()));
    const Vector centered = query - model.centering.centroid;
    const Index cluster = nearest_centroid(centered, model.clusters.centroids);
    return decide(model, cluster, model.fused_vectors->row(cluster).dot(centered.transpose()));
}

std::vector<Decision> apply_batch(const RowMatrix& queries, const CorrectorModel& model, DeploymentPath path)
{
    std::vector<Decision> out;
    out.reserve(static_cast<std::size_t>(queries.rows()));
    for (Index i = 0; i < queries.rows(); ++i) {
        const std::span<const double> row(queries.row(i).data(), static_cast<std::size_t>(queries.cols()));
        out.push_back(path == DeploymentPath::fused ? apply_fused(row, model) : apply_corrector(row, model));
    }
    return out;
}

}  // namespace edgc
