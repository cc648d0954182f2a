#pragma once

// Training and deployment of the 1-nn error corrector.
//
// Training centres the X class, projects onto selected principal components,
// whitens, clusters the error set Y and fits one Fisher discriminant per
// cluster. Deployment routes a query to its nearest error-cluster centroid
// and compares that cluster's discriminant score against its threshold.

#include "edgc/dataset.hpp"
#include "edgc/discriminant.hpp"
#include "edgc/kmeans.hpp"
#include "edgc/pca.hpp"

#include <optional>
#include <span>
#include <vector>

namespace edgc {

/// A trained corrector. Immutable once built; safe to share across threads.
struct CorrectorModel {
    CenteringStats centering;
    ProjectionBasis basis;
    WhiteningWeights whitening;
    ClusterPartition clusters;
    DiscriminantSet discriminants;
    /// w*_i = H^T W w_i (k x n); present when clustering ran in the centred original space.
    std::optional<RowMatrix> fused_vectors;

    Index input_dim() const noexcept { return centering.centroid.size(); }
    Index reduced_dim() const noexcept { return basis.reduced_dim(); }
    Index cluster_count() const noexcept { return discriminants.count(); }

    /// Throws InvalidInput when n, m and k disagree across the fields.
    void validate() const;
};

struct TrainOptions {
    Index clusters = 1;
    SelectionParams selection;
    std::optional<double> ridge;           ///< default_ridge() when unset
    std::vector<double> thresholds{0.0};   ///< 1 or `clusters` values
    std::uint64_t seed = 0;
    ClusterSpace cluster_space = ClusterSpace::whitened;
    PcaMethod pca = PcaMethod::automatic;
    KMeansOptions kmeans;
};

CorrectorModel train_corrector(const LabeledDataset& dataset, const TrainOptions& options);

/// w*_i = H^T W w_i for every discriminant.
RowMatrix fuse_discriminants(const ProjectionBasis& basis, const WhiteningWeights& whitening,
                             const DiscriminantSet& discriminants);

struct Decision {
    Label label = Label::correct;
    Index cluster = 0;   ///< routed cluster
    double score = 0.0;  ///< discriminant inner product compared against the threshold
};

/// Projection path: x_w = W H (x - xbar), route, score (w_l, x_w).
///
/// Routing happens in the space the centroids were fitted in, so a model
/// clustered in the centred original space routes on x - xbar. Throws
/// InvalidInput on a width mismatch or a non-finite entry.
Decision apply_corrector(std::span<const double> x, const CorrectorModel& model);

/// Fused path: route on x - xbar and score (w*_l, x - xbar) without projecting.
/// Throws InvalidInput when the model carries no fused vectors.
Decision apply_fused(std::span<const double> x, const CorrectorModel& model);

enum class DeploymentPath { projection, fused };

/// Row-by-row application; output order matches input order.
std::vector<Decision> apply_batch(const RowMatrix& queries, const CorrectorModel& model,
                                  DeploymentPath path = DeploymentPath::projection);

}  // namespace edgc
