#pragma once

#include "edgc/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace edgc {

/// Space the error-set centroids live in.
enum class ClusterSpace : std::uint32_t {
    whitened = 0,           ///< after projection and whitening (default)
    centered_original = 1,  ///< before dimensionality reduction; enables the fused deployment path
};

std::string to_string(ClusterSpace space);

struct ClusterPartition {
    Index k = 0;
    RowMatrix centroids;              ///< k rows
    std::vector<Index> assignments;   ///< one cluster index per clustered point; empty after loading a model
    ClusterSpace space = ClusterSpace::whitened;
};

struct KMeansOptions {
    int max_iterations = 300;
};

/// Seeded k-means++ followed by Lloyd iterations.
///
/// On return no cluster is empty and every point's assigned centroid is at
/// least as close (Euclidean) as any other centroid. Throws InvalidInput when
/// k < 1 or k exceeds the number of points.
ClusterPartition cluster_errors(const RowMatrix& points, Index k, std::uint64_t seed,
                                ClusterSpace space = ClusterSpace::whitened, KMeansOptions options = {});

/// Index of the centroid closest to `point`; the lowest index wins ties.
Index nearest_centroid(const Eigen::Ref<const Vector>& point, const RowMatrix& centroids);

}  // namespace edgc
