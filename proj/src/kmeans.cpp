#include "edgc/kmeans.hpp"

#include "edgc/dataset.hpp"

#include <limits>
#include <random>

namespace edgc {

std::string to_string(ClusterSpace space)
{
    return space == ClusterSpace::whitened ? "whitened" : "original";
}

Index nearest_centroid(const Eigen::Ref<const Vector>& point, const RowMatrix& centroids)
{
    Index best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < centroids.rows(); ++i) {
        const double d = (centroids.row(i).transpose() - point).squaredNorm();
        if (d < best_distance) {
            best_distance = d;
            best = i;
        }
    }
    return best;
}

namespace {

struct Lloyd {
    const RowMatrix& points;
    RowMatrix& centroids;
    std::vector<Index>& assignments;
    Vector point_norms;

    // Bulk assignment through ||p||^2 - 2 p.c + ||c||^2; one matrix product per sweep.
    bool assign_expanded()
    {
        const Vector centroid_norms = centroids.rowwise().squaredNorm();
        const Eigen::MatrixXd cross = points * centroids.transpose();
        bool changed = false;
        for (Index i = 0; i < points.rows(); ++i) {
            Index best = 0;
            double best_distance = std::numeric_limits<double>::infinity();
            for (Index j = 0; j < centroids.rows(); ++j) {
                const double d = point_norms(i) - 2.0 * cross(i, j) + centroid_norms(j);
                if (d < best_distance) {
                    best_distance = d;
                    best = j;
                }
            }
            changed |= assignments[static_cast<std::size_t>(i)] != best;
            assignments[static_cast<std::size_t>(i)] = best;
        }
        return changed;
    }

    bool assign_direct()
    {
        bool changed = false;
        for (Index i = 0; i < points.rows(); ++i) {
            const Index best = nearest_centroid(points.row(i).transpose(), centroids);
            changed |= assignments[static_cast<std::size_t>(i)] != best;
            assignments[static_cast<std::size_t>(i)] = best;
        }
        return changed;
    }

    // Moves the point farthest from its centroid into each empty cluster.
    bool reseed_empty()
    {
        const Index k = centroids.rows();
        std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
        for (Index a : assignments) {
            ++sizes[static_cast<std::size_t>(a)];
        }
        bool reseeded = false;
        for (Index e = 0; e < k; ++e) {
            if (sizes[static_cast<std::size_t>(e)] > 0) {
                continue;
            }
            Index far = -1;
            double far_distance = -1.0;
            for (Index i = 0; i < points.rows(); ++i) {
                const Index a = assignments[static_cast<std::size_t>(i)];
                if (sizes[static_cast<std::size_t>(a)] < 2) {
                    continue;
                }
                const double d = (points.row(i) - centroids.row(a)).squaredNorm();
                if (d > far_distance) {
                    far_distance = d;
                    far = i;
                }
            }
            // k <= N guarantees some cluster holds two or more points.
            const Index from = assignments[static_cast<std::size_t>(far)];
            --sizes[static_cast<std::size_t>(from)];
            ++sizes[static_cast<std::size_t>(e)];
            assignments[static_cast<std::size_t>(far)] = e;
            centroids.row(e) = points.row(far);
            reseeded = true;
        }
        return reseeded;
    }

    void update_means()
    {
        RowMatrix sums = RowMatrix::Zero(centroids.rows(), centroids.cols());
        std::vector<Index> sizes(static_cast<std::size_t>(centroids.rows()), 0);
        for (Index i = 0; i < points.rows(); ++i) {
            const Index a = assignments[static_cast<std::size_t>(i)];
            sums.row(a) += points.row(i);
            ++sizes[static_cast<std::size_t>(a)];
        }
        for (Index j = 0; j < centroids.rows(); ++j) {
            const Index n = sizes[static_cast<std::size_t>(j)];
            if (n > 0) {
                centroids.row(j) = sums.row(j) / static_cast<double>(n);
            }
        }
    }
};

RowMatrix seed_plus_plus(const RowMatrix& points, Index k, std::mt19937_64& rng)
{
    const Index count = points.rows();
    RowMatrix centroids(k, points.cols());
    std::vector<bool> chosen(static_cast<std::size_t>(count), false);

    Index first = std::uniform_int_distribution<Index>(0, count - 1)(rng);
    centroids.row(0) = points.row(first);
    chosen[static_cast<std::size_t>(first)] = true;
    Vector d2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();

    for (Index c = 1; c < k; ++c) {
        const double total = d2.sum();
        Index pick = -1;
        if (total > 0.0) {
            double target = std::uniform_real_distribution<double>(0.0, total)(rng);
            for (Index i = 0; i < count; ++i) {
                target -= d2(i);
                if (target < 0.0 && d2(i) > 0.0) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) {
                // Rounding left the target past the end; take the last positive-weight point.
                for (Index i = count - 1; i >= 0; --i) {
                    if (d2(i) > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        } else {
            // All remaining points coincide with chosen centroids; pick an unused one.
            std::vector<Index> unused;
            for (Index i = 0; i < count; ++i) {
                if (!chosen[static_cast<std::size_t>(i)]) {
                    unused.push_back(i);
                }
            }
            pick = unused[std::uniform_int_distribution<std::size_t>(0, unused.size() - 1)(rng)];
        }
        chosen[static_cast<std::size_t>(pick)] = true;
        centroids.row(c) = points.row(pick);
        d2 = d2.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
    }
    return centroids;
}

}  // namespace

ClusterPartition cluster_errors(const RowMatrix& points, Index k, std::uint64_t seed, ClusterSpace space,
                                KMeansOptions options)
{
    if (k < 1) {
        throw InvalidInput("cluster count must be >= 1");
    }
    if (k > points.rows()) {
        throw InvalidInput("cluster count " + std::to_string(k) + " exceeds the " +
                           std::to_string(points.rows()) + " points to cluster");
    }
    require_finite(points, "cluster input");

    std::mt19937_64 rng(seed);
    ClusterPartition out;
    out.k = k;
    out.space = space;
    out.centroids = seed_plus_plus(points, k, rng);
    out.assignments.assign(static_cast<std::size_t>(points.rows()), -1);

    Lloyd lloyd{points, out.centroids, out.assignments, points.rowwise().squaredNorm()};
    for (int it = 0; it < options.max_iterations; ++it) {
        const bool changed = lloyd.assign_expanded();
        const bool reseeded = lloyd.reseed_empty();
        if (!changed && !reseeded) {
            break;
        }
        lloyd.update_means();
    }

    // Polish with exact distances so the stored assignment is the true nearest centroid.
    bool stable = false;
    for (int it = 0; it < options.max_iterations && !stable; ++it) {
        const bool changed = lloyd.assign_direct();
        const bool reseeded = lloyd.reseed_empty();
        stable = !changed && !reseeded;
        if (!stable) {
            lloyd.update_means();
        }
    }
    if (!stable) {
        lloyd.assign_direct();
        lloyd.reseed_empty();
    }
    return out;
}

}  // namespace edgc
