#pragma once

#include "edgc/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace edgc::io {

enum class Generator {
    uniform_ball,      ///< both classes uniform in the unit ball
    two_balls,         ///< X uniform in the unit ball, Y in the unit ball centred at epsilon e_1
    planted_clusters,  ///< latent-subspace Gaussian X with Y in planted clusters
};

Generator parse_generator(const std::string& name);
std::string to_string(Generator generator);

/// Parameters of a synthetic labelled dataset.
///
/// planted_clusters: a random orthonormal n x d map A (d = latent_dim, or
/// min(n, 50) when 0) embeds X = A z + noise g with z ~ N(0, I_d), and Y
/// cluster i = A (separation u_i + spread z) + noise g with u_i a random unit
/// latent direction. Y points are dealt to clusters round-robin.
struct SyntheticSpec {
    Generator generator = Generator::planted_clusters;
    Index n = 2;
    Index x_count = 1;
    Index y_count = 1;
    double epsilon = 0.1;
    Index clusters = 1;
    double spread = 1.0;
    double separation = 5.0;
    Index latent_dim = 0;
    double noise = 0.1;

    /// Throws InvalidInput on an inconsistent spec.
    void validate() const;
};

struct SyntheticData {
    LabeledDataset dataset;
    RowMatrix cluster_centers;         ///< planted Y centres in feature space (planted_clusters only)
    std::vector<Index> cluster_of_row; ///< planted cluster per row, -1 for X rows
};

/// Deterministic for a fixed seed. Rows are shuffled.
SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

/// Generates and writes a labelled CSV (trailing label column).
void gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed, const std::filesystem::path& out_path);

}  // namespace edgc::io
