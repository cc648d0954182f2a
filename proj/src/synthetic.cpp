#include "edgc/synthetic.hpp"

#include "edgc/csv.hpp"
#include "edgc/random.hpp"
#include "edgc/separation.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <numeric>

namespace edgc::io {

Generator parse_generator(const std::string& name)
{
    if (name == "uniform_ball") {
        return Generator::uniform_ball;
    }
    if (name == "two_balls") {
        return Generator::two_balls;
    }
    if (name == "planted_clusters") {
        return Generator::planted_clusters;
    }
    throw InvalidInput("unknown generator '" + name + "' (uniform_ball, two_balls, planted_clusters)");
}

std::string to_string(Generator generator)
{
    switch (generator) {
    case Generator::uniform_ball:
        return "uniform_ball";
    case Generator::two_balls:
        return "two_balls";
    case Generator::planted_clusters:
        return "planted_clusters";
    }
    return "unknown";
}

void SyntheticSpec::validate() const
{
    if (n < 1) {
        throw InvalidInput("synthetic data needs n >= 1");
    }
    if (x_count < 1 || y_count < 1) {
        throw InvalidInput("synthetic data needs at least one row per class");
    }
    if (generator == Generator::two_balls && !(epsilon >= 0.0)) {
        throw InvalidInput("two_balls needs epsilon >= 0");
    }
    if (generator == Generator::planted_clusters) {
        if (clusters < 1 || clusters > y_count) {
            throw InvalidInput("planted_clusters needs 1 <= clusters <= y_count");
        }
        if (!(spread >= 0.0) || !(separation >= 0.0) || !(noise >= 0.0)) {
            throw InvalidInput("spread, separation and noise must be non-negative");
        }
        if (latent_dim < 0 || latent_dim > n) {
            throw InvalidInput("latent_dim must lie in [0, n]");
        }
    }
}

namespace {

void fill_normal(Eigen::Ref<RowMatrix> out, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal;
    for (Index i = 0; i < out.rows(); ++i) {
        for (Index j = 0; j < out.cols(); ++j) {
            out(i, j) = normal(rng);
        }
    }
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed)
{
    spec.validate();
    const Index total = spec.x_count + spec.y_count;
    RowMatrix features(total, spec.n);
    std::vector<Index> cluster_of(static_cast<std::size_t>(total), -1);
    RowMatrix centers;

    std::mt19937_64 x_rng = substream(seed, 0);
    std::mt19937_64 y_rng = substream(seed, 1);
    auto x_block = features.topRows(spec.x_count);
    auto y_block = features.bottomRows(spec.y_count);

    switch (spec.generator) {
    case Generator::uniform_ball:
        lab::fill_unit_ball(x_block, x_rng);
        lab::fill_unit_ball(y_block, y_rng);
        break;
    case Generator::two_balls:
        lab::fill_unit_ball(x_block, x_rng);
        lab::fill_unit_ball(y_block, y_rng);
        y_block.col(0).array() += spec.epsilon;
        break;
    case Generator::planted_clusters: {
        const Index d = spec.latent_dim > 0 ? spec.latent_dim : std::min<Index>(spec.n, 50);
        std::mt19937_64 geometry_rng = substream(seed, 2);
        RowMatrix gaussian(spec.n, d);
        fill_normal(gaussian, geometry_rng);
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
        const Eigen::MatrixXd embed = qr.householderQ() * Eigen::MatrixXd::Identity(spec.n, d);

        RowMatrix directions(spec.clusters, d);
        fill_normal(directions, geometry_rng);
        directions.rowwise().normalize();
        const RowMatrix latent_centers = spec.separation * directions;
        centers = latent_centers * embed.transpose();

        RowMatrix latent(spec.x_count, d);
        fill_normal(latent, x_rng);
        RowMatrix ambient(spec.x_count, spec.n);
        fill_normal(ambient, x_rng);
        x_block = latent * embed.transpose() + spec.noise * ambient;

        latent.resize(spec.y_count, d);
        fill_normal(latent, y_rng);
        latent *= spec.spread;
        for (Index i = 0; i < spec.y_count; ++i) {
            const Index c = i % spec.clusters;
            latent.row(i) += latent_centers.row(c);
            cluster_of[static_cast<std::size_t>(spec.x_count + i)] = c;
        }
        ambient.resize(spec.y_count, spec.n);
        fill_normal(ambient, y_rng);
        y_block = latent * embed.transpose() + spec.noise * ambient;
        break;
    }
    }

    std::vector<Label> labels(static_cast<std::size_t>(total), Label::correct);
    std::fill(labels.begin() + spec.x_count, labels.end(), Label::error);

    std::vector<Index> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), Index{0});
    std::mt19937_64 shuffle_rng = substream(seed, 3);
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    RowMatrix shuffled(total, spec.n);
    std::vector<Label> shuffled_labels(labels.size());
    std::vector<Index> shuffled_clusters(cluster_of.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto src = static_cast<std::size_t>(order[i]);
        shuffled.row(static_cast<Index>(i)) = features.row(order[i]);
        shuffled_labels[i] = labels[src];
        shuffled_clusters[i] = cluster_of[src];
    }
    return SyntheticData{LabeledDataset(std::move(shuffled), std::move(shuffled_labels)), std::move(centers),
                         std::move(shuffled_clusters)};
}

void gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed, const std::filesystem::path& out_path)
{
    save_csv(out_path, generate_synthetic(spec, seed).dataset);
}

}  // namespace edgc::io
