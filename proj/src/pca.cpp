#include "edgc/pca.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <random>

namespace edgc {

Eigen::MatrixXd covariance(const Eigen::Ref<const RowMatrix>& rows)
{
    const Index count = rows.rows();
    const Index dim = rows.cols();
    if (count <= 1) {
        return Eigen::MatrixXd::Zero(dim, dim);
    }
    const Eigen::RowVectorXd mean = rows.colwise().mean();
    const RowMatrix centered = rows.rowwise() - mean;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
    cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(), 1.0 / static_cast<double>(count));
    cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
    return cov;
}

CenteredSets fit_centering(const RowMatrix& x_rows, const RowMatrix& y_rows)
{
    if (x_rows.rows() < 1) {
        throw InvalidInput("training set has no X-class rows");
    }
    if (y_rows.rows() > 0 && y_rows.cols() != x_rows.cols()) {
        throw InvalidInput("X and Y rows have different widths");
    }
    CenteredSets out;
    out.stats.centroid = x_rows.colwise().mean().transpose();
    out.centered_x = x_rows.rowwise() - out.stats.centroid.transpose();
    if (y_rows.rows() > 0) {
        out.shifted_y = y_rows.rowwise() - out.stats.centroid.transpose();
    } else {
        out.shifted_y.resize(0, x_rows.cols());
    }
    return out;
}

CenteredSets fit_centering(const LabeledDataset& dataset)
{
    return fit_centering(dataset.rows_of(Label::correct), dataset.rows_of(Label::error));
}

namespace {

void require_pca_input(const RowMatrix& centered_x)
{
    if (centered_x.rows() < 2) {
        throw InvalidInput("principal components need at least two rows");
    }
    if (centered_x.cols() < 1) {
        throw InvalidInput("principal components need at least one column");
    }
}

void require_nondegenerate(const Eigendecomposition& eig)
{
    if (eig.values.size() == 0 || !(eig.values(0) > 0.0) || !(eig.total_variance > 0.0)) {
        throw NumericalError("covariance has rank 0: all rows are identical");
    }
}

}  // namespace

Eigendecomposition fit_pca(const RowMatrix& centered_x)
{
    require_pca_input(centered_x);
    const Index rows = centered_x.rows();
    const Index dim = centered_x.cols();

    Eigendecomposition out;
    out.spectrum_size = dim;
    out.rank_bound = std::min(dim, rows - 1);
    out.complete = true;

    if (rows >= dim) {
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
        cov.selfadjointView<Eigen::Lower>().rankUpdate(centered_x.transpose(),
                                                      1.0 / static_cast<double>(rows));
        out.total_variance = cov.diagonal().sum();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov, Eigen::ComputeEigenvectors);
        if (solver.info() != Eigen::Success) {
            throw NumericalError("covariance eigensolver did not converge");
        }
        // Eigen sorts ascending.
        out.values = solver.eigenvalues().reverse().cwiseMax(0.0);
        out.vectors = solver.eigenvectors().rowwise().reverse().transpose();
    } else {
        // Fewer rows than columns: the nonzero spectrum comes from a thin SVD of the data.
        Eigen::BDCSVD<Eigen::MatrixXd> svd(centered_x, Eigen::ComputeThinV);
        const Vector sv = svd.singularValues();
        out.values = Vector::Zero(dim);
        out.values.head(sv.size()) = sv.cwiseAbs2() / static_cast<double>(rows);
        out.total_variance = centered_x.squaredNorm() / static_cast<double>(rows);
        // Only the first min(rows, dim) directions are determined; the rest span the null space
        // and carry eigenvalue 0, so they are never retained and need not be materialised.
        out.vectors = svd.matrixV().transpose();
        out.values.conservativeResize(sv.size());
    }
    require_nondegenerate(out);
    return out;
}

Eigendecomposition fit_pca_truncated(const RowMatrix& centered_x, Index count, std::uint64_t seed,
                                     int power_iterations)
{
    require_pca_input(centered_x);
    if (count < 1) {
        throw InvalidInput("truncated principal components need count >= 1");
    }
    const Index rows = centered_x.rows();
    const Index dim = centered_x.cols();
    const Index limit = std::min(rows, dim);
    count = std::min(count, limit);
    const Index block = std::min(count + 10, limit);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd probe(dim, block);
    for (Index j = 0; j < block; ++j) {
        for (Index i = 0; i < dim; ++i) {
            probe(i, j) = normal(rng);
        }
    }

    auto orthonormalize = [&](const Eigen::MatrixXd& m) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
        return Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols()));
    };

    Eigen::MatrixXd basis = orthonormalize(centered_x.transpose() * (centered_x * probe));
    for (int it = 0; it < power_iterations; ++it) {
        basis = orthonormalize(centered_x.transpose() * (centered_x * basis));
    }

    const Eigen::MatrixXd scores = centered_x * basis;
    Eigen::MatrixXd small = Eigen::MatrixXd::Zero(block, block);
    small.selfadjointView<Eigen::Lower>().rankUpdate(scores.transpose(), 1.0 / static_cast<double>(rows));
    small.triangularView<Eigen::StrictlyUpper>() = small.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(small, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Rayleigh-Ritz eigensolver did not converge");
    }

    Eigendecomposition out;
    out.values = solver.eigenvalues().reverse().head(count).cwiseMax(0.0);
    const Eigen::MatrixXd ritz = basis * solver.eigenvectors().rowwise().reverse().leftCols(count);
    out.vectors = ritz.transpose();
    out.total_variance = centered_x.squaredNorm() / static_cast<double>(rows);
    out.spectrum_size = dim;
    out.rank_bound = std::min(dim, rows - 1);
    out.complete = count == limit;
    require_nondegenerate(out);
    return out;
}

std::string to_string(SelectionRule rule)
{
    switch (rule) {
    case SelectionRule::kaiser:
        return "kaiser";
    case SelectionRule::broken_stick:
        return "broken-stick";
    case SelectionRule::conditioning:
        return "conditioning";
    case SelectionRule::explicit_range:
        return "range";
    }
    return "unknown";
}

std::vector<Index> select_components(const Eigendecomposition& spectrum, const SelectionParams& params)
{
    const Vector& values = spectrum.values;
    const Index available = values.size();
    if (available == 0 || !(values(0) > 0.0)) {
        throw InvalidInput("component selection needs at least one positive eigenvalue");
    }
    for (Index i = 1; i < available; ++i) {
        if (values(i) > values(i - 1)) {
            throw InvalidInput("eigenvalues must be sorted in non-increasing order");
        }
    }
    const double floor = kEigenvalueFloor * values(0);
    auto usable = [&](Index i) { return values(i) > 0.0 && values(i) >= floor; };

    std::vector<Index> kept;
    switch (params.rule) {
    case SelectionRule::kaiser: {
        double mean = 0.0;
        if (spectrum.complete) {
            Index positive = 0;
            for (Index i = 0; i < available; ++i) {
                if (values(i) > 0.0) {
                    mean += values(i);
                    ++positive;
                }
            }
            mean /= static_cast<double>(positive);
        } else {
            const Index rank = spectrum.rank_bound > 0 ? spectrum.rank_bound : spectrum.spectrum_size;
            mean = spectrum.total_variance / static_cast<double>(rank);
        }
        for (Index i = 0; i < available && usable(i) && values(i) > mean; ++i) {
            kept.push_back(i);
        }
        break;
    }
    case SelectionRule::broken_stick: {
        const Index p = std::max(spectrum.spectrum_size, available);
        const double total = spectrum.total_variance > 0.0 ? spectrum.total_variance : values.sum();
        // Tail sums of the harmonic series: b_i = (1/p) sum_{j=i..p} 1/j.
        std::vector<double> tail(static_cast<std::size_t>(p) + 2, 0.0);
        for (Index j = p; j >= 1; --j) {
            tail[static_cast<std::size_t>(j)] = tail[static_cast<std::size_t>(j) + 1] + 1.0 / static_cast<double>(j);
        }
        for (Index i = 0; i < available && usable(i); ++i) {
            const double expected = tail[static_cast<std::size_t>(i) + 1] / static_cast<double>(p);
            if (!(values(i) / total > expected)) {
                break;
            }
            kept.push_back(i);
        }
        break;
    }
    case SelectionRule::conditioning: {
        if (!(params.condition_cap >= 1.0)) {
            throw InvalidInput("conditioning cap must be >= 1");
        }
        for (Index i = 0; i < available && usable(i) && values(0) / values(i) <= params.condition_cap; ++i) {
            kept.push_back(i);
        }
        break;
    }
    case SelectionRule::explicit_range: {
        if (params.first_ordinal < 1 || params.last_ordinal < params.first_ordinal) {
            throw InvalidInput("component range must satisfy 1 <= first <= last");
        }
        const Index last = std::min(params.last_ordinal, available);
        for (Index i = params.first_ordinal - 1; i < last; ++i) {
            if (usable(i)) {
                kept.push_back(i);
            }
        }
        if (kept.empty()) {
            throw InvalidInput("component range " + std::to_string(params.first_ordinal) + ".." +
                               std::to_string(params.last_ordinal) + " contains no usable component (" +
                               std::to_string(available) + " available)");
        }
        break;
    }
    }
    // A flat spectrum leaves nothing strictly above the Kaiser mean or the broken stick.
    if (kept.empty()) {
        kept.push_back(0);
    }
    return kept;
}

std::vector<Index> select_components(const Vector& eigenvalues, const SelectionParams& params)
{
    Eigendecomposition spectrum;
    spectrum.values = eigenvalues;
    spectrum.total_variance = eigenvalues.cwiseMax(0.0).sum();
    spectrum.spectrum_size = eigenvalues.size();
    spectrum.rank_bound = eigenvalues.size();
    spectrum.complete = true;
    return select_components(spectrum, params);
}

ProjectionBasis make_basis(const Eigendecomposition& spectrum, const std::vector<Index>& retained,
                           SelectionRule rule)
{
    if (retained.empty()) {
        throw InvalidInput("projection basis needs at least one component");
    }
    ProjectionBasis basis;
    basis.rule = rule;
    basis.components.resize(static_cast<Index>(retained.size()), spectrum.vectors.cols());
    basis.eigenvalues.resize(static_cast<Index>(retained.size()));
    for (std::size_t i = 0; i < retained.size(); ++i) {
        const Index src = retained[i];
        if (src < 0 || src >= spectrum.values.size()) {
            throw InvalidInput("retained component index out of range");
        }
        if (!(spectrum.values(src) > 0.0)) {
            throw InvalidInput("retained component has a non-positive eigenvalue");
        }
        basis.components.row(static_cast<Index>(i)) = spectrum.vectors.row(src);
        basis.eigenvalues(static_cast<Index>(i)) = spectrum.values(src);
    }
    return basis;
}

RowMatrix project(const RowMatrix& points, const ProjectionBasis& basis)
{
    if (points.cols() != basis.input_dim()) {
        throw InvalidInput("projection expects width " + std::to_string(basis.input_dim()) + ", got " +
                           std::to_string(points.cols()));
    }
    return points * basis.components.transpose();
}

WhiteningWeights WhiteningWeights::from(const ProjectionBasis& basis)
{
    return WhiteningWeights{basis.eigenvalues.cwiseSqrt().cwiseInverse()};
}

RowMatrix whiten(const RowMatrix& points, const WhiteningWeights& weights)
{
    if (points.cols() != weights.inv_sqrt_eigenvalues.size()) {
        throw InvalidInput("whitening expects width " + std::to_string(weights.inv_sqrt_eigenvalues.size()) +
                           ", got " + std::to_string(points.cols()));
    }
    return points * weights.inv_sqrt_eigenvalues.asDiagonal();
}

}  // namespace edgc
