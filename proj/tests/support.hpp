#pragma once

// Shared helpers for the test suites: seeded data and small independent
// reference implementations used as oracles.

#include "edgc/corrector.hpp"
#include "edgc/dataset.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace edgc::test {

inline RowMatrix gaussian(Index rows, Index cols, std::uint64_t seed, double scale = 1.0)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, scale);
    RowMatrix out(rows, cols);
    for (Index i = 0; i < out.size(); ++i) {
        out.data()[i] = normal(rng);
    }
    return out;
}

inline LabeledDataset stack(const RowMatrix& x, const RowMatrix& y)
{
    RowMatrix features(x.rows() + y.rows(), x.cols());
    features << x, y;
    std::vector<Label> labels(static_cast<std::size_t>(x.rows()), Label::correct);
    labels.resize(static_cast<std::size_t>(features.rows()), Label::error);
    return LabeledDataset(std::move(features), std::move(labels));
}

/// Gauss-Jordan elimination with partial pivoting; deliberately independent of Eigen's solvers.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b)
{
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) {
                continue;
            }
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        b[i] /= a[i][i];
    }
    return b;
}

/// Algorithm 2 written out with plain loops over the model fields.
inline Decision naive_apply(const std::vector<double>& x, const CorrectorModel& model)
{
    const auto n = static_cast<std::size_t>(model.input_dim());
    const auto m = static_cast<std::size_t>(model.reduced_dim());
    const auto k = static_cast<std::size_t>(model.cluster_count());
    std::vector<double> centred(n);
    for (std::size_t j = 0; j < n; ++j) {
        centred[j] = x[j] - model.centering.centroid(static_cast<Index>(j));
    }
    std::vector<double> xw(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            dot += model.basis.components(static_cast<Index>(i), static_cast<Index>(j)) * centred[j];
        }
        xw[i] = dot / std::sqrt(model.basis.eigenvalues(static_cast<Index>(i)));
    }
    const std::vector<double>& route = model.clusters.space == ClusterSpace::whitened ? xw : centred;
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t c = 0; c < k; ++c) {
        double d = 0.0;
        for (std::size_t j = 0; j < route.size(); ++j) {
            const double diff = route[j] - model.clusters.centroids(static_cast<Index>(c), static_cast<Index>(j));
            d += diff * diff;
        }
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    double score = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        score += model.discriminants.vectors(static_cast<Index>(best), static_cast<Index>(i)) * xw[i];
    }
    Decision d;
    d.cluster = static_cast<Index>(best);
    d.score = score;
    d.label = score < model.discriminants.threshold_for(static_cast<Index>(best)) ? Label::error : Label::correct;
    return d;
}

inline std::vector<double> row_vector(const RowMatrix& m, Index row)
{
    return {m.row(row).data(), m.row(row).data() + m.cols()};
}

}  // namespace edgc::test
