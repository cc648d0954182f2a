#include "edgc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace edgc {

RocCurve roc_curve(std::span<const double> scores, std::span<const Label> labels)
{
    if (scores.size() != labels.size()) {
        throw InvalidInput("scores and labels differ in length");
    }
    std::size_t positives = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (std::isnan(scores[i])) {
            throw InvalidInput("score " + std::to_string(i) + " is NaN");
        }
        positives += labels[i] == Label::error ? 1 : 0;
    }
    const std::size_t negatives = scores.size() - positives;
    if (positives == 0 || negatives == 0) {
        throw InvalidInput("ROC needs both classes present");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    RocCurve curve;
    // Before any score is flagged: threshold at the smallest score.
    curve.points.push_back({scores[order.front()], 0.0, 0.0});
    std::size_t tp = 0;
    std::size_t fp = 0;
    const double p = static_cast<double>(positives);
    const double q = static_cast<double>(negatives);
    for (std::size_t i = 0; i < order.size();) {
        const double s = scores[order[i]];
        std::size_t j = i;
        for (; j < order.size() && scores[order[j]] == s; ++j) {
            (labels[order[j]] == Label::error ? tp : fp) += 1;
        }
        // "score < threshold" flags everything up to s once the threshold moves to the next score.
        const double next = j < order.size() ? scores[order[j]] : std::numeric_limits<double>::infinity();
        curve.points.push_back({next, static_cast<double>(fp) / q, static_cast<double>(tp) / p});
        i = j;
    }

    double auc = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
    curve.auc = auc;
    return curve;
}

std::vector<double> sliding_window_score(std::span<const std::uint8_t> binary_outputs, std::size_t window)
{
    if (window == 0) {
        throw InvalidInput("window must be positive");
    }
    if (window > binary_outputs.size()) {
        throw InvalidInput("window " + std::to_string(window) + " exceeds stream length " +
                           std::to_string(binary_outputs.size()));
    }
    std::vector<double> out;
    out.reserve(binary_outputs.size() - window + 1);
    // Integer running sum: exact regardless of stream length.
    std::size_t sum = 0;
    for (std::size_t i = 0; i < window; ++i) {
        sum += binary_outputs[i] != 0 ? 1 : 0;
    }
    const double w = static_cast<double>(window);
    out.push_back(static_cast<double>(sum) / w);
    for (std::size_t i = window; i < binary_outputs.size(); ++i) {
        sum += binary_outputs[i] != 0 ? 1 : 0;
        sum -= binary_outputs[i - window] != 0 ? 1 : 0;
        out.push_back(static_cast<double>(sum) / w);
    }
    return out;
}

std::vector<double> relative_relevance(const Vector& x_mean, const Vector& y_mean, const ProjectionBasis& basis)
{
    if (x_mean.size() != y_mean.size() || x_mean.size() != basis.input_dim()) {
        throw InvalidInput("class means and basis widths disagree");
    }
    const Vector diff = x_mean - y_mean;
    const double norm = diff.norm();
    if (!(norm > 0.0)) {
        throw InvalidInput("class means coincide; relevance undefined");
    }
    const Vector direction = diff / norm;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(basis.reduced_dim()));
    for (Index i = 0; i < basis.reduced_dim(); ++i) {
        const auto h = basis.components.row(i);
        const double h_norm = h.norm();
        if (!(h_norm > 0.0)) {
            throw InvalidInput("basis component " + std::to_string(i) + " has zero length");
        }
        out.push_back(std::min(1.0, std::abs(h.dot(direction.transpose()) / h_norm)));
    }
    return out;
}

}  // namespace edgc
