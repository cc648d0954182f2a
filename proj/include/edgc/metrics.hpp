#pragma once

#include "edgc/pca.hpp"
#include "edgc/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace edgc {

/// One operating point. A sample is flagged as an error when score < threshold.
struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;  ///< flagged X-class fraction
    double tpr = 0.0;  ///< flagged Y-class fraction
};

/// Points ordered by increasing threshold, from (0,0) to (1,1).
struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

/// Threshold sweep over the distinct scores with Y-class as the positive
/// class and low scores pointing to Y. Tied scores enter at a single point;
/// AUC by the trapezoid rule. Throws InvalidInput on length mismatch or when
/// a class is missing.
RocCurve roc_curve(std::span<const double> scores, std::span<const Label> labels);

/// Mean of each window of `window` consecutive 0/1 outputs.
/// Output length is size - window + 1; throws InvalidInput if window is 0 or exceeds the input.
std::vector<double> sliding_window_score(std::span<const std::uint8_t> binary_outputs, std::size_t window);

/// |(xbar - ybar)/|xbar - ybar| . h_i/|h_i|| for every row of the basis.
/// Throws InvalidInput when the means coincide or widths disagree.
std::vector<double> relative_relevance(const Vector& x_mean, const Vector& y_mean, const ProjectionBasis& basis);

}  // namespace edgc
