#pragma once

#include "edgc/types.hpp"

#include <vector>

namespace edgc {

/// Feature matrix with one binary label per row.
class LabeledDataset {
public:
    LabeledDataset() = default;

    /// Validates shape, finiteness and label count; throws InvalidInput.
    LabeledDataset(RowMatrix features, std::vector<Label> labels);

    const RowMatrix& features() const noexcept { return features_; }
    const std::vector<Label>& labels() const noexcept { return labels_; }

    Index rows() const noexcept { return features_.rows(); }
    Index dimension() const noexcept { return features_.cols(); }

    Index count(Label label) const noexcept;

    /// Copies the rows carrying `label`, preserving their order.
    RowMatrix rows_of(Label label) const;

    /// Rows selected by index, in the order given.
    LabeledDataset subset(const std::vector<Index>& rows) const;

private:
    RowMatrix features_;
    std::vector<Label> labels_;
};

/// Throws InvalidInput if any entry is NaN or infinite.
void require_finite(const Eigen::Ref<const RowMatrix>& values, const char* what);

}  // namespace edgc
