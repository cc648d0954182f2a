#include "edgc/dataset.hpp"

#include <algorithm>
#include <string>

namespace edgc {

void require_finite(const Eigen::Ref<const RowMatrix>& values, const char* what)
{
    for (Index i = 0; i < values.rows(); ++i) {
        if (!values.row(i).allFinite()) {
            throw InvalidInput(std::string(what) + ": row " + std::to_string(i) +
                               " has a non-finite entry");
        }
    }
}

LabeledDataset::LabeledDataset(RowMatrix features, std::vector<Label> labels)
    : features_(std::move(features)), labels_(std::move(labels))
{
    if (features_.rows() < 1 || features_.cols() < 1) {
        throw InvalidInput("dataset needs at least one row and one column");
    }
    if (static_cast<Index>(labels_.size()) != features_.rows()) {
        throw InvalidInput("dataset has " + std::to_string(features_.rows()) + " rows but " +
                           std::to_string(labels_.size()) + " labels");
    }
    require_finite(features_, "dataset");
}

Index LabeledDataset::count(Label label) const noexcept
{
    return static_cast<Index>(std::count(labels_.begin(), labels_.end(), label));
}

RowMatrix LabeledDataset::rows_of(Label label) const
{
    RowMatrix out(count(label), features_.cols());
    Index next = 0;
    for (Index i = 0; i < features_.rows(); ++i) {
        if (labels_[static_cast<std::size_t>(i)] == label) {
            out.row(next++) = features_.row(i);
        }
    }
    return out;
}

LabeledDataset LabeledDataset::subset(const std::vector<Index>& rows) const
{
    RowMatrix features(static_cast<Index>(rows.size()), features_.cols());
    std::vector<Label> labels;
    labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Index r = rows[i];
        if (r < 0 || r >= features_.rows()) {
            throw InvalidInput("subset row index out of range");
        }
        features.row(static_cast<Index>(i)) = features_.row(r);
        labels.push_back(labels_[static_cast<std::size_t>(r)]);
    }
    return LabeledDataset(std::move(features), std::move(labels));
}

}  // namespace edgc
