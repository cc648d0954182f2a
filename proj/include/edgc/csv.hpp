#pragma once

#include "edgc/dataset.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace edgc::io {

/// Parse failure tied to a 1-based line of the input.
class CsvError : public InvalidInput {
public:
    CsvError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct CsvOptions {
    bool has_header = false;
    /// Zero-based label column; negative counts from the end (-1 = last).
    long label_column = -1;
};

/// Labels must be 0 (X-class) or 1 (Y-class). Row order is preserved.
LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
LabeledDataset parse_csv(const std::string& text, const CsvOptions& options = {});

/// Numeric table without labels; `drop_column` removes one column (e.g. a label) if set.
RowMatrix load_matrix_csv(const std::filesystem::path& path, bool has_header = false,
                          std::optional<long> drop_column = std::nullopt);

/// Features followed by a trailing 0/1 label column, 17 significant digits.
void save_csv(const std::filesystem::path& path, const LabeledDataset& dataset, bool header = false);

/// 17 significant digits; parses back to the identical double.
std::string format_double(double value);

/// A table of named columns written with 17 significant digits.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);

}  // namespace edgc::io
