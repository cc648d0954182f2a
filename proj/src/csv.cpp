#include "edgc/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace edgc::io {

CsvError::CsvError(std::size_t line, const std::string& what)
    : InvalidInput("line " + std::to_string(line) + ": " + what), line_(line)
{
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                : comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return cells;
}

double parse_number(std::string_view cell, std::size_t line)
{
    if (!cell.empty() && cell.front() == '+') {
        cell.remove_prefix(1);
    }
    double value = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || end != cell.data() + cell.size() || cell.empty()) {
        throw CsvError(line, "not a number: '" + std::string(cell) + "'");
    }
    if (!std::isfinite(value)) {
        throw CsvError(line, "non-finite value: '" + std::string(cell) + "'");
    }
    return value;
}

struct Table {
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> lines;
    std::size_t width = 0;
};

Table read_table(std::istream& in, bool has_header)
{
    Table table;
    std::string line;
    std::size_t number = 0;
    bool header_pending = has_header;
    while (std::getline(in, line)) {
        ++number;
        const std::string_view view = trim(line);
        if (view.empty()) {
            continue;
        }
        if (header_pending) {
            header_pending = false;
            continue;
        }
        const auto cells = split(view);
        if (table.width == 0) {
            table.width = cells.size();
        } else if (cells.size() != table.width) {
            throw CsvError(number, "expected " + std::to_string(table.width) + " fields, found " +
                                       std::to_string(cells.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (auto cell : cells) {
            row.push_back(parse_number(cell, number));
        }
        table.rows.push_back(std::move(row));
        table.lines.push_back(number);
    }
    if (table.rows.empty()) {
        throw InvalidInput("CSV input has no data rows");
    }
    return table;
}

std::size_t resolve_column(long column, std::size_t width)
{
    const long w = static_cast<long>(width);
    const long resolved = column < 0 ? w + column : column;
    if (resolved < 0 || resolved >= w) {
        throw InvalidInput("label column " + std::to_string(column) + " is missing from a table of " +
                           std::to_string(width) + " columns");
    }
    return static_cast<std::size_t>(resolved);
}

LabeledDataset to_dataset(const Table& table, const CsvOptions& options)
{
    const std::size_t label_col = resolve_column(options.label_column, table.width);
    if (table.width < 2) {
        throw InvalidInput("CSV needs at least one feature column besides the label");
    }
    RowMatrix features(static_cast<Index>(table.rows.size()), static_cast<Index>(table.width - 1));
    std::vector<Label> labels;
    labels.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const double label = row[label_col];
        if (label == 0.0) {
            labels.push_back(Label::correct);
        } else if (label == 1.0) {
            labels.push_back(Label::error);
        } else {
            throw CsvError(table.lines[r], "label must be 0 or 1, got " + format_double(label));
        }
        Index c = 0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j != label_col) {
                features(static_cast<Index>(r), c++) = row[j];
            }
        }
    }
    return LabeledDataset(std::move(features), std::move(labels));
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open '" + path.string() + "'");
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InvalidInput("cannot write '" + path.string() + "'");
    }
    return out;
}

}  // namespace

std::string format_double(double value)
{
    char buffer[40];
    const int len = std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return std::string(buffer, static_cast<std::size_t>(len));
}

LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options)
{
    auto in = open_input(path);
    return to_dataset(read_table(in, options.has_header), options);
}

LabeledDataset parse_csv(const std::string& text, const CsvOptions& options)
{
    std::istringstream in(text);
    return to_dataset(read_table(in, options.has_header), options);
}

RowMatrix load_matrix_csv(const std::filesystem::path& path, bool has_header, std::optional<long> drop_column)
{
    auto in = open_input(path);
    const Table table = read_table(in, has_header);
    std::optional<std::size_t> drop;
    if (drop_column) {
        drop = resolve_column(*drop_column, table.width);
    }
    const std::size_t width = table.width - (drop ? 1 : 0);
    if (width == 0) {
        throw InvalidInput("CSV has no feature columns");
    }
    RowMatrix out(static_cast<Index>(table.rows.size()), static_cast<Index>(width));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        Index c = 0;
        for (std::size_t j = 0; j < table.width; ++j) {
            if (!drop || j != *drop) {
                out(static_cast<Index>(r), c++) = table.rows[r][j];
            }
        }
    }
    return out;
}

void save_csv(const std::filesystem::path& path, const LabeledDataset& dataset, bool header)
{
    auto out = open_output(path);
    const RowMatrix& f = dataset.features();
    if (header) {
        for (Index j = 0; j < f.cols(); ++j) {
            out << 'f' << j << ',';
        }
        out << "label\n";
    }
    std::string line;
    for (Index i = 0; i < f.rows(); ++i) {
        line.clear();
        for (Index j = 0; j < f.cols(); ++j) {
            line += format_double(f(i, j));
            line += ',';
        }
        line += dataset.labels()[static_cast<std::size_t>(i)] == Label::error ? '1' : '0';
        line += '\n';
        out << line;
    }
    if (!out) {
        throw InvalidInput("failed writing '" + path.string() + "'");
    }
}

void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows)
{
    auto out = open_output(path);
    for (std::size_t j = 0; j < header.size(); ++j) {
        out << (j ? "," : "") << header[j];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            out << (j ? "," : "") << format_double(row[j]);
        }
        out << '\n';
    }
    if (!out) {
        throw InvalidInput("failed writing '" + path.string() + "'");
    }
}

}  // namespace edgc::io
