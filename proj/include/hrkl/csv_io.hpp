#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hrkl {

/// Plain comma-separated text without quoting. Blank lines are skipped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

CsvTable read_csv(const std::filesystem::path& path);
std::vector<std::string> split_csv_line(std::string_view line);

/// Throws ParseError naming `line` if `field` is not a finite number.
double parse_double(std::string_view field, std::size_t line);
long long parse_integer(std::string_view field, std::size_t line);

/// Shortest round-trip-safe text: 17 significant digits.
std::string format_double(double value);

/// Matrix with string row and column ids, e.g. a BIC matrix or a distance
/// matrix. The first header cell names the id column.
struct LabeledMatrix {
    std::vector<std::string> row_ids;
    std::vector<std::string> col_ids;
    Eigen::MatrixXd values;
};

void write_matrix_csv(const LabeledMatrix& m, const std::filesystem::path& path,
                      std::string_view id_header = "series_id");
LabeledMatrix read_matrix_csv(const std::filesystem::path& path);

struct IdLabels {
    std::vector<std::string> ids;
    std::vector<int> labels;
};

/// Two-column `<id>,<int>` file such as `series_id,cluster` or `series_id,label`.
IdLabels read_id_labels(const std::filesystem::path& path);
void write_id_labels(const IdLabels& rows, const std::filesystem::path& path,
                     std::string_view value_header);

/// Opens `path` for writing, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace hrkl
