#include "hrkl/csv_io.hpp"

#include "hrkl/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hrkl {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        std::string_view field =
            line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start);
        out.emplace_back(trim(field));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
            line.erase(0, 3);
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size())
            throw ParseError("expected " + std::to_string(table.header.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             lineno);
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(lineno);
    }
    if (!have_header) throw ParseError("empty file " + path.string(), 1);
    return table;
}

double parse_double(std::string_view field, std::size_t line) {
    field = trim(field);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value))
        throw ParseError("not a finite number: '" + std::string(field) + "'", line);
    return value;
}

long long parse_integer(std::string_view field, std::size_t line) {
    field = trim(field);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw ParseError("not an integer: '" + std::string(field) + "'", line);
    return value;
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

void write_matrix_csv(const LabeledMatrix& m, const std::filesystem::path& path,
                      std::string_view id_header) {
    std::ostringstream os;
    os << id_header;
    for (const auto& c : m.col_ids) os << ',' << c;
    os << '\n';
    for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
        os << m.row_ids[static_cast<std::size_t>(i)];
        for (Eigen::Index k = 0; k < m.values.cols(); ++k) os << ',' << format_double(m.values(i, k));
        os << '\n';
    }
    write_text_file(path, os.str());
}

LabeledMatrix read_matrix_csv(const std::filesystem::path& path) {
    CsvTable t = read_csv(path);
    if (t.header.size() < 2) throw ParseError("matrix file needs an id column and values", 1);
    LabeledMatrix m;
    m.col_ids.assign(t.header.begin() + 1, t.header.end());
    m.values.resize(static_cast<Eigen::Index>(t.rows.size()),
                    static_cast<Eigen::Index>(m.col_ids.size()));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        m.row_ids.push_back(t.rows[i][0]);
        for (std::size_t k = 1; k < t.rows[i].size(); ++k)
            m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k - 1)) =
                parse_double(t.rows[i][k], t.line_numbers[i]);
    }
    return m;
}

IdLabels read_id_labels(const std::filesystem::path& path) {
    CsvTable t = read_csv(path);
    if (t.header.size() != 2) throw ParseError("label file needs exactly two columns", 1);
    IdLabels out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        out.ids.push_back(t.rows[i][0]);
        out.labels.push_back(static_cast<int>(parse_integer(t.rows[i][1], t.line_numbers[i])));
    }
    return out;
}

void write_id_labels(const IdLabels& rows, const std::filesystem::path& path,
                     std::string_view value_header) {
    std::ostringstream os;
    os << "series_id," << value_header << '\n';
    for (std::size_t i = 0; i < rows.ids.size(); ++i) os << rows.ids[i] << ',' << rows.labels[i] << '\n';
    write_text_file(path, os.str());
}

}  // namespace hrkl
