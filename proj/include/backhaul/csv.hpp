#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace backhaul {

// One CSV cell. Doubles render in shortest round-trip form; integers as-is.
using CsvCell = std::variant<std::int64_t, double, std::string>;

struct CsvTable {
    std::vector<std::string> fields;
    std::vector<std::vector<CsvCell>> rows;

    void add_row(std::vector<CsvCell> row);
};

std::string render_cell(const CsvCell& cell);

// RFC-4180 style: header row, LF between records, fields quoted only when
// they contain a comma, quote or line break. No trailing newline.
std::string render_csv(const CsvTable& table);
void write_csv_table(const CsvTable& table, const std::filesystem::path& path);

// Parsed rows are plain strings; the header is required.
struct CsvDocument {
    std::vector<std::string> fields;
    std::vector<std::vector<std::string>> rows;

    // Index of a named column; throws StructuralError when absent.
    std::size_t column(const std::string& name) const;
};

CsvDocument parse_csv(std::istream& in);
CsvDocument read_csv(const std::filesystem::path& path);

}  // namespace backhaul
