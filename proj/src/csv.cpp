#include "backhaul/csv.hpp"

#include <fstream>
#include <sstream>

#include "backhaul/errors.hpp"
#include "backhaul/format.hpp"

namespace backhaul {

void CsvTable::add_row(std::vector<CsvCell> row) {
    if (row.size() != fields.size()) {
        throw StructuralError("CSV row has " + std::to_string(row.size()) + " cells, table declares " +
                              std::to_string(fields.size()) + " fields");
    }
    rows.push_back(std::move(row));
}

namespace {

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string render_cell(const CsvCell& cell) {
    struct Visitor {
        std::string operator()(std::int64_t v) const { return format_int(v); }
        std::string operator()(double v) const { return std::isnan(v) ? std::string() : format_number(v); }
        std::string operator()(const std::string& s) const { return quote_if_needed(s); }
    };
    return std::visit(Visitor{}, cell);
}

std::string render_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.fields.size(); ++i) {
        if (i) out += ',';
        out += quote_if_needed(table.fields[i]);
    }
    for (const auto& row : table.rows) {
        if (row.size() != table.fields.size()) throw StructuralError("CSV row width does not match header");
        out += '\n';
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += render_cell(row[i]);
        }
    }
    return out;
}

void write_csv_table(const CsvTable& table, const std::filesystem::path& path) {
    const std::string text = render_csv(table);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

std::size_t CsvDocument::column(const std::string& name) const {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == name) return i;
    }
    throw StructuralError("CSV is missing column '" + name + "'");
}

CsvDocument parse_csv(std::istream& in) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    char c = 0;
    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
        record.clear();
    };
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started) throw ParseError("stray quote inside unquoted CSV field");
                in_quotes = true;
                field_started = true;
                break;
            case ',': end_field(); break;
            case '\r': break;
            case '\n': end_record(); break;
            default:
                field += c;
                field_started = true;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted CSV field");
    if (field_started || !record.empty()) end_record();

    if (records.empty()) throw StructuralError("CSV has no header row");
    CsvDocument doc;
    doc.fields = std::move(records.front());
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].size() != doc.fields.size()) {
            throw StructuralError("CSV record " + std::to_string(i) + " has " + std::to_string(records[i].size()) +
                                  " fields, header has " + std::to_string(doc.fields.size()));
        }
        doc.rows.push_back(std::move(records[i]));
    }
    return doc;
}

CsvDocument read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return parse_csv(in);
    } catch (const Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace backhaul
