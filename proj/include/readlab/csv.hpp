#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "readlab/error.hpp"

namespace readlab::csv {

/// A parsed CSV file. `line_numbers[i]` is the 1-based source line on which
/// row i starts (the header is line 1).
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;

    std::optional<std::size_t> column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    }

    std::size_t require_column(std::string_view name, std::string_view what) const {
        auto c = column(name);
        if (!c) {
            throw ValidationError(std::string(what) + ": missing column '" + std::string(name) + "'");
        }
        return *c;
    }
};

/// RFC 4180 style parsing: comma separated, double-quoted fields may hold
/// commas, newlines and doubled quotes. Blank lines are skipped.
inline Table parse(std::string_view text, std::string_view what = "csv") {
    Table table;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_quoted = false;
    std::size_t line = 1;
    std::size_t record_line = 1;
    bool have_header = false;

    auto finish_record = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_quoted = false;
        const bool blank = record.size() == 1 && record[0].empty();
        if (!blank) {
            if (!have_header) {
                table.header = std::move(record);
                have_header = true;
            } else {
                if (record.size() != table.header.size()) {
                    throw ParseError(std::string(what) + ": line " + std::to_string(record_line) +
                                     ": expected " + std::to_string(table.header.size()) +
                                     " fields, found " + std::to_string(record.size()));
                }
                table.rows.push_back(std::move(record));
                table.line_numbers.push_back(record_line);
            }
        }
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty() || field_quoted) {
                throw ParseError(std::string(what) + ": line " + std::to_string(line) +
                                 ": stray quote inside unquoted field");
            }
            in_quotes = true;
            field_quoted = true;
            break;
        case ',':
            record.push_back(std::move(field));
            field.clear();
            field_quoted = false;
            break;
        case '\r':
            break;
        case '\n':
            finish_record();
            ++line;
            record_line = line;
            break;
        default:
            field.push_back(c);
        }
    }
    if (in_quotes) {
        throw ParseError(std::string(what) + ": unterminated quoted field starting near line " +
                         std::to_string(record_line));
    }
    if (!field.empty() || !record.empty() || field_quoted) finish_record();
    if (!have_header) throw ParseError(std::string(what) + ": empty file, no header");
    return table;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Table read(const std::string& path) { return parse(read_file(path), path); }

inline std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline void write_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << escape(fields[i]);
    }
    os << '\n';
}

} // namespace readlab::csv
