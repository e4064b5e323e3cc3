#include "synth/util/csv.hpp"

#include <fstream>
#include <sstream>

#include "synth/core/error.hpp"

namespace synth::util {

int CsvTable::column(std::string_view name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

static std::vector<std::vector<std::string>> parse_records(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool row_has_data = false;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(fields));
        fields.clear();
        row_has_data = false;
    };

    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
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
                in_quotes = true;
                row_has_data = true;
                break;
            case ',':
                end_field();
                row_has_data = true;
                break;
            case '\r':
                break;  // handled by the following '\n'
            case '\n':
                if (row_has_data || !field.empty() || !fields.empty()) end_record();
                break;
            default:
                field += c;
                row_has_data = true;
                break;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted CSV field", text.size());
    if (row_has_data || !fields.empty()) end_record();
    return records;
}

CsvTable read_csv(const std::string& text) {
    auto records = parse_records(text);
    CsvTable table;
    if (records.empty()) return table;
    table.header = records.front();
    table.rows.assign(records.begin() + 1, records.end());
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open CSV file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_csv(buf.str());
}

std::string csv_escape(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string write_csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    out += "\r\n";
    return out;
}

}  // namespace synth::util
