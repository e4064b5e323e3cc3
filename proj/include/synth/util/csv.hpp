#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace synth::util {

// Minimal RFC-4180 CSV support. Readers accept both LF and CRLF records and
// quoted fields with embedded separators/quotes; the writer quotes on demand
// and terminates records with CRLF.

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column, -1 if absent.
    int column(std::string_view name) const;
};

CsvTable read_csv(const std::string& text);
CsvTable read_csv_file(const std::string& path);

std::string csv_escape(std::string_view field);
std::string write_csv_row(const std::vector<std::string>& fields);

}  // namespace synth::util
