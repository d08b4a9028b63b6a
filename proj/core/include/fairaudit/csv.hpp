#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace fairaudit {

/// One parsed record and the physical line it started on (1-based).
struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

/// Minimal RFC 4180 reader: quoted fields, doubled quotes, embedded
/// delimiters/newlines and CRLF line endings. Fields are returned verbatim.
class CsvReader {
public:
    CsvReader(std::istream& in, char delimiter = ',');

    /// Reads the next record. Returns false at end of input.
    /// Blank lines are skipped.
    bool next(CsvRecord& record);

private:
    std::istream& in_;
    char delimiter_;
    std::size_t line_ = 1;
};

/// Strips ASCII whitespace from both ends.
std::string trim(std::string_view text);

}  // namespace fairaudit
