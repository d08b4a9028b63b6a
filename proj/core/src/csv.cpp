#include "fairaudit/csv.hpp"

#include "fairaudit/errors.hpp"

namespace fairaudit {

CsvReader::CsvReader(std::istream& in, char delimiter) : in_(in), delimiter_(delimiter) {
    if (delimiter == '"' || delimiter == '\n' || delimiter == '\r') {
        throw SchemaError("invalid delimiter");
    }
}

bool CsvReader::next(CsvRecord& record) {
    record.fields.clear();
    for (;;) {
        int c = in_.peek();
        if (c == std::char_traits<char>::eof()) return false;
        if (c == '\n') {
            in_.get();
            ++line_;
            continue;
        }
        if (c == '\r') {
            in_.get();
            continue;
        }
        break;
    }

    record.line = line_;
    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;
    for (;;) {
        int c = in_.get();
        if (c == std::char_traits<char>::eof()) {
            if (quoted) {
                throw SchemaError("line " + std::to_string(record.line) + ": unterminated quoted field");
            }
            break;
        }
        char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"' && !field_was_quoted && trim(field).empty()) {
            field.clear();
            quoted = true;
            field_was_quoted = true;
        } else if (ch == delimiter_) {
            record.fields.push_back(std::move(field));
            field.clear();
            field_was_quoted = false;
        } else if (ch == '\n') {
            ++line_;
            break;
        } else if (ch == '\r') {
            if (in_.peek() == '\n') continue;
            break;
        } else {
            field.push_back(ch);
        }
    }
    record.fields.push_back(std::move(field));
    return true;
}

std::string trim(std::string_view text) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    return std::string(text.substr(begin, end - begin));
}

}  // namespace fairaudit
