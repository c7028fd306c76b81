#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace impactis::detail {

// Reads one CSV record (RFC-4180 style: quoted fields, doubled quotes,
// newlines allowed inside quotes, LF or CRLF endings). Returns nullopt at
// end of stream. An unterminated quote yields the fields seen so far.
inline std::optional<std::vector<std::string>> read_csv_row(std::istream& in) {
    if (in.peek() == std::char_traits<char>::eof()) return std::nullopt;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    char c;
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            break;
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace impactis::detail
