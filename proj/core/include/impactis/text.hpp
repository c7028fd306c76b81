#pragma once

#include <string>
#include <string_view>

namespace impactis::text {

/// Canonical form of a title for matching: ASCII lowercased, a
/// compatibility subset of Latin accented letters folded to their base
/// letters (including fullwidth forms and typographic punctuation),
/// punctuation replaced by spaces, whitespace runs collapsed, trimmed.
/// Unmapped non-Latin codepoints pass through untouched.
std::string normalize_title(std::string_view raw);

/// Canonical DOI: lowercased, resolver prefixes such as
/// "https://doi.org/", "dx.doi.org/" and "doi:" stripped, trimmed.
/// Empty input stays empty.
std::string normalize_doi(std::string_view raw);

/// Last whitespace-delimited token of an author name, folded like
/// normalize_title ("J. O'Brien" -> "obrien").
std::string surname_of(std::string_view author_name);

std::string to_upper_ascii(std::string_view s);
std::string to_lower_ascii(std::string_view s);

}  // namespace impactis::text
