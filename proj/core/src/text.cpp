#include "impactis/text.hpp"

#include <cctype>
#include <cstdint>

namespace impactis::text {

namespace {

// Decodes one UTF-8 codepoint starting at i; advances i past it. Invalid
// bytes decode as themselves so normalization stays total.
std::uint32_t decode_utf8(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) -> std::uint32_t {
        return static_cast<unsigned char>(s[k]);
    };
    const std::uint32_t b0 = byte(i);
    if (b0 < 0x80) {
        i += 1;
        return b0;
    }
    auto cont = [&](std::size_t k) {
        return k < s.size() && (byte(k) & 0xC0u) == 0x80u;
    };
    if ((b0 & 0xE0u) == 0xC0u && cont(i + 1)) {
        const std::uint32_t cp = ((b0 & 0x1Fu) << 6) | (byte(i + 1) & 0x3Fu);
        i += 2;
        return cp;
    }
    if ((b0 & 0xF0u) == 0xE0u && cont(i + 1) && cont(i + 2)) {
        const std::uint32_t cp = ((b0 & 0x0Fu) << 12) | ((byte(i + 1) & 0x3Fu) << 6) |
                                 (byte(i + 2) & 0x3Fu);
        i += 3;
        return cp;
    }
    if ((b0 & 0xF8u) == 0xF0u && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
        const std::uint32_t cp = ((b0 & 0x07u) << 18) | ((byte(i + 1) & 0x3Fu) << 12) |
                                 ((byte(i + 2) & 0x3Fu) << 6) | (byte(i + 3) & 0x3Fu);
        i += 4;
        return cp;
    }
    i += 1;
    return b0;
}

void encode_utf8(std::uint32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Latin-1 Supplement and Latin Extended-A letters folded to ASCII base
// letters; returns nullptr when the codepoint is not in the table.
const char* fold_latin(std::uint32_t cp) {
    switch (cp) {
        case 0x00C6: case 0x00E6: return "ae";
        case 0x00DF: return "ss";
        case 0x00D0: case 0x00F0: case 0x0110: case 0x0111: return "d";
        case 0x00DE: case 0x00FE: return "th";
        case 0x0132: case 0x0133: return "ij";
        case 0x0152: case 0x0153: return "oe";
        case 0x0149: return "n";
        case 0x017F: return "s";
        default: break;
    }
    if ((cp >= 0x00C0 && cp <= 0x00C5) || (cp >= 0x00E0 && cp <= 0x00E5)) return "a";
    if (cp == 0x00C7 || cp == 0x00E7) return "c";
    if ((cp >= 0x00C8 && cp <= 0x00CB) || (cp >= 0x00E8 && cp <= 0x00EB)) return "e";
    if ((cp >= 0x00CC && cp <= 0x00CF) || (cp >= 0x00EC && cp <= 0x00EF)) return "i";
    if (cp == 0x00D1 || cp == 0x00F1) return "n";
    if ((cp >= 0x00D2 && cp <= 0x00D6) || cp == 0x00D8 ||
        (cp >= 0x00F2 && cp <= 0x00F6) || cp == 0x00F8) return "o";
    if ((cp >= 0x00D9 && cp <= 0x00DC) || (cp >= 0x00F9 && cp <= 0x00FC)) return "u";
    if (cp == 0x00DD || cp == 0x00FD || cp == 0x00FF) return "y";
    if (cp >= 0x0100 && cp <= 0x0105) return "a";
    if (cp >= 0x0106 && cp <= 0x010D) return "c";
    if (cp >= 0x010E && cp <= 0x010F) return "d";
    if (cp >= 0x0112 && cp <= 0x011B) return "e";
    if (cp >= 0x011C && cp <= 0x0123) return "g";
    if (cp >= 0x0124 && cp <= 0x0127) return "h";
    if (cp >= 0x0128 && cp <= 0x0131) return "i";
    if (cp >= 0x0134 && cp <= 0x0135) return "j";
    if (cp >= 0x0136 && cp <= 0x0138) return "k";
    if (cp >= 0x0139 && cp <= 0x0142) return "l";
    if (cp >= 0x0143 && cp <= 0x0148) return "n";
    if (cp >= 0x014A && cp <= 0x014B) return "n";
    if (cp >= 0x014C && cp <= 0x0151) return "o";
    if (cp >= 0x0154 && cp <= 0x0159) return "r";
    if (cp >= 0x015A && cp <= 0x0161) return "s";
    if (cp >= 0x0162 && cp <= 0x0167) return "t";
    if (cp >= 0x0168 && cp <= 0x0173) return "u";
    if (cp >= 0x0174 && cp <= 0x0175) return "w";
    if (cp >= 0x0176 && cp <= 0x0178) return "y";
    if (cp >= 0x0179 && cp <= 0x017E) return "z";
    return nullptr;
}

bool is_space_cp(std::uint32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
           cp == '\v' || cp == 0x00A0 || (cp >= 0x2000 && cp <= 0x200B) ||
           cp == 0x202F || cp == 0x3000;
}

// Apostrophes vanish entirely ("O'Brien" -> "obrien"); other punctuation
// becomes a space.
bool is_apostrophe_cp(std::uint32_t cp) {
    return cp == '\'' || cp == 0x2018 || cp == 0x2019 || cp == 0x02BC;
}

bool is_punct_cp(std::uint32_t cp) {
    if (cp < 0x80) {
        return !std::isalnum(static_cast<int>(cp)) && !is_space_cp(cp);
    }
    // Typographic punctuation: hyphens/dashes, quotes, ellipsis, bullets,
    // multiplication/division signs, guillemets.
    return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
           cp == 0x00AB || cp == 0x00BB || cp == 0x00B7 || cp == 0x00D7 ||
           cp == 0x00F7 || cp == 0x00A1 || cp == 0x00BF;
}

}  // namespace

std::string normalize_title(std::string_view raw) {
    std::string folded;
    folded.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        std::uint32_t cp = decode_utf8(raw, i);
        if (cp >= 0xFF01 && cp <= 0xFF5E) cp -= 0xFEE0;  // fullwidth forms
        if (is_apostrophe_cp(cp)) continue;
        if (is_space_cp(cp) || is_punct_cp(cp)) {
            folded.push_back(' ');
            continue;
        }
        if (cp < 0x80) {
            folded.push_back(static_cast<char>(std::tolower(static_cast<int>(cp))));
            continue;
        }
        if (const char* f = fold_latin(cp)) {
            folded += f;
            continue;
        }
        encode_utf8(cp, folded);  // unmapped codepoints pass through
    }
    // collapse runs of spaces and trim
    std::string out;
    out.reserve(folded.size());
    bool pending_space = false;
    for (char c : folded) {
        if (c == ' ') {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

std::string normalize_doi(std::string_view raw) {
    std::size_t b = 0, e = raw.size();
    while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
    std::string s = to_lower_ascii(raw.substr(b, e - b));

    const std::string_view prefixes[] = {"https://", "http://"};
    for (auto p : prefixes) {
        if (s.starts_with(p)) {
            s.erase(0, p.size());
            break;
        }
    }
    const std::string_view hosts[] = {"www.doi.org/", "dx.doi.org/", "doi.org/"};
    for (auto h : hosts) {
        if (s.starts_with(h)) {
            s.erase(0, h.size());
            break;
        }
    }
    if (s.starts_with("doi:")) s.erase(0, 4);
    return s;
}

std::string surname_of(std::string_view author_name) {
    std::size_t end = author_name.size();
    while (end > 0 && std::isspace(static_cast<unsigned char>(author_name[end - 1]))) --end;
    std::size_t begin = end;
    while (begin > 0 && !std::isspace(static_cast<unsigned char>(author_name[begin - 1]))) --begin;
    return normalize_title(author_name.substr(begin, end - begin));
}

std::string to_upper_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace impactis::text
