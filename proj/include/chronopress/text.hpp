#pragma once

#include <cstdint>
#include <locale>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chronopress {

// A cleaned, lowercase, purely alphabetic word of at least two letters.
using Term = std::string;

namespace utf8 {

inline constexpr char32_t replacement = 0xFFFD;

// Decodes UTF-8, mapping every malformed sequence to U+FFFD.
inline std::u32string decode(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        std::size_t len = 0;
        char32_t cp = 0;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            out.push_back(replacement);
            ++i;
            continue;
        }
        if (i + len > s.size()) {
            out.push_back(replacement);
            ++i;
            continue;
        }
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        // Reject overlong forms, surrogates and out-of-range values.
        static constexpr char32_t min_for_len[] = {0, 0, 0x80, 0x800, 0x10000};
        if (!ok || cp < min_for_len[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(replacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

inline void append(std::string& out, char32_t cp) {
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

}  // namespace utf8

namespace detail {

// Unicode letter classification and lowercasing. Uses the C.UTF-8 wide
// ctype tables when the runtime has them and degrades to ASCII otherwise.
class LetterTable {
public:
    static const LetterTable& instance() {
        static const LetterTable table;
        return table;
    }

    bool is_letter(char32_t c) const {
        if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
        if (!wide_ || c == utf8::replacement) return false;
        return wide_->is(std::ctype_base::alpha, static_cast<wchar_t>(c));
    }

    char32_t lower(char32_t c) const {
        if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + ('a' - 'A') : c;
        if (!wide_) return c;
        return static_cast<char32_t>(wide_->tolower(static_cast<wchar_t>(c)));
    }

private:
    LetterTable() {
        for (const char* name : {"C.UTF-8", "C.utf8", "en_US.UTF-8"}) {
            try {
                locale_ = std::locale(name);
                wide_ = &std::use_facet<std::ctype<wchar_t>>(locale_);
                if constexpr (sizeof(wchar_t) < 4) wide_ = nullptr;
                return;
            } catch (const std::runtime_error&) {
            }
        }
    }

    std::locale locale_;
    const std::ctype<wchar_t>* wide_ = nullptr;
};

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

}  // namespace detail

// Case-folds and strips edge punctuation. Returns a Term only when what is
// left is purely alphabetic and at least two letters long.
inline std::optional<Term> normalize_token(std::string_view raw) {
    const auto& letters = detail::LetterTable::instance();
    const std::u32string cps = utf8::decode(raw);

    std::size_t first = 0;
    while (first < cps.size() && !letters.is_letter(cps[first])) ++first;
    std::size_t last = cps.size();
    while (last > first && !letters.is_letter(cps[last - 1])) --last;
    if (last - first < 2) return std::nullopt;

    Term out;
    out.reserve(last - first);
    for (std::size_t i = first; i < last; ++i) {
        if (!letters.is_letter(cps[i])) return std::nullopt;
        utf8::append(out, letters.lower(cps[i]));
    }
    return out;
}

// True when `s` already has the shape normalize_token produces.
inline bool is_term(std::string_view s) {
    const auto n = normalize_token(s);
    return n && *n == s;
}

// Splits on ASCII whitespace, dropping empty runs.
inline std::vector<std::string> split_whitespace(std::string_view text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && detail::is_space(text[i])) ++i;
        const std::size_t start = i;
        while (i < text.size() && !detail::is_space(text[i])) ++i;
        if (i > start) words.emplace_back(text.substr(start, i - start));
    }
    return words;
}

}  // namespace chronopress
