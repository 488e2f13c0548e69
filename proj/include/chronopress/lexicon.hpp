#pragma once

#include <algorithm>
#include <charconv>
#include <concepts>
#include <filesystem>
#include <map>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "chronopress/corpus.hpp"
#include "chronopress/error.hpp"
#include "chronopress/text.hpp"

namespace chronopress {

// Reference wordlist used to discard OCR garbage.
struct Vocabulary {
    std::unordered_set<Term> terms;
    std::string source_label;
    std::size_t skipped_lines = 0;  // lines that normalized to nothing

    bool contains(std::string_view t) const { return terms.count(std::string(t)) != 0; }
    std::size_t size() const { return terms.size(); }
};

struct Stoplist {
    std::unordered_set<Term> terms;

    bool contains(std::string_view t) const { return terms.count(std::string(t)) != 0; }
    std::size_t size() const { return terms.size(); }
};

inline constexpr std::size_t default_stoplist_size = 500;

namespace detail {

// Wordlist format: one entry per line, '#' starts a comment line.
template <typename Fn>
void for_each_wordlist_line(std::string_view text, Fn&& fn) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        std::size_t first = 0;
        while (first < line.size() && is_space(line[first])) ++first;
        if (first < line.size() && line[first] == '#') continue;
        fn(line, line_no);
    }
}

}  // namespace detail

inline Vocabulary parse_vocabulary(std::string_view text, std::string label = {}) {
    Vocabulary vocab;
    vocab.source_label = std::move(label);
    detail::for_each_wordlist_line(text, [&](std::string_view line, std::size_t) {
        if (auto t = normalize_token(line))
            vocab.terms.insert(std::move(*t));
        else
            ++vocab.skipped_lines;
    });
    if (vocab.terms.empty())
        throw ValidationError("vocabulary '" + vocab.source_label + "' contains no valid terms");
    return vocab;
}

inline Vocabulary load_vocabulary(const std::filesystem::path& path) {
    return parse_vocabulary(read_file(path), path.string());
}

// Stoplist files share the wordlist format. An empty stoplist is allowed.
inline Stoplist parse_stoplist(std::string_view text) {
    Stoplist stop;
    detail::for_each_wordlist_line(text, [&](std::string_view line, std::size_t) {
        if (auto t = normalize_token(line)) stop.terms.insert(std::move(*t));
    });
    return stop;
}

inline Stoplist load_stoplist(const std::filesystem::path& path) { return parse_stoplist(read_file(path)); }

// The k highest-count terms, ties broken by ascending term. Returned in rank order.
inline std::vector<Term> rank_terms(const std::map<Term, long long>& term_counts, std::size_t k) {
    std::vector<std::pair<Term, long long>> ranked(term_counts.begin(), term_counts.end());
    const std::size_t n = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n), ranked.end(),
                      [](const auto& a, const auto& b) {
                          return a.second != b.second ? a.second > b.second : a.first < b.first;
                      });
    std::vector<Term> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(ranked[i].first);
    return out;
}

inline Stoplist build_stoplist(const std::map<Term, long long>& term_counts, std::size_t k) {
    Stoplist stop;
    for (auto& t : rank_terms(term_counts, k)) stop.terms.insert(std::move(t));
    return stop;
}

// Counts file: `term<whitespace or comma>count` per line, '#' comments.
inline std::map<Term, long long> parse_term_counts(std::string_view text) {
    std::map<Term, long long> counts;
    detail::for_each_wordlist_line(text, [&](std::string_view line, std::size_t line_no) {
        std::string copy(line);
        std::replace(copy.begin(), copy.end(), ',', ' ');
        const auto fields = split_whitespace(copy);
        if (fields.empty()) return;
        if (fields.size() != 2) throw ValidationError("counts line " + std::to_string(line_no) + ": expected 'term count'");
        long long c = 0;
        const auto& f = fields[1];
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), c);
        if (ec != std::errc{} || ptr != f.data() + f.size() || c < 0)
            throw ValidationError("counts line " + std::to_string(line_no) + ": bad count '" + f + "'");
        if (auto t = normalize_token(fields[0])) counts[*t] += c;
    });
    return counts;
}

// Normalizes each token and keeps those in the vocabulary and not stopped.
// Order and multiplicity are preserved.
template <std::ranges::input_range Range>
    requires std::convertible_to<std::ranges::range_reference_t<const Range>, std::string_view>
std::vector<Term> filter_tokens(const Range& raw_tokens, const Vocabulary& vocab, const Stoplist& stop) {
    std::vector<Term> out;
    for (const auto& raw : raw_tokens) {
        auto term = normalize_token(raw);
        if (term && vocab.terms.count(*term) && !stop.terms.count(*term)) out.push_back(std::move(*term));
    }
    return out;
}

inline std::vector<Term> filter_tokens(std::span<const WordToken> tokens, const Vocabulary& vocab,
                                       const Stoplist& stop) {
    std::vector<std::string_view> raw;
    raw.reserve(tokens.size());
    for (const auto& t : tokens) raw.emplace_back(t.text);
    return filter_tokens(raw, vocab, stop);
}

}  // namespace chronopress
