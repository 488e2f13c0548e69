#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chronopress/corpus.hpp"
#include "chronopress/error.hpp"

namespace chronopress {

struct SegmentationParams {
    double alpha = 1.5;  // headline font threshold, relative to the body font
    int min_headline_tokens = 1;

    void validate() const {
        if (!(alpha > 1.0)) throw ValidationError("segmentation alpha must be > 1.0");
        if (min_headline_tokens < 1) throw ValidationError("min_headline_tokens must be >= 1");
    }
};

struct HeadlineSpan {
    std::string block_id;
    std::size_t start = 0;  // [start, end) within the block
    std::size_t end = 0;
    double font_size = 0;   // smallest font in the span

    bool operator==(const HeadlineSpan&) const = default;
};

struct ArticleSegment {
    PageId page;
    int seq = 0;
    std::optional<std::string> headline_text;
    std::vector<WordToken> tokens;

    bool operator==(const ArticleSegment&) const = default;
};

// Modal font size over every token; ties go to the smaller size.
inline double body_font_size(const Page& page) {
    std::map<double, std::size_t> histogram;
    for (const auto& b : page.blocks)
        for (const auto& t : b.tokens) ++histogram[t.font_size];
    if (histogram.empty()) throw ValidationError("no tokens");
    auto best = histogram.begin();
    for (auto it = histogram.begin(); it != histogram.end(); ++it)
        if (it->second > best->second) best = it;
    return best->first;
}

// Column-major block order. Blocks are bucketed into columns by hpos using
// the median block width as the bucket width; columns run left to right and
// blocks within a column top to bottom.
inline std::vector<std::string> reading_order(const Page& page) {
    const auto& blocks = page.blocks;
    std::vector<std::string> order;
    if (blocks.empty()) return order;

    std::vector<long> widths;
    widths.reserve(blocks.size());
    for (const auto& b : blocks) widths.push_back(b.bbox.width);
    std::sort(widths.begin(), widths.end());
    const std::size_t n = widths.size();
    const double median =
        n % 2 ? static_cast<double>(widths[n / 2]) : (widths[n / 2 - 1] + widths[n / 2]) / 2.0;

    struct Key {
        long column;
        long vpos;
        long hpos;
        const std::string* id;
    };
    std::vector<Key> keys;
    keys.reserve(blocks.size());
    for (const auto& b : blocks) {
        const long column = median > 0 ? static_cast<long>(std::floor(b.bbox.hpos / median)) : 0;
        keys.push_back({column, b.bbox.vpos, b.bbox.hpos, &b.block_id});
    }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        return std::tie(a.column, a.vpos, a.hpos, *a.id) < std::tie(b.column, b.vpos, b.hpos, *b.id);
    });
    for (const auto& k : keys) order.push_back(*k.id);
    return order;
}

namespace detail {

inline std::vector<const TextBlock*> blocks_in_reading_order(const Page& page) {
    std::vector<const TextBlock*> out;
    for (const auto& id : reading_order(page)) out.push_back(page.find_block(id));
    return out;
}

}  // namespace detail

// Maximal runs of large-font tokens, never crossing a block boundary.
inline std::vector<HeadlineSpan> detect_headlines(const Page& page, const SegmentationParams& params) {
    params.validate();
    std::vector<HeadlineSpan> spans;
    if (page.token_count() == 0) return spans;
    const double threshold = params.alpha * body_font_size(page);

    for (const TextBlock* block : detail::blocks_in_reading_order(page)) {
        const auto& tokens = block->tokens;
        std::size_t i = 0;
        while (i < tokens.size()) {
            if (tokens[i].font_size < threshold) {
                ++i;
                continue;
            }
            std::size_t j = i;
            double smallest = tokens[i].font_size;
            while (j < tokens.size() && tokens[j].font_size >= threshold) {
                smallest = std::min(smallest, tokens[j].font_size);
                ++j;
            }
            if (j - i >= static_cast<std::size_t>(params.min_headline_tokens))
                spans.push_back({block->block_id, i, j, smallest});
            i = j;
        }
    }
    return spans;
}

// Every headline opens a segment that runs to the next headline. Matter
// before the first headline becomes a headline-less segment 0.
inline std::vector<ArticleSegment> segment_articles(const Page& page, const SegmentationParams& params) {
    std::vector<ArticleSegment> segments;
    if (page.token_count() == 0) return segments;

    std::map<std::string, std::vector<HeadlineSpan>> spans_by_block;
    for (auto& span : detect_headlines(page, params)) spans_by_block[span.block_id].push_back(span);

    ArticleSegment current;
    current.page = page.id;
    auto flush = [&] {
        if (current.tokens.empty() && !current.headline_text) return;
        current.seq = static_cast<int>(segments.size());
        segments.push_back(std::move(current));
        current = ArticleSegment{};
        current.page = page.id;
    };

    for (const TextBlock* block : detail::blocks_in_reading_order(page)) {
        const auto found = spans_by_block.find(block->block_id);
        const std::vector<HeadlineSpan> none;
        const auto& spans = found == spans_by_block.end() ? none : found->second;
        std::size_t next = 0;
        for (std::size_t t = 0; t < block->tokens.size(); ++t) {
            if (next < spans.size() && spans[next].start == t) {
                flush();
                std::string headline;
                for (std::size_t k = spans[next].start; k < spans[next].end; ++k) {
                    if (!headline.empty()) headline += ' ';
                    headline += block->tokens[k].text;
                }
                current.headline_text = std::move(headline);
                ++next;
            }
            current.tokens.push_back(block->tokens[t]);
        }
    }
    flush();
    return segments;
}

}  // namespace chronopress
