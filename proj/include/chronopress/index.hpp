#pragma once

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "chronopress/corpus.hpp"
#include "chronopress/date.hpp"
#include "chronopress/error.hpp"
#include "chronopress/lexicon.hpp"
#include "chronopress/segmentation.hpp"

namespace chronopress {

enum class DocumentUnit { page, segment };

inline std::string_view to_string(DocumentUnit u) { return u == DocumentUnit::page ? "page" : "segment"; }

struct TermCounts {
    long long doc_count = 0;
    long long term_count = 0;

    bool operator==(const TermCounts&) const = default;
};

struct DayStats {
    long long n_docs = 0;
    long long total_tokens = 0;
    std::map<Term, TermCounts> terms;

    bool operator==(const DayStats&) const = default;
};

struct DailyTermStats {
    std::string title;
    Date date;
    Term term;
    long long doc_count = 0;
    long long term_count = 0;
};

struct DateTotals {
    std::string title;
    Date date;
    long long n_docs = 0;
    long long total_tokens = 0;
};

// Per-title term x date counts. Every update goes through add_document or
// merge, which keep the per-day totals equal to the sum of term counts.
class TermDateIndex {
public:
    using Days = std::map<Date, DayStats>;

    // Counts one document: distinct terms bump doc_count, every occurrence
    // bumps term_count.
    void add_document(const std::string& title, Date date, std::span<const Term> terms) {
        auto& day = titles_[title][date];
        ++day.n_docs;
        day.total_tokens += static_cast<long long>(terms.size());
        std::map<std::string_view, long long> local;
        for (const auto& t : terms) ++local[t];
        for (const auto& [term, n] : local) {
            auto& cell = day.terms[Term(term)];
            cell.doc_count += 1;
            cell.term_count += n;
        }
    }

    // Registers a publication day that contributed no documents.
    void touch_day(const std::string& title, Date date) { titles_[title][date]; }

    // Commutative and associative, so partial indexes can be merged in any order.
    void merge(const TermDateIndex& other) {
        for (const auto& [title, days] : other.titles_) {
            auto& mine = titles_[title];
            for (const auto& [date, src] : days) {
                auto& dst = mine[date];
                dst.n_docs += src.n_docs;
                dst.total_tokens += src.total_tokens;
                for (const auto& [term, c] : src.terms) {
                    auto& cell = dst.terms[term];
                    cell.doc_count += c.doc_count;
                    cell.term_count += c.term_count;
                }
            }
        }
    }

    bool empty() const { return titles_.empty(); }
    bool has_title(std::string_view title) const { return titles_.find(std::string(title)) != titles_.end(); }

    std::vector<std::string> titles() const {
        std::vector<std::string> out;
        for (const auto& [t, _] : titles_) out.push_back(t);
        return out;
    }

    const Days* days(std::string_view title) const {
        const auto it = titles_.find(std::string(title));
        return it == titles_.end() ? nullptr : &it->second;
    }

    std::optional<DateRange> span(std::string_view title) const {
        const Days* d = days(title);
        if (!d || d->empty()) return std::nullopt;
        return DateRange{d->begin()->first, d->rbegin()->first};
    }

    const DayStats* day(std::string_view title, Date date) const {
        const Days* d = days(title);
        if (!d) return nullptr;
        const auto it = d->find(date);
        return it == d->end() ? nullptr : &it->second;
    }

    std::optional<DateTotals> totals(std::string_view title, Date date) const {
        const DayStats* d = day(title, date);
        if (!d) return std::nullopt;
        return DateTotals{std::string(title), date, d->n_docs, d->total_tokens};
    }

    std::optional<DailyTermStats> stats(std::string_view title, Date date, std::string_view term) const {
        const DayStats* d = day(title, date);
        if (!d) return std::nullopt;
        const auto it = d->terms.find(Term(term));
        if (it == d->terms.end()) return std::nullopt;
        return DailyTermStats{std::string(title), date, it->first, it->second.doc_count, it->second.term_count};
    }

    std::size_t document_count() const {
        std::size_t n = 0;
        for (const auto& [_, days] : titles_)
            for (const auto& [__, d] : days) n += static_cast<std::size_t>(d.n_docs);
        return n;
    }

    std::size_t distinct_terms(std::string_view title) const {
        std::set<std::string_view> seen;
        if (const Days* d = days(title))
            for (const auto& [_, day] : *d)
                for (const auto& [t, __] : day.terms) seen.insert(t);
        return seen.size();
    }

    bool operator==(const TermDateIndex&) const = default;

    // Canonical JSON: object keys sorted, integers only.
    nlohmann::json to_json() const {
        nlohmann::json stats = nlohmann::json::object();
        nlohmann::json totals = nlohmann::json::object();
        nlohmann::json span = nlohmann::json::object();
        for (const auto& [title, days] : titles_) {
            nlohmann::json title_stats = nlohmann::json::object();
            nlohmann::json title_totals = nlohmann::json::object();
            for (const auto& [date, day] : days) {
                nlohmann::json cells = nlohmann::json::object();
                for (const auto& [term, c] : day.terms)
                    cells[term] = {{"doc_count", c.doc_count}, {"term_count", c.term_count}};
                title_stats[date.iso()] = std::move(cells);
                title_totals[date.iso()] = {{"n_docs", day.n_docs}, {"total_tokens", day.total_tokens}};
            }
            stats[title] = std::move(title_stats);
            totals[title] = std::move(title_totals);
            if (!days.empty()) span[title] = {days.begin()->first.iso(), days.rbegin()->first.iso()};
        }
        return {{"span", std::move(span)}, {"stats", std::move(stats)}, {"totals", std::move(totals)}};
    }

    std::string serialize() const { return to_json().dump() + "\n"; }

    static TermDateIndex from_json(const nlohmann::json& j);

private:
    std::map<std::string, Days, std::less<>> titles_;
};

inline TermDateIndex TermDateIndex::from_json(const nlohmann::json& j) {
    auto fail = [](const std::string& m) { throw ValidationError("index file: " + m); };
    auto date_of = [&](const std::string& s) {
        const auto d = Date::parse(s);
        if (!d) fail("invalid date '" + s + "'");
        return *d;
    };
    auto count_of = [&](const nlohmann::json& v, const char* key) -> long long {
        if (!v.is_object() || !v.contains(key) || !v[key].is_number_integer()) fail(std::string("missing integer '") + key + "'");
        return v[key].get<long long>();
    };
    if (!j.is_object() || !j.contains("stats") || !j.contains("totals") || !j.contains("span"))
        fail("expected an object with 'span', 'stats' and 'totals'");

    TermDateIndex index;
    for (const auto& [title, days] : j["totals"].items()) {
        if (!days.is_object()) fail("totals for '" + title + "' must be an object");
        for (const auto& [date, tot] : days.items()) {
            auto& day = index.titles_[title][date_of(date)];
            day.n_docs = count_of(tot, "n_docs");
            day.total_tokens = count_of(tot, "total_tokens");
            if (day.n_docs < 0 || day.total_tokens < 0) fail("negative totals for " + title + " " + date);
        }
    }
    for (const auto& [title, days] : j["stats"].items()) {
        if (!days.is_object()) fail("stats for '" + title + "' must be an object");
        for (const auto& [date, cells] : days.items()) {
            const auto d = date_of(date);
            auto t = index.titles_.find(title);
            if (t == index.titles_.end() || !t->second.count(d))
                fail("stats for " + title + " " + date + " have no totals");
            auto& day = t->second[d];
            long long sum = 0;
            for (const auto& [term, c] : cells.items()) {
                if (!is_term(term)) fail("invalid term '" + term + "'");
                TermCounts tc{count_of(c, "doc_count"), count_of(c, "term_count")};
                if (tc.doc_count < 1 || tc.term_count < tc.doc_count || tc.doc_count > day.n_docs)
                    fail("inconsistent counts for '" + term + "' on " + title + " " + date);
                sum += tc.term_count;
                day.terms.emplace(term, tc);
            }
            if (sum != day.total_tokens) fail("term counts do not sum to total_tokens on " + title + " " + date);
        }
    }
    for (const auto& [title, days] : index.titles_)
        for (const auto& [date, day] : days)
            if (day.terms.empty() && day.total_tokens != 0)
                fail("term counts do not sum to total_tokens on " + title + " " + date.iso());
    return index;
}

inline void save_index(const TermDateIndex& index, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << index.serialize();
    if (!out) throw IoError("error while writing '" + path.string() + "'");
}

inline TermDateIndex load_index(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what(), e.byte);
    }
    return TermDateIndex::from_json(j);
}

// ---------------------------------------------------------------------------
// Building

struct BuildOptions {
    bool skip_bad = false;
    unsigned threads = 0;  // 0 = hardware concurrency
    std::function<void(const std::string&)> on_warning;
};

// Filtered term lists, one per document unit of the page.
inline std::vector<std::vector<Term>> page_documents(const Page& page, const Vocabulary& vocab,
                                                     const Stoplist& stop, DocumentUnit unit,
                                                     const SegmentationParams& params) {
    std::vector<std::vector<Term>> docs;
    if (unit == DocumentUnit::page) {
        std::vector<std::string_view> raw;
        for (const auto& b : page.blocks)
            for (const auto& t : b.tokens) raw.emplace_back(t.text);
        docs.push_back(filter_tokens(raw, vocab, stop));
    } else {
        for (const auto& seg : segment_articles(page, params))
            docs.push_back(filter_tokens(std::span<const WordToken>(seg.tokens), vocab, stop));
    }
    return docs;
}

inline TermDateIndex build_index(const CorpusManifest& manifest, const Vocabulary& vocab, const Stoplist& stop,
                                 DocumentUnit unit = DocumentUnit::page, const SegmentationParams& params = {},
                                 const BuildOptions& options = {}) {
    params.validate();
    if (vocab.terms.empty()) throw ValidationError("vocabulary is empty");
    const auto& entries = manifest.entries;
    if (entries.empty()) return {};

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(entries.size()));

    std::vector<TermDateIndex> partials(threads);
    std::vector<std::exception_ptr> errors(entries.size());
    std::atomic<std::size_t> next{0};
    auto work = [&](unsigned worker) {
        for (std::size_t i = next++; i < entries.size(); i = next++) {
            try {
                const Page page = load_page(entries[i]);
                const auto docs = page_documents(page, vocab, stop, unit, params);
                auto& part = partials[worker];
                part.touch_day(page.id.title, page.id.date);
                for (const auto& doc : docs) part.add_document(page.id.title, page.id.date, doc);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    }

    // Report failures in page order so diagnostics do not depend on the schedule.
    std::vector<std::size_t> order(entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return entries[a].id < entries[b].id; });
    for (std::size_t i : order) {
        if (!errors[i]) continue;
        if (!options.skip_bad) std::rethrow_exception(errors[i]);
        if (options.on_warning) {
            try {
                std::rethrow_exception(errors[i]);
            } catch (const std::exception& e) {
                options.on_warning("skipping " + entries[i].path.string() + ": " + e.what());
            }
        }
    }

    TermDateIndex index;
    for (const auto& p : partials) index.merge(p);
    return index;
}

// ---------------------------------------------------------------------------
// Queries

inline long long document_frequency(const TermDateIndex& index, std::string_view title, std::string_view term,
                                    Date date) {
    const auto s = index.stats(title, date, term);
    return s ? s->doc_count : 0;
}

struct SeriesPoint {
    Date date;
    long long term_count = 0;
    long long doc_count = 0;
    long long total_tokens = 0;
    double rel_freq = 0.0;

    bool operator==(const SeriesPoint&) const = default;
};

// One zero-filled point per calendar day of the inclusive range.
inline std::vector<SeriesPoint> term_series(const TermDateIndex& index, std::string_view title,
                                            std::string_view term, DateRange range) {
    if (!range.valid())
        throw RangeError("series range start " + range.start.iso() + " is after end " + range.end.iso());
    std::vector<SeriesPoint> out;
    out.reserve(static_cast<std::size_t>(range.days()));
    for (Date d = range.start; d <= range.end; ++d) {
        SeriesPoint p;
        p.date = d;
        if (const DayStats* day = index.day(title, d)) {
            p.total_tokens = day->total_tokens;
            if (const auto it = day->terms.find(Term(term)); it != day->terms.end()) {
                p.term_count = it->second.term_count;
                p.doc_count = it->second.doc_count;
            }
        }
        p.rel_freq = p.total_tokens ? static_cast<double>(p.term_count) / static_cast<double>(p.total_tokens) : 0.0;
        out.push_back(p);
    }
    return out;
}

inline std::string format_fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    // Avoid "-0.000000" so output does not depend on the sign of tiny values.
    if (std::string_view(buf) == "-0.000000") return "0.000000";
    return buf;
}

inline std::string series_csv(std::span<const SeriesPoint> points) {
    std::string out = "date,term_count,doc_count,total_tokens,rel_freq\n";
    for (const auto& p : points) {
        out += p.date.iso();
        out += ',' + std::to_string(p.term_count) + ',' + std::to_string(p.doc_count) + ',' +
               std::to_string(p.total_tokens) + ',' + format_fixed6(p.rel_freq) + '\n';
    }
    return out;
}

}  // namespace chronopress
