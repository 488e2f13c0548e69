#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "chronopress/burst.hpp"
#include "chronopress/categorize.hpp"
#include "chronopress/corpus.hpp"
#include "chronopress/events.hpp"
#include "chronopress/fixtures.hpp"
#include "chronopress/index.hpp"
#include "chronopress/lexicon.hpp"
#include "chronopress/segmentation.hpp"

// Command-line front end. Data goes to `out`, diagnostics to `err`.
// Exit codes: 0 success, 1 I/O or build failure, 2 usage or selector error.
namespace chronopress::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

class UsageError : public Error {
public:
    using Error::Error;
};

namespace detail {

struct LexiconOptions {
    std::string vocab;
    std::string stoplist;
    std::string stoplist_counts;
    std::size_t stoplist_size = default_stoplist_size;

    void add_to(CLI::App& app, bool vocab_required) {
        auto* v = app.add_option("--vocab", vocab, "Reference wordlist (one word per line, # comments)");
        if (vocab_required) v->required();
        app.add_option("--stoplist", stoplist, "Stoplist file (same format as the wordlist)");
        app.add_option("--stoplist-counts", stoplist_counts,
                       "Term counts file ('term count' per line); the top --stoplist-size terms become the stoplist");
        app.add_option("--stoplist-size", stoplist_size, "Stoplist size when derived from counts")
            ->capture_default_str();
    }

    Stoplist stoplist_or_empty() const {
        if (!stoplist.empty() && !stoplist_counts.empty())
            throw UsageError("--stoplist and --stoplist-counts are mutually exclusive");
        if (!stoplist.empty()) return load_stoplist(stoplist);
        if (!stoplist_counts.empty())
            return build_stoplist(parse_term_counts(read_file(stoplist_counts)), stoplist_size);
        return {};
    }
};

struct SegmentOptions {
    SegmentationParams params;

    void add_to(CLI::App& app) {
        app.add_option("--alpha", params.alpha, "Headline font threshold relative to the body font")
            ->capture_default_str();
        app.add_option("--min-headline-tokens", params.min_headline_tokens, "Minimum tokens in a headline run")
            ->capture_default_str();
    }

    const SegmentationParams& validated() const {
        try {
            params.validate();
        } catch (const ValidationError& e) {
            throw UsageError(e.what());
        }
        return params;
    }
};

struct BurstOptions {
    double threshold = 3.0;
    long long min_docs = 2;
    double sigma_floor = 0.5;
    std::string from;
    std::string to;
    bool exclude_self = false;

    void add_to(CLI::App& app) {
        app.add_option("--threshold", threshold, "z-score cutoff (inclusive)")->capture_default_str();
        app.add_option("--min-docs", min_docs, "Minimum daily document frequency")->capture_default_str();
        app.add_option("--sigma-floor", sigma_floor, "Lower bound on the baseline deviation")->capture_default_str();
        app.add_option("--from", from, "First day of the analysis range (default: title's first day)");
        app.add_option("--to", to, "Last day of the analysis range (default: title's last day)");
        app.add_flag("--exclude-self", exclude_self, "Leave the scored day out of its own baseline");
    }
};

struct PageInput {
    std::string manifest;
    std::string select;
    std::string file;
    std::string format = "alto";
    std::string title = "page";
    std::string date = "1900-01-01";
    int page = 1;

    void add_to(CLI::App& app) {
        app.add_option("--manifest", manifest, "Corpus manifest CSV");
        app.add_option("--select", select, "Only this page of the manifest: TITLE:YYYY-MM-DD:PAGE");
        app.add_option("--file", file, "A single page file instead of a manifest");
        app.add_option("--format", format, "Format of --file")->check(CLI::IsMember({"alto", "text"}));
        app.add_option("--title", title, "Title recorded for --file");
        app.add_option("--date", date, "Date recorded for --file");
        app.add_option("--page", page, "Page number recorded for --file");
    }

    std::vector<ManifestEntry> entries() const {
        if (manifest.empty() == file.empty()) throw UsageError("give exactly one of --manifest or --file");
        if (!file.empty()) {
            const auto d = Date::parse(date);
            if (!d) throw UsageError("invalid --date '" + date + "'");
            if (page < 1) throw UsageError("--page must be >= 1");
            return {ManifestEntry{file, PageId{title, *d, page}, format == "text" ? PageFormat::text : PageFormat::alto}};
        }
        auto m = load_manifest(manifest);
        if (select.empty()) return m.entries;

        const auto last = select.rfind(':');
        const auto mid = last == std::string::npos || last == 0 ? std::string::npos : select.rfind(':', last - 1);
        if (mid == std::string::npos) throw UsageError("--select must look like TITLE:YYYY-MM-DD:PAGE");
        const auto d = Date::parse(select.substr(mid + 1, last - mid - 1));
        int pn = 0;
        const auto pstr = select.substr(last + 1);
        const auto [ptr, ec] = std::from_chars(pstr.data(), pstr.data() + pstr.size(), pn);
        if (!d || ec != std::errc{} || ptr != pstr.data() + pstr.size())
            throw UsageError("--select must look like TITLE:YYYY-MM-DD:PAGE");
        const PageId want{select.substr(0, mid), *d, pn};
        for (const auto& e : m.entries)
            if (e.id == want) return {e};
        throw UsageError("no manifest page matches --select " + select);
    }
};

inline Date parse_date_flag(const std::string& flag, const std::string& value) {
    const auto d = Date::parse(value);
    if (!d) throw UsageError("invalid " + flag + " '" + value + "' (expected YYYY-MM-DD)");
    return *d;
}

inline DateRange resolve_range(const TermDateIndex& index, const std::string& title, const std::string& from,
                               const std::string& to) {
    const auto span = index.span(title);
    if (!span) throw UsageError("unknown title '" + title + "'");
    DateRange r = *span;
    if (!from.empty()) r.start = parse_date_flag("--from", from);
    if (!to.empty()) r.end = parse_date_flag("--to", to);
    if (!r.valid()) throw UsageError("date range is reversed: " + r.start.iso() + " > " + r.end.iso());
    return r;
}

inline BurstParams burst_params(const BurstOptions& o, DateRange range) {
    BurstParams p;
    p.threshold = o.threshold;
    p.min_docs = o.min_docs;
    p.sigma_floor = o.sigma_floor;
    p.range = range;
    p.exclude_self = o.exclude_self;
    try {
        p.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return p;
}

inline unsigned thread_cap() {
    const char* env = std::getenv("CHRONOPRESS_THREADS");
    if (!env || !*env) return 0;
    unsigned n = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw UsageError("CHRONOPRESS_THREADS must be a non-negative integer");
    return n;
}

inline TermDateIndex open_index(const std::string& path) { return load_index(path); }

inline std::string plural(std::size_t n, const char* word) {
    return std::to_string(n) + " " + word + (n == 1 ? "" : "s");
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"chronopress: newspaper OCR term statistics, bursts and cross-title events"};
    app.name("chronopress");
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Build the term x date index from a manifest");
    std::string ingest_manifest, ingest_out, unit_name = "page";
    bool skip_bad = false;
    detail::LexiconOptions ingest_lex;
    detail::SegmentOptions ingest_seg;
    ingest->add_option("--manifest", ingest_manifest, "Corpus manifest CSV")->required();
    ingest_lex.add_to(*ingest, true);
    ingest_seg.add_to(*ingest);
    ingest->add_option("--unit", unit_name, "Document unit")->check(CLI::IsMember({"page", "segment"}))->capture_default_str();
    ingest->add_flag("--skip-bad", skip_bad, "Warn about and skip unreadable pages instead of failing");
    ingest->add_option("--out", ingest_out, "Index file to write (default: standard output)");

    // segment
    auto* segment = app.add_subcommand("segment", "Split pages into headline-delimited article segments");
    detail::PageInput seg_input;
    detail::SegmentOptions seg_opts;
    seg_input.add_to(*segment);
    seg_opts.add_to(*segment);

    // series
    auto* series = app.add_subcommand("series", "Daily frequency series for one term as CSV");
    std::string series_index, series_title, series_term, series_from, series_to;
    series->add_option("--index", series_index, "Index file")->required();
    series->add_option("--title", series_title, "Newspaper title")->required();
    series->add_option("--term", series_term, "Term")->required();
    series->add_option("--from", series_from, "First day (default: title's first day)");
    series->add_option("--to", series_to, "Last day (default: title's last day)");

    // bursts
    auto* bursts = app.add_subcommand("bursts", "Days where a term's document frequency bursts");
    std::string bursts_index, bursts_title;
    detail::BurstOptions bursts_opts;
    bursts->add_option("--index", bursts_index, "Index file")->required();
    bursts->add_option("--title", bursts_title, "Newspaper title")->required();
    bursts_opts.add_to(*bursts);

    // events
    auto* events = app.add_subcommand("events", "Terms bursting in two or more titles within a window");
    std::string events_index;
    std::vector<std::string> events_titles;
    long window = 3;
    bool events_json = false;
    detail::BurstOptions events_opts;
    events->add_option("--index", events_index, "Index file")->required();
    events->add_option("--titles", events_titles, "Titles to compare (default: all)")->delimiter(',');
    events->add_option("--window", window, "Match window in days: dates match when |a - b| < N")->capture_default_str();
    events->add_flag("--json", events_json, "Emit JSON instead of the text table");
    events_opts.add_to(*events);

    // categorize
    auto* categorize = app.add_subcommand("categorize", "Assign keyword categories to article segments");
    detail::PageInput cat_input;
    detail::SegmentOptions cat_seg;
    detail::LexiconOptions cat_lex;
    std::string rules_path;
    cat_input.add_to(*categorize);
    cat_seg.add_to(*categorize);
    cat_lex.add_to(*categorize, true);
    categorize->add_option("--rules", rules_path, "Ruleset JSON")->required();

    // stoplist
    auto* stoplist = app.add_subcommand("stoplist", "Print the most frequent terms, one per line");
    std::string stop_counts, stop_manifest, stop_vocab;
    std::size_t stop_size = default_stoplist_size;
    stoplist->add_option("--counts", stop_counts, "Term counts file ('term count' per line)");
    stoplist->add_option("--manifest", stop_manifest, "Count terms over this corpus instead");
    stoplist->add_option("--vocab", stop_vocab, "Wordlist restricting corpus counts");
    stoplist->add_option("--size", stop_size, "Number of terms")->capture_default_str();

    // fixtures generate (hidden)
    auto* fixtures = app.add_subcommand("fixtures", "Synthetic corpus generator");
    fixtures->group("");
    fixtures->require_subcommand(1);
    auto* generate = fixtures->add_subcommand("generate", "Write a seeded synthetic corpus");
    std::string fx_kind = "seasonality", fx_out;
    std::uint64_t fx_seed = 0;
    bool fx_seed_given = false;
    generate->add_option("--kind", fx_kind, "seasonality | events | random")
        ->check(CLI::IsMember({"seasonality", "events", "random"}))
        ->capture_default_str();
    generate->add_option("--seed", fx_seed, "Seed")->each([&](const std::string&) { fx_seed_given = true; });
    generate->add_option("--out", fx_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*ingest) {
            const auto manifest = load_manifest(ingest_manifest);
            const auto vocab = load_vocabulary(ingest_lex.vocab);
            const auto stop = ingest_lex.stoplist_or_empty();
            BuildOptions opts;
            opts.skip_bad = skip_bad;
            opts.threads = detail::thread_cap();
            opts.on_warning = [&](const std::string& w) { err << "warning: " << w << "\n"; };
            const auto index = build_index(manifest, vocab, stop,
                                           unit_name == "segment" ? DocumentUnit::segment : DocumentUnit::page,
                                           ingest_seg.validated(), opts);
            if (ingest_out.empty())
                out << index.serialize();
            else
                save_index(index, ingest_out);

            std::size_t days = 0;
            for (const auto& t : index.titles()) days += index.days(t)->size();
            const auto titles = index.titles();
            std::set<std::string_view> terms;
            for (const auto& t : titles)
                for (const auto& [_, day] : *index.days(t))
                    for (const auto& [term, __] : day.terms) terms.insert(term);
            err << detail::plural(titles.size(), "title") << ", " << detail::plural(days, "day") << ", "
                << detail::plural(index.document_count(), "doc") << ", "
                << detail::plural(terms.size(), "distinct term") << "\n";
            for (const auto& t : titles) {
                const auto span = *index.span(t);
                std::size_t docs = 0;
                for (const auto& [_, day] : *index.days(t)) docs += static_cast<std::size_t>(day.n_docs);
                err << "  " << t << ": " << span.start.iso() << " .. " << span.end.iso() << ", "
                    << detail::plural(index.days(t)->size(), "day") << ", " << detail::plural(docs, "doc") << ", "
                    << detail::plural(index.distinct_terms(t), "distinct term") << "\n";
            }
            return exit_ok;
        }

        if (*segment) {
            const auto& params = seg_opts.validated();
            for (const auto& entry : seg_input.entries()) {
                const Page page = load_page(entry);
                for (const auto& s : segment_articles(page, params)) {
                    nlohmann::ordered_json rec;
                    rec["title"] = s.page.title;
                    rec["date"] = s.page.date.iso();
                    rec["page"] = s.page.page_number;
                    rec["seq"] = s.seq;
                    rec["headline"] = s.headline_text ? nlohmann::ordered_json(*s.headline_text) : nullptr;
                    rec["token_count"] = s.tokens.size();
                    out << rec.dump() << "\n";
                }
            }
            return exit_ok;
        }

        if (*series) {
            const auto index = detail::open_index(series_index);
            const auto range = detail::resolve_range(index, series_title, series_from, series_to);
            const auto term = normalize_token(series_term);
            if (!term) throw UsageError("'" + series_term + "' is not a valid term");
            out << series_csv(term_series(index, series_title, *term, range));
            return exit_ok;
        }

        if (*bursts) {
            const auto index = detail::open_index(bursts_index);
            const auto range = detail::resolve_range(index, bursts_title, bursts_opts.from, bursts_opts.to);
            for (const auto& b : detect_bursts(index, bursts_title, detail::burst_params(bursts_opts, range)))
                out << burst_json_line(b) << "\n";
            return exit_ok;
        }

        if (*events) {
            const auto index = detail::open_index(events_index);
            if (window < 1) throw UsageError("--window must be >= 1");
            std::vector<std::string> wanted = events_titles.empty() ? index.titles() : events_titles;
            std::map<std::string, std::vector<Burst>> by_title;
            for (const auto& t : wanted) {
                if (!index.has_title(t)) {
                    err << "warning: unknown title '" << t << "' ignored\n";
                    continue;
                }
                const auto range = detail::resolve_range(index, t, events_opts.from, events_opts.to);
                by_title[t] = detect_bursts(index, t, detail::burst_params(events_opts, range));
            }
            if (by_title.size() < 2)
                throw UsageError("events needs at least 2 known titles, got " + std::to_string(by_title.size()));
            const auto matches = correlate_bursts(by_title, WindowParams{window});
            const auto clusters = cluster_by_date(matches);
            if (events_json)
                out << events_to_json(clusters, matches).dump(2) << "\n";
            else
                out << render_event_table(clusters);
            return exit_ok;
        }

        if (*categorize) {
            const auto& params = cat_seg.validated();
            Ruleset rules;
            try {
                rules = load_ruleset(rules_path);
            } catch (const IoError&) {
                throw;
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
            const auto vocab = load_vocabulary(cat_lex.vocab);
            const auto stop = cat_lex.stoplist_or_empty();
            for (const auto& entry : cat_input.entries()) {
                const Page page = load_page(entry);
                for (const auto& s : segment_articles(page, params)) {
                    for (const auto& a : categorize_segment(s, rules, vocab, stop)) {
                        nlohmann::ordered_json rec;
                        rec["title"] = s.page.title;
                        rec["date"] = s.page.date.iso();
                        rec["page"] = s.page.page_number;
                        rec["seq"] = s.seq;
                        rec["category"] = a.category;
                        rec["score"] = a.score;
                        rec["matched_keywords"] = a.matched_keywords;
                        out << rec.dump() << "\n";
                    }
                }
            }
            return exit_ok;
        }

        if (*stoplist) {
            std::map<Term, long long> counts;
            if (!stop_counts.empty() == !stop_manifest.empty())
                throw UsageError("give exactly one of --counts or --manifest");
            if (!stop_counts.empty()) {
                counts = parse_term_counts(read_file(stop_counts));
            } else {
                if (stop_vocab.empty()) throw UsageError("--manifest needs --vocab");
                const auto vocab = load_vocabulary(stop_vocab);
                for (const auto& e : load_manifest(stop_manifest).entries) {
                    const Page page = load_page(e);
                    for (const auto& doc : page_documents(page, vocab, Stoplist{}, DocumentUnit::page, {}))
                        for (const auto& t : doc) ++counts[t];
                }
            }
            for (const auto& t : rank_terms(counts, stop_size)) out << t << "\n";
            return exit_ok;
        }

        if (*generate) {
            fixtures::Fixture f;
            if (fx_kind == "seasonality")
                f = fx_seed_given ? fixtures::seasonality_fixture(fx_seed) : fixtures::seasonality_fixture();
            else if (fx_kind == "events")
                f = fx_seed_given ? fixtures::events_fixture(fx_seed) : fixtures::events_fixture();
            else
                f = fixtures::random_fixture(fx_seed);
            const auto manifest = fixtures::write_fixture(f, fx_out);
            err << "wrote " << f.pages.size() << " pages; manifest " << manifest.string() << "\n";
            return exit_ok;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const RangeError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_usage;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"chronopress"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace chronopress::cli
