#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chronopress/corpus.hpp"
#include "chronopress/date.hpp"
#include "chronopress/error.hpp"

// Seeded synthetic corpora with planted signals. Every draw goes through Rng,
// which only uses raw engine output, so a seed produces the same bytes on
// every platform.
namespace chronopress::fixtures {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform integer in [lo, hi].
    long uniform(long lo, long hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do x = engine_(); while (x >= limit);
        return lo + static_cast<long>(x % span);
    }

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(uniform(0, static_cast<long>(v.size()) - 1))];
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[static_cast<std::size_t>(uniform(0, static_cast<long>(i) - 1))]);
    }

    // k distinct indices from [0, n), ascending.
    std::vector<std::size_t> sample(std::size_t n, std::size_t k) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        shuffle(idx);
        idx.resize(std::min(k, n));
        std::sort(idx.begin(), idx.end());
        return idx;
    }

private:
    std::mt19937_64 engine_;
};

struct Article {
    std::vector<std::string> headline;
    std::vector<std::string> body;
};

struct FixturePage {
    PageId id;
    PageFormat format = PageFormat::alto;
    std::vector<Article> articles;

    // Raw tokens in reading order.
    std::vector<std::string> words() const {
        std::vector<std::string> out;
        for (const auto& a : articles) {
            out.insert(out.end(), a.headline.begin(), a.headline.end());
            out.insert(out.end(), a.body.begin(), a.body.end());
        }
        return out;
    }
};

struct Fixture {
    std::string kind;
    std::uint64_t seed = 0;
    std::vector<FixturePage> pages;
    std::vector<std::string> vocabulary;
    std::vector<std::string> stoplist;
    nlohmann::json truth = nlohmann::json::object();
};

inline constexpr double body_points = 10.0;
inline constexpr double headline_points = 24.0;

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

// Two-column ALTO page: the first half of the articles fill the left column
// top to bottom, the rest the right column, so reading order is article order.
// Body style is set on the TextBlock and headline style on the TextLine.
inline std::string render_alto(const FixturePage& page) {
    constexpr long column_width = 700;
    constexpr long column_gap = 100;
    constexpr long word_width = 80;
    constexpr long line_height = 30;
    constexpr std::size_t words_per_line = 8;

    std::string x = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                    "<alto xmlns=\"http://www.loc.gov/standards/alto/ns-v2#\">\n"
                    "  <Styles>\n"
                    "    <TextStyle ID=\"TXT\" FONTFAMILY=\"Times\" FONTSIZE=\"10\"/>\n"
                    "    <TextStyle ID=\"HEAD\" FONTFAMILY=\"Times\" FONTSIZE=\"24\"/>\n"
                    "  </Styles>\n"
                    "  <Layout>\n"
                    "    <Page ID=\"P1\" PHYSICAL_IMG_NR=\"" + std::to_string(page.id.page_number) + "\">\n"
                    "      <PrintSpace>\n";

    const std::size_t left = (page.articles.size() + 1) / 2;
    long vpos[2] = {0, 0};
    for (std::size_t a = 0; a < page.articles.size(); ++a) {
        const int col = a < left ? 0 : 1;
        const long hpos = col * (column_width + column_gap);
        const auto& art = page.articles[a];
        std::vector<std::pair<std::vector<std::string>, bool>> lines;
        for (std::size_t i = 0; i < art.headline.size(); i += words_per_line)
            lines.push_back({{art.headline.begin() + static_cast<long>(i),
                              art.headline.begin() + static_cast<long>(std::min(i + words_per_line, art.headline.size()))},
                             true});
        for (std::size_t i = 0; i < art.body.size(); i += words_per_line)
            lines.push_back({{art.body.begin() + static_cast<long>(i),
                              art.body.begin() + static_cast<long>(std::min(i + words_per_line, art.body.size()))},
                             false});
        const long height = static_cast<long>(lines.size()) * line_height;
        x += "        <TextBlock ID=\"TB" + std::to_string(a + 1) + "\" HPOS=\"" + std::to_string(hpos) +
             "\" VPOS=\"" + std::to_string(vpos[col]) + "\" WIDTH=\"" + std::to_string(column_width) +
             "\" HEIGHT=\"" + std::to_string(height) + "\" STYLEREFS=\"TXT\">\n";
        long y = vpos[col];
        for (const auto& [words, is_head] : lines) {
            x += is_head ? "          <TextLine STYLEREFS=\"HEAD\" VPOS=\"" : "          <TextLine VPOS=\"";
            x += std::to_string(y) + "\">\n";
            long wx = hpos;
            for (std::size_t w = 0; w < words.size(); ++w) {
                if (w) x += "            <SP/>\n";
                x += "            <String CONTENT=\"" + detail::xml_escape(words[w]) + "\" HPOS=\"" +
                     std::to_string(wx) + "\" VPOS=\"" + std::to_string(y) + "\" WIDTH=\"" +
                     std::to_string(word_width) + "\" HEIGHT=\"" + std::to_string(line_height - 5) + "\"/>\n";
                wx += word_width + 5;
            }
            x += "          </TextLine>\n";
            y += line_height;
        }
        x += "        </TextBlock>\n";
        vpos[col] += height + 50;
    }
    x += "      </PrintSpace>\n    </Page>\n  </Layout>\n</alto>\n";
    return x;
}

inline std::string render_text(const FixturePage& page) {
    std::string out;
    for (const auto& a : page.articles) {
        std::size_t n = 0;
        for (const auto* part : {&a.headline, &a.body}) {
            for (const auto& w : *part) {
                out += w;
                out += (++n % 12 == 0) ? '\n' : ' ';
            }
        }
        out += '\n';
    }
    return out;
}

inline std::string page_file_name(const FixturePage& p) {
    return p.id.title + "/" + p.id.date.iso() + "-p" + std::to_string(p.id.page_number) +
           (p.format == PageFormat::alto ? ".xml" : ".txt");
}

inline std::string manifest_row(const FixturePage& p) {
    return "pages/" + page_file_name(p) + "," + p.id.title + "," + p.id.date.iso() + "," +
           std::to_string(p.id.page_number) + "," + std::string(to_string(p.format));
}

// Writes pages/, manifest.csv, vocab.txt, stoplist.txt and truth.json.
// Returns the manifest path.
inline std::filesystem::path write_fixture(const Fixture& f, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    auto write = [](const fs::path& path, const std::string& content) {
        fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        out << content;
    };
    std::string manifest = "path,title,date,page_number,format\n";
    for (const auto& p : f.pages) {
        write(dir / "pages" / page_file_name(p), p.format == PageFormat::alto ? render_alto(p) : render_text(p));
        manifest += manifest_row(p) + "\n";
    }
    write(dir / "manifest.csv", manifest);
    std::string vocab = "# synthetic reference wordlist\n";
    for (const auto& w : f.vocabulary) vocab += w + "\n";
    write(dir / "vocab.txt", vocab);
    std::string stop = "# stoplist\n";
    for (const auto& w : f.stoplist) stop += w + "\n";
    write(dir / "stoplist.txt", stop);
    write(dir / "truth.json", f.truth.dump(2) + "\n");
    return dir / "manifest.csv";
}

// ---------------------------------------------------------------------------
// Word pools

inline const std::vector<std::string>& stop_words() {
    static const std::vector<std::string> words{"the", "of",   "and", "to",   "in",   "was", "for", "on",  "that",
                                                "is",  "with", "by",  "at",   "his",  "he",  "it",  "as",  "from",
                                                "be",  "has",  "had", "were", "this", "an",  "are", "not", "but"};
    return words;
}

inline const std::vector<std::string>& background_words() {
    static const std::vector<std::string> words{
        "street",    "city",      "council",  "mayor",     "church",   "market",   "wheat",     "cotton",
        "railroad",  "station",   "company",  "president", "senate",   "house",    "court",     "judge",
        "police",    "officer",   "fire",     "building",  "school",   "teacher",  "society",   "club",
        "meeting",   "members",   "evening",  "morning",   "weather",  "rain",     "cold",      "warm",
        "price",     "sale",      "store",    "goods",     "ladies",   "gentlemen","estate",    "property",
        "avenue",    "district",  "county",   "state",     "nation",   "army",     "navy",      "ship",
        "harbor",    "mail",      "letter",   "office",    "bank",     "money",    "dollars",   "cents",
        "business",  "trade",     "factory",  "workers",   "union",    "labor",    "hospital",  "doctor",
        "patient",   "family",    "children", "mother",    "father",   "friends",  "wedding",   "funeral",
        "theater",   "music",     "concert",  "players",   "game",     "season",   "report",    "committee",
        "board",     "public",    "private",  "national",  "local",    "general",  "special",   "annual",
        "building",  "plans",     "work",     "year",      "week",     "today",    "yesterday", "tomorrow",
        "washington","capital",   "congress", "bill",      "law",      "license",  "tax",       "water",
        "power",     "light",     "gas",      "car",       "horse",    "wagon",    "road",      "bridgework",
        "farm",      "crop",      "grain",    "coal",      "iron",     "steel",    "mill",      "paper"};
    return words;
}

namespace detail {

inline std::string capitalize(std::string w) {
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

inline std::string upper(std::string w) {
    for (auto& c : w)
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    return w;
}

// OCR-style surface noise that normalization must undo.
inline std::string decorate(Rng& rng, const std::string& w) {
    std::string out = w;
    const double r = rng.unit();
    if (r < 0.15)
        out = capitalize(out);
    else if (r < 0.18)
        out = upper(out);
    const double p = rng.unit();
    if (p < 0.08)
        out += ',';
    else if (p < 0.12)
        out += '.';
    else if (p < 0.13)
        out = "\"" + out;
    else if (p < 0.14)
        out += ";";
    return out;
}

// A random letter string that is not a known word.
inline std::string garbage(Rng& rng, const std::set<std::string>& known) {
    static const std::string letters = "abcdefghijklmnopqrstuvwxyz";
    for (;;) {
        std::string s;
        const long len = rng.uniform(3, 9);
        for (long i = 0; i < len; ++i) s += letters[static_cast<std::size_t>(rng.uniform(0, 25))];
        if (!known.count(s)) return rng.chance(0.3) ? capitalize(s) : s;
    }
}

inline std::string non_word(Rng& rng, const std::vector<std::string>& pool) {
    switch (rng.uniform(0, 3)) {
        case 0: return std::to_string(rng.uniform(1800, 1920));
        case 1: return rng.pick(pool) + "-" + rng.pick(pool);
        case 2: return "$" + std::to_string(rng.uniform(1, 99));
        default: return std::string(1, static_cast<char>('a' + rng.uniform(0, 25)));
    }
}

// Collects the tokens of one page before layout.
class PageBuilder {
public:
    void add(const std::string& word, long times = 1) {
        for (long i = 0; i < times; ++i) words_.push_back(word);
    }

    // Shuffles, decorates and splits the tokens into articles with short
    // upper-case headlines.
    std::vector<Article> layout(Rng& rng) {
        rng.shuffle(words_);
        std::vector<Article> arts;
        if (words_.empty()) return arts;
        const long n_articles = std::clamp<long>(static_cast<long>(words_.size()) / 40, 1, 4);
        const std::size_t per = (words_.size() + static_cast<std::size_t>(n_articles) - 1) /
                                static_cast<std::size_t>(n_articles);
        for (std::size_t start = 0; start < words_.size(); start += per) {
            const std::size_t end = std::min(start + per, words_.size());
            Article a;
            const std::size_t head = std::min<std::size_t>(end - start > 6 ? static_cast<std::size_t>(rng.uniform(1, 3)) : 0,
                                                           end - start);
            for (std::size_t i = start; i < end; ++i) {
                if (i < start + head)
                    a.headline.push_back(upper(words_[i]));
                else
                    a.body.push_back(decorate(rng, words_[i]));
            }
            arts.push_back(std::move(a));
        }
        return arts;
    }

private:
    std::vector<std::string> words_;
};

// Days x docs grid of page builders for one title.
struct TitleGrid {
    std::string title;
    Date start;
    long days = 0;
    long docs_per_day = 0;
    std::vector<std::vector<PageBuilder>> pages;

    TitleGrid(std::string t, Date s, long d, long per)
        : title(std::move(t)), start(s), days(d), docs_per_day(per),
          pages(static_cast<std::size_t>(d), std::vector<PageBuilder>(static_cast<std::size_t>(per))) {}

    // Puts `term` into `df` distinct pages of day index `day`, `occ` times each.
    void plant(Rng& rng, const std::string& term, long day, long df, long occ) {
        if (day < 0 || day >= days) return;
        for (auto i : rng.sample(static_cast<std::size_t>(docs_per_day), static_cast<std::size_t>(df)))
            pages[static_cast<std::size_t>(day)][i].add(term, occ);
    }

    // Background words sit at df k or k+1 every day, so their z-scores are
    // bounded by 1 / sigma_floor.
    void fill_background(Rng& rng, const std::vector<std::string>& words) {
        for (const auto& w : words) {
            const long k = rng.uniform(1, docs_per_day - 1);
            for (long d = 0; d < days; ++d) {
                const long df = k + (rng.chance(0.5) ? 1 : 0);
                for (auto i : rng.sample(static_cast<std::size_t>(docs_per_day), static_cast<std::size_t>(df)))
                    pages[static_cast<std::size_t>(d)][i].add(w, rng.uniform(1, 3));
            }
        }
    }

    void fill_noise(Rng& rng, const std::set<std::string>& known, const std::vector<std::string>& pool) {
        for (auto& day : pages) {
            for (auto& page : day) {
                for (const auto& s : stop_words()) page.add(s, rng.uniform(0, 3));
                for (long g = rng.uniform(5, 15); g > 0; --g) page.add(garbage(rng, known));
                for (long g = rng.uniform(1, 4); g > 0; --g) page.add(non_word(rng, pool));
            }
        }
    }

    void emit(Rng& rng, std::vector<FixturePage>& out, double text_share = 0.25) {
        for (long d = 0; d < days; ++d) {
            for (long p = 0; p < docs_per_day; ++p) {
                FixturePage page;
                page.id = {title, start + d, static_cast<int>(p + 1)};
                page.format = rng.chance(text_share) ? PageFormat::text : PageFormat::alto;
                page.articles = pages[static_cast<std::size_t>(d)][static_cast<std::size_t>(p)].layout(rng);
                out.push_back(std::move(page));
            }
        }
    }
};

inline std::vector<std::string> without(const std::vector<std::string>& pool, const std::set<std::string>& drop) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& w : pool)
        if (!drop.count(w) && seen.insert(w).second) out.push_back(w);
    return out;
}

inline void finish_vocabulary(Fixture& f, const std::set<std::string>& words) {
    f.vocabulary.assign(words.begin(), words.end());
    f.stoplist = stop_words();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Seasonality: one title over 107 days (1914-09-16 .. 1914-12-31) with
// holiday and election terms planted on known days. Day numbers in the
// truth file are 1-based.
inline Fixture seasonality_fixture(std::uint64_t seed = 1914) {
    Rng rng(seed);
    Fixture f;
    f.kind = "seasonality";
    f.seed = seed;
    const std::string title = "evening-ledger";
    const Date start{1914, 9, 16};
    constexpr long days = 107;
    constexpr long per_day = 8;

    const std::set<std::string> planted{"thanksgiving", "christmas", "campaign", "vote"};
    const auto background = detail::without(background_words(), planted);
    std::set<std::string> known(background.begin(), background.end());
    known.insert(planted.begin(), planted.end());
    known.insert(stop_words().begin(), stop_words().end());

    detail::TitleGrid grid(title, start, days, per_day);
    grid.fill_background(rng, background);
    grid.fill_noise(rng, known, background);

    auto at = [](long day1) { return day1 - 1; };
    std::map<std::string, std::set<long>> used;  // days already planted per term
    auto plant = [&](const std::string& term, long day1, long df, long occ) {
        grid.plant(rng, term, at(day1), df, occ);
        used[term].insert(day1);
    };
    // Sparse single mentions away from the planted windows.
    auto scatter = [&](const std::string& term, long count, long lo, long hi, long avoid_lo, long avoid_hi) {
        while (count > 0) {
            const long d = rng.uniform(lo, hi);
            if ((d >= avoid_lo && d <= avoid_hi) || used[term].count(d)) continue;
            plant(term, d, 1, 1);
            --count;
        }
    };

    // Thanksgiving: small build-up, peak on day 73.
    plant("thanksgiving", 70, 1, 1);
    plant("thanksgiving", 71, 1, 1);
    plant("thanksgiving", 72, 2, 1);
    plant("thanksgiving", 73, 7, 3);
    scatter("thanksgiving", 4, 1, 60, 60, 80);

    // Christmas: rising through December, peak on day 101 (Dec 25).
    for (long d = 90; d <= 100; ++d) plant("christmas", d, 1 + (d - 90) / 4, 1);
    plant("christmas", 101, 7, 3);
    scatter("christmas", 4, 1, 80, 85, 107);

    // Campaign: elevated for the 14 days before the vote spike, peaking on
    // the eve of the election.
    for (long i = 0; i < 13; ++i) plant("campaign", 34 + i, 2 + (i * 4) / 13, 2);
    plant("campaign", 47, 7, 3);
    for (long d = 48; d <= 50; ++d) plant("campaign", d, 1, 1);
    scatter("campaign", 12, 1, 107, 30, 52);

    // Vote: three-day spike around election day (day 49, Nov 3).
    plant("vote", 48, 4, 2);
    plant("vote", 49, 7, 3);
    plant("vote", 50, 5, 2);
    scatter("vote", 8, 1, 107, 44, 54);

    grid.emit(rng, f.pages);

    std::set<std::string> vocab = known;
    for (const auto& s : stop_words()) vocab.insert(s);
    for (const auto& extra : {"turkey", "santa", "candidate", "rally", "election", "votes", "voted"}) vocab.insert(extra);
    detail::finish_vocabulary(f, vocab);

    auto date_of = [&](long day1) { return (start + (day1 - 1)).iso(); };
    f.truth = {{"kind", f.kind},
               {"seed", seed},
               {"title", title},
               {"start", start.iso()},
               {"end", (start + (days - 1)).iso()},
               {"days", days},
               {"docs_per_day", per_day},
               {"peaks",
                {{"thanksgiving", date_of(73)}, {"christmas", date_of(101)}, {"campaign", date_of(47)}, {"vote", date_of(49)}}},
               {"spike_days",
                {{"thanksgiving", nlohmann::json::array({date_of(73)})},
                 {"christmas", nlohmann::json::array({date_of(101)})},
                 {"vote", nlohmann::json::array({date_of(48), date_of(49), date_of(50)})}}},
               {"planted_terms", planted}};
    return f;
}

// Cross-title events: two titles over 90 days (1906-10-03 .. 1906-12-31)
// sharing three planted stories plus single-title and far-apart noise.
inline Fixture events_fixture(std::uint64_t seed = 1906) {
    Rng rng(seed);
    Fixture f;
    f.kind = "events";
    f.seed = seed;
    const std::vector<std::string> titles{"washington-herald", "washington-times"};
    const Date start{1906, 10, 3};
    constexpr long days = 90;
    constexpr long per_day = 6;

    const std::vector<std::vector<std::string>> story_pools{
        {"awful", "breaking", "camden", "coach", "dempsey", "drawbridge", "heroism", "motorman", "submerged",
         "survivors", "thoroughfare", "trestle"},
        {"dillon", "lacking", "princeton", "princetons", "teams", "tigers", "yale", "gridiron"},
        {"ambulances", "coaches", "cotta", "crowded", "horribly", "mangled", "rescuers", "splintered", "takoma",
         "terra"}};
    const std::vector<std::string> noise_pool{"blizzard", "canal", "earthquake", "embezzler", "fugitive", "strike",
                                              "typhoid", "verdict"};

    std::set<std::string> special(noise_pool.begin(), noise_pool.end());
    for (const auto& p : story_pools) special.insert(p.begin(), p.end());
    const auto background = detail::without(background_words(), special);
    std::set<std::string> known(background.begin(), background.end());
    known.insert(special.begin(), special.end());
    known.insert(stop_words().begin(), stop_words().end());

    std::vector<detail::TitleGrid> grids;
    for (const auto& t : titles) {
        grids.emplace_back(t, start, days, per_day);
        grids.back().fill_background(rng, background);
        grids.back().fill_noise(rng, known, background);
    }

    // Story days at least 12 apart, clear of the range edges by the offset.
    std::vector<long> story_days;
    while (story_days.size() < story_pools.size()) {
        const long d = rng.uniform(3, days - 4);
        bool ok = true;
        for (long s : story_days) ok = ok && std::labs(s - d) >= 12;
        if (ok) story_days.push_back(d);
    }
    std::sort(story_days.begin(), story_days.end());

    nlohmann::json events = nlohmann::json::array();
    for (std::size_t e = 0; e < story_pools.size(); ++e) {
        auto pool = story_pools[e];
        rng.shuffle(pool);
        pool.resize(static_cast<std::size_t>(std::min<long>(rng.uniform(4, 8), static_cast<long>(pool.size()))));
        std::sort(pool.begin(), pool.end());
        const long offset = rng.uniform(0, 2);
        const std::size_t first = static_cast<std::size_t>(rng.uniform(0, 1));
        long when[2];
        when[first] = story_days[e];
        when[1 - first] = story_days[e] + offset;
        for (const auto& term : pool) {
            for (std::size_t t = 0; t < 2; ++t) {
                grids[t].plant(rng, term, when[t], rng.uniform(3, per_day), rng.uniform(1, 3));
                // Follow-up coverage in a single page the next day stays below min_docs.
                if (rng.chance(0.5)) grids[t].plant(rng, term, when[t] + 1, 1, 1);
            }
        }
        events.push_back({{"anchor_date", (start + std::min(when[0], when[1])).iso()},
                          {"terms", pool},
                          {"dates", {{titles[0], (start + when[0]).iso()}, {titles[1], (start + when[1]).iso()}}}});
    }

    // Single-title noise bursts, plus terms that burst in both titles too far
    // apart to match.
    nlohmann::json noise = nlohmann::json::array();
    auto noise_terms = noise_pool;
    rng.shuffle(noise_terms);
    for (std::size_t i = 0; i < noise_terms.size(); ++i) {
        const auto& term = noise_terms[i];
        if (i < 6) {
            const std::size_t t = static_cast<std::size_t>(rng.uniform(0, 1));
            const long d = rng.uniform(0, days - 1);
            grids[t].plant(rng, term, d, rng.uniform(3, per_day), rng.uniform(1, 2));
            noise.push_back({{"term", term}, {"dates", {{titles[t], (start + d).iso()}}}});
        } else {
            const long d0 = rng.uniform(0, days - 20);
            const long d1 = d0 + rng.uniform(6, 15);
            grids[0].plant(rng, term, d0, rng.uniform(3, per_day), 1);
            grids[1].plant(rng, term, d1, rng.uniform(3, per_day), 1);
            noise.push_back({{"term", term}, {"dates", {{titles[0], (start + d0).iso()}, {titles[1], (start + d1).iso()}}}});
        }
    }

    for (auto& g : grids) g.emit(rng, f.pages);
    detail::finish_vocabulary(f, known);
    f.truth = {{"kind", f.kind}, {"seed", seed},          {"titles", titles}, {"start", start.iso()},
               {"days", days},   {"docs_per_day", per_day}, {"events", events}, {"noise", noise}};
    return f;
}

// Small random corpus for oracle checks: up to 2 titles, up to 20 days, up
// to 10 pages a day, up to 500 tokens a page. Some days have no pages and a
// few terms get random spikes.
inline Fixture random_fixture(std::uint64_t seed) {
    Rng rng(seed);
    Fixture f;
    f.kind = "random";
    f.seed = seed;

    std::vector<std::string> vocab_pool = detail::without(background_words(), {});
    rng.shuffle(vocab_pool);
    vocab_pool.resize(static_cast<std::size_t>(rng.uniform(8, 40)));
    std::set<std::string> known(vocab_pool.begin(), vocab_pool.end());
    known.insert(stop_words().begin(), stop_words().end());

    const Date start = Date{1906, 1, 1} + rng.uniform(0, 3000);
    const long n_titles = rng.uniform(1, 2);
    for (long t = 0; t < n_titles; ++t) {
        const std::string title = "title-" + std::string(1, static_cast<char>('a' + t));
        const long days = rng.uniform(1, 20);
        std::vector<std::string> spiky;
        for (long s = rng.uniform(0, 4); s > 0; --s) spiky.push_back(rng.pick(vocab_pool));
        std::vector<long> spike_day;
        for (std::size_t s = 0; s < spiky.size(); ++s) spike_day.push_back(rng.uniform(0, days - 1));

        for (long d = 0; d < days; ++d) {
            const long pages = rng.chance(0.15) ? 0 : rng.uniform(1, 10);
            for (long p = 0; p < pages; ++p) {
                detail::PageBuilder builder;
                const long n = rng.uniform(0, 480);
                for (long i = 0; i < n; ++i) {
                    const double r = rng.unit();
                    if (r < 0.6) {
                        // Skewed draw toward the front of the pool.
                        const auto k = static_cast<std::size_t>(rng.unit() * rng.unit() * static_cast<double>(vocab_pool.size()));
                        builder.add(vocab_pool[k]);
                    } else if (r < 0.8) {
                        builder.add(rng.pick(stop_words()));
                    } else if (r < 0.95) {
                        builder.add(detail::garbage(rng, known));
                    } else {
                        builder.add(detail::non_word(rng, vocab_pool));
                    }
                }
                for (std::size_t s = 0; s < spiky.size(); ++s)
                    if (spike_day[s] == d && rng.chance(0.7)) builder.add(spiky[s], rng.uniform(1, 4));
                FixturePage page;
                page.id = {title, start + d, static_cast<int>(p + 1)};
                page.format = rng.chance(0.5) ? PageFormat::text : PageFormat::alto;
                page.articles = builder.layout(rng);
                f.pages.push_back(std::move(page));
            }
        }
    }
    std::set<std::string> vocab = known;
    // Vocabulary words that never occur.
    for (const auto& w : {"aqueduct", "zeppelin"}) vocab.insert(w);
    detail::finish_vocabulary(f, vocab);
    f.truth = {{"kind", f.kind}, {"seed", seed}};
    return f;
}

}  // namespace chronopress::fixtures
