#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chronopress/burst.hpp"
#include "chronopress/date.hpp"
#include "chronopress/error.hpp"
#include "chronopress/text.hpp"

namespace chronopress {

struct WindowParams {
    long window_days = 3;  // dates match when |a - b| < window_days

    void validate() const {
        if (window_days < 1) throw ValidationError("window_days must be >= 1");
    }
};

struct CrossTitleTerm {
    Term term;
    std::string title_a;
    Date date_a;
    double z_a = 0;
    std::string title_b;
    Date date_b;
    double z_b = 0;

    Date anchor_date() const { return std::min(date_a, date_b); }

    bool operator==(const CrossTitleTerm&) const = default;
};

struct EventCluster {
    Date anchor_date;
    std::vector<Term> terms;  // sorted, unique

    bool operator==(const EventCluster&) const = default;
};

// Pairs bursts of the same term across every unordered pair of titles. Titles
// are taken in lexicographic order, so the first of each pair drives the
// greedy matching: each of its burst dates takes the nearest unused date of
// the other title inside the window, ties going to the earlier date.
inline std::vector<CrossTitleTerm> correlate_bursts(const std::map<std::string, std::vector<Burst>>& bursts_by_title,
                                                    const WindowParams& w) {
    w.validate();
    if (bursts_by_title.size() < 2)
        throw ValidationError("correlating bursts needs at least 2 titles, got " +
                              std::to_string(bursts_by_title.size()));

    // title -> term -> date -> z
    std::map<std::string, std::map<Term, std::map<Date, double>>> by_term;
    for (const auto& [title, bursts] : bursts_by_title) {
        auto& terms = by_term[title];
        for (const auto& b : bursts) {
            auto [it, fresh] = terms[b.term].emplace(b.date, b.z);
            if (!fresh) it->second = std::max(it->second, b.z);
        }
    }

    std::vector<CrossTitleTerm> out;
    for (auto a = by_term.begin(); a != by_term.end(); ++a) {
        for (auto b = std::next(a); b != by_term.end(); ++b) {
            for (const auto& [term, dates_a] : a->second) {
                const auto other = b->second.find(term);
                if (other == b->second.end()) continue;
                const auto& dates_b = other->second;
                std::set<Date> used;
                for (const auto& [da, za] : dates_a) {
                    const Date* best = nullptr;
                    double best_z = 0;
                    long best_gap = 0;
                    for (auto it = dates_b.lower_bound(da - (w.window_days - 1));
                         it != dates_b.end() && it->first - da < w.window_days; ++it) {
                        if (used.count(it->first)) continue;
                        const long gap = std::labs(it->first - da);
                        // Iteration is ascending, so strict < keeps the earlier date on ties.
                        if (!best || gap < best_gap) {
                            best = &it->first;
                            best_z = it->second;
                            best_gap = gap;
                        }
                    }
                    if (!best) continue;
                    used.insert(*best);
                    out.push_back({term, a->first, da, za, b->first, *best, best_z});
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const CrossTitleTerm& x, const CrossTitleTerm& y) {
        return std::tie(x.term, x.title_a, x.date_a, x.title_b, x.date_b) <
               std::tie(y.term, y.title_a, y.date_a, y.title_b, y.date_b);
    });
    return out;
}

inline std::vector<EventCluster> cluster_by_date(const std::vector<CrossTitleTerm>& matches) {
    std::map<Date, std::set<Term>> grouped;
    for (const auto& m : matches) grouped[m.anchor_date()].insert(m.term);
    std::vector<EventCluster> out;
    for (auto& [date, terms] : grouped) out.push_back({date, std::vector<Term>(terms.begin(), terms.end())});
    return out;
}

// `<ISO date>\t<sorted terms>\n` per cluster, in date order.
inline std::string render_event_table(std::vector<EventCluster> clusters) {
    std::stable_sort(clusters.begin(), clusters.end(),
                     [](const EventCluster& a, const EventCluster& b) { return a.anchor_date < b.anchor_date; });
    std::string out;
    for (auto& c : clusters) {
        std::set<Term> terms(c.terms.begin(), c.terms.end());
        out += c.anchor_date.iso();
        out += '\t';
        bool first = true;
        for (const auto& t : terms) {
            if (!first) out += ' ';
            out += t;
            first = false;
        }
        out += '\n';
    }
    return out;
}

// Reads the text table back into clusters.
inline std::vector<EventCluster> parse_event_table(std::string_view text) {
    std::vector<EventCluster> out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        const auto where = "event table line " + std::to_string(line_no) + ": ";
        if (tab == std::string_view::npos) throw ValidationError(where + "missing TAB");
        const auto date = Date::parse(line.substr(0, tab));
        if (!date) throw ValidationError(where + "invalid date");
        EventCluster c{*date, split_whitespace(line.substr(tab + 1))};
        std::sort(c.terms.begin(), c.terms.end());
        c.terms.erase(std::unique(c.terms.begin(), c.terms.end()), c.terms.end());
        if (c.terms.empty()) throw ValidationError(where + "no terms");
        out.push_back(std::move(c));
    }
    return out;
}

// JSON form: clusters with the matches that produced them.
inline nlohmann::json events_to_json(const std::vector<EventCluster>& clusters,
                                     const std::vector<CrossTitleTerm>& matches) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : clusters) {
        nlohmann::json ms = nlohmann::json::array();
        for (const auto& m : matches) {
            if (m.anchor_date() != c.anchor_date) continue;
            ms.push_back({{"term", m.term},
                          {"title_a", m.title_a},
                          {"date_a", m.date_a.iso()},
                          {"z_a", std::round(m.z_a * 1e6) / 1e6},
                          {"title_b", m.title_b},
                          {"date_b", m.date_b.iso()},
                          {"z_b", std::round(m.z_b * 1e6) / 1e6}});
        }
        arr.push_back({{"anchor_date", c.anchor_date.iso()}, {"terms", c.terms}, {"matches", std::move(ms)}});
    }
    return arr;
}

}  // namespace chronopress
