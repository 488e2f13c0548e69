#pragma once

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "chronopress/corpus.hpp"
#include "chronopress/error.hpp"
#include "chronopress/lexicon.hpp"
#include "chronopress/segmentation.hpp"

namespace chronopress {

struct WeightedKeyword {
    Term keyword;
    double weight = 1.0;

    bool operator==(const WeightedKeyword&) const = default;
};

// Keyword rules per category. A category's score on a segment is the sum of
// the weights of its distinct keywords found there.
struct Ruleset {
    std::map<std::string, std::vector<WeightedKeyword>> categories;
    double min_score = 1.0;
};

struct CategoryAssignment {
    std::string category;
    double score = 0;
    std::vector<Term> matched_keywords;  // sorted

    bool operator==(const CategoryAssignment&) const = default;
};

namespace detail {

// Rejects duplicate object keys, which nlohmann would otherwise collapse.
class DuplicateKeyGuard {
public:
    bool operator()(int depth, nlohmann::json::parse_event_t event, nlohmann::json& parsed) {
        using E = nlohmann::json::parse_event_t;
        switch (event) {
            case E::object_start:
                keys_.resize(static_cast<std::size_t>(depth) + 1);
                keys_[static_cast<std::size_t>(depth)].clear();
                break;
            case E::key: {
                // Keys are reported at the depth of the enclosing object plus one.
                auto& seen = keys_.at(static_cast<std::size_t>(depth - 1));
                const auto& key = parsed.get_ref<const std::string&>();
                if (!seen.insert(key).second) {
                    const bool category = depth == 1 ? !has_wrapper_ : depth == 2;
                    throw ValidationError(std::string(category ? "duplicate category '" : "duplicate key '") + key + "'");
                }
                if (depth == 1 && key == "categories") has_wrapper_ = true;
                break;
            }
            default:
                break;
        }
        return true;
    }

private:
    std::vector<std::set<std::string>> keys_;
    bool has_wrapper_ = false;
};

}  // namespace detail

// Accepts `{"min_score": x, "categories": {name: [entry, ...]}}` or a bare
// `{name: [entry, ...]}` map. An entry is a keyword string (weight 1.0) or
// `{"keyword": ..., "weight": ...}`.
inline Ruleset parse_ruleset(std::string_view text) {
    nlohmann::json j;
    detail::DuplicateKeyGuard guard;
    try {
        j = nlohmann::json::parse(text, std::ref(guard));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("ruleset: ") + e.what(), e.byte);
    }
    if (!j.is_object()) throw ValidationError("ruleset must be a JSON object");

    Ruleset rules;
    const nlohmann::json* cats = &j;
    if (j.contains("categories")) {
        cats = &j["categories"];
        for (const auto& [key, _] : j.items())
            if (key != "categories" && key != "min_score") throw ValidationError("ruleset: unknown key '" + key + "'");
        if (j.contains("min_score")) {
            if (!j["min_score"].is_number()) throw ValidationError("ruleset: min_score must be a number");
            rules.min_score = j["min_score"].get<double>();
        }
    }
    if (!cats->is_object()) throw ValidationError("ruleset: categories must be an object");

    for (const auto& [name, entries] : cats->items()) {
        if (name.empty()) throw ValidationError("ruleset: empty category name");
        if (!entries.is_array()) throw ValidationError("ruleset: category '" + name + "' must list keywords");
        auto& list = rules.categories[name];
        std::set<Term> seen;
        std::size_t row = 0;
        for (const auto& entry : entries) {
            ++row;
            const auto where = "ruleset: category '" + name + "' keyword #" + std::to_string(row);
            std::string raw;
            double weight = 1.0;
            if (entry.is_string()) {
                raw = entry.get<std::string>();
            } else if (entry.is_object() && entry.contains("keyword") && entry["keyword"].is_string()) {
                raw = entry["keyword"].get<std::string>();
                if (entry.contains("weight")) {
                    if (!entry["weight"].is_number()) throw ValidationError(where + ": weight must be a number");
                    weight = entry["weight"].get<double>();
                }
            } else {
                throw ValidationError(where + ": expected a string or {\"keyword\", \"weight\"}");
            }
            const auto term = normalize_token(raw);
            if (!term || *term != normalize_token(*term) || split_whitespace(raw).size() != 1)
                throw ValidationError(where + ": '" + raw + "' is not a valid term");
            if (!(weight > 0)) throw ValidationError(where + ": weight must be > 0");
            if (!seen.insert(*term).second) throw ValidationError(where + ": duplicate keyword '" + *term + "'");
            list.push_back({*term, weight});
        }
    }
    return rules;
}

inline Ruleset load_ruleset(const std::filesystem::path& path) {
    try {
        return parse_ruleset(read_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

inline std::vector<CategoryAssignment> categorize_segment(const ArticleSegment& segment, const Ruleset& rules,
                                                          const Vocabulary& vocab, const Stoplist& stop) {
    const auto filtered = filter_tokens(std::span<const WordToken>(segment.tokens), vocab, stop);
    const std::set<Term> present(filtered.begin(), filtered.end());

    std::vector<CategoryAssignment> out;
    for (const auto& [name, keywords] : rules.categories) {
        CategoryAssignment a{name, 0.0, {}};
        for (const auto& k : keywords) {
            if (!present.count(k.keyword)) continue;
            a.score += k.weight;
            a.matched_keywords.push_back(k.keyword);
        }
        if (a.matched_keywords.empty() || a.score < rules.min_score) continue;
        std::sort(a.matched_keywords.begin(), a.matched_keywords.end());
        out.push_back(std::move(a));
    }
    std::sort(out.begin(), out.end(), [](const CategoryAssignment& x, const CategoryAssignment& y) {
        return x.score != y.score ? x.score > y.score : x.category < y.category;
    });
    return out;
}

}  // namespace chronopress
