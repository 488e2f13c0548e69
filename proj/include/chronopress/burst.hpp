#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "chronopress/date.hpp"
#include "chronopress/error.hpp"
#include "chronopress/index.hpp"

namespace chronopress {

struct BurstParams {
    double threshold = 3.0;   // z-score cutoff, inclusive
    double sigma_floor = 0.5;
    long long min_docs = 2;
    DateRange range;
    bool exclude_self = false;  // leave the scored day out of its own baseline

    void validate() const {
        if (!(sigma_floor > 0)) throw ValidationError("sigma_floor must be > 0");
        if (min_docs < 1) throw ValidationError("min_docs must be >= 1");
        if (!range.valid()) throw RangeError("burst range start is after end");
        if (!std::isfinite(threshold)) throw ValidationError("threshold must be finite");
    }
};

// Mean and population standard deviation of a zero-filled daily df series.
// Kept as exact integer moments so that scores on integer data do not pick
// up rounding noise before the final division.
class BaselineStats {
public:
    BaselineStats() = default;

    static BaselineStats from_series(std::span<const long long> df) {
        BaselineStats b;
        for (long long v : df) b.add(v);
        return b;
    }

    void add(long long df) {
        ++n_;
        sum_ += df;
        sum_sq_ += df * df;
    }

    // The same baseline with one observation removed.
    BaselineStats without(long long df) const {
        BaselineStats b = *this;
        --b.n_;
        b.sum_ -= df;
        b.sum_sq_ -= df * df;
        return b;
    }

    long long n_days() const { return n_; }
    long long sum() const { return sum_; }
    long long sum_squares() const { return sum_sq_; }

    double mean() const { return n_ ? static_cast<double>(sum_) / static_cast<double>(n_) : 0.0; }

    // n^2 * variance, exact.
    long long scaled_variance() const { return n_ * sum_sq_ - sum_ * sum_; }

    double std_dev() const {
        return n_ ? std::sqrt(static_cast<double>(scaled_variance())) / static_cast<double>(n_) : 0.0;
    }

private:
    long long n_ = 0;
    long long sum_ = 0;
    long long sum_sq_ = 0;
};

// z = (df - mean) / max(std, sigma_floor), evaluated as
// (n*df - sum) / max(sqrt(n^2 var), n*sigma_floor).
inline double burst_score(long long df, const BaselineStats& base, double sigma_floor) {
    if (!(sigma_floor > 0)) throw ValidationError("sigma_floor must be > 0");
    const long long n = base.n_days();
    if (n == 0) return static_cast<double>(df) / sigma_floor;
    const double numerator = static_cast<double>(n * df - base.sum());
    const double spread = std::sqrt(static_cast<double>(base.scaled_variance()));
    return numerator / std::max(spread, static_cast<double>(n) * sigma_floor);
}

// Daily df for one term over every day of the range, zero-filled.
inline std::vector<long long> df_series(const TermDateIndex& index, std::string_view title, std::string_view term,
                                        DateRange range) {
    if (!range.valid()) throw RangeError("range start is after end");
    std::vector<long long> out;
    out.reserve(static_cast<std::size_t>(range.days()));
    for (Date d = range.start; d <= range.end; ++d) out.push_back(document_frequency(index, title, term, d));
    return out;
}

inline BaselineStats baseline_stats(const TermDateIndex& index, std::string_view title, std::string_view term,
                                    DateRange range) {
    return BaselineStats::from_series(df_series(index, title, term, range));
}

struct Burst {
    std::string title;
    Term term;
    Date date;
    long long df = 0;
    double mean = 0;
    double std = 0;
    double z = 0;

    bool operator==(const Burst&) const = default;
};

// Every (term, day) of the range whose df reaches min_docs and whose score
// reaches the threshold. Sorted by (date, term).
inline std::vector<Burst> detect_bursts(const TermDateIndex& index, const std::string& title,
                                        const BurstParams& params) {
    params.validate();
    std::vector<Burst> out;
    const auto* days = index.days(title);
    if (!days) return out;

    const auto n_days = static_cast<std::size_t>(params.range.days());
    std::map<std::string_view, std::vector<long long>> series;
    for (auto it = days->lower_bound(params.range.start); it != days->end() && it->first <= params.range.end; ++it) {
        const auto offset = static_cast<std::size_t>(it->first - params.range.start);
        for (const auto& [term, counts] : it->second.terms) {
            auto& s = series[term];
            if (s.empty()) s.assign(n_days, 0);
            s[offset] = counts.doc_count;
        }
    }

    for (const auto& [term, df] : series) {
        const BaselineStats base = BaselineStats::from_series(df);
        for (std::size_t i = 0; i < df.size(); ++i) {
            if (df[i] < params.min_docs) continue;
            const BaselineStats b = params.exclude_self ? base.without(df[i]) : base;
            const double z = burst_score(df[i], b, params.sigma_floor);
            if (z >= params.threshold)
                out.push_back({title, Term(term), params.range.start + static_cast<long>(i), df[i], b.mean(),
                               b.std_dev(), z});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Burst& a, const Burst& b) { return std::tie(a.date, a.term) < std::tie(b.date, b.term); });
    return out;
}

inline std::string burst_json_line(const Burst& b) {
    return "{\"title\":" + nlohmann::json(b.title).dump() + ",\"term\":" + nlohmann::json(b.term).dump() +
           ",\"date\":\"" + b.date.iso() + "\",\"df\":" + std::to_string(b.df) + ",\"mean\":" + format_fixed6(b.mean) +
           ",\"std\":" + format_fixed6(b.std) + ",\"z\":" + format_fixed6(b.z) + "}";
}

}  // namespace chronopress
