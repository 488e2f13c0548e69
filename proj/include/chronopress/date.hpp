#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace chronopress {

// A calendar day. Stored as days since the Unix epoch so that day
// arithmetic and comparisons are plain integer operations.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days d) : days_(d) {}
    constexpr Date(int y, unsigned m, unsigned d)
        : days_(std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                            std::chrono::day{d}}) {}

    // Strict `YYYY-MM-DD`. Returns nothing for any other shape or for
    // dates that do not exist in the proleptic Gregorian calendar.
    static std::optional<Date> parse(std::string_view s) {
        if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
        auto digits = [&](std::size_t from, std::size_t n, int& out) {
            out = 0;
            for (std::size_t i = from; i < from + n; ++i) {
                if (s[i] < '0' || s[i] > '9') return false;
                out = out * 10 + (s[i] - '0');
            }
            return true;
        };
        int y = 0, m = 0, d = 0;
        if (!digits(0, 4, y) || !digits(5, 2, m) || !digits(8, 2, d)) return std::nullopt;
        std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
        if (!ymd.ok()) return std::nullopt;
        return Date{std::chrono::sys_days{ymd}};
    }

    std::string iso() const {
        std::chrono::year_month_day ymd{days_};
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        return buf;
    }

    constexpr std::chrono::sys_days sys_days() const { return days_; }
    constexpr long serial() const { return days_.time_since_epoch().count(); }

    constexpr Date operator+(long n) const { return Date{days_ + std::chrono::days{n}}; }
    constexpr Date operator-(long n) const { return Date{days_ - std::chrono::days{n}}; }
    constexpr Date& operator++() {
        days_ += std::chrono::days{1};
        return *this;
    }
    // Signed whole-day difference.
    constexpr long operator-(Date other) const { return (days_ - other.days_).count(); }

    constexpr auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

// Inclusive calendar range.
struct DateRange {
    Date start;
    Date end;

    constexpr bool valid() const { return start <= end; }
    constexpr long days() const { return valid() ? (end - start) + 1 : 0; }
    constexpr bool contains(Date d) const { return start <= d && d <= end; }

    constexpr bool operator==(const DateRange&) const = default;
};

}  // namespace chronopress

template <>
struct std::hash<chronopress::Date> {
    std::size_t operator()(const chronopress::Date& d) const noexcept {
        return std::hash<long>{}(d.serial());
    }
};
