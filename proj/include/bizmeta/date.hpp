#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bizmeta {

// Calendar date at day granularity, stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

    static Date from_ymd(int year, unsigned month, unsigned day);

    // Strict "YYYY-MM-DD". Throws BadRequest on malformed or impossible dates.
    static Date parse(std::string_view text);
    static std::optional<Date> try_parse(std::string_view text);

    std::string to_string() const;

    constexpr std::int32_t days() const { return days_; }
    int year() const;
    unsigned month() const;

    constexpr Date operator+(std::int32_t n) const { return Date(days_ + n); }
    constexpr Date operator-(std::int32_t n) const { return Date(days_ - n); }
    constexpr std::int32_t operator-(Date other) const { return days_ - other.days_; }

    constexpr auto operator<=>(const Date&) const = default;

private:
    std::int32_t days_ = 0;
};

// Half-open valid-time interval [from, to). An empty `to` means open-ended.
struct ValidInterval {
    Date from;
    std::optional<Date> to;

    static ValidInterval open_from(Date from) { return {from, std::nullopt}; }
    static ValidInterval between(Date from, Date to) { return {from, to}; }

    bool is_open() const { return !to.has_value(); }
    bool well_formed() const { return !to || from < *to; }
    bool covers(Date t) const { return from <= t && (!to || t < *to); }
    bool overlaps(const ValidInterval& other) const {
        const bool starts_before_other_ends = !other.to || from < *other.to;
        const bool other_starts_before_end = !to || other.from < *to;
        return starts_before_other_ends && other_starts_before_end;
    }

    std::string to_string() const;

    bool operator==(const ValidInterval&) const = default;
};

}  // namespace bizmeta
