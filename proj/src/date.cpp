#include "bizmeta/date.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "bizmeta/error.hpp"

namespace bizmeta {

namespace chr = std::chrono;

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
    if (!ymd.ok()) {
        throw BadRequest("invalid calendar date " + std::to_string(year) + "-" + std::to_string(month) + "-" +
                         std::to_string(day));
    }
    return Date(static_cast<std::int32_t>(chr::sys_days{ymd}.time_since_epoch().count()));
}

std::optional<Date> Date::try_parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto digits = [&](std::size_t pos, std::size_t len, int& out) {
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (text[i] < '0' || text[i] > '9') return false;
        }
        auto res = std::from_chars(text.data() + pos, text.data() + pos + len, out);
        return res.ec == std::errc{};
    };
    int y = 0, m = 0, d = 0;
    if (!digits(0, 4, y) || !digits(5, 2, m) || !digits(8, 2, d)) return std::nullopt;
    const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                                  chr::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date(static_cast<std::int32_t>(chr::sys_days{ymd}.time_since_epoch().count()));
}

Date Date::parse(std::string_view text) {
    if (auto d = try_parse(text)) return *d;
    throw BadRequest("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
}

std::string Date::to_string() const {
    const chr::year_month_day ymd{chr::sys_days{chr::days{days_}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

int Date::year() const {
    return static_cast<int>(chr::year_month_day{chr::sys_days{chr::days{days_}}}.year());
}

unsigned Date::month() const {
    return static_cast<unsigned>(chr::year_month_day{chr::sys_days{chr::days{days_}}}.month());
}

std::string ValidInterval::to_string() const {
    return "[" + from.to_string() + ", " + (to ? to->to_string() : std::string("OPEN")) + ")";
}

}  // namespace bizmeta
