#include "darts271/timestamp.hpp"

#include "darts271/error.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace darts271 {

namespace {

template <typename T>
bool parse_field(std::string_view text, std::size_t pos, std::size_t len, T& out) {
    if (pos + len > text.size()) return false;
    const char* first = text.data() + pos;
    const char* last = first + len;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

[[noreturn]] void bad_timestamp(std::string_view text) {
    throw Error(ErrorCode::MalformedRow, "invalid timestamp '" + std::string(text) + "'");
}

} // namespace

Timestamp Timestamp::from_civil(int year, unsigned month, unsigned day, int hour, int minute) {
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok() || hour < 0 || hour > 23 || minute < 0 || minute > 59) {
        throw Error(ErrorCode::MalformedRow, "invalid calendar date");
    }
    const auto d = sys_days{ymd}.time_since_epoch().count();
    return Timestamp{static_cast<std::int64_t>(d) * 1440 + hour * 60 + minute};
}

Timestamp Timestamp::parse(std::string_view text) {
    if (!text.empty() && text.back() == 'Z') text.remove_suffix(1);
    int year = 0;
    unsigned month = 0, day = 0;
    int hour = 0, minute = 0, second = 0;
    if (text.size() < 10 || text[4] != '-' || text[7] != '-' || !parse_field(text, 0, 4, year) ||
        !parse_field(text, 5, 2, month) || !parse_field(text, 8, 2, day)) {
        bad_timestamp(text);
    }
    if (text.size() > 10) {
        if ((text[10] != 'T' && text[10] != ' ') || text.size() < 16 || text[13] != ':' ||
            !parse_field(text, 11, 2, hour) || !parse_field(text, 14, 2, minute)) {
            bad_timestamp(text);
        }
        if (text.size() > 16) {
            if (text.size() != 19 || text[16] != ':' || !parse_field(text, 17, 2, second) || second > 60) {
                bad_timestamp(text);
            }
        }
    }
    try {
        return from_civil(year, month, day, hour, minute);
    } catch (const Error&) {
        bad_timestamp(text);
    }
}

std::string Timestamp::to_string() const {
    using namespace std::chrono;
    std::int64_t days = minutes_ / 1440;
    std::int64_t rem = minutes_ % 1440;
    if (rem < 0) {
        rem += 1440;
        --days;
    }
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(rem / 60), static_cast<int>(rem % 60));
    return buf;
}

} // namespace darts271
