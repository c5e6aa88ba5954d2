#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace darts271 {

/// Calendar instant at minute resolution, UTC.
class Timestamp {
public:
    constexpr Timestamp() = default;
    constexpr explicit Timestamp(std::int64_t minutes_since_epoch) : minutes_(minutes_since_epoch) {}

    static Timestamp from_civil(int year, unsigned month, unsigned day, int hour = 0, int minute = 0);

    /// Accepts `YYYY-MM-DD`, `YYYY-MM-DDTHH:MM`, `YYYY-MM-DDTHH:MM:SS` with an
    /// optional trailing `Z`; a space may replace the `T`. Seconds are truncated.
    static Timestamp parse(std::string_view text);

    constexpr std::int64_t minutes() const noexcept { return minutes_; }
    constexpr double days() const noexcept { return static_cast<double>(minutes_) / 1440.0; }

    /// `YYYY-MM-DDTHH:MM`
    std::string to_string() const;

    constexpr auto operator<=>(const Timestamp&) const = default;

private:
    std::int64_t minutes_ = 0;
};

} // namespace darts271
