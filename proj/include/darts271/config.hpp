#pragma once

#include "darts271/core.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string_view>

namespace darts271 {

/// Pipeline settings. Files hold one `key = value` per line; `#` starts a comment.
struct Config {
    Timestamp cutoff = Timestamp::from_civil(2025, 4, 1);
    /// Date the adjusted simulation extrapolates skills to; defaults to the cutoff.
    std::optional<Timestamp> reference_time;
    int n_sims = 1000;
    std::uint64_t seed = 271;
    double null_divisor = 100.0;
    double modified_null_divisor = 85.0;
    double logistic_l2 = 1e-3;
    double augmentation_weight = 1.0;
    int threshold = kDefaultThreshold;
    bool threshold_inclusive = true;
    int round_cap = 500;
    bool strict_roster = true;
    bool allow_incomplete = false;

    Rules rules() const noexcept { return Rules{threshold, threshold_inclusive}; }
    Timestamp effective_reference_time() const noexcept { return reference_time.value_or(cutoff); }

    /// Throws InvalidConfig for unknown keys or unparsable values.
    void set(std::string_view key, std::string_view value);
    /// Throws InvalidConfig when a numeric field is out of range.
    void validate() const;

    static Config parse(std::istream& in);
    static Config load(const std::filesystem::path& path);
    void write(std::ostream& out) const;
};

void to_json(nlohmann::json& j, const Config& config);
void from_json(const nlohmann::json& j, Config& config);

} // namespace darts271
