#pragma once

#include "darts271/core.hpp"
#include "darts271/ingest.hpp"
#include "darts271/models.hpp"

#include <json.hpp>

namespace darts271::synthgen {

enum class Target { Sector20, Sector19, Bullseye };

const char* to_string(Target target) noexcept;
Target target_from_string(std::string_view text);

struct SkillProfile {
    PlayerId player;
    Target target = Target::Sector20;
    double accuracy = 0.5;
    /// Additive accuracy change per day since the season start.
    double drift_per_day = 0.0;
    double board_miss_rate = 0.05;
};

struct SeasonPlan {
    std::vector<SkillProfile> players;
    int n_games = 100;
    Timestamp start = Timestamp::from_civil(2025, 1, 20);
    Timestamp end = Timestamp::from_civil(2025, 5, 1);
    std::uint64_t seed = 1;
    Rules rules{};
    /// Replicas per ordered pair for the ground-truth win probabilities; 0 skips them.
    int oracle_replicas = 100000;
    int round_cap = 500;
};

/// Accuracy at `at`, clamped to [0, 1].
double accuracy_at(const SkillProfile& profile, const SeasonPlan& plan, Timestamp at) noexcept;

/// Throw distribution for a player aiming at `target` with accuracy `a`.
///
/// A board miss scores 0 with probability `miss`. Otherwise the dart lands in
/// the aimed sector with probability `a`; the rest spreads over the other
/// sectors with weight exp(-k / 1.5) at k sectors from the target, and a
/// (1 - a) * 0.03 share lands in the bull. Within a sector the ring is
/// triple 0.05 + 0.20a, double 0.04 + 0.06a, single otherwise. Aiming at the
/// bull puts `a` into the bull (outer:inner = 2:1) and spreads the rest
/// uniformly over the sectors.
models::EmpiricalThrowDistribution profile_to_distribution(Target target, double accuracy, double miss_rate);
models::EmpiricalThrowDistribution profile_to_distribution(const SkillProfile& profile, const SeasonPlan& plan,
                                                           Timestamp at);

/// Heterogeneous roster `player01..playerNN` with accuracies spread across the field.
std::vector<SkillProfile> default_profiles(int n_players, std::uint64_t seed);

struct GroundTruth {
    std::vector<SkillProfile> profiles;
    /// Expected points per throw at the season end; the planted skill ranking.
    std::map<PlayerId, double> expected_points;
    /// probability[a][b]: a (as p1) beats b from (0, 0) at the season end.
    std::map<PlayerId, std::map<PlayerId, double>> pairwise_p1_win_probability;
    Timestamp evaluated_at;
    int replicas = 0;
};

struct Season {
    Dataset dataset;
    GroundTruth truth;
};

/// Pairs players with the circle round-robin method, repeating the cycle,
/// spreads start times uniformly over [start, end) and plays each game with
/// the profiles evaluated at its start time.
Season generate_season(const SeasonPlan& plan);

/// Start-of-game win probability of a over b, estimated with `replicas` games.
double oracle_win_probability(const models::EmpiricalThrowDistribution& a,
                              const models::EmpiricalThrowDistribution& b, int replicas, std::uint64_t seed,
                              const Rules& rules, int round_cap);

nlohmann::json to_json(const GroundTruth& truth);

/// Time at the given fraction of the plan's window, rounded down to the minute.
Timestamp season_quantile(const SeasonPlan& plan, double fraction) noexcept;

} // namespace darts271::synthgen
