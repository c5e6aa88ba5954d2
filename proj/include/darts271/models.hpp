#pragma once

#include "darts271/core.hpp"
#include "darts271/ingest.hpp"
#include "darts271/numerics.hpp"
#include "darts271/random.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <variant>

namespace darts271::models {

// ---------------------------------------------------------------------------
// Null model

struct NullModel {
    double divisor = 100.0;
};

/// clamp(0.5 * (1 + (s1 - s2) / divisor), 0, 1); ignores the players.
double null_predict(const NullModel& model, double s1, double s2) noexcept;

// ---------------------------------------------------------------------------
// Logistic regression

struct LogisticModel {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    std::map<PlayerId, double> player_coefficients;

    double player_coefficient(const PlayerId& player) const noexcept;
};

double logistic_predict(const LogisticModel& model, const PlayerId& p1, const PlayerId& p2, double s1,
                        double s2) noexcept;

/// One observation per round start, plus its mirror with players, scores and
/// label swapped. Feature layout: [intercept, players..., s1, s2].
std::vector<numerics::LogisticObservation> logistic_observations(const Dataset& train,
                                                                 const std::vector<PlayerId>& players,
                                                                 const Rules& rules = {});

LogisticModel fit_logistic_model(const Dataset& train, double l2 = 1e-3, const Rules& rules = {});

// ---------------------------------------------------------------------------
// Monte Carlo simulation shared settings

struct SimulationSettings {
    int n_sims = 1000;
    std::uint64_t seed = 271;
    int round_cap = 500;
    Rules rules{};
};

enum class SimOutcome { FirstWins, SecondWins, Unresolved };

/// Plays whole rounds from (s1, s2) until the rules declare a winner or
/// `round_cap` extra rounds have been played. Each draw function returns one
/// throw's points given the random source; the first player draws first.
template <typename Score, typename DrawFirst, typename DrawSecond>
SimOutcome simulate_remaining(DrawFirst&& draw_first, DrawSecond&& draw_second, Score s1, Score s2,
                              RandomSource& source, const Rules& rules, int round_cap) {
    for (int round = 0; round < round_cap; ++round) {
        s1 += draw_first(source) + draw_first(source) + draw_first(source);
        s2 += draw_second(source) + draw_second(source) + draw_second(source);
        if (rules.is_terminal(s1, s2)) return s1 > s2 ? SimOutcome::FirstWins : SimOutcome::SecondWins;
    }
    return SimOutcome::Unresolved;
}

// ---------------------------------------------------------------------------
// Basic simulation

struct EmpiricalThrowDistribution {
    std::vector<int> support;
    std::vector<double> probabilities;

    double probability(int score) const noexcept;
    double mean() const noexcept;
};

/// Relative frequency of each score over the player's training throws;
/// falls back to the league-pooled distribution for players without throws.
EmpiricalThrowDistribution empirical_distribution(const Dataset& train, const PlayerId& player);
EmpiricalThrowDistribution pooled_distribution(const Dataset& train);

struct BasicSimModel {
    std::map<PlayerId, EmpiricalThrowDistribution> distributions;
    EmpiricalThrowDistribution pooled;
    SimulationSettings settings;

    const EmpiricalThrowDistribution& distribution_for(const PlayerId& player) const noexcept;
};

BasicSimModel fit_basic_sim(const Dataset& train, const SimulationSettings& settings = {});

double sim_predict(const BasicSimModel& model, const PlayerId& p1, const PlayerId& p2, int s1, int s2);

// ---------------------------------------------------------------------------
// Adjusted simulation

/// Proportions over (Distance0, Distance1, Distance2, Miss).
struct DistanceVector {
    std::array<double, 4> d{0.25, 0.25, 0.25, 0.25};
};

/// Proportions over multipliers 0x, 1x, 2x, 3x.
struct MultiplierVector {
    std::array<double, 4> m{0.0, 1.0, 0.0, 0.0};
};

inline constexpr std::array<double, 4> kDefaultBaselines{19.5, 4.0, 15.75, 9.2};

/// Clamps negative entries to zero and rescales to sum 1.
/// An all-zero input maps to the uniform vector.
DistanceVector normalize_distance(const std::array<double, 4>& raw) noexcept;

/// Per-game category proportions regressed on start time (days) and evaluated
/// at `reference_time`. Fewer than two distinct game times fall back to the
/// player's raw proportions; players with no training games get `league`.
DistanceVector fit_distance_vector(const Dataset& train, const PlayerId& player, Timestamp reference_time,
                                   const DistanceVector& league);

/// Mean of the fitted vectors of every player with training games.
DistanceVector league_distance_vector(const Dataset& train, Timestamp reference_time);

/// Pooled single/double/triple split within the 19 and 20 sectors; (1, 0, 0) when empty.
std::array<double, 3> league_multiplier_split(const Dataset& train);

MultiplierVector fit_multiplier_vector(const Dataset& train, const PlayerId& player,
                                       const std::array<double, 3>& league_split);

/// Draws a distance category and a multiplier and returns baseline * multiplier.
double adjusted_throw(RandomSource& source, const DistanceVector& dv, const MultiplierVector& mv,
                      const std::array<double, 4>& baselines = kDefaultBaselines);

struct AdjustedSimModel {
    std::map<PlayerId, DistanceVector> distance_vectors;
    std::map<PlayerId, MultiplierVector> multiplier_vectors;
    DistanceVector league_distance;
    MultiplierVector league_multiplier;
    std::array<double, 4> baselines = kDefaultBaselines;
    Timestamp reference_time;
    SimulationSettings settings;

    const DistanceVector& distance_for(const PlayerId& player) const noexcept;
    const MultiplierVector& multiplier_for(const PlayerId& player) const noexcept;
};

AdjustedSimModel fit_adjusted_sim(const Dataset& train, Timestamp reference_time,
                                  const SimulationSettings& settings = {});

double sim_predict(const AdjustedSimModel& model, const PlayerId& p1, const PlayerId& p2, int s1, int s2);

// ---------------------------------------------------------------------------
// Score-dependent Massey model

struct SdmmOptions {
    double augmentation_weight = 1.0;
    Rules rules{};
};

struct SdmmSystem {
    numerics::LinearSystem<double> system;
    /// Unknown i is r1 of players[i]; unknown n + i is r2 of players[i].
    std::vector<PlayerId> players;
};

/// One row per round start, one per game result, and six sign-symmetric
/// augmentation rows per unordered player pair.
SdmmSystem build_sdmm_system(const Dataset& train, const SdmmOptions& options = {});

struct SdmmRatings {
    std::map<PlayerId, double> r1;
    std::map<PlayerId, double> r2;
    double delta_r = 0.0;
    int threshold = kDefaultThreshold;

    double mean_r1() const noexcept;
    double mean_r2() const noexcept;
    /// ((T - s) / T) * r1 + (s / T) * r2 with s clamped to T.
    double strength(const PlayerId& player, double score) const noexcept;
};

SdmmRatings fit_sdmm(const Dataset& train, const SdmmOptions& options = {});

/// Rebuilds delta_r from the rating maps.
void refresh_delta(SdmmRatings& ratings) noexcept;

double sdmm_predict(const SdmmRatings& ratings, const PlayerId& p1, const PlayerId& p2, double s1,
                    double s2) noexcept;

// ---------------------------------------------------------------------------
// Common predict contract

using WinModel = std::variant<NullModel, LogisticModel, BasicSimModel, AdjustedSimModel, SdmmRatings>;

struct NamedModel {
    std::string name;
    WinModel model;
};

/// Probability that p1 wins from scores (s1, s2).
double predict(const WinModel& model, const PlayerId& p1, const PlayerId& p2, int s1, int s2);

} // namespace darts271::models
