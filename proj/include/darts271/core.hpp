#pragma once

#include "darts271/timestamp.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace darts271 {

using PlayerId = std::string;

inline constexpr int kDefaultThreshold = 271;

/// Win condition. A game ends once the leader's score reaches the threshold
/// (or passes it, when `inclusive` is false) and the scores differ.
struct Rules {
    int threshold = kDefaultThreshold;
    bool inclusive = true;

    template <typename Score>
    constexpr bool reached(Score score) const noexcept {
        return inclusive ? score >= static_cast<Score>(threshold) : score > static_cast<Score>(threshold);
    }

    template <typename Score>
    constexpr bool is_terminal(Score s1, Score s2) const noexcept {
        return s1 != s2 && reached(std::max(s1, s2));
    }
};

/// A single-dart score that can appear on a standard dartboard.
class ThrowScore {
public:
    /// Throws InvalidScore when `value` is not a board value.
    explicit ThrowScore(int value);

    static bool is_valid(int value) noexcept;

    constexpr int value() const noexcept { return value_; }
    constexpr operator int() const noexcept { return value_; }

private:
    int value_;
};

ThrowScore validate_score(int value);

/// Every legal score, ascending.
std::span<const int> board_values() noexcept;

enum class DistanceCategory { Distance0 = 0, Distance1 = 1, Distance2 = 2, Miss = 3 };

inline constexpr std::size_t kDistanceCategories = 4;

DistanceCategory classify_distance(ThrowScore score) noexcept;
const char* to_string(DistanceCategory category) noexcept;

struct RoundScores {
    std::array<ThrowScore, 3> p1_throws;
    std::array<ThrowScore, 3> p2_throws;

    static RoundScores from_ints(const std::array<int, 3>& p1, const std::array<int, 3>& p2);

    int p1_total() const noexcept { return p1_throws[0] + p1_throws[1] + p1_throws[2]; }
    int p2_total() const noexcept { return p2_throws[0] + p2_throws[1] + p2_throws[2]; }
};

struct GameState {
    PlayerId p1;
    PlayerId p2;
    int s1 = 0;
    int s2 = 0;
    int rounds_played = 0;
    bool terminal = false;

    static GameState start(PlayerId p1, PlayerId p2);
};

/// Throws GameAlreadyOver when `state` is terminal.
GameState apply_round(const GameState& state, const RoundScores& round, const Rules& rules = {});

struct GameRecord {
    std::string game_id;
    Timestamp start_time;
    PlayerId p1;
    PlayerId p2;
    std::vector<RoundScores> rounds;

    /// Scores at the start of each round followed by the final totals,
    /// so the result has rounds.size() + 1 entries.
    std::vector<std::pair<int, int>> score_path() const;
};

/// Replays every round. Throws GameAlreadyOver if a round follows a terminal state.
GameState replay(const GameRecord& record, const Rules& rules = {});

/// Throws IncompleteGame if the replay never reaches a terminal state.
const PlayerId& winner(const GameRecord& record, const Rules& rules = {});

/// True when p1 of the record won. Same preconditions as `winner`.
bool p1_won(const GameRecord& record, const Rules& rules = {});

} // namespace darts271
