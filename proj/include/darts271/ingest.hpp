#pragma once

#include "darts271/core.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <json.hpp>
#include <set>
#include <string_view>

namespace darts271 {

inline constexpr std::string_view kCsvHeader = "game_id,start_time,round_number,thrower_id,opponent_id,points";
inline constexpr int kMaxRoundNumber = 200;

struct ThrowRow {
    std::string game_id;
    Timestamp start_time;
    int round_number = 1;
    PlayerId thrower_id;
    PlayerId opponent_id;
    ThrowScore points{0};
};

struct Dataset {
    /// Complete games ordered by (start_time, game_id).
    std::vector<GameRecord> games;
    /// Games still in progress at export time; only kept with `allow_incomplete`.
    std::vector<GameRecord> incomplete_games;
    std::set<PlayerId> roster;
    std::optional<Timestamp> cutoff;

    bool empty() const noexcept { return games.empty(); }
};

struct ParseOptions {
    Rules rules{};
    bool allow_incomplete = false;
};

/// Assembles and validates games from throw rows. Player 1 of each game is the
/// lexicographically smaller identifier.
Dataset parse_csv(std::istream& in, const ParseOptions& options = {});
Dataset parse_csv_file(const std::filesystem::path& path, const ParseOptions& options = {});

/// Writes complete games in the ingest schema, ordered by game, round, then player 1 before player 2.
void write_csv(std::ostream& out, const Dataset& dataset);
void write_csv(std::ostream& out, std::span<const GameRecord> games);

/// Rows for one game, in the same order as write_csv.
std::vector<ThrowRow> to_rows(const GameRecord& game);

/// Games with start_time < cutoff go to train, the rest to test. Both keep the full roster.
std::pair<Dataset, Dataset> split(const Dataset& dataset, Timestamp cutoff);

struct DatasetStats {
    std::size_t n_games = 0;
    std::size_t n_rounds = 0;
    /// Six per round: three from each player.
    std::size_t n_throws = 0;
    /// Monday-aligned week start → games started that week; empty weeks included.
    std::vector<std::pair<Timestamp, std::size_t>> games_per_week;
    std::map<PlayerId, std::size_t> games_per_player;
    std::map<int, std::size_t> rounds_per_game;
    double mean_rounds_per_game = 0.0;
    std::map<PlayerId, double> avg_points_per_throw;
};

/// Covers complete and incomplete games.
DatasetStats summarize(const Dataset& dataset);

nlohmann::json to_json(const DatasetStats& stats);

/// One CSV per series, named `<prefix>_<series>.csv`.
void write_stats_csv(const DatasetStats& stats, const std::filesystem::path& directory, std::string_view prefix);

} // namespace darts271
