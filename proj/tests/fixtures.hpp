#pragma once

#include "darts271/core.hpp"
#include "darts271/ingest.hpp"

#include <optional>
#include <sstream>

namespace darts271::testing {

/// Alice vs Bob: (0,0) → (100,120) → (250,275), Bob wins.
inline GameRecord worked_game() {
    GameRecord g;
    g.game_id = "worked";
    g.start_time = Timestamp::from_civil(2025, 3, 1, 12, 0);
    g.p1 = "Alice";
    g.p2 = "Bob";
    g.rounds.push_back(RoundScores::from_ints({60, 20, 20}, {60, 40, 20}));
    g.rounds.push_back(RoundScores::from_ints({60, 60, 30}, {57, 60, 38}));
    return g;
}

inline Dataset dataset_of(std::vector<GameRecord> games) {
    Dataset d;
    for (auto& g : games) {
        d.roster.insert(g.p1);
        d.roster.insert(g.p2);
    }
    d.games = std::move(games);
    return d;
}

/// A game where `winner_first` throws `high` every dart until the game ends and the other throws `low`.
inline GameRecord lopsided_game(std::string id, PlayerId p1, PlayerId p2, bool p1_wins, Timestamp at,
                                int high = 60, int low = 20) {
    GameRecord g;
    g.game_id = std::move(id);
    g.start_time = at;
    g.p1 = std::move(p1);
    g.p2 = std::move(p2);
    const int a = p1_wins ? high : low;
    const int b = p1_wins ? low : high;
    GameState state = GameState::start(g.p1, g.p2);
    while (!state.terminal) {
        const auto round = RoundScores::from_ints({a, a, a}, {b, b, b});
        state = apply_round(state, round);
        g.rounds.push_back(round);
    }
    return g;
}

/// Three board values summing to `total`, or nullopt when no such triple exists.
inline std::optional<std::array<int, 3>> decompose(int total) {
    for (int a : board_values())
        for (int b : board_values()) {
            const int c = total - a - b;
            if (c >= 0 && ThrowScore::is_valid(c)) return std::array<int, 3>{a, b, c};
        }
    return std::nullopt;
}

/// A record holding the given throws for p1, three per round, against an idle p2.
/// Only meant for estimators that count throws; it is not a finished game.
inline GameRecord throws_only(std::string id, PlayerId p1, PlayerId p2, const std::vector<int>& throws,
                              Timestamp at = {}) {
    GameRecord g{std::move(id), at, std::move(p1), std::move(p2), {}};
    for (std::size_t i = 0; i + 2 < throws.size(); i += 3)
        g.rounds.push_back(RoundScores::from_ints({throws[i], throws[i + 1], throws[i + 2]}, {0, 0, 0}));
    return g;
}

inline std::string to_csv(const Dataset& d) {
    std::ostringstream out;
    write_csv(out, d);
    return out.str();
}

} // namespace darts271::testing
