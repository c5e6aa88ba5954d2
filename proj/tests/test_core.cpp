#include "darts271/core.hpp"
#include "darts271/error.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <set>

using namespace darts271;

namespace {

// Independent enumeration of the board: singles, doubles, triples, bulls and a miss.
std::set<int> enumerate_board() {
    std::set<int> v{0, 25, 50};
    for (int k = 1; k <= 20; ++k) {
        v.insert(k);
        v.insert(2 * k);
        v.insert(3 * k);
    }
    return v;
}

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

} // namespace

TEST_SUITE("core") {

TEST_CASE("validate_score accepts exactly the board values") {
    const auto board = enumerate_board();
    for (int v = -5; v <= 70; ++v) {
        CHECK_MESSAGE(ThrowScore::is_valid(v) == (board.count(v) == 1), "value " << v);
    }
    CHECK(validate_score(57).value() == 57);
    CHECK(validate_score(0).value() == 0);
    CHECK(code_of([] { validate_score(23); }) == ErrorCode::InvalidScore);
    CHECK(code_of([] { validate_score(43); }) == ErrorCode::InvalidScore);
    CHECK(code_of([] { validate_score(59); }) == ErrorCode::InvalidScore);
    CHECK(board_values().size() == board.size());
}

TEST_CASE("classify_distance is total with the listed category sizes") {
    std::array<int, 4> counts{};
    for (int v : board_values()) counts[static_cast<std::size_t>(classify_distance(ThrowScore{v}))] += 1;
    CHECK(counts[0] == 6);
    CHECK(counts[1] == 5);
    CHECK(counts[2] == 11);
    CHECK(counts[0] + counts[1] + counts[2] + counts[3] == static_cast<int>(board_values().size()));

    CHECK(classify_distance(ThrowScore{21}) == DistanceCategory::Distance1);
    CHECK(classify_distance(ThrowScore{24}) == DistanceCategory::Distance2);
    CHECK(classify_distance(ThrowScore{51}) == DistanceCategory::Distance2);
    CHECK(classify_distance(ThrowScore{50}) == DistanceCategory::Miss);
    CHECK(classify_distance(ThrowScore{57}) == DistanceCategory::Distance0);
    CHECK(classify_distance(ThrowScore{2}) == DistanceCategory::Miss);
}

TEST_CASE("apply_round follows the worked game") {
    auto state = GameState::start("Alice", "Bob");
    const auto game = testing::worked_game();
    state = apply_round(state, game.rounds[0]);
    CHECK(state.s1 == 100);
    CHECK(state.s2 == 120);
    CHECK_FALSE(state.terminal);
    state = apply_round(state, game.rounds[1]);
    CHECK(state.s1 == 250);
    CHECK(state.s2 == 275);
    CHECK(state.terminal);
    CHECK(state.rounds_played == 2);
    CHECK(code_of([&] { apply_round(state, game.rounds[0]); }) == ErrorCode::GameAlreadyOver);
}

TEST_CASE("the worked round-2 throws are one of the valid decompositions") {
    // Brute force every ordered triple of board values summing to 150 and 155.
    int ways150 = 0, ways155 = 0;
    for (int a : board_values())
        for (int b : board_values())
            for (int c : board_values()) {
                ways150 += a + b + c == 150;
                ways155 += a + b + c == 155;
            }
    CHECK(ways150 > 0);
    CHECK(ways155 > 0);
    const auto game = testing::worked_game();
    CHECK(game.rounds[1].p1_total() == 150);
    CHECK(game.rounds[1].p2_total() == 155);
}

TEST_CASE("ties above the threshold continue until someone leads") {
    GameState state = GameState::start("a", "b");
    state.s1 = 280;
    state.s2 = 280;
    CHECK_FALSE(Rules{}.is_terminal(state.s1, state.s2));
    state = apply_round(state, RoundScores::from_ints({1, 0, 0}, {0, 0, 0}));
    CHECK(state.s1 == 281);
    CHECK(state.terminal);
}

TEST_CASE("threshold semantics flag") {
    const Rules inclusive{271, true};
    const Rules exclusive{271, false};
    CHECK(inclusive.is_terminal(271, 100));
    CHECK_FALSE(exclusive.is_terminal(271, 100));
    CHECK(exclusive.is_terminal(272, 100));
    CHECK_FALSE(inclusive.is_terminal(270, 100));
}

TEST_CASE("winner") {
    CHECK(winner(testing::worked_game()) == "Bob");

    GameRecord tied;
    tied.game_id = "tied";
    tied.p1 = "a";
    tied.p2 = "b";
    tied.rounds.push_back(RoundScores::from_ints({60, 60, 60}, {60, 60, 60}));
    CHECK(code_of([&] { winner(tied); }) == ErrorCode::IncompleteGame);

    // 180 + 91 = 271 exactly against 100.
    GameRecord exact;
    exact.game_id = "exact";
    exact.p1 = "a";
    exact.p2 = "b";
    exact.rounds.push_back(RoundScores::from_ints({60, 60, 60}, {50, 50, 0}));
    exact.rounds.push_back(RoundScores::from_ints({60, 30, 1}, {0, 0, 0}));
    CHECK(replay(exact).s1 == 271);
    CHECK(winner(exact) == "a");
    CHECK(code_of([&] { winner(exact, Rules{271, false}); }) == ErrorCode::IncompleteGame);
}

TEST_CASE("replay equals a one-at-a-time fold and scores never decrease") {
    for (int seed = 0; seed < 50; ++seed) {
        std::vector<RoundScores> rounds;
        GameState state = GameState::start("x", "y");
        unsigned s = static_cast<unsigned>(seed) * 2654435761u + 1;
        const auto next = [&] {
            s = s * 1664525u + 1013904223u;
            return board_values()[(s >> 8) % board_values().size()];
        };
        while (!state.terminal && rounds.size() < 200) {
            const auto round = RoundScores::from_ints({next(), next(), next()}, {next(), next(), next()});
            const GameState after = apply_round(state, round);
            CHECK(after.s1 >= state.s1);
            CHECK(after.s2 >= state.s2);
            state = after;
            rounds.push_back(round);
        }
        GameRecord record{"r", {}, "x", "y", rounds};
        const GameState bulk = replay(record);
        CHECK(bulk.s1 == state.s1);
        CHECK(bulk.s2 == state.s2);
        CHECK(bulk.terminal == state.terminal);
        const auto path = record.score_path();
        CHECK(path.back() == std::pair{state.s1, state.s2});
    }
}

}
