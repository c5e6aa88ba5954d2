#include "darts271/core.hpp"

#include "darts271/error.hpp"

namespace darts271 {

namespace {

constexpr std::array<bool, 61> make_board_mask() {
    std::array<bool, 61> mask{};
    mask[0] = true;
    for (int k = 1; k <= 20; ++k) {
        mask[k] = true;
        mask[2 * k] = true;
        mask[3 * k] = true;
    }
    mask[25] = true;
    mask[50] = true;
    return mask;
}

constexpr auto kBoardMask = make_board_mask();

constexpr auto kBoardValues = [] {
    std::array<int, 44> values{};
    std::size_t n = 0;
    for (int v = 0; v <= 60; ++v) {
        if (kBoardMask[v]) values[n++] = v;
    }
    return values;
}();

static_assert(kBoardValues.back() == 60);

} // namespace

bool ThrowScore::is_valid(int value) noexcept {
    return value >= 0 && value <= 60 && kBoardMask[value];
}

ThrowScore::ThrowScore(int value) : value_(value) {
    if (!is_valid(value)) {
        throw Error(ErrorCode::InvalidScore, "invalid score " + std::to_string(value), std::to_string(value));
    }
}

ThrowScore validate_score(int value) { return ThrowScore{value}; }

std::span<const int> board_values() noexcept { return kBoardValues; }

DistanceCategory classify_distance(ThrowScore score) noexcept {
    switch (score.value()) {
    case 19: case 20: case 38: case 40: case 57: case 60:
        return DistanceCategory::Distance0;
    case 1: case 3: case 5: case 7: case 21:
        return DistanceCategory::Distance1;
    // 51 is triple 17, a sector two away from 19.
    case 12: case 16: case 17: case 18: case 24: case 32:
    case 34: case 36: case 48: case 51: case 54:
        return DistanceCategory::Distance2;
    default:
        return DistanceCategory::Miss;
    }
}

const char* to_string(DistanceCategory category) noexcept {
    switch (category) {
    case DistanceCategory::Distance0: return "distance0";
    case DistanceCategory::Distance1: return "distance1";
    case DistanceCategory::Distance2: return "distance2";
    case DistanceCategory::Miss: return "miss";
    }
    return "?";
}

RoundScores RoundScores::from_ints(const std::array<int, 3>& p1, const std::array<int, 3>& p2) {
    return RoundScores{{ThrowScore{p1[0]}, ThrowScore{p1[1]}, ThrowScore{p1[2]}},
                       {ThrowScore{p2[0]}, ThrowScore{p2[1]}, ThrowScore{p2[2]}}};
}

GameState GameState::start(PlayerId p1, PlayerId p2) {
    GameState state;
    state.p1 = std::move(p1);
    state.p2 = std::move(p2);
    return state;
}

GameState apply_round(const GameState& state, const RoundScores& round, const Rules& rules) {
    if (state.terminal) {
        throw Error(ErrorCode::GameAlreadyOver, "game is already over");
    }
    GameState next = state;
    next.s1 += round.p1_total();
    next.s2 += round.p2_total();
    next.rounds_played += 1;
    next.terminal = rules.is_terminal(next.s1, next.s2);
    return next;
}

std::vector<std::pair<int, int>> GameRecord::score_path() const {
    std::vector<std::pair<int, int>> path;
    path.reserve(rounds.size() + 1);
    int s1 = 0, s2 = 0;
    path.emplace_back(s1, s2);
    for (const auto& round : rounds) {
        s1 += round.p1_total();
        s2 += round.p2_total();
        path.emplace_back(s1, s2);
    }
    return path;
}

GameState replay(const GameRecord& record, const Rules& rules) {
    GameState state = GameState::start(record.p1, record.p2);
    for (const auto& round : record.rounds) {
        state = apply_round(state, round, rules);
    }
    return state;
}

const PlayerId& winner(const GameRecord& record, const Rules& rules) {
    return p1_won(record, rules) ? record.p1 : record.p2;
}

bool p1_won(const GameRecord& record, const Rules& rules) {
    const GameState final_state = replay(record, rules);
    if (!final_state.terminal) {
        throw Error(ErrorCode::IncompleteGame, "game '" + record.game_id + "' never finished", record.game_id);
    }
    return final_state.s1 > final_state.s2;
}

} // namespace darts271
