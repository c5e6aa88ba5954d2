#include "darts271/ingest.hpp"

#include "darts271/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

namespace darts271 {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_int(std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

[[noreturn]] void malformed(std::size_t line, const std::string& why) {
    throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line) + ": " + why, std::to_string(line));
}

ThrowRow parse_row(std::string_view line, std::size_t line_no) {
    const auto fields = split_fields(line);
    if (fields.size() != 6) malformed(line_no, "expected 6 fields, got " + std::to_string(fields.size()));
    ThrowRow row;
    row.game_id = std::string(trim(fields[0]));
    if (row.game_id.empty()) malformed(line_no, "empty game_id");
    try {
        row.start_time = Timestamp::parse(trim(fields[1]));
    } catch (const Error& e) {
        malformed(line_no, e.what());
    }
    if (!parse_int(trim(fields[2]), row.round_number) || row.round_number < 1 ||
        row.round_number > kMaxRoundNumber) {
        malformed(line_no, "bad round_number");
    }
    row.thrower_id = std::string(trim(fields[3]));
    row.opponent_id = std::string(trim(fields[4]));
    if (row.thrower_id.empty() || row.opponent_id.empty()) malformed(line_no, "empty player id");
    if (row.thrower_id == row.opponent_id) malformed(line_no, "thrower and opponent are the same player");
    int points = 0;
    if (!parse_int(trim(fields[5]), points)) malformed(line_no, "bad points");
    if (!ThrowScore::is_valid(points)) {
        throw Error(ErrorCode::InvalidScore,
                    "line " + std::to_string(line_no) + ": invalid score " + std::to_string(points),
                    std::to_string(line_no));
    }
    row.points = ThrowScore{points};
    return row;
}

struct PendingGame {
    std::string game_id;
    Timestamp start_time;
    PlayerId a;
    PlayerId b;
    std::size_t first_line = 0;
    // round number → throws for (smaller id, larger id)
    std::map<int, std::pair<std::vector<ThrowScore>, std::vector<ThrowScore>>> rounds;
};

GameRecord assemble(const PendingGame& pending) {
    GameRecord game;
    game.game_id = pending.game_id;
    game.start_time = pending.start_time;
    game.p1 = std::min(pending.a, pending.b);
    game.p2 = std::max(pending.a, pending.b);
    int expected = 1;
    for (const auto& [number, throws] : pending.rounds) {
        const auto incomplete = [&](int round) {
            throw Error(ErrorCode::IncompleteRound,
                        "game '" + game.game_id + "' round " + std::to_string(round) + " is incomplete",
                        game.game_id + ":" + std::to_string(round));
        };
        if (number != expected) incomplete(expected);
        if (throws.first.size() != 3 || throws.second.size() != 3) incomplete(number);
        game.rounds.push_back(RoundScores{{throws.first[0], throws.first[1], throws.first[2]},
                                          {throws.second[0], throws.second[1], throws.second[2]}});
        ++expected;
    }
    return game;
}

} // namespace

Dataset parse_csv(std::istream& in, const ParseOptions& options) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::string_view header = trim(line);
        if (header.size() >= 3 && header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
        if (header != kCsvHeader) malformed(line_no, "unexpected header");
        have_header = true;
        break;
    }
    if (!have_header) malformed(line_no, "missing header");

    std::vector<PendingGame> pending;
    std::unordered_map<std::string, std::size_t> index;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ThrowRow row = parse_row(line, line_no);
        auto [it, inserted] = index.try_emplace(row.game_id, pending.size());
        if (inserted) {
            PendingGame game;
            game.game_id = row.game_id;
            game.start_time = row.start_time;
            game.a = std::min(row.thrower_id, row.opponent_id);
            game.b = std::max(row.thrower_id, row.opponent_id);
            game.first_line = line_no;
            pending.push_back(std::move(game));
        }
        PendingGame& game = pending[it->second];
        if (std::min(row.thrower_id, row.opponent_id) != game.a ||
            std::max(row.thrower_id, row.opponent_id) != game.b) {
            throw Error(ErrorCode::InconsistentOpponents,
                        "line " + std::to_string(line_no) + ": game '" + game.game_id + "' changes players",
                        game.game_id);
        }
        if (row.start_time != game.start_time) {
            malformed(line_no, "start_time differs within game '" + game.game_id + "'");
        }
        auto& slots = game.rounds[row.round_number];
        auto& bucket = row.thrower_id == game.a ? slots.first : slots.second;
        if (bucket.size() == 3) {
            throw Error(ErrorCode::IncompleteRound,
                        "line " + std::to_string(line_no) + ": more than three throws for '" + row.thrower_id +
                            "' in game '" + game.game_id + "' round " + std::to_string(row.round_number),
                        game.game_id + ":" + std::to_string(row.round_number));
        }
        bucket.push_back(row.points);
    }

    Dataset dataset;
    for (const auto& p : pending) {
        GameRecord game = assemble(p);
        GameState state = GameState::start(game.p1, game.p2);
        for (std::size_t r = 0; r < game.rounds.size(); ++r) {
            if (state.terminal) {
                throw Error(ErrorCode::NonTerminalGame,
                            "game '" + game.game_id + "' continues after round " + std::to_string(r) +
                                " ended it",
                            game.game_id);
            }
            state = apply_round(state, game.rounds[r], options.rules);
        }
        dataset.roster.insert(game.p1);
        dataset.roster.insert(game.p2);
        if (!state.terminal) {
            if (!options.allow_incomplete) {
                throw Error(ErrorCode::NonTerminalGame, "game '" + game.game_id + "' has no winner",
                            game.game_id);
            }
            dataset.incomplete_games.push_back(std::move(game));
        } else {
            dataset.games.push_back(std::move(game));
        }
    }
    const auto by_time = [](const GameRecord& x, const GameRecord& y) {
        return std::tie(x.start_time, x.game_id) < std::tie(y.start_time, y.game_id);
    };
    std::sort(dataset.games.begin(), dataset.games.end(), by_time);
    std::sort(dataset.incomplete_games.begin(), dataset.incomplete_games.end(), by_time);
    return dataset;
}

Dataset parse_csv_file(const std::filesystem::path& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string(), path.string());
    return parse_csv(in, options);
}

std::vector<ThrowRow> to_rows(const GameRecord& game) {
    std::vector<ThrowRow> rows;
    rows.reserve(game.rounds.size() * 6);
    for (std::size_t r = 0; r < game.rounds.size(); ++r) {
        const int round_number = static_cast<int>(r) + 1;
        for (const auto& t : game.rounds[r].p1_throws) {
            rows.push_back({game.game_id, game.start_time, round_number, game.p1, game.p2, t});
        }
        for (const auto& t : game.rounds[r].p2_throws) {
            rows.push_back({game.game_id, game.start_time, round_number, game.p2, game.p1, t});
        }
    }
    return rows;
}

void write_csv(std::ostream& out, std::span<const GameRecord> games) {
    out << kCsvHeader << '\n';
    for (const auto& game : games) {
        const std::string when = game.start_time.to_string();
        for (const auto& row : to_rows(game)) {
            out << row.game_id << ',' << when << ',' << row.round_number << ',' << row.thrower_id << ','
                << row.opponent_id << ',' << row.points.value() << '\n';
        }
    }
}

void write_csv(std::ostream& out, const Dataset& dataset) { write_csv(out, std::span<const GameRecord>(dataset.games)); }

std::pair<Dataset, Dataset> split(const Dataset& dataset, Timestamp cutoff) {
    Dataset train, test;
    train.roster = test.roster = dataset.roster;
    train.cutoff = test.cutoff = cutoff;
    for (const auto& game : dataset.games) {
        (game.start_time < cutoff ? train : test).games.push_back(game);
    }
    for (const auto& game : dataset.incomplete_games) {
        (game.start_time < cutoff ? train : test).incomplete_games.push_back(game);
    }
    return {std::move(train), std::move(test)};
}

DatasetStats summarize(const Dataset& dataset) {
    DatasetStats stats;
    std::vector<const GameRecord*> all;
    for (const auto& g : dataset.games) all.push_back(&g);
    for (const auto& g : dataset.incomplete_games) all.push_back(&g);

    std::map<PlayerId, std::pair<long long, long long>> points;  // (sum, count)
    std::map<std::int64_t, std::size_t> weeks;
    // 1970-01-01 was a Thursday; shift by three days to land weeks on Mondays.
    constexpr std::int64_t kMondayOffsetMinutes = 3 * 1440;
    constexpr std::int64_t kWeekMinutes = 7 * 1440;
    for (const GameRecord* game : all) {
        stats.n_games += 1;
        stats.n_rounds += game->rounds.size();
        stats.n_throws += game->rounds.size() * 6;
        stats.games_per_player[game->p1] += 1;
        stats.games_per_player[game->p2] += 1;
        stats.rounds_per_game[static_cast<int>(game->rounds.size())] += 1;
        const std::int64_t shifted = game->start_time.minutes() + kMondayOffsetMinutes;
        const std::int64_t week = shifted >= 0 ? shifted / kWeekMinutes : (shifted - kWeekMinutes + 1) / kWeekMinutes;
        weeks[week] += 1;
        for (const auto& round : game->rounds) {
            auto& a = points[game->p1];
            auto& b = points[game->p2];
            a.first += round.p1_total();
            a.second += 3;
            b.first += round.p2_total();
            b.second += 3;
        }
    }
    if (!weeks.empty()) {
        for (std::int64_t w = weeks.begin()->first; w <= weeks.rbegin()->first; ++w) {
            const auto it = weeks.find(w);
            stats.games_per_week.emplace_back(Timestamp{w * kWeekMinutes - kMondayOffsetMinutes},
                                              it == weeks.end() ? 0 : it->second);
        }
    }
    if (stats.n_games > 0) {
        stats.mean_rounds_per_game = static_cast<double>(stats.n_rounds) / static_cast<double>(stats.n_games);
    }
    for (const auto& [player, sum_count] : points) {
        stats.avg_points_per_throw[player] =
            sum_count.second == 0 ? 0.0 : static_cast<double>(sum_count.first) / static_cast<double>(sum_count.second);
    }
    return stats;
}

nlohmann::json to_json(const DatasetStats& stats) {
    nlohmann::json j;
    j["n_games"] = stats.n_games;
    j["n_rounds"] = stats.n_rounds;
    j["n_throws"] = stats.n_throws;
    j["throws_per_round"] = 6;
    auto& weeks = j["games_per_week"] = nlohmann::json::array();
    for (const auto& [start, count] : stats.games_per_week) {
        weeks.push_back({{"week_start", start.to_string().substr(0, 10)}, {"games", count}});
    }
    j["games_per_player"] = stats.games_per_player;
    auto& rounds = j["rounds_per_game"] = nlohmann::json::object();
    auto& hist = rounds["histogram"] = nlohmann::json::array();
    for (const auto& [n, count] : stats.rounds_per_game) hist.push_back({{"rounds", n}, {"games", count}});
    rounds["mean"] = std::round(stats.mean_rounds_per_game * 100.0) / 100.0;
    j["avg_points_per_throw_per_player"] = stats.avg_points_per_throw;
    return j;
}

void write_stats_csv(const DatasetStats& stats, const std::filesystem::path& directory, std::string_view prefix) {
    const auto open = [&](std::string_view series) {
        const auto path = directory / (std::string(prefix) + "_" + std::string(series) + ".csv");
        std::ofstream out(path);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string(), path.string());
        return out;
    };
    {
        auto out = open("games_per_week");
        out << "week_start,games\n";
        for (const auto& [start, count] : stats.games_per_week) out << start.to_string().substr(0, 10) << ',' << count << '\n';
    }
    {
        auto out = open("games_per_player");
        out << "player,games\n";
        for (const auto& [player, count] : stats.games_per_player) out << player << ',' << count << '\n';
    }
    {
        auto out = open("rounds_per_game");
        out << "rounds,games\n";
        for (const auto& [n, count] : stats.rounds_per_game) out << n << ',' << count << '\n';
    }
    {
        auto out = open("avg_points_per_throw");
        out << "player,avg_points_per_throw\n";
        for (const auto& [player, avg] : stats.avg_points_per_throw) out << player << ',' << avg << '\n';
    }
}

} // namespace darts271
