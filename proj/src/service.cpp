#include "darts271/service.hpp"

#include "darts271/error.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace darts271::service {

using nlohmann::json;

struct LiveService::Slot {
    std::mutex write_mutex;
    std::shared_ptr<const LiveGame> current;

    std::shared_ptr<const LiveGame> load() const { return std::atomic_load(&current); }
    void store(std::shared_ptr<const LiveGame> next) { std::atomic_store(&current, std::move(next)); }
};

namespace {

Timestamp now() {
    using namespace std::chrono;
    return Timestamp{duration_cast<minutes>(system_clock::now().time_since_epoch()).count()};
}

[[noreturn]] void fail(int status, ErrorCode code, std::string message, json detail = json::object()) {
    throw ServiceError{status, code, std::move(message), std::move(detail)};
}

std::string format_id(std::uint64_t n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "live-%06llu", static_cast<unsigned long long>(n));
    return buf;
}

json throws_json(const std::array<ThrowScore, 3>& t) { return json::array({t[0].value(), t[1].value(), t[2].value()}); }

} // namespace

json ServiceError::body() const {
    return json{{"code", std::string(to_string(code))}, {"message", message}, {"detail", detail}};
}

LiveService::LiveService(ModelBundle bundle, ServiceOptions options)
    : bundle_(std::move(bundle)), options_(std::move(options)) {
    for (const auto& name : options_.model_names) bundle_.model(name);
    if (options_.journal && std::filesystem::exists(*options_.journal)) replay_journal();
}

LiveService::~LiveService() = default;

json LiveService::health() const {
    return json{{"status", "ok"},
                {"schema_version", bundle_.schema_version},
                {"cutoff", bundle_.config.cutoff.to_string()},
                {"models", options_.model_names},
                {"players", bundle_.roster.size()},
                {"strict_roster", options_.strict_roster},
                {"threshold", bundle_.config.threshold},
                {"threshold_inclusive", bundle_.config.threshold_inclusive}};
}

json LiveService::players() const {
    json out = json::array();
    for (const auto& e : bundle_.roster) {
        const double win_rate = e.games == 0 ? 0.0 : static_cast<double>(e.wins) / static_cast<double>(e.games);
        out.push_back({{"id", e.id},
                       {"games", e.games},
                       {"wins", e.wins},
                       {"win_rate", win_rate},
                       {"avg_points_per_throw", e.avg_points_per_throw}});
    }
    return out;
}

json LiveService::probabilities(const PlayerId& p1, const PlayerId& p2, int s1, int s2) const {
    return predict_all(bundle_, options_.model_names, p1, p2, s1, s2);
}

std::shared_ptr<LiveGame> LiveService::new_game(std::string game_id, PlayerId p1, PlayerId p2, Timestamp at) const {
    auto game = std::make_shared<LiveGame>();
    game->game_id = std::move(game_id);
    game->p1 = std::move(p1);
    game->p2 = std::move(p2);
    game->state = GameState::start(game->p1, game->p2);
    game->created_at = at;
    game->history.push_back({0, std::nullopt, 0, 0, probabilities(game->p1, game->p2, 0, 0), at});
    return game;
}

void LiveService::apply(LiveGame& game, const RoundScores& round, Timestamp at) const {
    game.state = apply_round(game.state, round, bundle_.config.rules());
    HistoryEntry entry{game.state.rounds_played, round, game.state.s1, game.state.s2, json::object(), at};
    if (!game.state.terminal) entry.probabilities = probabilities(game.p1, game.p2, game.state.s1, game.state.s2);
    game.history.push_back(std::move(entry));
}

json LiveService::create_game(const PlayerId& p1, const PlayerId& p2) {
    if (p1.empty() || p2.empty()) fail(400, ErrorCode::MalformedRow, "both players are required");
    if (p1 == p2) fail(400, ErrorCode::SamePlayer, "a player cannot play themselves", {{"player", p1}});
    if (options_.strict_roster) {
        for (const auto& p : {p1, p2}) {
            if (!bundle_.has_player(p)) fail(404, ErrorCode::UnknownPlayer, "unknown player '" + p + "'", {{"player", p}});
        }
    }
    const Timestamp at = now();
    std::shared_ptr<LiveGame> game;
    {
        std::unique_lock lock(games_mutex_);
        const std::string id = format_id(next_id_++);
        game = new_game(id, p1, p2, at);
        auto slot = std::make_shared<Slot>();
        slot->store(game);
        games_.emplace(id, std::move(slot));
    }
    append_journal({{"event", "create"}, {"game_id", game->game_id}, {"seq", 0}, {"p1", p1}, {"p2", p2},
                    {"timestamp", at.to_string()}});
    return json{{"game_id", game->game_id}, {"p1", p1}, {"p2", p2}, {"probabilities", game->history.front().probabilities}};
}

std::shared_ptr<LiveService::Slot> LiveService::find(const std::string& game_id) const {
    std::shared_lock lock(games_mutex_);
    const auto it = games_.find(game_id);
    if (it == games_.end()) fail(404, ErrorCode::NoSuchGame, "no game '" + game_id + "'", {{"game_id", game_id}});
    return it->second;
}

json LiveService::submit_round(const std::string& game_id, const RoundRequest& request) {
    auto slot = find(game_id);
    std::lock_guard write(slot->write_mutex);
    const auto current = slot->load();
    if (current->state.terminal) {
        fail(409, ErrorCode::GameAlreadyOver, "game is over; no more rounds can be submitted", {{"game_id", game_id}});
    }
    const int expected = current->state.rounds_played + 1;
    if (request.round_index && *request.round_index != expected) {
        fail(409, ErrorCode::DuplicateRound,
             *request.round_index < expected ? "round already submitted" : "round submitted out of order",
             {{"round_index", *request.round_index}, {"expected", expected}});
    }
    for (int k = 0; k < 3; ++k) {
        for (const auto& [field, values] : {std::pair{"p1_throws", &request.p1_throws}, std::pair{"p2_throws", &request.p2_throws}}) {
            const int v = (*values)[static_cast<std::size_t>(k)];
            if (!ThrowScore::is_valid(v)) {
                fail(422, ErrorCode::InvalidScore, "invalid score " + std::to_string(v),
                     {{"field", field}, {"position", k}, {"value", v}});
            }
        }
    }
    const auto round = RoundScores::from_ints(request.p1_throws, request.p2_throws);
    const Timestamp at = now();
    auto next = std::make_shared<LiveGame>(*current);
    apply(*next, round, at);
    append_journal({{"event", "round"},
                    {"game_id", game_id},
                    {"seq", next->state.rounds_played},
                    {"round", {{"p1_throws", throws_json(round.p1_throws)}, {"p2_throws", throws_json(round.p2_throws)}}},
                    {"totals", json::array({next->state.s1, next->state.s2})},
                    {"timestamp", at.to_string()}});
    slot->store(next);

    const auto& last = next->history.back();
    json out{{"game_id", game_id},
             {"round", next->state.rounds_played},
             {"totals", {{"p1", next->state.s1}, {"p2", next->state.s2}}},
             {"terminal", next->state.terminal}};
    if (next->state.terminal) {
        out["winner"] = next->state.s1 > next->state.s2 ? next->p1 : next->p2;
    } else {
        out["probabilities"] = last.probabilities;
    }
    return out;
}

std::shared_ptr<const LiveGame> LiveService::snapshot(const std::string& game_id) const { return find(game_id)->load(); }

json LiveService::get_game(const std::string& game_id) const { return to_json(*snapshot(game_id)); }

std::string LiveService::export_csv() const {
    std::vector<GameRecord> finished;
    {
        std::shared_lock lock(games_mutex_);
        for (const auto& [id, slot] : games_) {
            const auto game = slot->load();
            if (!game->state.terminal) continue;
            GameRecord record;
            record.game_id = game->game_id;
            record.start_time = game->created_at;
            const bool swap = game->p2 < game->p1;
            record.p1 = swap ? game->p2 : game->p1;
            record.p2 = swap ? game->p1 : game->p2;
            for (const auto& entry : game->history) {
                if (!entry.scores) continue;
                record.rounds.push_back(swap ? RoundScores{entry.scores->p2_throws, entry.scores->p1_throws} : *entry.scores);
            }
            finished.push_back(std::move(record));
        }
    }
    std::sort(finished.begin(), finished.end(), [](const GameRecord& a, const GameRecord& b) {
        return std::tie(a.start_time, a.game_id) < std::tie(b.start_time, b.game_id);
    });
    std::ostringstream out;
    write_csv(out, std::span<const GameRecord>(finished));
    return out.str();
}

void LiveService::append_journal(const json& event) {
    if (!options_.journal) return;
    std::lock_guard lock(journal_mutex_);
    std::ofstream out(*options_.journal, std::ios::app);
    if (!out) throw Error(ErrorCode::Io, "cannot append to journal " + options_.journal->string());
    out << event.dump() << '\n';
}

void LiveService::replay_journal() {
    std::ifstream in(*options_.journal);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const json event = json::parse(line);
            const std::string id = event.at("game_id").get<std::string>();
            const Timestamp at = Timestamp::parse(event.at("timestamp").get<std::string>());
            if (event.at("event") == "create") {
                auto slot = std::make_shared<Slot>();
                slot->store(new_game(id, event.at("p1").get<std::string>(), event.at("p2").get<std::string>(), at));
                games_[id] = std::move(slot);
                unsigned long long n = 0;
                if (std::sscanf(id.c_str(), "live-%llu", &n) == 1) next_id_ = std::max<std::uint64_t>(next_id_, n + 1);
            } else {
                const auto& slot = games_.at(id);
                auto next = std::make_shared<LiveGame>(*slot->load());
                const auto& r = event.at("round");
                apply(*next, RoundScores::from_ints(r.at("p1_throws").get<std::array<int, 3>>(),
                                                    r.at("p2_throws").get<std::array<int, 3>>()),
                      at);
                slot->store(std::move(next));
            }
        } catch (const std::exception& e) {
            throw Error(ErrorCode::Io, "journal line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

json to_json(const LiveGame& game) {
    json history = json::array();
    for (const auto& h : game.history) {
        json entry{{"round", h.round}, {"totals", {{"p1", h.s1}, {"p2", h.s2}}}, {"at", h.at.to_string()}};
        if (h.scores) {
            entry["p1_throws"] = throws_json(h.scores->p1_throws);
            entry["p2_throws"] = throws_json(h.scores->p2_throws);
        }
        if (!h.probabilities.empty()) entry["probabilities"] = h.probabilities;
        history.push_back(std::move(entry));
    }
    json out{{"game_id", game.game_id},
             {"p1", game.p1},
             {"p2", game.p2},
             {"created_at", game.created_at.to_string()},
             {"rounds_played", game.state.rounds_played},
             {"totals", {{"p1", game.state.s1}, {"p2", game.state.s2}}},
             {"terminal", game.state.terminal},
             {"history", history}};
    if (game.state.terminal) out["winner"] = game.state.s1 > game.state.s2 ? game.p1 : game.p2;
    return out;
}

RoundRequest parse_round_request(const json& body) {
    RoundRequest request;
    const auto read = [&](const char* field, std::array<int, 3>& out) {
        if (!body.contains(field) || !body[field].is_array() || body[field].size() != 3) {
            fail(400, ErrorCode::MalformedRow, std::string(field) + " must be an array of three integers", {{"field", field}});
        }
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& v = body[field][k];
            if (!v.is_number_integer()) {
                fail(422, ErrorCode::InvalidScore, "scores must be integers",
                     {{"field", field}, {"position", k}, {"value", v}});
            }
            out[k] = v.get<int>();
        }
    };
    if (!body.is_object()) fail(400, ErrorCode::MalformedRow, "body must be a JSON object");
    read("p1_throws", request.p1_throws);
    read("p2_throws", request.p2_throws);
    if (body.contains("round_index")) {
        if (!body["round_index"].is_number_integer()) fail(400, ErrorCode::MalformedRow, "round_index must be an integer");
        request.round_index = body["round_index"].get<int>();
    }
    return request;
}

} // namespace darts271::service
