#pragma once

#include "darts271/bundle.hpp"

#include <filesystem>
#include <json.hpp>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>

namespace darts271::service {

struct ServiceOptions {
    bool strict_roster = true;
    /// Append-only event log; replayed on construction when it exists.
    std::optional<std::filesystem::path> journal;
    std::vector<std::string> model_names = ModelBundle::default_model_names();
};

struct RoundRequest {
    std::array<int, 3> p1_throws{};
    std::array<int, 3> p2_throws{};
    /// 1-based index chosen by the client; a repeated index is rejected.
    std::optional<int> round_index;
};

struct HistoryEntry {
    int round = 0;
    std::optional<RoundScores> scores;
    int s1 = 0;
    int s2 = 0;
    /// Probabilities for the state after this round; empty once terminal.
    nlohmann::json probabilities;
    Timestamp at;
};

struct LiveGame {
    std::string game_id;
    PlayerId p1;
    PlayerId p2;
    GameState state;
    std::vector<HistoryEntry> history;
    Timestamp created_at;
};

/// Error with the HTTP status it maps to.
struct ServiceError {
    int status = 500;
    ErrorCode code = ErrorCode::Io;
    std::string message;
    nlohmann::json detail;

    nlohmann::json body() const;
};

/// Game bookkeeping behind the HTTP API. Updates to one game are serialized;
/// readers get immutable snapshots.
class LiveService {
public:
    LiveService(ModelBundle bundle, ServiceOptions options = {});
    ~LiveService();

    LiveService(const LiveService&) = delete;
    LiveService& operator=(const LiveService&) = delete;

    nlohmann::json health() const;
    nlohmann::json players() const;

    /// Each method throws ServiceError on bad requests.
    nlohmann::json create_game(const PlayerId& p1, const PlayerId& p2);
    nlohmann::json submit_round(const std::string& game_id, const RoundRequest& request);
    nlohmann::json get_game(const std::string& game_id) const;

    std::shared_ptr<const LiveGame> snapshot(const std::string& game_id) const;

    /// Finished games in the ingest CSV schema.
    std::string export_csv() const;

    const ModelBundle& bundle() const noexcept { return bundle_; }

private:
    struct Slot;

    nlohmann::json probabilities(const PlayerId& p1, const PlayerId& p2, int s1, int s2) const;
    std::shared_ptr<Slot> find(const std::string& game_id) const;
    std::shared_ptr<LiveGame> new_game(std::string game_id, PlayerId p1, PlayerId p2, Timestamp at) const;
    void apply(LiveGame& game, const RoundScores& round, Timestamp at) const;
    void append_journal(const nlohmann::json& event);
    void replay_journal();

    ModelBundle bundle_;
    ServiceOptions options_;
    mutable std::shared_mutex games_mutex_;
    std::unordered_map<std::string, std::shared_ptr<Slot>> games_;
    std::uint64_t next_id_ = 1;
    std::mutex journal_mutex_;
};

nlohmann::json to_json(const LiveGame& game);

/// Parses a round body: {p1_throws: [3 ints], p2_throws: [3 ints], round_index?}.
RoundRequest parse_round_request(const nlohmann::json& body);

/// HTTP front end for a LiveService. Routes:
///   GET  /api/health              bundle metadata
///   GET  /api/players             roster with headline stats
///   POST /api/games               {p1, p2}
///   GET  /api/games/{id}          game with probability history
///   POST /api/games/{id}/rounds   {p1_throws, p2_throws, round_index?}
///   GET  /api/export.csv          finished games in the ingest schema
/// Errors are {code, message, detail} with a matching status.
class ApiServer {
public:
    explicit ApiServer(LiveService& service, std::optional<std::filesystem::path> static_dir = std::nullopt);
    ~ApiServer();

    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    /// Throws Error(Io) when the port cannot be bound. Port 0 picks a free port.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace darts271::service
