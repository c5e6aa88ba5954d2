#pragma once

#include "darts271/core.hpp"
#include "darts271/ingest.hpp"
#include "darts271/models.hpp"

#include <json.hpp>
#include <optional>

namespace darts271::evaluation {

struct TraceEntry {
    std::string game_id;
    int round_number = 1;
    PlayerId p1;
    PlayerId p2;
    int s1 = 0;
    int s2 = 0;
    double prediction = 0.5;
    int outcome = 0;
};

/// One model's predictions at the start of every round of a set of games.
struct PredictionTrace {
    std::string model_name;
    std::vector<TraceEntry> entries;
};

/// Instances are round starts; the outcome is whether p1 went on to win.
PredictionTrace build_trace(const models::NamedModel& model, const Dataset& games, const Rules& rules = {});

/// Empty filter: every round; otherwise a single round number.
using RoundFilter = std::optional<int>;

/// Mean squared error of predictions against outcomes. Throws EmptyFilter.
double brier(const PredictionTrace& trace, RoundFilter round = std::nullopt);

struct BrierRow {
    RoundFilter round;
    std::size_t n = 0;
    std::vector<double> scores;
    /// Indices of the lowest score in the row (ties keep every minimum).
    std::vector<std::size_t> best;
};

struct BrierTable {
    std::vector<std::string> models;
    /// Rounds 1..max followed by the all-rounds row.
    std::vector<BrierRow> rows;
};

/// Throws MisalignedTraces when traces disagree on instances.
BrierTable brier_table(std::span<const PredictionTrace> traces);

/// Payout to the bettor when `alpha` sets the odds and `beta` picks the side.
double betting_payout(double alpha, double beta, int outcome) noexcept;

enum class BetTiming { EveryRound, GameStart };

struct LedgerEntry {
    std::string game_id;
    int round_number = 1;
    double payout = 0.0;
};

struct BettingLedger {
    std::string odds_model;
    std::string bettor_model;
    std::vector<LedgerEntry> entries;
    double net = 0.0;
};

/// Instances where both models agree place no bet and leave no entry.
BettingLedger betting_game(const PredictionTrace& odds, const PredictionTrace& bets,
                           BetTiming timing = BetTiming::EveryRound);

/// The same games seen from the odds-setter's side: every payout negated.
BettingLedger odds_setter_view(const BettingLedger& ledger);

/// values[i][j]: net profit of model j betting against model i's odds.
struct BettingMatrix {
    std::vector<std::string> models;
    std::vector<std::vector<double>> values;
};

BettingMatrix betting_matrix(std::span<const PredictionTrace> traces, BetTiming timing);

struct HeadToHeadRow {
    std::string model_a;
    std::string model_b;
    double profit_a_as_bettor = 0.0;
    double profit_b_as_bettor = 0.0;
    /// Empty when both profits are equal.
    std::optional<std::string> superior;
    std::optional<std::string> inferior;
    double difference = 0.0;
};

/// Every unordered pair, sorted by descending difference, ties by model names.
std::vector<HeadToHeadRow> head_to_head(std::span<const PredictionTrace> traces,
                                        BetTiming timing = BetTiming::EveryRound);

struct Report {
    BrierTable brier;
    BettingMatrix all_rounds;
    BettingMatrix round1;
    std::vector<HeadToHeadRow> head_to_head;
};

Report build_report(std::span<const PredictionTrace> traces);

nlohmann::json to_json(const BrierTable& table);
nlohmann::json to_json(const BettingMatrix& matrix);
nlohmann::json to_json(const Report& report);

/// Aligned text tables: Brier to 4 decimals, betting profits to 6.
std::string render_text(const Report& report);

} // namespace darts271::evaluation
