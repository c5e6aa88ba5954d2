#include "darts271/evaluation.hpp"

#include "darts271/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace darts271::evaluation {

namespace {

void require_aligned(const PredictionTrace& a, const PredictionTrace& b) {
    const auto misaligned = [&](const std::string& why) {
        throw Error(ErrorCode::MisalignedTraces,
                    "traces '" + a.model_name + "' and '" + b.model_name + "' are misaligned: " + why);
    };
    if (a.entries.size() != b.entries.size()) misaligned("different instance counts");
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        const auto& x = a.entries[i];
        const auto& y = b.entries[i];
        if (x.game_id != y.game_id || x.round_number != y.round_number) {
            misaligned("instance " + std::to_string(i) + " differs");
        }
        if (x.outcome != y.outcome) misaligned("outcomes differ at instance " + std::to_string(i));
    }
}

bool selected(const TraceEntry& e, BetTiming timing) {
    return timing == BetTiming::EveryRound || e.round_number == 1;
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

} // namespace

PredictionTrace build_trace(const models::NamedModel& model, const Dataset& games, const Rules& rules) {
    PredictionTrace trace;
    trace.model_name = model.name;
    for (const auto& game : games.games) {
        const int outcome = p1_won(game, rules) ? 1 : 0;
        const auto path = game.score_path();
        for (std::size_t r = 0; r < game.rounds.size(); ++r) {
            const auto [s1, s2] = path[r];
            trace.entries.push_back({game.game_id, static_cast<int>(r) + 1, game.p1, game.p2, s1, s2,
                                     models::predict(model.model, game.p1, game.p2, s1, s2), outcome});
        }
    }
    return trace;
}

double brier(const PredictionTrace& trace, RoundFilter round) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& e : trace.entries) {
        if (round && e.round_number != *round) continue;
        const double d = e.prediction - e.outcome;
        sum += d * d;
        ++n;
    }
    if (n == 0) throw Error(ErrorCode::EmptyFilter, "no instances match the filter");
    return sum / static_cast<double>(n);
}

BrierTable brier_table(std::span<const PredictionTrace> traces) {
    BrierTable table;
    if (traces.empty()) return table;
    for (const auto& t : traces) {
        require_aligned(traces.front(), t);
        table.models.push_back(t.model_name);
    }
    int max_round = 0;
    for (const auto& e : traces.front().entries) max_round = std::max(max_round, e.round_number);

    const auto make_row = [&](RoundFilter round) {
        BrierRow row;
        row.round = round;
        for (const auto& e : traces.front().entries) {
            if (!round || e.round_number == *round) ++row.n;
        }
        if (row.n == 0) return row;
        for (const auto& t : traces) row.scores.push_back(brier(t, round));
        const double lowest = *std::min_element(row.scores.begin(), row.scores.end());
        for (std::size_t k = 0; k < row.scores.size(); ++k) {
            if (row.scores[k] == lowest) row.best.push_back(k);
        }
        return row;
    };
    for (int r = 1; r <= max_round; ++r) {
        auto row = make_row(r);
        if (row.n > 0) table.rows.push_back(std::move(row));
    }
    if (!traces.front().entries.empty()) table.rows.push_back(make_row(std::nullopt));
    return table;
}

double betting_payout(double alpha, double beta, int outcome) noexcept {
    if (alpha == beta) return 0.0;
    const double stake = std::abs(alpha - beta);
    const bool bets_on_event = beta > alpha;
    const bool event = outcome == 1;
    const double magnitude = event ? stake * (1.0 - alpha) : stake * alpha;
    return bets_on_event == event ? magnitude : -magnitude;
}

BettingLedger betting_game(const PredictionTrace& odds, const PredictionTrace& bets, BetTiming timing) {
    require_aligned(odds, bets);
    BettingLedger ledger;
    ledger.odds_model = odds.model_name;
    ledger.bettor_model = bets.model_name;
    for (std::size_t i = 0; i < odds.entries.size(); ++i) {
        const auto& a = odds.entries[i];
        const auto& b = bets.entries[i];
        if (!selected(a, timing) || a.prediction == b.prediction) continue;
        const double payout = betting_payout(a.prediction, b.prediction, a.outcome);
        ledger.entries.push_back({a.game_id, a.round_number, payout});
        ledger.net += payout;
    }
    return ledger;
}

BettingLedger odds_setter_view(const BettingLedger& ledger) {
    BettingLedger view;
    view.odds_model = ledger.odds_model;
    view.bettor_model = ledger.bettor_model;
    for (const auto& e : ledger.entries) {
        view.entries.push_back({e.game_id, e.round_number, -e.payout});
        view.net += -e.payout;
    }
    return view;
}

BettingMatrix betting_matrix(std::span<const PredictionTrace> traces, BetTiming timing) {
    BettingMatrix m;
    for (const auto& t : traces) m.models.push_back(t.model_name);
    m.values.assign(traces.size(), std::vector<double>(traces.size(), 0.0));
    for (std::size_t i = 0; i < traces.size(); ++i) {
        for (std::size_t j = 0; j < traces.size(); ++j) {
            m.values[i][j] = betting_game(traces[i], traces[j], timing).net;
        }
    }
    return m;
}

std::vector<HeadToHeadRow> head_to_head(std::span<const PredictionTrace> traces, BetTiming timing) {
    std::vector<HeadToHeadRow> rows;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        for (std::size_t j = i + 1; j < traces.size(); ++j) {
            HeadToHeadRow row;
            row.model_a = traces[i].model_name;
            row.model_b = traces[j].model_name;
            row.profit_a_as_bettor = betting_game(traces[j], traces[i], timing).net;
            row.profit_b_as_bettor = betting_game(traces[i], traces[j], timing).net;
            row.difference = std::abs(row.profit_a_as_bettor - row.profit_b_as_bettor);
            if (row.profit_a_as_bettor > row.profit_b_as_bettor) {
                row.superior = row.model_a;
                row.inferior = row.model_b;
            } else if (row.profit_b_as_bettor > row.profit_a_as_bettor) {
                row.superior = row.model_b;
                row.inferior = row.model_a;
            }
            rows.push_back(std::move(row));
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const HeadToHeadRow& x, const HeadToHeadRow& y) {
        if (x.difference != y.difference) return x.difference > y.difference;
        return std::tie(x.model_a, x.model_b) < std::tie(y.model_a, y.model_b);
    });
    return rows;
}

Report build_report(std::span<const PredictionTrace> traces) {
    Report report;
    report.brier = brier_table(traces);
    report.all_rounds = betting_matrix(traces, BetTiming::EveryRound);
    report.round1 = betting_matrix(traces, BetTiming::GameStart);
    report.head_to_head = head_to_head(traces, BetTiming::EveryRound);
    return report;
}

nlohmann::json to_json(const BrierTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r;
        r["round"] = row.round ? nlohmann::json(*row.round) : nlohmann::json("all");
        r["n"] = row.n;
        nlohmann::json scores = nlohmann::json::object();
        for (std::size_t k = 0; k < row.scores.size(); ++k) scores[table.models[k]] = row.scores[k];
        r["brier"] = scores;
        nlohmann::json best = nlohmann::json::array();
        for (auto k : row.best) best.push_back(table.models[k]);
        r["best"] = best;
        rows.push_back(r);
    }
    return rows;
}

nlohmann::json to_json(const BettingMatrix& m) {
    return nlohmann::json{{"odds_models", m.models}, {"bettor_models", m.models}, {"values", m.values}};
}

nlohmann::json to_json(const Report& report) {
    nlohmann::json h2h = nlohmann::json::array();
    for (const auto& row : report.head_to_head) {
        h2h.push_back({{"model_a", row.model_a},
                       {"model_b", row.model_b},
                       {"profit_a_as_bettor", row.profit_a_as_bettor},
                       {"profit_b_as_bettor", row.profit_b_as_bettor},
                       {"superior", row.superior ? nlohmann::json(*row.superior) : nlohmann::json(nullptr)},
                       {"inferior", row.inferior ? nlohmann::json(*row.inferior) : nlohmann::json(nullptr)},
                       {"difference", row.difference}});
    }
    return nlohmann::json{{"models", report.brier.models},
                          {"brier_table", to_json(report.brier)},
                          {"betting_matrix_all_rounds", to_json(report.all_rounds)},
                          {"betting_matrix_round1", to_json(report.round1)},
                          {"head_to_head", h2h}};
}

std::string render_text(const Report& report) {
    std::ostringstream out;
    const auto pad = [](std::string s, std::size_t width) {
        if (s.size() < width) s.insert(0, width - s.size(), ' ');
        return s;
    };
    constexpr std::size_t w = 14;
    out << "Brier score by round\n" << pad("round", 10) << pad("n", 8);
    for (const auto& m : report.brier.models) out << pad(m, w);
    out << '\n';
    for (const auto& row : report.brier.rows) {
        out << pad(row.round ? std::to_string(*row.round) : "all", 10) << pad(std::to_string(row.n), 8);
        for (std::size_t k = 0; k < row.scores.size(); ++k) {
            const bool best = std::find(row.best.begin(), row.best.end(), k) != row.best.end();
            out << pad(fixed(row.scores[k], 4) + (best ? "*" : " "), w);
        }
        out << '\n';
    }
    const auto matrix = [&](const char* title, const BettingMatrix& m) {
        out << '\n' << title << " (row: odds, column: bettor)\n" << pad("", w);
        for (const auto& name : m.models) out << pad(name, w);
        out << '\n';
        for (std::size_t i = 0; i < m.models.size(); ++i) {
            out << pad(m.models[i], w);
            for (double v : m.values[i]) out << pad(fixed(v, 6), w);
            out << '\n';
        }
    };
    matrix("Betting game, every round", report.all_rounds);
    matrix("Betting game, game start only", report.round1);
    out << "\nHead to head\n";
    for (const auto& row : report.head_to_head) {
        out << pad(row.superior.value_or("-"), w) << "  over " << pad(row.inferior.value_or("-"), w)
            << "  difference " << fixed(row.difference, 6) << '\n';
    }
    return out.str();
}

} // namespace darts271::evaluation
