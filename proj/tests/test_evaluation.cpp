#include "darts271/error.hpp"
#include "darts271/evaluation.hpp"
#include "darts271/synthgen.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace darts271;
using namespace darts271::evaluation;

namespace {

/// Trace over the worked game with the given per-round predictions.
PredictionTrace worked_trace(std::string name, double r1, double r2) {
    PredictionTrace t{std::move(name), {}};
    t.entries.push_back({"worked", 1, "Alice", "Bob", 0, 0, r1, 0});
    t.entries.push_back({"worked", 2, "Alice", "Bob", 100, 120, r2, 0});
    return t;
}

PredictionTrace constant_trace(std::string name, const std::vector<int>& outcomes, double p) {
    PredictionTrace t{std::move(name), {}};
    for (std::size_t i = 0; i < outcomes.size(); ++i)
        t.entries.push_back({"g" + std::to_string(i), 1, "a", "b", 0, 0, p, outcomes[i]});
    return t;
}

} // namespace

TEST_SUITE("evaluation") {

TEST_CASE("brier basics") {
    const std::vector<int> outcomes{1, 0, 0, 1, 1, 0, 1};
    CHECK(brier(constant_trace("half", outcomes, 0.5)) == 0.25);

    PredictionTrace perfect{"perfect", {}};
    for (int o : outcomes) perfect.entries.push_back({"g", 1, "a", "b", 0, 0, static_cast<double>(o), o});
    CHECK(brier(perfect) == 0.0);

    PredictionTrace worst{"worst", {{"g1", 1, "a", "b", 0, 0, 1.0, 0}, {"g2", 1, "a", "b", 0, 0, 0.0, 1}}};
    CHECK(brier(worst) == 1.0);

    CHECK_THROWS_AS(brier(worst, 2), Error);
    CHECK_THROWS_AS(brier(PredictionTrace{}), Error);
}

TEST_CASE("brier of constant p on Bernoulli(p) outcomes") {
    RandomSource rng(11, 0);
    for (double p : {0.2, 0.5, 0.7}) {
        std::vector<int> outcomes;
        for (int i = 0; i < 100000; ++i) outcomes.push_back(rng.uniform() < p ? 1 : 0);
        CHECK(std::abs(brier(constant_trace("c", outcomes, p)) - p * (1 - p)) <= 0.01);
    }
}

TEST_CASE("brier is permutation invariant") {
    RandomSource rng(12, 0);
    PredictionTrace t{"m", {}};
    for (int i = 0; i < 200; ++i)
        t.entries.push_back({"g" + std::to_string(i), 1 + i % 4, "a", "b", 0, 0, rng.uniform(), i % 3 == 0});
    const double before = brier(t);
    std::reverse(t.entries.begin(), t.entries.end());
    std::rotate(t.entries.begin(), t.entries.begin() + 37, t.entries.end());
    CHECK(brier(t) == doctest::Approx(before).epsilon(1e-14));
}

TEST_CASE("brier table") {
    PredictionTrace one{"m", {{"g", 1, "a", "b", 0, 0, 0.6, 1}, {"g", 2, "a", "b", 50, 40, 0.8, 1}}};
    const std::vector<PredictionTrace> traces{one};
    const auto table = brier_table(traces);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0].round == 1);
    CHECK(table.rows[0].scores[0] == doctest::Approx(0.16));
    CHECK(table.rows[1].scores[0] == doctest::Approx(0.04));
    CHECK_FALSE(table.rows[2].round.has_value());
    CHECK(table.rows[2].scores[0] == doctest::Approx(0.10));
    CHECK(table.rows[2].n == 2);

    PredictionTrace copy = one;
    copy.model_name = "copy";
    const std::vector<PredictionTrace> twins{one, copy};
    const auto twin_table = brier_table(twins);
    for (const auto& row : twin_table.rows) {
        CHECK(row.scores[0] == row.scores[1]);
        CHECK(row.best.size() == 2);
    }

    PredictionTrace shifted = one;
    shifted.entries[1].round_number = 3;
    const std::vector<PredictionTrace> misaligned{one, shifted};
    CHECK_THROWS_AS(brier_table(misaligned), Error);
}

TEST_CASE("betting payouts") {
    CHECK(betting_payout(0.55, 0.60, 0) == doctest::Approx(-0.0275).epsilon(1e-12));
    CHECK(betting_payout(0.52, 0.40, 0) == doctest::Approx(0.0624).epsilon(1e-12));
    CHECK(betting_payout(0.7, 0.7, 0) == 0.0);
    CHECK(betting_payout(0.7, 0.7, 1) == 0.0);
    RandomSource rng(5, 0);
    for (int i = 0; i < 500; ++i) {
        const double a = rng.uniform(), b = rng.uniform();
        for (int o : {0, 1}) CHECK(std::abs(betting_payout(a, b, o) - testing::table_payout(a, b, o)) <= 1e-12);
    }
}

TEST_CASE("the worked betting game") {
    const auto alpha = worked_trace("alpha", 0.55, 0.52);
    const auto beta = worked_trace("beta", 0.60, 0.40);
    const auto b_bets = betting_game(alpha, beta);
    CHECK(b_bets.net == doctest::Approx(0.0349).epsilon(1e-9));
    CHECK(b_bets.entries.size() == 2);
    const auto a_bets = betting_game(beta, alpha);
    CHECK(a_bets.net == doctest::Approx(-0.018).epsilon(1e-9));

    const auto start_only = betting_game(alpha, beta, BetTiming::GameStart);
    CHECK(start_only.net == doctest::Approx(-0.0275));

    const std::vector<PredictionTrace> pair{alpha, beta};
    const auto rows = head_to_head(pair);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].superior == std::optional<std::string>("beta"));
    CHECK(rows[0].inferior == std::optional<std::string>("alpha"));
    CHECK(rows[0].difference == doctest::Approx(0.0529));

    const std::vector<PredictionTrace> swapped{beta, alpha};
    const auto again = head_to_head(swapped);
    CHECK(again[0].superior == rows[0].superior);
    CHECK(again[0].difference == doctest::Approx(rows[0].difference));
}

TEST_CASE("self betting and zero sum") {
    const auto alpha = worked_trace("alpha", 0.55, 0.52);
    const auto self = betting_game(alpha, alpha);
    CHECK(self.net == 0.0);
    CHECK(self.entries.empty());

    const auto beta = worked_trace("beta", 0.60, 0.40);
    const auto book = betting_game(alpha, beta);
    const auto setter = odds_setter_view(book);
    REQUIRE(setter.entries.size() == book.entries.size());
    for (std::size_t i = 0; i < book.entries.size(); ++i)
        CHECK(book.entries[i].payout + setter.entries[i].payout == 0.0);
    CHECK(setter.net == -book.net);

    const std::vector<PredictionTrace> same{alpha, PredictionTrace{"twin", alpha.entries}};
    const auto rows = head_to_head(same);
    CHECK(rows[0].difference == 0.0);
    CHECK_FALSE(rows[0].superior.has_value());
}

TEST_CASE("report over a synthetic season") {
    synthgen::SeasonPlan plan;
    plan.players = synthgen::default_profiles(6, 9);
    plan.n_games = 120;
    plan.seed = 9;
    plan.oracle_replicas = 0;
    const Dataset d = synthgen::generate_season(plan).dataset;
    const auto ratings = models::fit_sdmm(d);
    const std::vector<PredictionTrace> traces{
        build_trace({"null", models::NullModel{}}, d), build_trace({"sdmm", ratings}, d),
        build_trace({"null_modified", models::NullModel{85}}, d)};
    for (const auto& t : traces) {
        for (const auto& e : t.entries) {
            CHECK(e.prediction >= 0.0);
            CHECK(e.prediction <= 1.0);
            if (e.round_number == 1) {
                CHECK(e.s1 == 0);
                CHECK(e.s2 == 0);
            }
        }
    }
    const auto report = build_report(traces);
    CHECK(report.head_to_head.size() == 3);
    for (std::size_t i = 1; i < report.head_to_head.size(); ++i)
        CHECK(report.head_to_head[i - 1].difference >= report.head_to_head[i].difference);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(report.all_rounds.values[i][i] == 0.0);
        CHECK(report.round1.values[i][i] == 0.0);
    }

    // Row counts follow the game-length census.
    std::map<int, std::size_t> games_reaching;
    for (const auto& g : d.games)
        for (std::size_t r = 1; r <= g.rounds.size(); ++r) games_reaching[static_cast<int>(r)] += 1;
    for (const auto& row : report.brier.rows) {
        if (row.round) {
            CHECK(row.n == games_reaching.at(*row.round));
        }
    }
    for (std::size_t i = 1; i + 1 < report.brier.rows.size(); ++i)
        CHECK(report.brier.rows[i].n <= report.brier.rows[i - 1].n);

    const auto j = to_json(report);
    CHECK(j.contains("brier_table"));
    CHECK(j["betting_matrix_all_rounds"]["values"].size() == 3);
    CHECK(j.contains("betting_matrix_round1"));
    CHECK(j["head_to_head"].size() == 3);
    const auto text = render_text(report);
    CHECK(text.find("sdmm") != std::string::npos);
}

}
