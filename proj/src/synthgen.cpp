#include "darts271/synthgen.hpp"

#include "darts271/error.hpp"
#include "darts271/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace darts271::synthgen {

namespace {

// Clockwise from the top of the board.
constexpr std::array<int, 20> kSectorOrder{20, 1, 18, 4, 13, 6, 10, 15, 2, 17, 3, 19, 7, 16, 8, 11, 14, 9, 12, 5};
constexpr double kSpread = 1.5;
constexpr double kBullLeak = 0.03;

std::size_t sector_position(int sector) {
    return static_cast<std::size_t>(std::find(kSectorOrder.begin(), kSectorOrder.end(), sector) - kSectorOrder.begin());
}

void add_sector(std::array<double, 61>& mass, int sector, double p, double accuracy) {
    const double triple = 0.05 + 0.20 * accuracy;
    const double dbl = 0.04 + 0.06 * accuracy;
    mass[3 * sector] += p * triple;
    mass[2 * sector] += p * dbl;
    mass[sector] += p * (1.0 - triple - dbl);
}

models::EmpiricalThrowDistribution to_distribution(const std::array<double, 61>& mass) {
    models::EmpiricalThrowDistribution d;
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    for (int v = 0; v <= 60; ++v) {
        if (mass[v] <= 0.0) continue;
        d.support.push_back(v);
        d.probabilities.push_back(mass[v] / total);
    }
    return d;
}

// Circle-method round robin: each cycle pairs every player with every other exactly once.
std::vector<std::pair<std::size_t, std::size_t>> round_robin_cycle(std::size_t n) {
    std::vector<std::size_t> slots(n);
    std::iota(slots.begin(), slots.end(), 0);
    const bool odd = n % 2 == 1;
    if (odd) slots.push_back(n);  // bye
    const std::size_t m = slots.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t round = 0; round + 1 < m; ++round) {
        for (std::size_t k = 0; k < m / 2; ++k) {
            const std::size_t a = slots[k];
            const std::size_t b = slots[m - 1 - k];
            if (a != n && b != n) pairs.emplace_back(a, b);
        }
        std::rotate(slots.begin() + 1, slots.end() - 1, slots.end());
    }
    return pairs;
}

std::string padded(const char* prefix, std::size_t value, int width) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, value);
    return buf;
}

} // namespace

const char* to_string(Target target) noexcept {
    switch (target) {
    case Target::Sector20: return "sector20";
    case Target::Sector19: return "sector19";
    case Target::Bullseye: return "bullseye";
    }
    return "?";
}

Target target_from_string(std::string_view text) {
    if (text == "sector20") return Target::Sector20;
    if (text == "sector19") return Target::Sector19;
    if (text == "bullseye") return Target::Bullseye;
    throw Error(ErrorCode::InvalidConfig, "unknown target '" + std::string(text) + "'");
}

double accuracy_at(const SkillProfile& profile, const SeasonPlan& plan, Timestamp at) noexcept {
    const double days = at.days() - plan.start.days();
    return std::clamp(profile.accuracy + profile.drift_per_day * days, 0.0, 1.0);
}

models::EmpiricalThrowDistribution profile_to_distribution(Target target, double accuracy, double miss_rate) {
    const double a = std::clamp(accuracy, 0.0, 1.0);
    const double miss = std::clamp(miss_rate, 0.0, 1.0);
    std::array<double, 61> mass{};
    mass[0] = miss;
    const double on_board = 1.0 - miss;
    if (on_board > 0.0) {
        if (target == Target::Bullseye) {
            mass[25] += on_board * a * (2.0 / 3.0);
            mass[50] += on_board * a * (1.0 / 3.0);
            for (int sector : kSectorOrder) add_sector(mass, sector, on_board * (1.0 - a) / 20.0, a);
        } else {
            const int aimed = target == Target::Sector20 ? 20 : 19;
            const std::size_t centre = sector_position(aimed);
            add_sector(mass, aimed, on_board * a, a);
            const double bull = on_board * (1.0 - a) * kBullLeak;
            mass[25] += bull * (2.0 / 3.0);
            mass[50] += bull * (1.0 / 3.0);
            const double stray = on_board * (1.0 - a) * (1.0 - kBullLeak);
            std::array<double, 20> weight{};
            double total = 0.0;
            for (std::size_t pos = 0; pos < 20; ++pos) {
                if (pos == centre) continue;
                const std::size_t raw = pos > centre ? pos - centre : centre - pos;
                const std::size_t k = std::min(raw, 20 - raw);
                weight[pos] = std::exp(-static_cast<double>(k) / kSpread);
                total += weight[pos];
            }
            for (std::size_t pos = 0; pos < 20; ++pos) {
                if (weight[pos] > 0.0) add_sector(mass, kSectorOrder[pos], stray * weight[pos] / total, a);
            }
        }
    }
    return to_distribution(mass);
}

models::EmpiricalThrowDistribution profile_to_distribution(const SkillProfile& profile, const SeasonPlan& plan,
                                                           Timestamp at) {
    return profile_to_distribution(profile.target, accuracy_at(profile, plan, at), profile.board_miss_rate);
}

std::vector<SkillProfile> default_profiles(int n_players, std::uint64_t seed) {
    if (n_players < 2) throw Error(ErrorCode::InvalidConfig, "need at least two players");
    RandomSource source(seed, 0x5EA5011ULL);
    std::vector<double> accuracies;
    for (int i = 0; i < n_players; ++i) {
        const double spread = static_cast<double>(i) / static_cast<double>(n_players - 1);
        accuracies.push_back(std::clamp(0.10 + 0.60 * spread + 0.06 * (source.uniform() - 0.5), 0.0, 1.0));
    }
    // Decouple skill from the identifier order.
    for (std::size_t i = accuracies.size(); i > 1; --i) {
        std::swap(accuracies[i - 1], accuracies[static_cast<std::size_t>(source() % i)]);
    }
    std::vector<SkillProfile> profiles;
    for (int i = 0; i < n_players; ++i) {
        SkillProfile p;
        p.player = padded("player", static_cast<std::size_t>(i + 1), 2);
        p.accuracy = accuracies[static_cast<std::size_t>(i)];
        switch (i % 5) {
        case 2: p.target = Target::Sector19; break;
        case 4: p.target = Target::Bullseye; break;
        default: p.target = Target::Sector20; break;
        }
        p.board_miss_rate = std::clamp(0.02 + 0.12 * (1.0 - p.accuracy) + 0.02 * source.uniform(), 0.0, 1.0);
        p.drift_per_day = -0.0002 + 0.0008 * source.uniform();
        profiles.push_back(p);
    }
    return profiles;
}

Timestamp season_quantile(const SeasonPlan& plan, double fraction) noexcept {
    const auto span = plan.end.minutes() - plan.start.minutes();
    return Timestamp{plan.start.minutes() + static_cast<std::int64_t>(std::floor(fraction * static_cast<double>(span)))};
}

double oracle_win_probability(const models::EmpiricalThrowDistribution& a,
                              const models::EmpiricalThrowDistribution& b, int replicas, std::uint64_t seed,
                              const Rules& rules, int round_cap) {
    const CategoricalSampler sa{a.probabilities};
    const CategoricalSampler sb{b.probabilities};
    const auto draw_a = [&](RandomSource& s) { return a.support[sa(s)]; };
    const auto draw_b = [&](RandomSource& s) { return b.support[sb(s)]; };
    double wins = 0.0;
    for (int r = 0; r < replicas; ++r) {
        RandomSource source(seed, static_cast<std::uint64_t>(r));
        switch (models::simulate_remaining(draw_a, draw_b, 0, 0, source, rules, round_cap)) {
        case models::SimOutcome::FirstWins: wins += 1.0; break;
        case models::SimOutcome::SecondWins: break;
        case models::SimOutcome::Unresolved: wins += 0.5; break;
        }
    }
    return wins / replicas;
}

Season generate_season(const SeasonPlan& plan) {
    if (plan.players.size() < 2) throw Error(ErrorCode::InvalidConfig, "need at least two players");
    if (plan.n_games < 1) throw Error(ErrorCode::InvalidConfig, "need at least one game");
    if (plan.end <= plan.start) throw Error(ErrorCode::InvalidConfig, "season end must follow its start");

    Season season;
    const auto cycle = round_robin_cycle(plan.players.size());
    const auto span = plan.end.minutes() - plan.start.minutes();
    for (const auto& p : plan.players) season.dataset.roster.insert(p.player);

    for (int g = 0; g < plan.n_games; ++g) {
        const auto [i, j] = cycle[static_cast<std::size_t>(g) % cycle.size()];
        const auto& first = plan.players[i];
        const auto& second = plan.players[j];
        GameRecord game;
        game.game_id = padded("g", static_cast<std::size_t>(g + 1), 5);
        game.start_time = Timestamp{plan.start.minutes() + span * g / plan.n_games};
        game.p1 = std::min(first.player, second.player);
        game.p2 = std::max(first.player, second.player);
        const bool first_is_p1 = game.p1 == first.player;

        const auto d1 = profile_to_distribution(first, plan, game.start_time);
        const auto d2 = profile_to_distribution(second, plan, game.start_time);
        const CategoricalSampler s1{d1.probabilities};
        const CategoricalSampler s2{d2.probabilities};
        RandomSource source(plan.seed, 0x9A3E000000ULL + static_cast<std::uint64_t>(g));

        GameState state = GameState::start(game.p1, game.p2);
        while (!state.terminal) {
            if (state.rounds_played >= plan.round_cap) {
                throw Error(ErrorCode::NonTerminalGame, "game " + game.game_id + " exceeded the round cap", game.game_id);
            }
            std::array<int, 3> a{}, b{};
            for (auto& t : a) t = d1.support[s1(source)];
            for (auto& t : b) t = d2.support[s2(source)];
            const auto round = first_is_p1 ? RoundScores::from_ints(a, b) : RoundScores::from_ints(b, a);
            state = apply_round(state, round, plan.rules);
            game.rounds.push_back(round);
        }
        season.dataset.games.push_back(std::move(game));
    }

    auto& truth = season.truth;
    truth.profiles = plan.players;
    truth.evaluated_at = plan.end;
    truth.replicas = plan.oracle_replicas;
    std::vector<models::EmpiricalThrowDistribution> at_end;
    for (const auto& p : plan.players) {
        at_end.push_back(profile_to_distribution(p, plan, plan.end));
        truth.expected_points[p.player] = at_end.back().mean();
    }
    if (plan.oracle_replicas > 0) {
        for (std::size_t i = 0; i < plan.players.size(); ++i) {
            for (std::size_t j = i + 1; j < plan.players.size(); ++j) {
                const double p = oracle_win_probability(at_end[i], at_end[j], plan.oracle_replicas,
                                                        plan.seed ^ 0x0AC1E000ULL, plan.rules, plan.round_cap);
                truth.pairwise_p1_win_probability[plan.players[i].player][plan.players[j].player] = p;
                truth.pairwise_p1_win_probability[plan.players[j].player][plan.players[i].player] = 1.0 - p;
            }
        }
    }
    return season;
}

nlohmann::json to_json(const GroundTruth& truth) {
    nlohmann::json profiles = nlohmann::json::array();
    for (const auto& p : truth.profiles) {
        profiles.push_back({{"player", p.player},
                            {"target", to_string(p.target)},
                            {"accuracy", p.accuracy},
                            {"drift_per_day", p.drift_per_day},
                            {"board_miss_rate", p.board_miss_rate},
                            {"expected_points_per_throw", truth.expected_points.at(p.player)}});
    }
    return nlohmann::json{{"profiles", profiles},
                          {"evaluated_at", truth.evaluated_at.to_string()},
                          {"oracle_replicas", truth.replicas},
                          {"pairwise_p1_win_probability", truth.pairwise_p1_win_probability}};
}

} // namespace darts271::synthgen
