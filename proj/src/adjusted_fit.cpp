#include "darts271/models.hpp"

#include <set>

namespace darts271::models {

namespace {

struct GameProportions {
    double days;
    std::array<double, 4> proportions;
};

std::vector<GameProportions> per_game_proportions(const Dataset& train, const PlayerId& player) {
    std::vector<GameProportions> rows;
    for (const auto& game : train.games) {
        const bool as_p1 = game.p1 == player;
        if (!as_p1 && game.p2 != player) continue;
        std::array<double, 4> counts{};
        double total = 0.0;
        for (const auto& round : game.rounds) {
            for (const auto& t : as_p1 ? round.p1_throws : round.p2_throws) {
                counts[static_cast<std::size_t>(classify_distance(t))] += 1.0;
                total += 1.0;
            }
        }
        if (total == 0.0) continue;
        for (auto& c : counts) c /= total;
        rows.push_back({game.start_time.days(), counts});
    }
    return rows;
}

struct MultiplierCounts {
    long long throws = 0;
    long long zeros = 0;
    long long singles = 0;  // 19, 20
    long long doubles = 0;  // 38, 40
    long long triples = 0;  // 57, 60
};

MultiplierCounts count_multipliers(const Dataset& train, const PlayerId* player) {
    MultiplierCounts c;
    const auto add = [&](const ThrowScore& t) {
        c.throws += 1;
        switch (t.value()) {
        case 0: c.zeros += 1; break;
        case 19: case 20: c.singles += 1; break;
        case 38: case 40: c.doubles += 1; break;
        case 57: case 60: c.triples += 1; break;
        default: break;
        }
    };
    for (const auto& game : train.games) {
        const bool as_p1 = player == nullptr || game.p1 == *player;
        const bool as_p2 = player == nullptr || game.p2 == *player;
        for (const auto& round : game.rounds) {
            if (as_p1) for (const auto& t : round.p1_throws) add(t);
            if (as_p2) for (const auto& t : round.p2_throws) add(t);
        }
    }
    return c;
}

} // namespace

DistanceVector normalize_distance(const std::array<double, 4>& raw) noexcept {
    DistanceVector v;
    double total = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        v.d[k] = raw[k] > 0.0 ? raw[k] : 0.0;
        total += v.d[k];
    }
    if (total <= 0.0) return DistanceVector{};
    for (auto& x : v.d) x /= total;
    return v;
}

DistanceVector fit_distance_vector(const Dataset& train, const PlayerId& player, Timestamp reference_time,
                                   const DistanceVector& league) {
    const auto rows = per_game_proportions(train, player);
    if (rows.empty()) return league;

    std::set<double> distinct_times;
    for (const auto& r : rows) distinct_times.insert(r.days);
    std::array<double, 4> estimate{};
    if (distinct_times.size() < 2) {
        for (const auto& r : rows) {
            for (std::size_t k = 0; k < 4; ++k) estimate[k] += r.proportions[k] / static_cast<double>(rows.size());
        }
        return normalize_distance(estimate);
    }

    // Regress on days relative to the first game to keep the intercept well conditioned.
    const double origin = *distinct_times.begin();
    std::vector<std::pair<double, double>> points(rows.size());
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t i = 0; i < rows.size(); ++i) points[i] = {rows[i].days - origin, rows[i].proportions[k]};
        const auto line = numerics::linear_regression_1d<double>(points);
        estimate[k] = line(reference_time.days() - origin);
    }
    return normalize_distance(estimate);
}

DistanceVector league_distance_vector(const Dataset& train, Timestamp reference_time) {
    std::array<double, 4> sum{};
    std::size_t n = 0;
    const DistanceVector uniform{};
    for (const auto& player : train.roster) {
        if (per_game_proportions(train, player).empty()) continue;
        const auto v = fit_distance_vector(train, player, reference_time, uniform);
        for (std::size_t k = 0; k < 4; ++k) sum[k] += v.d[k];
        ++n;
    }
    if (n == 0) return uniform;
    return normalize_distance(sum);
}

std::array<double, 3> league_multiplier_split(const Dataset& train) {
    const auto c = count_multipliers(train, nullptr);
    const long long on_target = c.singles + c.doubles + c.triples;
    if (on_target == 0) return {1.0, 0.0, 0.0};
    const auto n = static_cast<double>(on_target);
    return {c.singles / n, c.doubles / n, c.triples / n};
}

MultiplierVector fit_multiplier_vector(const Dataset& train, const PlayerId& player,
                                       const std::array<double, 3>& league_split) {
    const auto c = count_multipliers(train, &player);
    MultiplierVector v;
    const double m0 = c.throws == 0 ? 0.0 : static_cast<double>(c.zeros) / static_cast<double>(c.throws);
    const long long n_s = c.singles + c.doubles + c.triples;
    std::array<double, 3> split = league_split;
    if (n_s > 0) {
        const auto n = static_cast<double>(n_s);
        split = {c.singles / n, c.doubles / n, c.triples / n};
    }
    v.m = {m0, (1.0 - m0) * split[0], (1.0 - m0) * split[1], (1.0 - m0) * split[2]};
    return v;
}

AdjustedSimModel fit_adjusted_sim(const Dataset& train, Timestamp reference_time,
                                  const SimulationSettings& settings) {
    AdjustedSimModel model;
    model.settings = settings;
    model.reference_time = reference_time;
    model.league_distance = league_distance_vector(train, reference_time);
    const auto split = league_multiplier_split(train);

    std::array<double, 4> multiplier_sum{};
    std::size_t fitted = 0;
    for (const auto& player : train.roster) {
        model.distance_vectors[player] = fit_distance_vector(train, player, reference_time, model.league_distance);
        const auto mv = fit_multiplier_vector(train, player, split);
        model.multiplier_vectors[player] = mv;
        if (count_multipliers(train, &player).throws > 0) {
            for (std::size_t k = 0; k < 4; ++k) multiplier_sum[k] += mv.m[k];
            ++fitted;
        }
    }
    if (fitted > 0) {
        for (std::size_t k = 0; k < 4; ++k) model.league_multiplier.m[k] = multiplier_sum[k] / static_cast<double>(fitted);
    } else {
        model.league_multiplier.m = {0.0, split[0], split[1], split[2]};
    }
    // Rostered players with no training throws share the league vectors.
    for (const auto& player : train.roster) {
        if (count_multipliers(train, &player).throws == 0) model.multiplier_vectors[player] = model.league_multiplier;
    }
    return model;
}

} // namespace darts271::models
