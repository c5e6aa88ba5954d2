#include "darts271/models.hpp"

#include <numeric>
#include <tuple>

namespace darts271::models {

namespace {

// Runs n_sims replicas with the lexicographically smaller (player, score)
// pair drawing first, so predict(a, b, x, y) and predict(b, a, y, x) read the
// same replicas and always sum to one.
template <typename MakeDraw>
double run_replicas(const SimulationSettings& settings, const PlayerId& p1, const PlayerId& p2, int s1, int s2,
                    MakeDraw&& make_draw) {
    if (settings.rules.is_terminal(s1, s2)) return s1 > s2 ? 1.0 : 0.0;
    const auto key1 = std::tie(p1, s1);
    const auto key2 = std::tie(p2, s2);
    if (key1 == key2) return 0.5;
    if (key2 < key1) return 1.0 - run_replicas(settings, p2, p1, s2, s1, make_draw);

    auto draw1 = make_draw(p1);
    auto draw2 = make_draw(p2);
    using Score = decltype(draw1(std::declval<RandomSource&>()));
    double wins = 0.0;
    for (int replica = 0; replica < settings.n_sims; ++replica) {
        RandomSource source(settings.seed, static_cast<std::uint64_t>(replica));
        switch (simulate_remaining(draw1, draw2, static_cast<Score>(s1), static_cast<Score>(s2), source,
                                   settings.rules, settings.round_cap)) {
        case SimOutcome::FirstWins: wins += 1.0; break;
        case SimOutcome::SecondWins: break;
        case SimOutcome::Unresolved: wins += 0.5; break;
        }
    }
    return wins / settings.n_sims;
}

struct EmpiricalDraw {
    CategoricalSampler sampler;
    const std::vector<int>* support;

    int operator()(RandomSource& source) const noexcept { return (*support)[sampler(source)]; }
};

struct AdjustedDraw {
    CategoricalSampler distance;
    CategoricalSampler multiplier;
    std::array<double, 4> baselines;

    double operator()(RandomSource& source) const noexcept {
        const double base = baselines[distance(source)];
        return base * static_cast<double>(multiplier(source));
    }
};

std::array<long long, 61> count_scores(const Dataset& train, const PlayerId* player) {
    std::array<long long, 61> counts{};
    for (const auto& game : train.games) {
        const bool as_p1 = player == nullptr || game.p1 == *player;
        const bool as_p2 = player == nullptr || game.p2 == *player;
        if (!as_p1 && !as_p2) continue;
        for (const auto& round : game.rounds) {
            if (as_p1) for (const auto& t : round.p1_throws) ++counts[t.value()];
            if (as_p2) for (const auto& t : round.p2_throws) ++counts[t.value()];
        }
    }
    return counts;
}

EmpiricalThrowDistribution from_counts(const std::array<long long, 61>& counts) {
    const long long total = std::accumulate(counts.begin(), counts.end(), 0LL);
    EmpiricalThrowDistribution dist;
    if (total == 0) {
        dist.support = {0};
        dist.probabilities = {1.0};
        return dist;
    }
    for (int v = 0; v <= 60; ++v) {
        if (counts[v] == 0) continue;
        dist.support.push_back(v);
        dist.probabilities.push_back(static_cast<double>(counts[v]) / static_cast<double>(total));
    }
    return dist;
}

} // namespace

double EmpiricalThrowDistribution::probability(int score) const noexcept {
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i] == score) return probabilities[i];
    }
    return 0.0;
}

double EmpiricalThrowDistribution::mean() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) m += support[i] * probabilities[i];
    return m;
}

EmpiricalThrowDistribution pooled_distribution(const Dataset& train) {
    return from_counts(count_scores(train, nullptr));
}

EmpiricalThrowDistribution empirical_distribution(const Dataset& train, const PlayerId& player) {
    const auto counts = count_scores(train, &player);
    if (std::accumulate(counts.begin(), counts.end(), 0LL) == 0) return pooled_distribution(train);
    return from_counts(counts);
}

const EmpiricalThrowDistribution& BasicSimModel::distribution_for(const PlayerId& player) const noexcept {
    const auto it = distributions.find(player);
    return it == distributions.end() ? pooled : it->second;
}

BasicSimModel fit_basic_sim(const Dataset& train, const SimulationSettings& settings) {
    BasicSimModel model;
    model.settings = settings;
    model.pooled = pooled_distribution(train);
    for (const auto& player : train.roster) {
        model.distributions[player] = empirical_distribution(train, player);
    }
    return model;
}

double sim_predict(const BasicSimModel& model, const PlayerId& p1, const PlayerId& p2, int s1, int s2) {
    return run_replicas(model.settings, p1, p2, s1, s2, [&](const PlayerId& p) {
        const auto& dist = model.distribution_for(p);
        return EmpiricalDraw{CategoricalSampler{dist.probabilities}, &dist.support};
    });
}

double adjusted_throw(RandomSource& source, const DistanceVector& dv, const MultiplierVector& mv,
                      const std::array<double, 4>& baselines) {
    const double base = baselines[sample_categorical(source, dv.d)];
    return base * static_cast<double>(sample_categorical(source, mv.m));
}

const DistanceVector& AdjustedSimModel::distance_for(const PlayerId& player) const noexcept {
    const auto it = distance_vectors.find(player);
    return it == distance_vectors.end() ? league_distance : it->second;
}

const MultiplierVector& AdjustedSimModel::multiplier_for(const PlayerId& player) const noexcept {
    const auto it = multiplier_vectors.find(player);
    return it == multiplier_vectors.end() ? league_multiplier : it->second;
}

double sim_predict(const AdjustedSimModel& model, const PlayerId& p1, const PlayerId& p2, int s1, int s2) {
    return run_replicas(model.settings, p1, p2, s1, s2, [&](const PlayerId& p) {
        return AdjustedDraw{CategoricalSampler{model.distance_for(p).d}, CategoricalSampler{model.multiplier_for(p).m},
                            model.baselines};
    });
}

} // namespace darts271::models
