#include "darts271/models.hpp"

#include <algorithm>

namespace darts271::models {

double LogisticModel::player_coefficient(const PlayerId& player) const noexcept {
    const auto it = player_coefficients.find(player);
    return it == player_coefficients.end() ? 0.0 : it->second;
}

double logistic_predict(const LogisticModel& model, const PlayerId& p1, const PlayerId& p2, double s1,
                        double s2) noexcept {
    const double z = model.c0 + model.player_coefficient(p1) - model.player_coefficient(p2) + model.c1 * s1 +
                     model.c2 * s2;
    return numerics::sigmoid(z);
}

std::vector<numerics::LogisticObservation> logistic_observations(const Dataset& train,
                                                                 const std::vector<PlayerId>& players,
                                                                 const Rules& rules) {
    const auto n = static_cast<Eigen::Index>(players.size());
    const auto player_index = [&](const PlayerId& p) {
        const auto it = std::lower_bound(players.begin(), players.end(), p);
        return static_cast<Eigen::Index>(it - players.begin()) + 1;
    };
    const Eigen::Index s1_col = n + 1;
    const Eigen::Index s2_col = n + 2;

    std::vector<numerics::LogisticObservation> observations;
    for (const auto& game : train.games) {
        const int label = p1_won(game, rules) ? 1 : 0;
        const Eigen::Index i = player_index(game.p1);
        const Eigen::Index j = player_index(game.p2);
        const auto path = game.score_path();
        for (std::size_t r = 0; r < game.rounds.size(); ++r) {
            const double s1 = path[r].first;
            const double s2 = path[r].second;
            observations.push_back({{{0, 1.0}, {i, 1.0}, {j, -1.0}, {s1_col, s1}, {s2_col, s2}}, label});
            observations.push_back({{{0, 1.0}, {j, 1.0}, {i, -1.0}, {s1_col, s2}, {s2_col, s1}}, 1 - label});
        }
    }
    return observations;
}

LogisticModel fit_logistic_model(const Dataset& train, double l2, const Rules& rules) {
    if (train.empty()) throw Error(ErrorCode::EmptyFilter, "training set is empty");
    std::vector<PlayerId> players(train.roster.begin(), train.roster.end());
    const auto observations = logistic_observations(train, players, rules);
    const auto n_features = static_cast<Eigen::Index>(players.size()) + 3;
    numerics::LogisticOptions options;
    options.l2 = l2;
    const auto fit = numerics::fit_logistic(observations, n_features, options);

    LogisticModel model;
    model.c0 = fit.coefficients(0);
    for (std::size_t k = 0; k < players.size(); ++k) {
        model.player_coefficients[players[k]] = fit.coefficients(static_cast<Eigen::Index>(k) + 1);
    }
    model.c1 = fit.coefficients(n_features - 2);
    model.c2 = fit.coefficients(n_features - 1);
    return model;
}

} // namespace darts271::models
