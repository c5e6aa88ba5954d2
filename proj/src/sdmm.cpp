#include "darts271/models.hpp"

#include <algorithm>
#include <cmath>

namespace darts271::models {

SdmmSystem build_sdmm_system(const Dataset& train, const SdmmOptions& options) {
    SdmmSystem out;
    out.players.assign(train.roster.begin(), train.roster.end());
    const auto n = static_cast<Eigen::Index>(out.players.size());
    out.system.n_unknowns = 2 * n;
    const auto index = [&](const PlayerId& p) {
        return static_cast<Eigen::Index>(std::lower_bound(out.players.begin(), out.players.end(), p) -
                                         out.players.begin());
    };
    const double t = options.rules.threshold;

    for (const auto& game : train.games) {
        const double rhs = p1_won(game, options.rules) ? 1.0 : -1.0;
        const Eigen::Index i = index(game.p1);
        const Eigen::Index j = index(game.p2);
        const auto path = game.score_path();
        for (std::size_t r = 0; r < game.rounds.size(); ++r) {
            const double si = std::min<double>(path[r].first, t);
            const double sj = std::min<double>(path[r].second, t);
            out.system.add_row({{i, (t - si) / t}, {n + i, si / t}, {j, -(t - sj) / t}, {n + j, -sj / t}}, rhs);
        }
        out.system.add_row({{n + i, 1.0}, {n + j, -1.0}}, rhs);
    }

    // Row weight w scales the squared residual, so coefficients scale by sqrt(w).
    const double w = std::sqrt(options.augmentation_weight);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            for (const double rhs : {1.0, -1.0}) {
                out.system.add_row({{i, w}, {j, -w}}, w * rhs);
                out.system.add_row({{i, 0.5 * w}, {n + i, 0.5 * w}, {j, -0.5 * w}, {n + j, -0.5 * w}}, w * rhs);
                out.system.add_row({{n + i, w}, {n + j, -w}}, w * rhs);
            }
        }
    }
    return out;
}

SdmmRatings fit_sdmm(const Dataset& train, const SdmmOptions& options) {
    const auto built = build_sdmm_system(train, options);
    SdmmRatings ratings;
    ratings.threshold = options.rules.threshold;
    if (built.players.empty()) return ratings;
    const auto r = numerics::least_squares_min_norm(built.system);
    const auto n = static_cast<Eigen::Index>(built.players.size());
    for (Eigen::Index k = 0; k < n; ++k) {
        ratings.r1[built.players[static_cast<std::size_t>(k)]] = r(k);
        ratings.r2[built.players[static_cast<std::size_t>(k)]] = r(n + k);
    }
    refresh_delta(ratings);
    return ratings;
}

double SdmmRatings::mean_r1() const noexcept {
    if (r1.empty()) return 0.0;
    double s = 0.0;
    for (const auto& [p, v] : r1) s += v;
    return s / static_cast<double>(r1.size());
}

double SdmmRatings::mean_r2() const noexcept {
    if (r2.empty()) return 0.0;
    double s = 0.0;
    for (const auto& [p, v] : r2) s += v;
    return s / static_cast<double>(r2.size());
}

void refresh_delta(SdmmRatings& ratings) noexcept { ratings.delta_r = ratings.mean_r2() - ratings.mean_r1(); }

double SdmmRatings::strength(const PlayerId& player, double score) const noexcept {
    const double t = threshold;
    const double s = std::min(score, t);
    const auto a = r1.find(player);
    const auto b = r2.find(player);
    const double first = a == r1.end() ? mean_r1() : a->second;
    const double second = b == r2.end() ? mean_r2() : b->second;
    return ((t - s) / t) * first + (s / t) * second;
}

double sdmm_predict(const SdmmRatings& ratings, const PlayerId& p1, const PlayerId& p2, double s1,
                    double s2) noexcept {
    return std::clamp(0.5 * (1.0 + ratings.strength(p1, s1) - ratings.strength(p2, s2)), 0.0, 1.0);
}

} // namespace darts271::models
