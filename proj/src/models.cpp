#include "darts271/models.hpp"

#include <algorithm>

namespace darts271::models {

double null_predict(const NullModel& model, double s1, double s2) noexcept {
    return std::clamp(0.5 * (1.0 + (s1 - s2) / model.divisor), 0.0, 1.0);
}

double predict(const WinModel& model, const PlayerId& p1, const PlayerId& p2, int s1, int s2) {
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, NullModel>) {
                return null_predict(m, s1, s2);
            } else if constexpr (std::is_same_v<M, LogisticModel>) {
                return logistic_predict(m, p1, p2, s1, s2);
            } else if constexpr (std::is_same_v<M, SdmmRatings>) {
                return sdmm_predict(m, p1, p2, s1, s2);
            } else {
                return sim_predict(m, p1, p2, s1, s2);
            }
        },
        model);
}

} // namespace darts271::models
