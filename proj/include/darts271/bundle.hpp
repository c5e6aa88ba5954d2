#pragma once

#include "darts271/config.hpp"
#include "darts271/models.hpp"

#include <json.hpp>

namespace darts271 {

inline constexpr int kBundleSchemaVersion = 1;

struct RosterEntry {
    PlayerId id;
    std::size_t games = 0;
    std::size_t wins = 0;
    double avg_points_per_throw = 0.0;
};

/// Every fitted model plus the settings and roster they were fitted with.
struct ModelBundle {
    int schema_version = kBundleSchemaVersion;
    Config config;
    models::NullModel null;
    models::NullModel modified_null{85.0};
    models::LogisticModel logistic;
    models::BasicSimModel basic_sim;
    models::AdjustedSimModel adjusted_sim;
    models::SdmmRatings sdmm;
    std::vector<RosterEntry> roster;

    /// Model names in report order: the five models, then the modified null.
    static const std::vector<std::string>& all_model_names();
    static const std::vector<std::string>& default_model_names();

    /// Throws UnknownModelName.
    models::WinModel model(std::string_view name) const;
    std::vector<models::NamedModel> models(const std::vector<std::string>& names) const;

    bool has_player(const PlayerId& player) const noexcept;
};

/// Fits every model on the games that started before `config.cutoff`.
/// Throws EmptyFilter when that split is empty.
ModelBundle fit_bundle(const Dataset& dataset, const Config& config);

/// Per-model probability that p1 wins, in `names` order. The CLI and the
/// live service both answer through this function.
nlohmann::json predict_all(const ModelBundle& bundle, const std::vector<std::string>& names, const PlayerId& p1,
                           const PlayerId& p2, int s1, int s2);

std::vector<RosterEntry> roster_stats(const Dataset& dataset, const Rules& rules);

nlohmann::json to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(const nlohmann::json& j);

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

} // namespace darts271
