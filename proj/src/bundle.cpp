#include "darts271/bundle.hpp"

#include "darts271/error.hpp"

#include <fstream>

namespace darts271 {

using nlohmann::json;

const std::vector<std::string>& ModelBundle::all_model_names() {
    static const std::vector<std::string> names{"null", "logistic", "basic_sim", "adjusted_sim", "sdmm",
                                                "null_modified"};
    return names;
}

const std::vector<std::string>& ModelBundle::default_model_names() {
    static const std::vector<std::string> names{"null", "logistic", "basic_sim", "adjusted_sim", "sdmm"};
    return names;
}

models::WinModel ModelBundle::model(std::string_view name) const {
    if (name == "null") return null;
    if (name == "null_modified") return modified_null;
    if (name == "logistic") return logistic;
    if (name == "basic_sim") return basic_sim;
    if (name == "adjusted_sim") return adjusted_sim;
    if (name == "sdmm") return sdmm;
    throw Error(ErrorCode::UnknownModelName, "unknown model '" + std::string(name) + "'", std::string(name));
}

std::vector<models::NamedModel> ModelBundle::models(const std::vector<std::string>& names) const {
    std::vector<models::NamedModel> out;
    out.reserve(names.size());
    for (const auto& name : names) out.push_back({name, model(name)});
    return out;
}

bool ModelBundle::has_player(const PlayerId& player) const noexcept {
    return std::any_of(roster.begin(), roster.end(), [&](const RosterEntry& e) { return e.id == player; });
}

nlohmann::json predict_all(const ModelBundle& bundle, const std::vector<std::string>& names, const PlayerId& p1,
                           const PlayerId& p2, int s1, int s2) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& name : names) out[name] = models::predict(bundle.model(name), p1, p2, s1, s2);
    return out;
}

std::vector<RosterEntry> roster_stats(const Dataset& dataset, const Rules& rules) {
    const auto stats = summarize(dataset);
    std::map<PlayerId, std::size_t> wins;
    for (const auto& game : dataset.games) wins[winner(game, rules)] += 1;
    std::vector<RosterEntry> roster;
    for (const auto& player : dataset.roster) {
        RosterEntry e;
        e.id = player;
        if (auto it = stats.games_per_player.find(player); it != stats.games_per_player.end()) e.games = it->second;
        if (auto it = wins.find(player); it != wins.end()) e.wins = it->second;
        if (auto it = stats.avg_points_per_throw.find(player); it != stats.avg_points_per_throw.end()) {
            e.avg_points_per_throw = it->second;
        }
        roster.push_back(e);
    }
    return roster;
}

ModelBundle fit_bundle(const Dataset& dataset, const Config& config) {
    config.validate();
    auto [train, test] = split(dataset, config.cutoff);
    if (train.empty()) throw Error(ErrorCode::EmptyFilter, "no training games before the cutoff");
    // Incomplete games never feed a fit.
    train.incomplete_games.clear();

    const Rules rules = config.rules();
    models::SimulationSettings sim;
    sim.n_sims = config.n_sims;
    sim.seed = config.seed;
    sim.round_cap = config.round_cap;
    sim.rules = rules;

    ModelBundle bundle;
    bundle.config = config;
    bundle.null.divisor = config.null_divisor;
    bundle.modified_null.divisor = config.modified_null_divisor;
    bundle.logistic = models::fit_logistic_model(train, config.logistic_l2, rules);
    bundle.basic_sim = models::fit_basic_sim(train, sim);
    bundle.adjusted_sim = models::fit_adjusted_sim(train, config.effective_reference_time(), sim);
    bundle.sdmm = models::fit_sdmm(train, models::SdmmOptions{config.augmentation_weight, rules});
    bundle.roster = roster_stats(train, rules);
    return bundle;
}

namespace {

json distribution_json(const models::EmpiricalThrowDistribution& d) {
    return json{{"support", d.support}, {"probabilities", d.probabilities}};
}

models::EmpiricalThrowDistribution distribution_from(const json& j) {
    models::EmpiricalThrowDistribution d;
    j.at("support").get_to(d.support);
    j.at("probabilities").get_to(d.probabilities);
    if (d.support.size() != d.probabilities.size() || d.support.empty()) {
        throw Error(ErrorCode::InvalidConfig, "malformed throw distribution");
    }
    for (int v : d.support) validate_score(v);
    return d;
}

json settings_json(const models::SimulationSettings& s) {
    return json{{"n_sims", s.n_sims}, {"seed", s.seed}, {"round_cap", s.round_cap}};
}

} // namespace

json to_json(const ModelBundle& b) {
    json j;
    j["schema_version"] = b.schema_version;
    j["cutoff"] = b.config.cutoff.to_string();
    j["config"] = b.config;
    j["null"] = {{"divisor", b.null.divisor}, {"modified_divisor", b.modified_null.divisor}};
    j["logistic"] = {{"c0", b.logistic.c0},
                     {"c1", b.logistic.c1},
                     {"c2", b.logistic.c2},
                     {"player_coefficients", b.logistic.player_coefficients}};
    json dists = json::object();
    for (const auto& [p, d] : b.basic_sim.distributions) dists[p] = distribution_json(d);
    j["basic_sim"] = {{"distributions", dists},
                      {"pooled", distribution_json(b.basic_sim.pooled)},
                      {"settings", settings_json(b.basic_sim.settings)}};
    json dv = json::object(), mv = json::object();
    for (const auto& [p, v] : b.adjusted_sim.distance_vectors) dv[p] = v.d;
    for (const auto& [p, v] : b.adjusted_sim.multiplier_vectors) mv[p] = v.m;
    j["adjusted_sim"] = {{"distance_vectors", dv},
                         {"multiplier_vectors", mv},
                         {"league_distance_vector", b.adjusted_sim.league_distance.d},
                         {"league_multiplier_vector", b.adjusted_sim.league_multiplier.m},
                         {"baselines", b.adjusted_sim.baselines},
                         {"reference_time", b.adjusted_sim.reference_time.to_string()},
                         {"settings", settings_json(b.adjusted_sim.settings)}};
    j["sdmm"] = {{"r1", b.sdmm.r1}, {"r2", b.sdmm.r2}, {"delta_r", b.sdmm.delta_r}, {"threshold", b.sdmm.threshold}};
    json roster = json::array();
    for (const auto& e : b.roster) {
        roster.push_back({{"id", e.id}, {"games", e.games}, {"wins", e.wins},
                          {"avg_points_per_throw", e.avg_points_per_throw}});
    }
    j["roster"] = roster;
    return j;
}

ModelBundle bundle_from_json(const json& j) {
    try {
        ModelBundle b;
        b.schema_version = j.at("schema_version").get<int>();
        if (b.schema_version != kBundleSchemaVersion) {
            throw Error(ErrorCode::InvalidConfig, "unsupported bundle schema version " + std::to_string(b.schema_version));
        }
        b.config = j.at("config").get<Config>();
        const Rules rules = b.config.rules();

        b.null.divisor = j.at("null").at("divisor").get<double>();
        b.modified_null.divisor = j.at("null").value("modified_divisor", b.config.modified_null_divisor);

        const auto& lg = j.at("logistic");
        b.logistic.c0 = lg.at("c0").get<double>();
        b.logistic.c1 = lg.at("c1").get<double>();
        b.logistic.c2 = lg.at("c2").get<double>();
        lg.at("player_coefficients").get_to(b.logistic.player_coefficients);

        const auto settings_from = [&](const json& s) {
            models::SimulationSettings out;
            out.n_sims = s.value("n_sims", b.config.n_sims);
            out.seed = s.value("seed", b.config.seed);
            out.round_cap = s.value("round_cap", b.config.round_cap);
            out.rules = rules;
            return out;
        };
        const auto& bs = j.at("basic_sim");
        for (const auto& [p, d] : bs.at("distributions").items()) b.basic_sim.distributions[p] = distribution_from(d);
        b.basic_sim.pooled = distribution_from(bs.at("pooled"));
        b.basic_sim.settings = settings_from(bs.value("settings", json::object()));

        const auto& as = j.at("adjusted_sim");
        for (const auto& [p, v] : as.at("distance_vectors").items()) v.get_to(b.adjusted_sim.distance_vectors[p].d);
        for (const auto& [p, v] : as.at("multiplier_vectors").items()) v.get_to(b.adjusted_sim.multiplier_vectors[p].m);
        if (as.contains("league_distance_vector")) as.at("league_distance_vector").get_to(b.adjusted_sim.league_distance.d);
        if (as.contains("league_multiplier_vector")) {
            as.at("league_multiplier_vector").get_to(b.adjusted_sim.league_multiplier.m);
        }
        as.at("baselines").get_to(b.adjusted_sim.baselines);
        b.adjusted_sim.reference_time = Timestamp::parse(as.at("reference_time").get<std::string>());
        b.adjusted_sim.settings = settings_from(as.value("settings", json::object()));

        const auto& sd = j.at("sdmm");
        sd.at("r1").get_to(b.sdmm.r1);
        sd.at("r2").get_to(b.sdmm.r2);
        b.sdmm.threshold = sd.value("threshold", b.config.threshold);
        models::refresh_delta(b.sdmm);

        for (const auto& e : j.value("roster", json::array())) {
            b.roster.push_back({e.at("id").get<std::string>(), e.value("games", std::size_t{0}),
                                e.value("wins", std::size_t{0}), e.value("avg_points_per_throw", 0.0)});
        }
        return b;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("malformed model bundle: ") + e.what());
    }
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string(), path.string());
    out << to_json(bundle).dump(2) << '\n';
}

ModelBundle load_bundle(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string(), path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("malformed model bundle: ") + e.what());
    }
    return bundle_from_json(j);
}

} // namespace darts271
