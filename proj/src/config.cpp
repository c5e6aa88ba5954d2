#include "darts271/config.hpp"

#include "darts271/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace darts271 {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw Error(ErrorCode::InvalidConfig, "bad value '" + std::string(value) + "' for " + std::string(key),
                std::string(key));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    if constexpr (std::is_floating_point_v<T>) {
        // from_chars for double is incomplete in some standard libraries.
        std::string copy(value);
        char* end = nullptr;
        out = std::strtod(copy.c_str(), &end);
        if (copy.empty() || end != copy.c_str() + copy.size()) bad_value(key, value);
    } else {
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value);
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, value);
}

} // namespace

void Config::set(std::string_view key, std::string_view value) {
    value = trim(value);
    try {
        if (key == "cutoff") cutoff = Timestamp::parse(value);
        else if (key == "reference_time") reference_time = Timestamp::parse(value);
        else if (key == "n_sims") n_sims = parse_number<int>(key, value);
        else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
        else if (key == "null_divisor") null_divisor = parse_number<double>(key, value);
        else if (key == "modified_null_divisor") modified_null_divisor = parse_number<double>(key, value);
        else if (key == "logistic_l2") logistic_l2 = parse_number<double>(key, value);
        else if (key == "augmentation_weight") augmentation_weight = parse_number<double>(key, value);
        else if (key == "threshold") threshold = parse_number<int>(key, value);
        else if (key == "threshold_inclusive") threshold_inclusive = parse_bool(key, value);
        else if (key == "round_cap") round_cap = parse_number<int>(key, value);
        else if (key == "strict_roster") strict_roster = parse_bool(key, value);
        else if (key == "allow_incomplete") allow_incomplete = parse_bool(key, value);
        else throw Error(ErrorCode::InvalidConfig, "unknown config key '" + std::string(key) + "'", std::string(key));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidConfig) throw;
        bad_value(key, value);
    }
}

void Config::validate() const {
    const auto require = [](bool ok, const char* what) {
        if (!ok) throw Error(ErrorCode::InvalidConfig, std::string(what), what);
    };
    require(n_sims >= 1, "n_sims must be >= 1");
    require(null_divisor > 0.0, "null_divisor must be > 0");
    require(modified_null_divisor > 0.0, "modified_null_divisor must be > 0");
    require(logistic_l2 >= 0.0, "logistic_l2 must be >= 0");
    require(augmentation_weight > 0.0, "augmentation_weight must be > 0");
    require(threshold >= 1, "threshold must be >= 1");
    require(round_cap >= 1, "round_cap must be >= 1");
}

Config Config::parse(std::istream& in) {
    Config config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value",
                        std::to_string(line_no));
        }
        config.set(trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    }
    config.validate();
    return config;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string(), path.string());
    return parse(in);
}

void Config::write(std::ostream& out) const {
    out << "cutoff = " << cutoff.to_string() << '\n';
    if (reference_time) out << "reference_time = " << reference_time->to_string() << '\n';
    out << "n_sims = " << n_sims << '\n'
        << "seed = " << seed << '\n'
        << "null_divisor = " << nlohmann::json(null_divisor).dump() << '\n'
        << "modified_null_divisor = " << nlohmann::json(modified_null_divisor).dump() << '\n'
        << "logistic_l2 = " << nlohmann::json(logistic_l2).dump() << '\n'
        << "augmentation_weight = " << nlohmann::json(augmentation_weight).dump() << '\n'
        << "threshold = " << threshold << '\n'
        << "threshold_inclusive = " << (threshold_inclusive ? "true" : "false") << '\n'
        << "round_cap = " << round_cap << '\n'
        << "strict_roster = " << (strict_roster ? "true" : "false") << '\n'
        << "allow_incomplete = " << (allow_incomplete ? "true" : "false") << '\n';
}

void to_json(nlohmann::json& j, const Config& c) {
    j = nlohmann::json{{"cutoff", c.cutoff.to_string()},
                       {"n_sims", c.n_sims},
                       {"seed", c.seed},
                       {"null_divisor", c.null_divisor},
                       {"modified_null_divisor", c.modified_null_divisor},
                       {"logistic_l2", c.logistic_l2},
                       {"augmentation_weight", c.augmentation_weight},
                       {"threshold", c.threshold},
                       {"threshold_inclusive", c.threshold_inclusive},
                       {"round_cap", c.round_cap},
                       {"strict_roster", c.strict_roster},
                       {"allow_incomplete", c.allow_incomplete}};
    if (c.reference_time) j["reference_time"] = c.reference_time->to_string();
}

void from_json(const nlohmann::json& j, Config& c) {
    c = Config{};
    c.cutoff = Timestamp::parse(j.at("cutoff").get<std::string>());
    if (j.contains("reference_time")) c.reference_time = Timestamp::parse(j.at("reference_time").get<std::string>());
    c.n_sims = j.value("n_sims", c.n_sims);
    c.seed = j.value("seed", c.seed);
    c.null_divisor = j.value("null_divisor", c.null_divisor);
    c.modified_null_divisor = j.value("modified_null_divisor", c.modified_null_divisor);
    c.logistic_l2 = j.value("logistic_l2", c.logistic_l2);
    c.augmentation_weight = j.value("augmentation_weight", c.augmentation_weight);
    c.threshold = j.value("threshold", c.threshold);
    c.threshold_inclusive = j.value("threshold_inclusive", c.threshold_inclusive);
    c.round_cap = j.value("round_cap", c.round_cap);
    c.strict_roster = j.value("strict_roster", c.strict_roster);
    c.allow_incomplete = j.value("allow_incomplete", c.allow_incomplete);
}

} // namespace darts271
