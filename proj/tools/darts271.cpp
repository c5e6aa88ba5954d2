#include "darts271/bundle.hpp"
#include "darts271/error.hpp"
#include "darts271/evaluation.hpp"
#include "darts271/ingest.hpp"
#include "darts271/service.hpp"
#include "darts271/synthgen.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <pthread.h>
#include <thread>
#include <unistd.h>
#include <fstream>
#include <iostream>

namespace {

using namespace darts271;
using nlohmann::json;

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string(), path.string());
    out << j.dump(2) << '\n';
}

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> names;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!piece.empty()) names.push_back(piece);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return names;
}

struct ConfigFlags {
    std::string config_path;
    std::vector<std::string> overrides;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Config file (key = value per line)");
        cmd->add_option("--set", overrides, "Override a config key: --set key=value (repeatable)");
    }

    Config resolve() const {
        Config config = config_path.empty() ? Config{} : Config::load(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw Error(ErrorCode::InvalidConfig, "--set expects key=value", kv);
            config.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        config.validate();
        return config;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Darts 271 win-probability workbench"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic season");
    int gen_players = 20, gen_games = 1000, gen_oracle = 100000;
    std::uint64_t gen_seed = 1;
    std::string gen_out, gen_start = "2025-01-20", gen_end = "2025-05-01";
    double gen_train_fraction = 0.7;
    gen->add_option("--players", gen_players, "Number of players")->check(CLI::Range(2, 1000));
    gen->add_option("--games", gen_games, "Number of games")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_option("--oracle-replicas", gen_oracle, "Replicas per pair for ground truth (0 skips)");
    gen->add_option("--start", gen_start, "Season start");
    gen->add_option("--end", gen_end, "Season end");
    gen->add_option("--train-fraction", gen_train_fraction, "Cutoff quantile written to config.txt")->check(CLI::Range(0.0, 1.0));

    // fit
    auto* fit = app.add_subcommand("fit", "Fit every model on the training split");
    std::string fit_data, fit_out;
    ConfigFlags fit_config;
    fit->add_option("--data", fit_data, "Throw-level CSV")->required();
    fit->add_option("--out", fit_out, "Model bundle to write")->required();
    fit_config.attach(fit);

    // predict
    auto* predict = app.add_subcommand("predict", "Win probability for one game state");
    std::string pred_model, pred_p1, pred_p2, pred_name;
    int pred_s1 = 0, pred_s2 = 0;
    predict->add_option("--model", pred_model, "Model bundle")->required();
    predict->add_option("--p1", pred_p1, "Player 1")->required();
    predict->add_option("--p2", pred_p2, "Player 2")->required();
    predict->add_option("--s1", pred_s1, "Player 1 score")->check(CLI::NonNegativeNumber);
    predict->add_option("--s2", pred_s2, "Player 2 score")->check(CLI::NonNegativeNumber);
    predict->add_option("--model-name", pred_name, "Only this model");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Brier tables and betting games on the test split");
    std::string eval_model, eval_data, eval_out, eval_models, eval_text;
    evaluate->add_option("--model", eval_model, "Model bundle")->required();
    evaluate->add_option("--data", eval_data, "Throw-level CSV")->required();
    evaluate->add_option("--out", eval_out, "report.json")->required();
    evaluate->add_option("--models", eval_models, "Comma-separated model names");
    evaluate->add_option("--text", eval_text, "Also write aligned text tables here");

    // stats
    auto* stats = app.add_subcommand("stats", "Dataset summary statistics");
    std::string stats_data, stats_out, stats_csv_dir;
    bool stats_incomplete = false;
    stats->add_option("--data", stats_data, "Throw-level CSV")->required();
    stats->add_option("--out", stats_out, "stats.json")->required();
    stats->add_option("--csv-dir", stats_csv_dir, "Also write one CSV per series here");
    stats->add_flag("--allow-incomplete", stats_incomplete, "Keep unfinished games");

    // serve
    auto* serve = app.add_subcommand("serve", "Run the live scoring API");
    std::string serve_model, serve_host = "0.0.0.0", serve_journal, serve_static;
    int serve_port = 8271;
    bool serve_open_roster = false;
    serve->add_option("--model", serve_model, "Model bundle")->required();
    serve->add_option("--port", serve_port, "Port")->check(CLI::Range(0, 65535));
    serve->add_option("--host", serve_host, "Bind address");
    serve->add_option("--journal", serve_journal, "Append-only journal of accepted rounds");
    serve->add_option("--static", serve_static, "Directory of scoreboard assets served at /");
    serve->add_flag("--open-roster", serve_open_roster, "Accept players outside the bundle roster");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"code", "UsageError"}, {"message", e.what()}, {"detail", e.get_name()}}.dump() << '\n';
        return 1;
    }

    try {
        if (*gen) {
            synthgen::SeasonPlan plan;
            plan.players = synthgen::default_profiles(gen_players, gen_seed);
            plan.n_games = gen_games;
            plan.seed = gen_seed;
            plan.start = Timestamp::parse(gen_start);
            plan.end = Timestamp::parse(gen_end);
            plan.oracle_replicas = gen_oracle;
            const auto season = synthgen::generate_season(plan);
            std::filesystem::create_directories(gen_out);
            {
                std::ofstream out(std::filesystem::path(gen_out) / "season.csv");
                write_csv(out, season.dataset);
            }
            write_json(std::filesystem::path(gen_out) / "ground_truth.json", synthgen::to_json(season.truth));
            Config config;
            config.cutoff = synthgen::season_quantile(plan, gen_train_fraction);
            config.seed = gen_seed;
            std::ofstream cfg(std::filesystem::path(gen_out) / "config.txt");
            config.write(cfg);
            std::cout << json{{"games", season.dataset.games.size()}, {"players", season.dataset.roster.size()},
                              {"cutoff", config.cutoff.to_string()}}.dump()
                      << '\n';
        } else if (*fit) {
            const Config config = fit_config.resolve();
            ParseOptions options{config.rules(), config.allow_incomplete};
            const auto dataset = parse_csv_file(fit_data, options);
            const auto bundle = fit_bundle(dataset, config);
            save_bundle(bundle, fit_out);
            std::cout << json{{"players", bundle.roster.size()}, {"cutoff", config.cutoff.to_string()}}.dump() << '\n';
        } else if (*predict) {
            const auto bundle = load_bundle(pred_model);
            const auto names = pred_name.empty() ? ModelBundle::all_model_names() : std::vector<std::string>{pred_name};
            std::cout << json{{"p1", pred_p1}, {"p2", pred_p2}, {"s1", pred_s1}, {"s2", pred_s2},
                              {"probabilities", predict_all(bundle, names, pred_p1, pred_p2, pred_s1, pred_s2)}}
                             .dump(2)
                      << '\n';
        } else if (*evaluate) {
            const auto bundle = load_bundle(eval_model);
            ParseOptions options{bundle.config.rules(), false};
            const auto dataset = parse_csv_file(eval_data, options);
            const auto test = split(dataset, bundle.config.cutoff).second;
            if (test.empty()) throw Error(ErrorCode::EmptyFilter, "no test games on or after the cutoff");
            const auto names = eval_models.empty() ? ModelBundle::default_model_names() : split_names(eval_models);
            std::vector<evaluation::PredictionTrace> traces;
            for (const auto& model : bundle.models(names)) {
                traces.push_back(evaluation::build_trace(model, test, bundle.config.rules()));
            }
            const auto report = evaluation::build_report(traces);
            write_json(eval_out, evaluation::to_json(report));
            if (!eval_text.empty()) {
                std::ofstream out(eval_text);
                out << evaluation::render_text(report);
            }
            std::cout << evaluation::render_text(report);
        } else if (*stats) {
            ParseOptions options;
            options.allow_incomplete = stats_incomplete;
            const auto dataset = parse_csv_file(stats_data, options);
            const auto summary = summarize(dataset);
            write_json(stats_out, to_json(summary));
            if (!stats_csv_dir.empty()) {
                std::filesystem::create_directories(stats_csv_dir);
                write_stats_csv(summary, stats_csv_dir, "stats");
            }
        } else if (*serve) {
            service::ServiceOptions options;
            auto bundle = load_bundle(serve_model);
            options.strict_roster = bundle.config.strict_roster && !serve_open_roster;
            if (!serve_journal.empty()) options.journal = serve_journal;
            // Signals go to a waiter thread; every other thread, including the server pool, keeps them blocked.
            sigset_t signals;
            sigemptyset(&signals);
            sigaddset(&signals, SIGINT);
            sigaddset(&signals, SIGTERM);
            pthread_sigmask(SIG_BLOCK, &signals, nullptr);
            service::LiveService live(std::move(bundle), options);
            service::ApiServer server(live, serve_static.empty() ? std::nullopt
                                                                 : std::optional<std::filesystem::path>(serve_static));
            const int port = server.bind(serve_host, serve_port);
            std::thread waiter([&] {
                int received = 0;
                sigwait(&signals, &received);
                server.stop();
            });
            std::cerr << "listening on " << serve_host << ':' << port << '\n';
            server.listen();
            kill(getpid(), SIGTERM);
            waiter.join();
        }
    } catch (const Error& e) {
        std::cerr << json{{"code", std::string(to_string(e.code()))}, {"message", e.what()}, {"detail", e.detail()}}.dump()
                  << '\n';
        return is_validation_error(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"code", "Internal"}, {"message", e.what()}, {"detail", ""}}.dump() << '\n';
        return 2;
    }
    return 0;
}
