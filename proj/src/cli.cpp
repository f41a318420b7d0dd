#include "oaspmdp/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>

namespace oasp::cli {

ScenarioSpec RunConfig::to_spec() const {
    ScenarioSpec spec;
    if (scenario == "walls") {
        spec = ScenarioSpec::walls_test();
    } else if (scenario == "probs") {
        spec = ScenarioSpec::probs_test();
    } else {
        throw std::invalid_argument("unknown scenario '" + scenario + "'");
    }
    spec.width = width;
    spec.height = height;
    spec.episodes = episodes;
    spec.trials = trials;
    spec.params = params;
    spec.change_episodes = changes;
    if (!wall_ratios.empty()) spec.wall_ratios = wall_ratios;
    if (!probs.empty()) spec.p_intended = probs;
    spec.validate();
    return spec;
}

namespace {

void parse_grid(const std::string& text, RunConfig& config) {
    int w = 0;
    int h = 0;
    char x = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%d%c%d%c", &w, &x, &h, &extra) != 3 || (x != 'x' && x != 'X') || w <= 0 ||
        h <= 0) {
        throw ConfigError("--grid expects WxH with positive integers, got '" + text + "'");
    }
    config.width = w;
    config.height = h;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& argv) {
    RunConfig config;
    if (const char* env = std::getenv("OASPMDP_OUT"); env && *env) config.out = env;

    CLI::App app{"Online ASP state-set construction around tabular Q-Learning, on non-stationary grid worlds"};
    app.set_config("--config", "", "key = value file; explicit flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    std::string grid;
    std::string out = config.out.string();
    app.add_option("--scenario", config.scenario, "walls | probs")
        ->check(CLI::IsMember({"walls", "probs"}));
    app.add_option("--episodes", config.episodes, "episodes per trial")->check(CLI::PositiveNumber);
    app.add_option("--trials", config.trials, "independent trials")->check(CLI::PositiveNumber);
    app.add_option("--seed", config.seed, "base seed; trial i uses seed + i");
    app.add_option("--threads", config.threads, "worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    app.add_option("--alpha", config.params.alpha, "learning rate in (0, 1]");
    app.add_option("--gamma", config.params.gamma, "discount factor in [0, 1)");
    app.add_option("--epsilon", config.params.epsilon, "exploration rate in [0, 1]");
    app.add_option("--max-steps", config.params.max_steps, "per-episode step cap");
    app.add_option("--grid", grid, "grid size WxH");
    app.add_option("--wall-ratios", config.wall_ratios, "wall ratio per phase, e.g. 0,0.1,0.25")->delimiter(',');
    app.add_option("--probs", config.probs, "intended-move probability per phase, e.g. 0.5,0.75,0.9")
        ->delimiter(',');
    app.add_option("--changes", config.changes, "episodes at which the environment changes, e.g. 1000,2000")
        ->delimiter(',');
    app.add_option("--out", out, "output directory (default $OASPMDP_OUT or 'out')");

    std::vector<const char*> args;
    args.reserve(argv.size());
    for (const auto& a : argv) args.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(args.size()), args.data());
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw ConfigError(std::string(e.what()) + "\n" + app.help());
    }

    if (!grid.empty()) parse_grid(grid, config);
    config.out = out;
    try {
        config.to_spec();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(e.what()) + "\nRun with --help for usage.");
    }
    return config;
}

void run(const RunConfig& config, std::ostream& log) {
    const ScenarioSpec spec = config.to_spec();
    const auto results = run_scenario(spec, config.seed, config.threads);
    const CurveTable curves = aggregate(results);

    const auto dir = config.out / spec.name;
    std::filesystem::create_directories(dir);
    write_csv(curves, dir / "curves.csv");

    const TrialResult& first = results.front();
    const auto& phases = first.schedule.phases();
    for (std::size_t k = 0; k < phases.size(); ++k) {
        std::ofstream grid(dir / ("grid_phase" + std::to_string(k) + ".txt"), std::ios::binary);
        grid << dump_ascii(phases[k].config);
        if (!grid) throw std::runtime_error("cannot write grid map for phase " + std::to_string(k));
    }
    const auto programs = dir / "programs";
    std::filesystem::remove_all(programs);
    std::filesystem::create_directories(programs);
    for (const auto& [cell, program] : first.final_programs) {
        std::ofstream lp(programs / (state_atom(cell).name() + ".lp"), std::ios::binary);
        lp << asp::render_program(program);
        if (!lp) throw std::runtime_error("cannot write programs");
    }
    {
        std::ofstream q(dir / "qtable.csv", std::ios::binary);
        write_qtable_csv(first.final_oasp_q, q);
        if (!q) throw std::runtime_error("cannot write qtable.csv");
    }

    const int last = curves.episodes();
    const int first_ep = std::max(0, last - 100);
    for (AgentKind kind : {AgentKind::baseline, AgentKind::oasp}) {
        char line[160];
        std::snprintf(line, sizeof line, "%-8s last %d episodes: mean steps %.2f, mean return %.2f, pairs %.0f",
                      std::string(to_string(kind)).c_str(), last - first_ep,
                      curves.window_mean(kind, first_ep, last, &CurveRow::steps),
                      curves.window_mean(kind, first_ep, last, &CurveRow::return_),
                      curves.at(last - 1, kind).pairs);
        log << line << '\n';
    }
    log << "wrote " << (dir / "curves.csv").string() << '\n';
}

int main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_args(argv);
    } catch (const HelpRequested& h) {
        out << h.what();
        return exit_ok;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_config_error;
    }
    try {
        run(config, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_runtime_error;
    }
    return exit_ok;
}

}  // namespace oasp::cli
