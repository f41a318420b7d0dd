#include "oaspmdp/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <algorithm>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace oasp {

std::string_view to_string(AgentKind k) { return k == AgentKind::baseline ? "baseline" : "oasp"; }

std::optional<AgentKind> agent_kind_from_string(std::string_view s) {
    if (s == "baseline") return AgentKind::baseline;
    if (s == "oasp") return AgentKind::oasp;
    return std::nullopt;
}

double rmsd(const QTable& prev, const QTable& curr) {
    const auto& a = prev.entries();
    const auto& b = curr.entries();
    auto ia = a.begin();
    auto ib = b.begin();
    double sum = 0.0;
    std::size_t keys = 0;
    while (ia != a.end() || ib != b.end()) {
        double d;
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            d = ia->second;
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            d = ib->second;
            ++ib;
        } else {
            d = ib->second - ia->second;
            ++ia;
            ++ib;
        }
        sum += d * d;
        ++keys;
    }
    return keys == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(keys));
}

// ---------------------------------------------------------------------------

ScenarioSpec ScenarioSpec::walls_test() { return ScenarioSpec{}; }

ScenarioSpec ScenarioSpec::probs_test() {
    ScenarioSpec s;
    s.name = "probs";
    s.wall_ratios = {0.25, 0.25, 0.25};
    s.p_intended = {0.5, 0.75, 0.9};
    s.resample_walls = false;
    return s;
}

void ScenarioSpec::validate() const {
    if (width <= 0 || height <= 0) throw std::invalid_argument("grid dimensions must be positive");
    if (width * height < 2) throw std::invalid_argument("grid needs distinct start and goal cells");
    if (episodes < 1) throw std::invalid_argument("episodes must be at least 1");
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    params.validate();
    const std::size_t phases = change_episodes.size() + 1;
    if (wall_ratios.size() != phases) {
        throw std::invalid_argument("expected " + std::to_string(phases) + " wall ratios, got " +
                                    std::to_string(wall_ratios.size()));
    }
    if (p_intended.size() != phases) {
        throw std::invalid_argument("expected " + std::to_string(phases) + " transition probabilities, got " +
                                    std::to_string(p_intended.size()));
    }
    int prev = 0;
    for (int c : change_episodes) {
        if (c <= prev) throw std::invalid_argument("change episodes must be positive and strictly increasing");
        prev = c;
    }
    for (double r : wall_ratios) {
        if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("wall ratios must lie in [0, 1)");
    }
    for (double p : p_intended) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("transition probabilities must lie in [0, 1]");
    }
}

Schedule build_schedule(const ScenarioSpec& spec, std::uint64_t trial_seed) {
    std::vector<Phase> phases;
    for (std::size_t k = 0; k < spec.wall_ratios.size(); ++k) {
        Phase phase;
        phase.start_episode = k == 0 ? 0 : spec.change_episodes[k - 1];
        phase.config = make_open_grid(spec.width, spec.height, spec.p_intended[k]);
        const bool redraw = k == 0 || spec.resample_walls || spec.wall_ratios[k] != spec.wall_ratios[k - 1];
        if (redraw) {
            Rng layout = Rng::derive(trial_seed, "layout", k);
            phase.config.walls = generate_walls(spec.width, spec.height, spec.wall_ratios[k], phase.config.start,
                                                phase.config.goal, layout);
        } else {
            phase.config.walls = phases.back().config.walls;
        }
        phase.config.validate();
        phases.push_back(std::move(phase));
    }
    return Schedule(std::move(phases));
}

TrialResult run_trial(const ScenarioSpec& spec, std::uint64_t trial_seed) {
    spec.validate();
    TrialResult result;
    result.seed = trial_seed;
    result.schedule = build_schedule(spec, trial_seed);
    for (const Phase& phase : result.schedule.phases()) {
        const int steps = optimal_steps(phase.config);
        result.reference_steps.push_back(steps);
        result.reference_return.push_back(goal_reward + step_reward * steps);
    }

    QLearningAgent baseline(spec.params, spec.width, spec.height);
    OaspAgent oasp(spec.params);
    // Both agents see the same named streams; their draws diverge only as
    // their decisions do.
    Rng baseline_env = Rng::derive(trial_seed, "env");
    Rng baseline_policy = Rng::derive(trial_seed, "policy");
    Rng oasp_env = baseline_env;
    Rng oasp_policy = baseline_policy;

    result.records.reserve(static_cast<std::size_t>(spec.episodes) * 2);
    std::size_t phase = 0;
    for (int e = 0; e < spec.episodes; ++e) {
        const std::size_t now = result.schedule.phase_index(e);
        const GridConfig& config = result.schedule.phases()[now].config;

        QTable before = baseline.q();
        if (now != phase) {
            baseline.reset();
            phase = now;
        }
        EpisodeOutcome out = run_episode(baseline, config, baseline_env, baseline_policy);
        result.records.push_back(
            {e, AgentKind::baseline, rmsd(before, baseline.q()), out.return_, out.steps, baseline.pair_count()});

        before = oasp.q();
        out = run_episode(oasp, config, oasp_env, oasp_policy);
        result.records.push_back({e, AgentKind::oasp, rmsd(before, oasp.q()), out.return_, out.steps, oasp.pair_count()});
    }
    result.final_programs = oasp.programs();
    result.final_oasp_q = oasp.q();
    return result;
}

std::vector<TrialResult> run_scenario(const ScenarioSpec& spec, std::uint64_t base_seed, unsigned threads) {
    spec.validate();
    std::vector<TrialResult> results(static_cast<std::size_t>(spec.trials));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < results.size(); i = next++) {
            try {
                results[i] = run_trial(spec, base_seed + i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(results.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

// ---------------------------------------------------------------------------

double CurveTable::window_mean(AgentKind kind, int first, int last, double CurveRow::*field) const {
    if (first < 0 || last > episodes() || first >= last) throw std::out_of_range("empty or out-of-range window");
    double sum = 0.0;
    for (int e = first; e < last; ++e) sum += at(e, kind).*field;
    return sum / (last - first);
}

CurveTable aggregate(const std::vector<TrialResult>& results) {
    if (results.empty()) throw std::invalid_argument("nothing to aggregate");
    const std::size_t n = results.front().records.size();
    for (const auto& r : results) {
        if (r.records.size() != n) throw std::invalid_argument("trials have different episode counts");
    }

    CurveTable table;
    table.rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        CurveRow& row = table.rows[i];
        row.episode = results.front().records[i].episode;
        row.agent = results.front().records[i].agent;
        for (const auto& r : results) {
            const EpisodeRecord& rec = r.records[i];
            if (rec.episode != row.episode || rec.agent != row.agent) {
                throw std::invalid_argument("trials disagree on record layout");
            }
            const std::size_t phase = r.schedule.phase_index(rec.episode);
            row.rmsd += rec.rmsd;
            row.return_ += rec.return_;
            row.steps += rec.steps;
            row.pairs += static_cast<double>(rec.pair_count);
            row.ref_steps += r.reference_steps[phase];
            row.ref_return += r.reference_return[phase];
        }
        const auto k = static_cast<double>(results.size());
        row.rmsd /= k;
        row.return_ /= k;
        row.steps /= k;
        row.pairs /= k;
        row.ref_steps /= k;
        row.ref_return /= k;
    }
    return table;
}

namespace {

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void write_csv(const CurveTable& table, std::ostream& out) {
    out << curves_header << '\n';
    for (const CurveRow& r : table.rows) {
        out << r.episode << ',' << to_string(r.agent) << ',' << g6(r.rmsd) << ',' << g6(r.return_) << ','
            << g6(r.steps) << ',' << g6(r.pairs) << ',' << g6(r.ref_steps) << ',' << g6(r.ref_return) << '\n';
    }
}

void write_csv(const CurveTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    write_csv(table, out);
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

CurveTable read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != curves_header) throw std::runtime_error("curves CSV: missing header");
    CurveTable table;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        std::vector<std::string> f;
        std::istringstream fields(line);
        for (std::string cell; std::getline(fields, cell, ',');) f.push_back(cell);
        auto fail = [&] { return std::runtime_error("curves CSV: malformed row " + std::to_string(row)); };
        if (f.size() != 8) throw fail();
        auto kind = agent_kind_from_string(f[1]);
        if (!kind) throw fail();
        try {
            table.rows.push_back({std::stoi(f[0]), *kind, std::stod(f[2]), std::stod(f[3]), std::stod(f[4]),
                                  std::stod(f[5]), std::stod(f[6]), std::stod(f[7])});
        } catch (const std::logic_error&) {
            throw fail();
        }
    }
    return table;
}

}  // namespace oasp
