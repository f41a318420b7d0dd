#include "oaspmdp/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace oasp {

std::string_view to_string(Action a) {
    switch (a) {
        case Action::up: return "up";
        case Action::down: return "down";
        case Action::left: return "left";
        case Action::right: return "right";
    }
    return "?";
}

std::optional<Action> action_from_string(std::string_view s) {
    for (Action a : all_actions) {
        if (to_string(a) == s) return a;
    }
    return std::nullopt;
}

std::array<Action, 2> orthogonal(Action a) {
    if (a == Action::up || a == Action::down) return {Action::left, Action::right};
    return {Action::up, Action::down};
}

Cell neighbor(Cell c, Action a) {
    switch (a) {
        case Action::up: return {c.x, c.y + 1};
        case Action::down: return {c.x, c.y - 1};
        case Action::left: return {c.x - 1, c.y};
        case Action::right: return {c.x + 1, c.y};
    }
    return c;
}

void GridConfig::validate() const {
    if (width <= 0 || height <= 0) throw GridError("grid dimensions must be positive");
    if (!(p_intended >= 0.0 && p_orthogonal >= 0.0) ||
        std::abs(p_intended + 2.0 * p_orthogonal - 1.0) > 1e-12) {
        throw GridError("transition probabilities must satisfy p_intended + 2*p_orthogonal = 1");
    }
    if (!in_bounds(start) || !in_bounds(goal)) throw GridError("start or goal outside the grid");
    if (is_wall(start) || is_wall(goal)) throw GridError("start and goal cannot hold walls");
    for (Cell w : walls) {
        if (!in_bounds(w)) throw GridError("wall outside the grid");
    }
    if (reachable_cells(*this).count(goal) == 0) throw GridError("goal unreachable from start");
}

GridConfig make_open_grid(int width, int height, double p_intended) {
    GridConfig c;
    c.width = width;
    c.height = height;
    c.start = {0, 0};
    c.goal = {width - 1, height - 1};
    c.p_intended = p_intended;
    c.p_orthogonal = (1.0 - p_intended) / 2.0;
    return c;
}

// ---------------------------------------------------------------------------

Schedule::Schedule(std::vector<Phase> phases) : phases_(std::move(phases)) {
    if (phases_.empty()) throw GridError("schedule needs at least one phase");
    if (phases_.front().start_episode != 0) throw GridError("first phase must start at episode 0");
    for (std::size_t i = 1; i < phases_.size(); ++i) {
        if (phases_[i].start_episode <= phases_[i - 1].start_episode) {
            throw GridError("phase start episodes must be strictly increasing");
        }
    }
}

std::size_t Schedule::phase_index(int episode) const {
    auto it = std::upper_bound(phases_.begin(), phases_.end(), episode,
                               [](int e, const Phase& p) { return e < p.start_episode; });
    return it == phases_.begin() ? 0 : static_cast<std::size_t>(it - phases_.begin() - 1);
}

const GridConfig& Schedule::config_at(int episode) const { return phases_[phase_index(episode)].config; }

// ---------------------------------------------------------------------------

Action realized_direction(const GridConfig& config, Action a, double u) {
    if (u < config.p_intended) return a;
    auto side = orthogonal(a);
    return u < config.p_intended + config.p_orthogonal ? side[0] : side[1];
}

StepOutcome step(const GridConfig& config, Cell s, Action a, Rng& rng) {
    if (!config.is_free(s)) throw std::logic_error("step from a wall or off-grid cell");
    if (s == config.goal) throw std::logic_error("step from the goal");

    Cell dest = neighbor(s, realized_direction(config, a, rng.uniform()));
    if (!config.is_free(dest)) dest = s;

    StepOutcome out{dest, step_reward, dest == config.goal};
    if (out.terminal) out.reward += goal_reward;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// BFS distances from start; -1 for cells that cannot be reached.
std::vector<int> distances(const GridConfig& config) {
    std::vector<int> dist(static_cast<std::size_t>(config.width * config.height), -1);
    auto index = [&](Cell c) { return static_cast<std::size_t>(c.y * config.width + c.x); };
    if (!config.is_free(config.start)) return dist;

    std::deque<Cell> frontier{config.start};
    dist[index(config.start)] = 0;
    while (!frontier.empty()) {
        Cell c = frontier.front();
        frontier.pop_front();
        for (Action a : all_actions) {
            Cell n = neighbor(c, a);
            if (config.is_free(n) && dist[index(n)] < 0) {
                dist[index(n)] = dist[index(c)] + 1;
                frontier.push_back(n);
            }
        }
    }
    return dist;
}

}  // namespace

CellSet reachable_cells(const GridConfig& config) {
    CellSet out;
    auto dist = distances(config);
    for (int y = 0; y < config.height; ++y) {
        for (int x = 0; x < config.width; ++x) {
            if (dist[static_cast<std::size_t>(y * config.width + x)] >= 0) out.insert({x, y});
        }
    }
    return out;
}

int optimal_steps(const GridConfig& config) {
    if (!config.in_bounds(config.goal)) throw GridError("goal outside the grid");
    int d = distances(config)[static_cast<std::size_t>(config.goal.y * config.width + config.goal.x)];
    if (d < 0) throw GridError("goal unreachable from start");
    return d;
}

CellSet generate_walls(int width, int height, double ratio, Cell start, Cell goal, Rng& rng) {
    if (!(ratio >= 0.0 && ratio < 1.0)) throw GridError("wall ratio must lie in [0, 1)");
    // the epsilon absorbs representation error, e.g. 0.1 * 100
    const auto count = static_cast<std::size_t>(std::floor(ratio * width * height + 1e-9));

    std::vector<Cell> candidates;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            Cell c{x, y};
            if (c != start && c != goal) candidates.push_back(c);
        }
    }
    if (count > candidates.size()) throw GridError("wall ratio leaves no room for start and goal");

    GridConfig probe;
    probe.width = width;
    probe.height = height;
    probe.start = start;
    probe.goal = goal;
    for (int attempt = 0; attempt < wall_generation_attempts; ++attempt) {
        // partial Fisher-Yates: the first `count` entries are the sample
        for (std::size_t i = 0; i < count; ++i) {
            auto j = i + static_cast<std::size_t>(rng.below(candidates.size() - i));
            std::swap(candidates[i], candidates[j]);
        }
        probe.walls = CellSet(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(count));
        if (reachable_cells(probe).count(goal)) return probe.walls;
    }
    throw GridError("wall generation failed: goal unreachable after " +
                    std::to_string(wall_generation_attempts) + " attempts");
}

// ---------------------------------------------------------------------------

std::string dump_ascii(const GridConfig& config) {
    std::string out;
    for (int y = config.height - 1; y >= 0; --y) {
        for (int x = 0; x < config.width; ++x) {
            Cell c{x, y};
            if (c == config.start) out += 'S';
            else if (c == config.goal) out += 'G';
            else if (config.is_wall(c)) out += 'W';
            else out += '.';
        }
        out += '\n';
    }
    return out;
}

GridConfig load_ascii(std::string_view map, double p_intended, double p_orthogonal) {
    std::vector<std::string> rows;
    std::istringstream in{std::string(map)};
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) rows.push_back(line);
    }
    if (rows.empty()) throw GridError("empty grid map");

    GridConfig config;
    config.height = static_cast<int>(rows.size());
    config.width = static_cast<int>(rows.front().size());
    config.p_intended = p_intended;
    config.p_orthogonal = p_orthogonal;
    bool have_start = false;
    bool have_goal = false;
    for (int r = 0; r < config.height; ++r) {
        const std::string& row = rows[static_cast<std::size_t>(r)];
        if (static_cast<int>(row.size()) != config.width) throw GridError("ragged grid map");
        const int y = config.height - 1 - r;
        for (int x = 0; x < config.width; ++x) {
            switch (row[static_cast<std::size_t>(x)]) {
                case 'W': config.walls.insert({x, y}); break;
                case 'S':
                    if (have_start) throw GridError("grid map has two starts");
                    config.start = {x, y};
                    have_start = true;
                    break;
                case 'G':
                    if (have_goal) throw GridError("grid map has two goals");
                    config.goal = {x, y};
                    have_goal = true;
                    break;
                case '.': break;
                default: throw GridError(std::string("unknown grid map symbol '") + row[static_cast<std::size_t>(x)] + "'");
            }
        }
    }
    if (!have_start || !have_goal) throw GridError("grid map needs exactly one S and one G");
    return config;
}

}  // namespace oasp
