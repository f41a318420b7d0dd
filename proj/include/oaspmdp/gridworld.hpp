#pragma once

#include "oaspmdp/rng.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oasp {

/// Grid coordinate; origin at the lower-left, y grows upwards.
struct Cell {
    int x = 0;
    int y = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

enum class Action : std::uint8_t { up, down, left, right };

inline constexpr std::array<Action, 4> all_actions{Action::up, Action::down, Action::left, Action::right};

std::string_view to_string(Action a);
std::optional<Action> action_from_string(std::string_view s);

/// The two directions perpendicular to `a`.
std::array<Action, 2> orthogonal(Action a);

/// Adjacent cell in direction `a`, ignoring bounds.
Cell neighbor(Cell c, Action a);

using CellSet = std::set<Cell>;

/// Thrown when a grid configuration breaks its invariants.
class GridError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridConfig {
    int width = 1;
    int height = 1;
    CellSet walls;
    Cell start{};
    Cell goal{};
    double p_intended = 1.0;
    double p_orthogonal = 0.0;  // for each of the two perpendicular directions

    bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
    bool is_wall(Cell c) const { return walls.count(c) != 0; }
    /// In bounds and not a wall.
    bool is_free(Cell c) const { return in_bounds(c) && !is_wall(c); }

    /// Throws GridError unless probabilities sum to one, start and goal are
    /// free, and the goal is reachable from the start.
    void validate() const;

    friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

/// Empty width x height grid with start at the lower-left and goal at the
/// upper-right corner.
GridConfig make_open_grid(int width, int height, double p_intended);

struct Phase {
    int start_episode = 0;
    GridConfig config;
};

/// Piecewise-constant environment over episodes.
class Schedule {
public:
    /// Throws GridError if phases are empty, the first phase does not start
    /// at episode 0, or start episodes are not strictly increasing.
    explicit Schedule(std::vector<Phase> phases);

    /// Config of the latest phase with start_episode <= episode.
    const GridConfig& config_at(int episode) const;
    /// Index of that phase.
    std::size_t phase_index(int episode) const;

    const std::vector<Phase>& phases() const noexcept { return phases_; }

private:
    std::vector<Phase> phases_;
};

inline const GridConfig& config_at(const Schedule& s, int episode) { return s.config_at(episode); }

inline constexpr double step_reward = -1.0;
inline constexpr double goal_reward = 100.0;

struct StepOutcome {
    Cell next;
    double reward = 0.0;
    bool terminal = false;
};

/// One stochastic transition. Draws exactly one uniform from `rng`.
/// Throws std::logic_error when `s` is a wall, off-grid, or the goal.
StepOutcome step(const GridConfig& config, Cell s, Action a, Rng& rng);

/// Movement direction actually realized for intended action `a` given a
/// uniform draw `u` in [0, 1).
Action realized_direction(const GridConfig& config, Action a, double u);

inline constexpr int wall_generation_attempts = 10000;

/// floor(ratio * width * height) walls sampled uniformly without replacement
/// from cells other than start and goal, resampled until the goal is
/// reachable. Throws GridError after wall_generation_attempts failures.
CellSet generate_walls(int width, int height, double ratio, Cell start, Cell goal, Rng& rng);

/// Breadth-first closure from start over free cells.
CellSet reachable_cells(const GridConfig& config);

/// Shortest start-to-goal path length. Throws GridError if unreachable.
int optimal_steps(const GridConfig& config);

/// ASCII map: 'W' wall, 'S' start, 'G' goal, '.' free; top row first.
std::string dump_ascii(const GridConfig& config);

/// Inverse of dump_ascii. Probabilities are not part of the map and are
/// taken from the arguments. Throws GridError on malformed maps.
GridConfig load_ascii(std::string_view map, double p_intended, double p_orthogonal);

}  // namespace oasp
