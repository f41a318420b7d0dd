#pragma once

#include "oaspmdp/gridworld.hpp"
#include "oaspmdp/qlearn.hpp"
#include "oaspmdp/rng.hpp"

#include <cstddef>

namespace oasp {

/// Learner interacting with a grid world one transition at a time.
class Agent {
public:
    explicit Agent(LearnParams params) : params_(params) { params_.validate(); }
    virtual ~Agent() = default;

    virtual Action select_action(Cell s, Rng& rng) = 0;
    /// Called once per executed transition, after the environment moved.
    virtual void observe(Cell s, Action a, const StepOutcome& outcome) = 0;

    virtual const QTable& q() const = 0;
    /// Number of (state, action) pairs the agent holds values for.
    virtual std::size_t pair_count() const = 0;

    const LearnParams& params() const noexcept { return params_; }

private:
    LearnParams params_;
};

/// Plain Q-Learning over a fixed dense table of width * height * 4 entries,
/// wall cells included.
class QLearningAgent final : public Agent {
public:
    QLearningAgent(LearnParams params, int width, int height);

    Action select_action(Cell s, Rng& rng) override;
    void observe(Cell s, Action a, const StepOutcome& outcome) override;

    const QTable& q() const override { return q_; }
    std::size_t pair_count() const override { return static_cast<std::size_t>(width_ * height_) * 4; }

    /// Back to an all-zero table.
    void reset();
    /// Replaces the table, e.g. to start from another agent's knowledge.
    void load(QTable q) { q_ = std::move(q); }

private:
    int width_;
    int height_;
    QTable q_;
};

struct EpisodeOutcome {
    double return_ = 0.0;
    int steps = 0;
    bool reached_goal = false;
};

/// Runs from the start cell until the goal or params().max_steps transitions.
/// Environment dynamics draw from `env_rng`, action selection from
/// `policy_rng`.
EpisodeOutcome run_episode(Agent& agent, const GridConfig& config, Rng& env_rng, Rng& policy_rng);

}  // namespace oasp
