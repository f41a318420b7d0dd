#include "oaspmdp/agent.hpp"

namespace oasp {

QLearningAgent::QLearningAgent(LearnParams params, int width, int height)
    : Agent(params), width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("grid dimensions must be positive");
    reset();
}

void QLearningAgent::reset() {
    q_.clear();
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            for (Action a : all_actions) q_.ensure({x, y}, a);
        }
    }
}

Action QLearningAgent::select_action(Cell s, Rng& rng) { return select_epsilon_greedy(q_, s, params().epsilon, rng); }

void QLearningAgent::observe(Cell s, Action a, const StepOutcome& outcome) {
    q_update(q_, s, a, outcome.reward, outcome.next, outcome.terminal, params());
}

EpisodeOutcome run_episode(Agent& agent, const GridConfig& config, Rng& env_rng, Rng& policy_rng) {
    EpisodeOutcome out;
    Cell s = config.start;
    while (out.steps < agent.params().max_steps) {
        const Action a = agent.select_action(s, policy_rng);
        const StepOutcome o = step(config, s, a, env_rng);
        agent.observe(s, a, o);
        out.return_ += o.reward;
        ++out.steps;
        s = o.next;
        if (o.terminal) {
            out.reached_goal = true;
            break;
        }
    }
    return out;
}

}  // namespace oasp
