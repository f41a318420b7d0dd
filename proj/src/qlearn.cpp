#include "oaspmdp/qlearn.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace oasp {

void LearnParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
    if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
}

void QTable::set(Cell s, Action a, double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite Q value");
    entries_[{s, a}] = v;
}

double QTable::max_value(Cell s) const {
    double best = value(s, all_actions[0]);
    for (std::size_t i = 1; i < all_actions.size(); ++i) best = std::max(best, value(s, all_actions[i]));
    return best;
}

void q_update(QTable& q, Cell s, Action a, double r, Cell s_next, bool terminal, const LearnParams& params) {
    if (!std::isfinite(r)) throw std::invalid_argument("non-finite reward");
    const double bootstrap = terminal ? 0.0 : q.max_value(s_next);
    const double old = q.value(s, a);
    q.set(s, a, old + params.alpha * (r + params.gamma * bootstrap - old));
}

Action select_epsilon_greedy(const QTable& q, Cell s, double epsilon, Rng& rng) {
    if (rng.uniform() < epsilon) return all_actions[rng.below(all_actions.size())];

    std::array<Action, 4> best{};
    std::size_t n = 0;
    double top = 0.0;
    for (Action a : all_actions) {
        const double v = q.value(s, a);
        if (n == 0 || v > top) {
            top = v;
            best[0] = a;
            n = 1;
        } else if (v == top) {
            best[n++] = a;
        }
    }
    return n == 1 ? best[0] : best[rng.below(n)];
}

Action greedy_action(const QTable& q, Cell s) {
    Action best = all_actions[0];
    double top = q.value(s, best);
    for (std::size_t i = 1; i < all_actions.size(); ++i) {
        const double v = q.value(s, all_actions[i]);
        if (v > top) {
            top = v;
            best = all_actions[i];
        }
    }
    return best;
}

std::map<Cell, Action> greedy_policy(const QTable& q, const CellSet& states) {
    std::map<Cell, Action> policy;
    for (Cell s : states) policy.emplace(s, greedy_action(q, s));
    return policy;
}

void write_qtable_csv(const QTable& q, std::ostream& out) {
    out << "state_x,state_y,action,value\n";
    char buf[64];
    for (const auto& [key, v] : q.entries()) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << key.state.x << ',' << key.state.y << ',' << to_string(key.action) << ',' << buf << '\n';
    }
}

QTable read_qtable_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "state_x,state_y,action,value") {
        throw std::runtime_error("Q-table CSV: missing header");
    }
    QTable q;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string x, y, action, value;
        if (!std::getline(fields, x, ',') || !std::getline(fields, y, ',') || !std::getline(fields, action, ',') ||
            !std::getline(fields, value)) {
            throw std::runtime_error("Q-table CSV: malformed row " + std::to_string(row));
        }
        auto a = action_from_string(action);
        if (!a) throw std::runtime_error("Q-table CSV: unknown action '" + action + "' on row " + std::to_string(row));
        try {
            q.set({std::stoi(x), std::stoi(y)}, *a, std::stod(value));
        } catch (const std::logic_error&) {
            throw std::runtime_error("Q-table CSV: malformed number on row " + std::to_string(row));
        }
    }
    return q;
}

}  // namespace oasp
