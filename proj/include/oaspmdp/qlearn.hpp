#pragma once

#include "oaspmdp/gridworld.hpp"
#include "oaspmdp/rng.hpp"

#include <iosfwd>
#include <map>
#include <stdexcept>

namespace oasp {

struct LearnParams {
    double alpha = 0.2;
    double gamma = 0.9;
    double epsilon = 0.1;
    int max_steps = 1000;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    friend bool operator==(const LearnParams&, const LearnParams&) = default;
};

struct QKey {
    Cell state;
    Action action;

    friend bool operator==(const QKey&, const QKey&) = default;
    friend auto operator<=>(const QKey&, const QKey&) = default;
};

/// Sparse action-value table; absent entries read as 0.
class QTable {
public:
    using Map = std::map<QKey, double>;

    double value(Cell s, Action a) const {
        auto it = entries_.find({s, a});
        return it == entries_.end() ? 0.0 : it->second;
    }
    bool contains(Cell s, Action a) const { return entries_.count({s, a}) != 0; }

    /// Creates the entry with value 0 if absent. Returns true if created.
    bool ensure(Cell s, Action a) { return entries_.try_emplace({s, a}, 0.0).second; }
    /// Throws std::invalid_argument on a non-finite value.
    void set(Cell s, Action a, double v);

    /// max over all four actions, absent entries counted as 0.
    double max_value(Cell s) const;

    void clear() noexcept { entries_.clear(); }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const Map& entries() const noexcept { return entries_; }

    friend bool operator==(const QTable&, const QTable&) = default;

private:
    Map entries_;
};

/// Q(s,a) += alpha * (r + gamma * max_a' Q(s_next, a') - Q(s,a)). The max term
/// is zero when s_next is terminal. Throws std::invalid_argument on non-finite r.
void q_update(QTable& q, Cell s, Action a, double r, Cell s_next, bool terminal, const LearnParams& params);

/// With probability epsilon a uniformly random action, otherwise an argmax of
/// Q(s, .) with ties broken uniformly at random.
Action select_epsilon_greedy(const QTable& q, Cell s, double epsilon, Rng& rng);

/// Argmax with the fixed tie-break order up < down < left < right.
Action greedy_action(const QTable& q, Cell s);

std::map<Cell, Action> greedy_policy(const QTable& q, const CellSet& states);

/// Empties the table.
inline void reset(QTable& q) { q.clear(); }

/// CSV with header `state_x,state_y,action,value`, one row per entry in key order.
void write_qtable_csv(const QTable& q, std::ostream& out);
/// Inverse of write_qtable_csv. Throws std::runtime_error on malformed input.
QTable read_qtable_csv(std::istream& in);

}  // namespace oasp
