#pragma once

// Online construction of the state set: every visited cell gets a logic
// program whose choice rules list the successors observed for each action,
// and the Q-table only holds entries for pairs those programs describe.

#include "oaspmdp/agent.hpp"
#include "oaspmdp/asp.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <vector>

namespace oasp {

// Atom encoding: cells are `s_<x>_<y>`, actions `a_up`, `a_down`, `a_left`, `a_right`.
asp::Atom state_atom(Cell c);
asp::Atom action_atom(Action a);
std::optional<Cell> cell_of(const asp::Atom& atom);
std::optional<Action> action_of(const asp::Atom& atom);

struct Transition {
    Action action;
    Cell next;

    friend bool operator==(const Transition&, const Transition&) = default;
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Every transition described by the program of `state`: the answer sets of
/// the program extended with one action fact, for each action that has a
/// choice rule.
std::vector<Transition> program_transitions(const asp::Program& program);

using StatePrograms = std::map<Cell, asp::Program>;

class OaspAgent final : public Agent {
public:
    explicit OaspAgent(LearnParams params) : Agent(params) {}

    /// Unknown state: recorded as observed, answered with a uniformly random
    /// action. Known state with actions that have no choice rule yet: one of
    /// those, uniformly. Otherwise epsilon-greedy over the Q-table.
    Action select_action(Cell s, Rng& rng) override;

    /// Records the transition in the program of `s` (new rule or new head),
    /// re-enumerates that program when it changed, then applies the Q-Learning
    /// update. Reaching the goal records its absorbing self-transitions.
    void observe(Cell s, Action a, const StepOutcome& outcome) override;

    const QTable& q() const override { return q_; }
    std::size_t pair_count() const override { return pair_count_; }

    const CellSet& observed() const noexcept { return observed_; }
    const StatePrograms& programs() const noexcept { return programs_; }
    bool knows(Cell s) const { return observed_.count(s) != 0; }

    /// Writes `s_<x>_<y>.lp` for every observed state.
    void dump_programs(const std::filesystem::path& dir) const;

private:
    void add_state(Cell s);
    /// Returns true if the program of `s` changed.
    bool record(Cell s, Action a, Cell next);
    void refresh_entries(Cell s);

    CellSet observed_;
    StatePrograms programs_;
    QTable q_;
    std::size_t pair_count_ = 0;
};

/// Total number of choice rules across all programs.
std::size_t known_pairs(const StatePrograms& programs);
inline std::size_t known_pairs(const OaspAgent& agent) { return known_pairs(agent.programs()); }

/// Reads every `*.lp` file written by OaspAgent::dump_programs. Throws
/// std::runtime_error on unreadable files or names that are not state atoms.
StatePrograms load_programs(const std::filesystem::path& dir);

}  // namespace oasp
