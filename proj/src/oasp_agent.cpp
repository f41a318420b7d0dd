#include "oaspmdp/oasp_agent.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

namespace oasp {

asp::Atom state_atom(Cell c) {
    return asp::Atom::intern("s_" + std::to_string(c.x) + "_" + std::to_string(c.y));
}

asp::Atom action_atom(Action a) {
    static const std::array<asp::Atom, 4> atoms{asp::Atom::intern("a_up"), asp::Atom::intern("a_down"),
                                                asp::Atom::intern("a_left"), asp::Atom::intern("a_right")};
    return atoms[static_cast<std::size_t>(a)];
}

std::optional<Cell> cell_of(const asp::Atom& atom) {
    const std::string& n = atom.name();
    if (n.size() < 5 || n.compare(0, 2, "s_") != 0) return std::nullopt;
    const char* p = n.data() + 2;
    const char* end = n.data() + n.size();
    Cell c;
    auto r = std::from_chars(p, end, c.x);
    if (r.ec != std::errc{} || r.ptr == end || *r.ptr != '_') return std::nullopt;
    r = std::from_chars(r.ptr + 1, end, c.y);
    if (r.ec != std::errc{} || r.ptr != end) return std::nullopt;
    return c;
}

std::optional<Action> action_of(const asp::Atom& atom) {
    for (Action a : all_actions) {
        if (action_atom(a) == atom) return a;
    }
    return std::nullopt;
}

std::vector<Transition> program_transitions(const asp::Program& program) {
    std::vector<Transition> out;
    for (Action a : all_actions) {
        const asp::Atom act = action_atom(a);
        bool mentioned = false;
        for (const auto& rule : program.choice_rules()) mentioned = mentioned || rule.body.contains(act);
        if (!mentioned) continue;

        asp::Program query = program;
        query.add_fact(act);
        for (const auto& answer : asp::enumerate_answer_sets(query)) {
            // the successor is whichever head of the action's rule holds
            for (const auto& rule : program.choice_rules()) {
                if (!rule.body.contains(act)) continue;
                for (const auto& head : rule.heads) {
                    if (answer.contains(head)) {
                        if (auto next = cell_of(head)) out.push_back({a, *next});
                    }
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Action OaspAgent::select_action(Cell s, Rng& rng) {
    if (!knows(s)) {
        add_state(s);
        return all_actions[rng.below(all_actions.size())];
    }
    // Actions without a choice rule yet are tried first; a positive value on
    // the move into the goal would otherwise hide them from greedy selection.
    std::array<Action, 4> untried{};
    std::size_t n = 0;
    for (Action a : all_actions) {
        if (!q_.contains(s, a)) untried[n++] = a;
    }
    if (n > 0) return untried[rng.below(n)];
    return select_epsilon_greedy(q_, s, params().epsilon, rng);
}

void OaspAgent::observe(Cell s, Action a, const StepOutcome& outcome) {
    if (!knows(s)) add_state(s);
    if (record(s, a, outcome.next)) refresh_entries(s);

    // The goal is absorbing: every action leaves the agent in place. The
    // environment never steps from it, so those rules are written on arrival.
    if (outcome.terminal && !knows(outcome.next)) {
        add_state(outcome.next);
        bool changed = false;
        for (Action g : all_actions) changed = record(outcome.next, g, outcome.next) || changed;
        if (changed) refresh_entries(outcome.next);
    }

    q_update(q_, s, a, outcome.reward, outcome.next, outcome.terminal, params());
}

void OaspAgent::add_state(Cell s) {
    if (!observed_.insert(s).second) return;
    programs_[s].add_fact(state_atom(s));
}

bool OaspAgent::record(Cell s, Action a, Cell next) {
    asp::Program& program = programs_.at(s);
    const asp::AtomSet body{state_atom(s), action_atom(a)};
    const bool new_body = program.find_rule(body) == nullptr;
    const bool changed = program.add_transition_head(body, state_atom(next));
    if (new_body) ++pair_count_;
    return changed;
}

void OaspAgent::refresh_entries(Cell s) {
    for (const Transition& t : program_transitions(programs_.at(s))) q_.ensure(s, t.action);
}

void OaspAgent::dump_programs(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    for (const auto& [cell, program] : programs_) {
        const auto path = dir / (state_atom(cell).name() + ".lp");
        std::ofstream out(path, std::ios::binary);
        out << asp::render_program(program);
        if (!out) throw std::runtime_error("cannot write " + path.string());
    }
}

std::size_t known_pairs(const StatePrograms& programs) {
    std::size_t n = 0;
    for (const auto& [cell, program] : programs) n += program.choice_rules().size();
    return n;
}

StatePrograms load_programs(const std::filesystem::path& dir) {
    StatePrograms out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".lp") continue;
        const std::string stem = entry.path().stem().string();
        std::optional<Cell> cell;
        if (asp::Atom::valid_name(stem)) cell = cell_of(asp::Atom::intern(stem));
        if (!cell) throw std::runtime_error("not a state program: " + entry.path().string());

        std::ifstream in(entry.path(), std::ios::binary);
        if (!in) throw std::runtime_error("cannot read " + entry.path().string());
        std::ostringstream text;
        text << in.rdbuf();
        out.emplace(*cell, asp::parse_program(text.str()));
    }
    return out;
}

}  // namespace oasp
