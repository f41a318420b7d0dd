#pragma once

// Logic programs in the fragment used to describe per-state transitions:
// facts, 1{...}1 choice rules with positive bodies, and integrity constraints.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oasp::asp {

/// Interned symbol. Equality is by id; ordering is by name so that every
/// listing of atoms is canonical regardless of interning order.
class Atom {
public:
    /// Interns `name`. Throws std::invalid_argument unless it matches
    /// [a-z][a-zA-Z0-9_]*.
    static Atom intern(std::string_view name);
    static bool valid_name(std::string_view name) noexcept;

    std::uint32_t id() const noexcept { return id_; }
    const std::string& name() const noexcept { return *name_; }

    friend bool operator==(const Atom& a, const Atom& b) noexcept { return a.id_ == b.id_; }
    friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) noexcept {
        if (a.id_ == b.id_) return std::strong_ordering::equal;
        return a.name() <=> b.name();
    }

private:
    Atom(std::uint32_t id, const std::string* name) : id_(id), name_(name) {}
    std::uint32_t id_;
    const std::string* name_;
};

/// Duplicate-free set of atoms kept sorted by name.
class AtomSet {
public:
    AtomSet() = default;
    AtomSet(std::initializer_list<Atom> atoms);
    /// Convenience for tests and literals: every name is interned.
    static AtomSet of(std::initializer_list<std::string_view> names);

    /// Returns false if the atom was already present.
    bool insert(Atom a);
    bool contains(Atom a) const;
    /// True iff every atom of `other` is in this set.
    bool includes(const AtomSet& other) const;

    bool empty() const noexcept { return atoms_.empty(); }
    std::size_t size() const noexcept { return atoms_.size(); }
    auto begin() const noexcept { return atoms_.begin(); }
    auto end() const noexcept { return atoms_.end(); }
    const Atom& operator[](std::size_t i) const { return atoms_[i]; }

    /// "{a, b, c}"
    std::string to_string() const;

    friend bool operator==(const AtomSet&, const AtomSet&) = default;
    friend std::strong_ordering operator<=>(const AtomSet& a, const AtomSet& b) {
        return std::lexicographical_compare_three_way(a.atoms_.begin(), a.atoms_.end(),
                                                      b.atoms_.begin(), b.atoms_.end());
    }

private:
    std::vector<Atom> atoms_;
};

/// `1{ heads }1 :- body.` Both cardinality bounds are fixed at one.
struct ChoiceRule {
    static constexpr int lower = 1;
    static constexpr int upper = 1;

    AtomSet heads;
    AtomSet body;

    friend bool operator==(const ChoiceRule&, const ChoiceRule&) = default;
};

/// `:- body.` Eliminates every candidate containing the whole body.
struct IntegrityConstraint {
    AtomSet body;

    friend bool operator==(const IntegrityConstraint&, const IntegrityConstraint&) = default;
};

using AnswerSet = AtomSet;

class Program {
public:
    bool add_fact(Atom a) { return facts_.insert(a); }
    void add_constraint(AtomSet body);

    /// Inserts `head` into the choice rule keyed by `body`, appending a new
    /// single-head rule when no rule has that body. Returns true iff the head
    /// was not already present. Throws std::invalid_argument on an empty body.
    /// A head may also occur in the body: `1{ s }1 :- s, a.` is a self-loop.
    bool add_transition_head(const AtomSet& body, Atom head);

    /// Rule whose body equals `body`, or nullptr.
    const ChoiceRule* find_rule(const AtomSet& body) const;

    const AtomSet& facts() const noexcept { return facts_; }
    const std::vector<ChoiceRule>& choice_rules() const noexcept { return rules_; }
    const std::vector<IntegrityConstraint>& constraints() const noexcept { return constraints_; }
    bool empty() const noexcept { return facts_.empty() && rules_.empty() && constraints_.empty(); }

    friend bool operator==(const Program&, const Program&) = default;

private:
    AtomSet facts_;
    std::vector<ChoiceRule> rules_;
    std::vector<IntegrityConstraint> constraints_;
};

/// Syntax error, or a construct outside the supported fragment (the message
/// then contains "unsupported fragment").
class ParseError : public std::runtime_error {
public:
    enum class Kind { syntax, unsupported_fragment };

    ParseError(Kind kind, int line, int column, const std::string& what);

    Kind kind() const noexcept { return kind_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    Kind kind_;
    int line_;
    int column_;
};

/// Program outside the fragment the enumerator can solve exactly.
class FragmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Program parse_program(std::string_view text);

/// Canonical text: sorted facts, then choice rules in insertion order, then
/// constraints. parse_program(render_program(p)) == p.
std::string render_program(const Program& p);

/// All answer sets, ordered lexicographically by the heads chosen for the
/// applicable rules (rule insertion order, heads by name).
/// Throws FragmentError when a rule body references a non-fact choice head.
std::vector<AnswerSet> enumerate_answer_sets(const Program& p);

inline constexpr std::size_t brute_force_atom_limit = 20;

/// Reference enumerator testing every subset of the atom universe against the
/// stable-model conditions of the fragment. Sorted output. Throws
/// std::invalid_argument when the universe exceeds brute_force_atom_limit.
std::vector<AnswerSet> brute_force_answer_sets(const Program& p);

}  // namespace oasp::asp
