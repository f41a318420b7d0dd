#include "oaspmdp/asp.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

namespace oasp::asp {

namespace {

// Append-only symbol table. Names live in a deque so the pointers handed out
// to Atom stay valid forever; lookups after interning need no lock.
class SymbolTable {
public:
    Atom intern(std::string_view name, Atom (*make)(std::uint32_t, const std::string*)) {
        {
            std::shared_lock lock(mutex_);
            if (auto it = ids_.find(name); it != ids_.end()) return make(it->second, &names_[it->second]);
        }
        std::unique_lock lock(mutex_);
        if (auto it = ids_.find(name); it != ids_.end()) return make(it->second, &names_[it->second]);
        auto id = static_cast<std::uint32_t>(names_.size());
        const std::string& stored = names_.emplace_back(name);
        ids_.emplace(std::string_view(stored), id);
        return make(id, &stored);
    }

private:
    std::shared_mutex mutex_;
    std::deque<std::string> names_;
    std::unordered_map<std::string_view, std::uint32_t> ids_;
};

SymbolTable& symbols() {
    static SymbolTable table;
    return table;
}

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_ident(char c) {
    return is_lower(c) || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

bool Atom::valid_name(std::string_view name) noexcept {
    if (name.empty() || !is_lower(name.front())) return false;
    return std::all_of(name.begin(), name.end(), is_ident);
}

Atom Atom::intern(std::string_view name) {
    if (!valid_name(name)) throw std::invalid_argument("invalid atom name '" + std::string(name) + "'");
    return symbols().intern(name, [](std::uint32_t id, const std::string* s) { return Atom(id, s); });
}

// ---------------------------------------------------------------------------

AtomSet::AtomSet(std::initializer_list<Atom> atoms) {
    for (Atom a : atoms) insert(a);
}

AtomSet AtomSet::of(std::initializer_list<std::string_view> names) {
    AtomSet s;
    for (auto n : names) s.insert(Atom::intern(n));
    return s;
}

bool AtomSet::insert(Atom a) {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
    if (it != atoms_.end() && *it == a) return false;
    atoms_.insert(it, a);
    return true;
}

bool AtomSet::contains(Atom a) const {
    return std::binary_search(atoms_.begin(), atoms_.end(), a);
}

bool AtomSet::includes(const AtomSet& other) const {
    return std::includes(atoms_.begin(), atoms_.end(), other.atoms_.begin(), other.atoms_.end());
}

std::string AtomSet::to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i) out += ", ";
        out += atoms_[i].name();
    }
    return out + "}";
}

// ---------------------------------------------------------------------------

void Program::add_constraint(AtomSet body) {
    if (body.empty()) throw std::invalid_argument("integrity constraint with empty body");
    constraints_.push_back(IntegrityConstraint{std::move(body)});
}

bool Program::add_transition_head(const AtomSet& body, Atom head) {
    if (body.empty()) throw std::invalid_argument("choice rule with empty body");
    for (auto& rule : rules_) {
        if (rule.body == body) return rule.heads.insert(head);
    }
    rules_.push_back(ChoiceRule{AtomSet{head}, body});
    return true;
}

const ChoiceRule* Program::find_rule(const AtomSet& body) const {
    for (const auto& rule : rules_) {
        if (rule.body == body) return &rule;
    }
    return nullptr;
}

// ---------------------------------------------------------------------------

ParseError::ParseError(Kind kind, int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         (kind == Kind::unsupported_fragment ? "unsupported fragment: " : "syntax error: ") +
                         what),
      kind_(kind), line_(line), column_(column) {}

namespace {

enum class Tok { atom, integer, lbrace, rbrace, comma, semicolon, dot, if_, minus, end };

struct Token {
    Tok kind;
    std::string_view text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_blank();
        Token t{Tok::end, {}, line_, col_};
        if (pos_ >= src_.size()) return t;
        const std::size_t start = pos_;
        const char c = src_[pos_];
        if (is_lower(c)) {
            while (pos_ < src_.size() && is_ident(src_[pos_])) advance();
            t.kind = Tok::atom;
        } else if (c >= '0' && c <= '9') {
            while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') advance();
            t.kind = Tok::integer;
        } else if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
            advance();
            advance();
            t.kind = Tok::if_;
        } else {
            switch (c) {
                case '{': t.kind = Tok::lbrace; break;
                case '}': t.kind = Tok::rbrace; break;
                case ',': t.kind = Tok::comma; break;
                case ';': t.kind = Tok::semicolon; break;
                case '.': t.kind = Tok::dot; break;
                case '-': t.kind = Tok::minus; break;
                default:
                    throw ParseError(ParseError::Kind::syntax, line_, col_,
                                     std::string("unexpected character '") + c + "'");
            }
            advance();
        }
        t.text = src_.substr(start, pos_ - start);
        return t;
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

const char* describe(Tok k) {
    switch (k) {
        case Tok::atom: return "atom";
        case Tok::integer: return "integer";
        case Tok::lbrace: return "'{'";
        case Tok::rbrace: return "'}'";
        case Tok::comma: return "','";
        case Tok::semicolon: return "';'";
        case Tok::dot: return "'.'";
        case Tok::if_: return "':-'";
        case Tok::minus: return "'-'";
        case Tok::end: return "end of input";
    }
    return "?";
}

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) { shift(); }

    Program run() {
        while (cur_.kind != Tok::end) statement();
        return std::move(prog_);
    }

private:
    void shift() { cur_ = lex_.next(); }

    [[noreturn]] void syntax(const Token& at, const std::string& what) const {
        throw ParseError(ParseError::Kind::syntax, at.line, at.column, what);
    }
    [[noreturn]] void unsupported(const Token& at, const std::string& what) const {
        throw ParseError(ParseError::Kind::unsupported_fragment, at.line, at.column, what);
    }

    Token expect(Tok kind) {
        if (cur_.kind != kind) {
            syntax(cur_, std::string("expected ") + describe(kind) + ", found " + describe(cur_.kind));
        }
        Token t = cur_;
        shift();
        return t;
    }

    void statement() {
        switch (cur_.kind) {
            case Tok::atom: fact(); break;
            case Tok::integer:
            case Tok::lbrace: choice(); break;
            case Tok::if_: constraint(); break;
            case Tok::minus: unsupported(cur_, "strong negation");
            default: syntax(cur_, std::string("unexpected ") + describe(cur_.kind));
        }
    }

    void fact() {
        Token name = expect(Tok::atom);
        if (cur_.kind == Tok::if_) unsupported(name, "normal rule '" + std::string(name.text) + " :- ...'");
        if (cur_.kind == Tok::atom && name.text == "not") unsupported(name, "negation as failure");
        expect(Tok::dot);
        prog_.add_fact(Atom::intern(name.text));
    }

    void bound(const Token& at, std::string_view which) {
        Token b = expect(Tok::integer);
        if (b.text != "1") {
            unsupported(at, std::string(which) + " cardinality bound " + std::string(b.text) + " (only 1..1)");
        }
    }

    void choice() {
        const Token start = cur_;
        if (cur_.kind != Tok::integer) unsupported(start, "choice rule without lower bound (only 1..1)");
        bound(start, "lower");
        expect(Tok::lbrace);
        std::vector<Token> heads{expect(Tok::atom)};
        while (cur_.kind == Tok::semicolon || cur_.kind == Tok::comma) {
            shift();
            heads.push_back(expect(Tok::atom));
        }
        expect(Tok::rbrace);
        if (cur_.kind != Tok::integer) unsupported(start, "choice rule without upper bound (only 1..1)");
        bound(start, "upper");
        if (cur_.kind == Tok::dot) unsupported(start, "choice rule without body");
        expect(Tok::if_);
        AtomSet body = parse_body();
        expect(Tok::dot);
        for (const Token& h : heads) {
            prog_.add_transition_head(body, Atom::intern(h.text));
        }
    }

    void constraint() {
        expect(Tok::if_);
        AtomSet body = parse_body();
        expect(Tok::dot);
        prog_.add_constraint(std::move(body));
    }

    AtomSet parse_body() {
        AtomSet body;
        for (;;) {
            if (cur_.kind == Tok::minus) unsupported(cur_, "strong negation");
            Token lit = expect(Tok::atom);
            if (lit.text == "not" && cur_.kind == Tok::atom) unsupported(lit, "negation as failure");
            body.insert(Atom::intern(lit.text));
            if (cur_.kind != Tok::comma) break;
            shift();
        }
        return body;
    }

    Lexer lex_;
    Token cur_{};
    Program prog_;
};

void join(std::ostringstream& out, const AtomSet& atoms, const char* sep) {
    bool first = true;
    for (Atom a : atoms) {
        if (!first) out << sep;
        out << a.name();
        first = false;
    }
}

}  // namespace

Program parse_program(std::string_view text) { return Parser(text).run(); }

std::string render_program(const Program& p) {
    std::ostringstream out;
    for (Atom f : p.facts()) out << f.name() << ".\n";
    for (const auto& rule : p.choice_rules()) {
        out << "1{ ";
        join(out, rule.heads, "; ");
        out << " }1 :- ";
        join(out, rule.body, ", ");
        out << ".\n";
    }
    for (const auto& c : p.constraints()) {
        out << ":- ";
        join(out, c.body, ", ");
        out << ".\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------

std::vector<AnswerSet> enumerate_answer_sets(const Program& p) {
    const AtomSet& facts = p.facts();

    AtomSet all_heads;
    for (const auto& rule : p.choice_rules()) {
        for (Atom h : rule.heads) all_heads.insert(h);
    }
    std::vector<const ChoiceRule*> applicable;
    for (const auto& rule : p.choice_rules()) {
        for (Atom b : rule.body) {
            if (!facts.contains(b) && all_heads.contains(b)) {
                throw FragmentError("unsupported fragment: body atom '" + b.name() +
                                    "' is the head of a choice rule");
            }
        }
        if (facts.includes(rule.body)) applicable.push_back(&rule);
    }

    std::vector<AnswerSet> out;
    std::set<AnswerSet> seen;
    std::vector<std::size_t> pick(applicable.size(), 0);
    for (;;) {
        AnswerSet candidate = facts;
        for (std::size_t i = 0; i < applicable.size(); ++i) candidate.insert(applicable[i]->heads[pick[i]]);

        // Overlapping heads (or heads that are also facts) can put two heads
        // of one rule into the candidate; 1..1 rejects those.
        bool ok = std::all_of(applicable.begin(), applicable.end(), [&](const ChoiceRule* r) {
            return std::count_if(r->heads.begin(), r->heads.end(),
                                 [&](Atom h) { return candidate.contains(h); }) == 1;
        });
        ok = ok && std::none_of(p.constraints().begin(), p.constraints().end(),
                                [&](const IntegrityConstraint& c) { return candidate.includes(c.body); });
        if (ok && seen.insert(candidate).second) out.push_back(std::move(candidate));

        // odometer, last rule varies fastest
        std::size_t i = applicable.size();
        while (i > 0) {
            --i;
            if (++pick[i] < applicable[i]->heads.size()) break;
            pick[i] = 0;
            if (i == 0) return out;
        }
        if (applicable.empty()) return out;
    }
}

std::vector<AnswerSet> brute_force_answer_sets(const Program& p) {
    AtomSet universe = p.facts();
    for (const auto& rule : p.choice_rules()) {
        for (Atom a : rule.heads) universe.insert(a);
        for (Atom a : rule.body) universe.insert(a);
    }
    for (const auto& c : p.constraints()) {
        for (Atom a : c.body) universe.insert(a);
    }
    if (universe.size() > brute_force_atom_limit) {
        throw std::invalid_argument("atom universe too large for brute force (" +
                                    std::to_string(universe.size()) + " atoms)");
    }

    const std::size_t n = universe.size();
    std::vector<AnswerSet> out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        AtomSet m;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) m.insert(universe[i]);
        }
        if (!m.includes(p.facts())) continue;

        bool ok = true;
        for (Atom a : m) {
            if (p.facts().contains(a)) continue;
            bool supported = false;
            for (const auto& rule : p.choice_rules()) {
                if (rule.heads.contains(a) && m.includes(rule.body)) supported = true;
            }
            if (!supported) ok = false;
        }
        for (const auto& rule : p.choice_rules()) {
            if (!m.includes(rule.body)) continue;
            std::size_t chosen = 0;
            for (Atom h : rule.heads) chosen += m.contains(h) ? 1 : 0;
            if (chosen != 1) ok = false;
        }
        for (const auto& c : p.constraints()) {
            if (m.includes(c.body)) ok = false;
        }
        if (ok) out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace oasp::asp
