#pragma once

// Nondeterministic automata without designated initial/final states.
//
// An Nfa only carries states, alphabet and transitions; languages are formed
// by pairing it with (initial, final) state sets. A LangSpec bundles one
// automaton with the two pairs defining the languages to be separated.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ltsep {

using State = std::uint32_t;
using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;
using StateSet = std::set<State>;

struct Transition {
  State from;
  Symbol symbol;
  State to;

  auto operator<=>(const Transition&) const = default;
};

/// Raised by the spec-format parser; carries the 1-based offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised when a construction would exceed its configured size budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Nfa {
 public:
  Nfa() = default;
  Nfa(std::size_t num_states, std::vector<std::string> alphabet);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t alphabet_size() const noexcept { return alphabet_.size(); }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const std::string& symbol_name(Symbol s) const;
  std::optional<Symbol> find_symbol(std::string_view name) const;

  State add_state();
  void add_transition(State from, Symbol symbol, State to);
  bool has_transition(State from, Symbol symbol, State to) const;

  /// Sorted successor list of `from` on `symbol`.
  const std::vector<State>& successors(State from, Symbol symbol) const;
  std::vector<Transition> transitions() const;
  std::size_t num_transitions() const noexcept { return num_transitions_; }

  /// States plus transitions.
  std::size_t size() const noexcept { return num_states_ + num_transitions_; }

  StateSet step(const StateSet& from, Symbol symbol) const;
  bool is_deterministic() const;

 private:
  void check_state(State q) const;
  void check_symbol(Symbol s) const;

  std::size_t num_states_ = 0;
  std::vector<std::string> alphabet_;
  // succ_[state][symbol] -> sorted, duplicate-free successors
  std::vector<std::vector<std::vector<State>>> succ_;
  std::size_t num_transitions_ = 0;
};

struct LangSpec {
  Nfa nfa;
  StateSet i1, f1, i2, f2;

  /// Throws std::invalid_argument if a set mentions a state outside the Nfa.
  void validate() const;
};

LangSpec parse_spec(std::string_view text);
LangSpec load_spec(const std::string& path);
std::string serialize_spec(const LangSpec& spec);

/// Words are written as whitespace-separated symbols. When every symbol of
/// the alphabet is a single character, an unspaced string is split per
/// character instead ("abba").
Word parse_word(const Nfa& nfa, std::string_view text);
std::string format_word(const Nfa& nfa, const Word& word);
std::vector<std::string> word_symbols(const Nfa& nfa, const Word& word);

bool accepts(const Nfa& nfa, const StateSet& initial, const StateSet& final,
             const Word& word);

struct Product {
  Nfa nfa;
  std::size_t right_states = 0;

  State index(State left, State right) const {
    return static_cast<State>(left * right_states + right);
  }
  std::pair<State, State> components(State q) const {
    return {static_cast<State>(q / right_states),
            static_cast<State>(q % right_states)};
  }
  StateSet pairs(const StateSet& left, const StateSet& right) const;
};

/// Synchronous product over a shared alphabet.
Product product(const Nfa& a, const Nfa& b);

StateSet reachable(const Nfa& nfa, const StateSet& from);
StateSet coreachable(const Nfa& nfa, const StateSet& to);
bool is_empty(const Nfa& nfa, const StateSet& initial, const StateSet& final);

/// Shortlex-least accepted word, if any.
std::optional<Word> shortest_word(const Nfa& nfa, const StateSet& initial,
                                  const StateSet& final);

/// Shortest word of L1 ∩ L2 for a LangSpec.
std::optional<Word> shortest_common_word(const LangSpec& spec);

/// Restricts `nfa` to states that are useful for at least one of the given
/// (initial, final) pairs and renumbers them densely. `old_to_new` receives
/// the mapping (absent entries are dropped states).
Nfa trim(const Nfa& nfa,
         const std::vector<std::pair<StateSet, StateSet>>& languages,
         std::vector<std::optional<State>>* old_to_new);

struct DotMark {
  std::string label;
  StateSet states;
};

std::string dot_export(const Nfa& nfa, const std::vector<DotMark>& initial_marks,
                       const std::vector<DotMark>& final_marks);
std::string dot_export(const LangSpec& spec);

}  // namespace ltsep
