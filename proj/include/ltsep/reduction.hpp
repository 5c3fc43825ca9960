#pragma once

// Reduction of LT/LTT separation to width-1 profiles over synchronizable
// sets of state pairs.
//
// A state set D is synchronizable when one nonempty word loops at every
// state of D; every such set lies inside a maximal one, the maximal
// diagonals of the transition semigroup. The reduced automaton has an entry
// copy of each initial state, an exit copy of each final state and a state
// (r, D) for every maximal synchronizable D and r ∈ D. Its letters are
// restricted transition relations T = Rel(u) ∩ (X × Y):
//
//   weak    X = initial states, Y = final states   entry q -> exit r
//   prefix  X = initial states, Y = D'             entry q -> (s, D')
//   infix   X = D, Y = D'                          (r, D)  -> (s, D')
//   suffix  X = D, Y = final states                (r, D)  -> exit q
//
// for (q,r), (q,s), (r,s) ∈ T respectively. Only inclusion-maximal relations
// per (kind, D, D') are kept as letters.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ltsep/automata.hpp"
#include "ltsep/monoid.hpp"

namespace ltsep {

enum class SyncKind { Weak, Prefix, Infix, Suffix };
const char* to_string(SyncKind k);

struct SyncSet {
  SyncKind kind = SyncKind::Weak;
  std::vector<std::pair<State, State>> pairs;
  Word witness_mid;
  std::optional<Word> witness_left;   // loops at every left state
  std::optional<Word> witness_right;  // loops at every right state
  std::optional<std::size_t> left_set, right_set;  // indices of maximal sets
  std::string name;
};

struct ReducedState {
  enum class Kind { Entry, Exit, Inner } kind = Kind::Inner;
  State q = 0;                   // original state
  std::size_t set_index = 0;     // for Inner
};

struct ReducedSpec {
  Nfa nfa;  // over the catalog alphabet
  StateSet i1, f1, i2, f2;
  std::vector<SyncSet> catalog;  // catalog[s] describes letter s
  std::vector<ReducedState> states;
  std::vector<StateSet> sync_sets;  // maximal synchronizable state sets
  std::vector<Word> loop_words;     // loop_words[i] loops at sync_sets[i]
  std::size_t monoid_size = 0;

  LangSpec as_langspec() const { return {nfa, i1, f1, i2, f2}; }
};

struct ReductionConfig {
  std::size_t monoid_budget = kDefaultMonoidBudget;
  /// Upper bound on catalog letters before giving up.
  std::size_t letter_budget = 200000;
};

/// Maximal synchronizable state sets with a shortest loop word each.
std::vector<std::pair<StateSet, Word>> maximal_sync_sets(const TransitionMonoid& m);

/// The letter catalog of the reduced automaton.
std::vector<SyncSet> sync_sets(const LangSpec& spec, const ReductionConfig& config = {});

ReducedSpec build_reduced(const LangSpec& spec, const ReductionConfig& config = {});

/// Drops letters that cannot occur in words of both sides, repeatedly, and
/// trims the automaton. Verdicts at width 1 are unchanged.
ReducedSpec prune_reduced(const ReducedSpec& reduced);

/// Shortest nonempty word looping at every state of `states`, found by
/// product search (independent of the monoid).
std::optional<Word> synchronizing_loop(const Nfa& nfa, const StateSet& states);
/// Shortest word u with (p,q) ∈ Rel(u) for all given pairs.
std::optional<Word> realizing_word(const Nfa& nfa,
                                   const std::vector<std::pair<State, State>>& pairs);

/// Re-checks conditions a), b), c) of a catalog entry literally.
bool verify_sync_set(const Nfa& nfa, const SyncSet& s, std::string* why = nullptr);

struct Block {
  Word left, mid, right;
  auto operator<=>(const Block&) const = default;
};

struct DPattern {
  std::uint64_t d = 1;
  std::optional<Word> single;  // the single-word case
  Word prefix_mid, prefix_right;   // prefix block (u, v_r)
  Word suffix_left, suffix_mid;    // suffix block (v_l, u)
  std::map<Block, std::uint64_t> counts;  // values in 1..d
};

/// w = u_0 v_1^{e_1} u_1 ⋯ v_n^{e_n} u_n accepted for all e_j ≥ 0 along the
/// state sequence states[0] --u_0--> states[1] ⟲v_1 ... --u_n--> states[n+1].
struct Decomposition {
  std::vector<Word> u;
  std::vector<Word> v;
  std::vector<State> states;

  Word instantiate(std::uint64_t exponent) const;
};

struct DecodedPattern {
  DPattern pattern;
  Decomposition first, second;
};

DecodedPattern decode_pattern(const ReducedSpec& reduced, const Word& w1,
                              const Word& w2, std::uint64_t d);

bool verify_decomposition(const Nfa& nfa, const StateSet& initial,
                          const StateSet& final, const Decomposition& dec,
                          std::string* why = nullptr);

/// Pumps both decompositions with exponent ℓ(d+1) and checks membership and
/// ≡_{ℓ,d}; throws std::invalid_argument when a check fails.
std::pair<Word, Word> pump_pattern(const LangSpec& spec, const DecodedPattern& p,
                                   std::size_t ell, std::uint64_t d);

std::string describe_pattern(const Nfa& nfa, const DPattern& p);

}  // namespace ltsep
