#pragma once

// Separation decisions for LT, LTT and fixed (k, d), with witnesses.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ltsep/automata.hpp"
#include "ltsep/monoid.hpp"
#include "ltsep/parikh.hpp"
#include "ltsep/profiles.hpp"
#include "ltsep/reduction.hpp"

namespace ltsep {

enum class Problem { LT, LTT, Fixed };
enum class Outcome { Separable, Inseparable, Unknown };
const char* to_string(Problem p);
const char* to_string(Outcome o);

struct WitnessPair {
  Word w1, w2;
  std::size_t k = 1;
  std::uint64_t d = 1;
};

/// Implicit representation of [L1]_{k,d}.
struct SeparatorHandle {
  std::size_t k = 1;
  std::uint64_t d = 1;
  Nfa nfa;
  StateSet i1, f1;
  AnnotatedSpec annotated;  // L1 over its realizable profiles
  FlowSystem flow;          // flow system of `annotated`
};

/// Inseparability evidence for LTT obtained through the reduced automaton.
struct LttEvidence {
  std::shared_ptr<const ReducedSpec> reduced;
  FlowSystem flow1, flow2;
  PumpCertificate certificate;
};

struct Verdict {
  Problem problem = Problem::Fixed;
  Outcome outcome = Outcome::Unknown;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> d;
  bool d_limit = false;  // inseparable at every threshold
  std::string route;
  std::optional<WitnessPair> witness;
  std::optional<DecodedPattern> pattern;
  std::optional<LttEvidence> evidence;
  std::optional<SeparatorHandle> separator;
  std::optional<std::uint64_t> reduced_threshold;
  std::size_t reduced_states = 0, reduced_letters = 0;
  std::vector<std::string> budget_flags;
  std::vector<std::string> notes;
};

struct DecideConfig {
  SolverConfig solver;
  std::size_t state_budget = kDefaultStateBudget;
  std::size_t monoid_budget = kDefaultMonoidBudget;
  std::size_t letter_budget = 200000;
  /// Largest threshold tried by the doubling searches.
  std::uint64_t threshold_cap = 1024;
  /// Profile width ℓ used when pumping patterns into words.
  std::size_t pump_width = 2;
  /// Threshold at which LTT certificates are replayed into a witness pair.
  std::uint64_t witness_d = 2;
  /// Widths tried when looking for a concrete separator.
  std::size_t separator_k_cap = 4;
  /// Use the k = 4(|M|+1) profile path instead of the reduced automaton.
  bool direct = false;
  bool want_separator = true;
};

Verdict decide_fixed(const LangSpec& spec, std::size_t k, std::uint64_t d,
                     const DecideConfig& config = {});
Verdict decide_lt(const LangSpec& spec, const DecideConfig& config = {});
Verdict decide_ltt(const LangSpec& spec, const DecideConfig& config = {});

/// Pumps the certificate at threshold d into Ã words, decodes them and pumps
/// the pattern at width ℓ.
WitnessPair replay_certificate(const LangSpec& spec, const LttEvidence& evidence,
                               std::uint64_t d, std::size_t ell);

/// Searches widths 1..config.separator_k_cap for a (k, d) at which L1 and L2
/// are separated, with d = 1 when `lt` is set.
std::optional<SeparatorHandle> find_separator(const LangSpec& spec, bool lt,
                                              const DecideConfig& config);

SeparatorHandle make_separator(const LangSpec& spec, std::size_t k, std::uint64_t d,
                               std::size_t state_budget = kDefaultStateBudget);

enum class Membership { Rejected, Accepted, Unknown };

Membership separator_membership(const SeparatorHandle& handle, const Word& w,
                                const SolverConfig& solver = {});

struct ExplicitSeparator {
  Nfa nfa;
  StateSet initial, final;
};

/// Deterministic automaton for [L1]_{k,d}; throws BudgetExceeded beyond
/// `budget` states.
ExplicitSeparator separator_automaton(const SeparatorHandle& handle,
                                      std::size_t budget = 100000);

/// Checks the witness invariants: membership on both sides and ≡_{k,d}.
bool check_witness(const LangSpec& spec, const WitnessPair& w);

}  // namespace ltsep
