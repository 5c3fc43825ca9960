#pragma once

// Parikh images of automata as integer flow systems, decided with an
// existential linear-arithmetic solver.
//
// A flow assigns a multiplicity to every transition. It is feasible when one
// unit leaves a chosen initial state, one unit enters a chosen final state,
// every other state is balanced, and every used state is reachable from the
// source through used transitions. Feasible flows are exactly the transition
// multisets of accepting runs, so their letter sums are the Parikh image.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ltsep/automata.hpp"

namespace ltsep {

struct FlowSystem {
  Nfa nfa;
  StateSet initial, final;
  std::vector<Transition> edges;

  std::size_t num_letters() const { return nfa.alphabet_size(); }
};

FlowSystem flow_system(const Nfa& nfa, const StateSet& initial,
                       const StateSet& final);

using Counts = std::vector<std::uint64_t>;

struct FlowAssignment {
  Counts edges;  // one multiplicity per FlowSystem edge
  State source = 0;
  State target = 0;
};

enum class SolveStatus { Sat, Unsat, Unknown };
const char* to_string(SolveStatus s);

struct SolverConfig {
  /// Z3 resource limit per query; 0 means unlimited.
  unsigned rlimit = 0;
  /// Wall-clock limit per query in milliseconds; 0 means unlimited.
  unsigned timeout_ms = 0;
};

enum class Relation { Le, Ge, Eq };

/// Σ coef·letter_count + Σ coef·edge_multiplicity  (rel)  rhs
struct LinearConstraint {
  std::vector<std::pair<std::size_t, std::int64_t>> letter_terms;
  std::vector<std::pair<std::size_t, std::int64_t>> edge_terms;
  Relation rel = Relation::Eq;
  std::int64_t rhs = 0;
};

struct FeasibleResult {
  SolveStatus status = SolveStatus::Unknown;
  std::optional<FlowAssignment> assignment;
};

FeasibleResult feasible(const FlowSystem& system,
                        const std::vector<LinearConstraint>& extra = {},
                        const SolverConfig& config = {});

struct MatchResult {
  SolveStatus status = SolveStatus::Unknown;
  std::optional<FlowAssignment> first, second;
};

/// Flows on both sides whose letter counts are equal up to threshold d.
MatchResult match_fixed(const FlowSystem& a, const FlowSystem& b,
                        std::uint64_t d, const SolverConfig& config = {});

struct PumpCertificate {
  FlowAssignment base1, base2;
  Counts cycle1, cycle2;        // circulations, supported inside the bases
  std::vector<bool> unbounded;  // per letter
};

struct LimitResult {
  SolveStatus status = SolveStatus::Unknown;
  std::optional<PumpCertificate> certificate;
};

/// Decides whether matching flows exist for every threshold.
LimitResult match_limit(const FlowSystem& a, const FlowSystem& b,
                        const SolverConfig& config = {});

Counts letter_counts(const FlowSystem& system, const Counts& edges);
Counts parikh_vector(const Word& w, std::size_t num_letters);

/// Checks conservation, endpoints and connectivity; `why` gets the reason.
bool is_feasible_flow(const FlowSystem& system, const FlowAssignment& flow,
                      std::string* why = nullptr);

/// base + t·cycle
FlowAssignment pump(const FlowAssignment& base, const Counts& cycle,
                    std::uint64_t t);

/// Verifies the certificate invariants, including feasibility of
/// base + t·cycle for t ∈ {0,1,2}.
bool check_certificate(const FlowSystem& a, const FlowSystem& b,
                       const PumpCertificate& cert, std::string* why = nullptr);

/// Eulerian reconstruction of an accepted word with the flow's edge counts.
Word realize_word(const FlowSystem& system, const FlowAssignment& flow);
Word realize_word(const Nfa& nfa, const StateSet& initial, const StateSet& final,
                  const FlowAssignment& flow);

}  // namespace ltsep
