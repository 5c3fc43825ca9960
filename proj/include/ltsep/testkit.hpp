#pragma once

// Instance families and brute-force oracles.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ltsep/automata.hpp"
#include "ltsep/profiles.hpp"

namespace ltsep {

/// Literal v > 0 is x_v, v < 0 is ¬x_{-v}.
struct Cnf3 {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;

  void validate() const;
};

/// DIMACS-like text: optional "c" comment lines, a "p cnf V C" header, and
/// clauses of nonzero literals terminated by 0. Clauses with fewer than
/// three literals are padded by repeating their last literal.
Cnf3 parse_cnf(std::string_view text);
std::string format_cnf(const Cnf3& cnf);

LangSpec gen_sat_instance(const Cnf3& cnf);
LangSpec gen_threshold_family(int m);
LangSpec gen_parity();
LangSpec gen_random(std::uint64_t seed, std::size_t states, std::size_t alphabet_size,
                    double density);

Cnf3 random_cnf(std::uint64_t seed, int num_vars, int num_clauses);

bool sat_brute(const Cnf3& cnf);

enum class OracleVerdict { Separable, Inseparable };

/// Explicit capped-counting comparison of both sides at (k, d); throws
/// BudgetExceeded when exploration exceeds `state_budget` nodes.
OracleVerdict exact_fixed_oracle(const LangSpec& spec, std::size_t k, std::uint64_t d,
                                 std::size_t state_budget);

/// Uniform over feasible lengths ≤ max_len, then a uniform successor walk.
std::optional<Word> sample_word(const Nfa& nfa, const StateSet& initial,
                                const StateSet& final, std::mt19937_64& rng,
                                std::size_t max_len);

Word random_word(std::mt19937_64& rng, std::size_t alphabet_size, std::size_t max_len);

/// All accepted words up to the given length, in shortlex order.
std::vector<Word> enumerate_words(const Nfa& nfa, const StateSet& initial,
                                  const StateSet& final, std::size_t max_len);

/// Portable helpers on raw engine output.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);
double unit_interval(std::mt19937_64& rng);

}  // namespace ltsep
