#pragma once

// Transition monoid of an Nfa and the parameter bounds derived from it.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ltsep/automata.hpp"

namespace ltsep {

using BigInt = boost::multiprecision::cpp_int;

/// Square Boolean matrix with bit-packed rows.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  explicit BoolMatrix(std::size_t n);
  static BoolMatrix identity(std::size_t n);

  std::size_t dim() const noexcept { return n_; }
  bool get(State i, State j) const {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
  }
  void set(State i, State j, bool value = true);

  BoolMatrix operator*(const BoolMatrix& rhs) const;
  bool operator==(const BoolMatrix& rhs) const { return bits_ == rhs.bits_; }
  bool operator<(const BoolMatrix& rhs) const { return bits_ < rhs.bits_; }

  bool is_zero() const;
  /// rhs ⊆ this, entrywise.
  bool contains(const BoolMatrix& rhs) const;
  BoolMatrix meet(const BoolMatrix& rhs) const;
  StateSet row(State i) const;
  /// {q | (q,q) set}
  StateSet diagonal() const;
  std::vector<std::pair<State, State>> entries() const;
  std::size_t hash() const noexcept;
  std::string to_string() const;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct BoolMatrixHash {
  std::size_t operator()(const BoolMatrix& m) const noexcept { return m.hash(); }
};

/// Matrix of the letter `a`: (p,q) set iff p -a-> q.
BoolMatrix letter_matrix(const Nfa& nfa, Symbol a);
/// Letterwise composition; the identity for ε.
BoolMatrix word_matrix(const Nfa& nfa, const Word& w);

struct TransitionMonoid {
  std::size_t num_states = 0;
  /// elements[0] is the identity.
  std::vector<BoolMatrix> elements;
  /// Shortlex-least word evaluating to each element (ε for the identity).
  std::vector<Word> words;
  /// Whether the element is the image of some nonempty word.
  std::vector<bool> in_semigroup;
  /// Shortlex-least nonempty word per semigroup element (empty otherwise).
  std::vector<Word> nonempty_words;
  /// generator_of[a] = index of the letter matrix of a.
  std::vector<std::size_t> generator_of;
  /// right[i][a] = index of elements[i] * M_a.
  std::vector<std::vector<std::size_t>> right;

  std::size_t size() const noexcept { return elements.size(); }
  std::optional<std::size_t> index_of(const BoolMatrix& m) const;
  std::size_t evaluate(const Word& w) const;
  std::size_t multiply(std::size_t lhs, std::size_t rhs) const;

  std::unordered_map<BoolMatrix, std::size_t, BoolMatrixHash> index;
};

constexpr std::size_t kDefaultMonoidBudget = 100000;

TransitionMonoid transition_monoid(const Nfa& nfa,
                                   std::size_t budget = kDefaultMonoidBudget);

/// k = 4(|M|+1).
std::uint64_t profile_width_bound(std::uint64_t monoid_size);
std::uint64_t profile_width_bound(const TransitionMonoid& m);

/// |A_k| = (Σ_{i≤⌊k/2⌋} |A|^i)(Σ_{j≤k-⌊k/2⌋} |A|^j).
BigInt profile_alphabet_size(std::uint64_t k, std::uint64_t alphabet_size);

/// d = (|A_k| n)^{|A_k|}. Throws BudgetExceeded when the result would need
/// more than `max_bits` bits.
BigInt threshold_bound(std::uint64_t k, std::uint64_t alphabet_size,
                       std::uint64_t n, std::uint64_t max_bits = 1u << 22);

/// log10 of threshold_bound, usable when the exact value is out of reach.
double threshold_bound_log10(std::uint64_t k, std::uint64_t alphabet_size,
                             std::uint64_t n);

/// Exact decimal when at most `max_digits` long, else "~1.234e+5678".
std::string format_bound(std::uint64_t k, std::uint64_t alphabet_size,
                         std::uint64_t n, std::size_t max_digits = 80);

}  // namespace ltsep
