#pragma once

// k-profiles, capped profile images and the profile-annotation transform.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ltsep/automata.hpp"

namespace ltsep {

struct Profile {
  Word left;   // |left| ≤ ⌊k/2⌋
  Word right;  // 1 ≤ |right| ≤ k − ⌊k/2⌋ for profiles of actual positions

  auto operator<=>(const Profile&) const = default;
};

inline std::size_t left_width(std::size_t k) { return k / 2; }
inline std::size_t right_width(std::size_t k) { return k - k / 2; }

struct CappedImage {
  std::size_t k = 1;
  std::uint64_t d = 1;
  std::map<Profile, std::uint64_t> counts;  // values in 1..d

  bool operator==(const CappedImage& rhs) const {
    return k == rhs.k && d == rhs.d && counts == rhs.counts;
  }
};

Profile profile_at(const Word& w, std::size_t x, std::size_t k);
std::vector<Profile> profile_word(const Word& w, std::size_t k);
CappedImage capped_image(const Word& w, std::size_t k, std::uint64_t d);
bool equivalent(const Word& w1, const Word& w2, std::size_t k, std::uint64_t d);

/// "(ab,cba)"; symbols longer than one character are joined with '.'.
std::string profile_name(const Nfa& nfa, const Profile& p);

/// Automaton over realizable profiles accepting the profile words of
/// L(nfa, initial, final). profiles[s] is the Profile named by symbol s.
struct AnnotatedSpec {
  Nfa nfa;
  StateSet initial, final;
  std::vector<Profile> profiles;
  std::size_t k = 1;
};

constexpr std::size_t kDefaultStateBudget = 200000;

AnnotatedSpec annotate(const Nfa& nfa, const StateSet& initial,
                       const StateSet& final, std::size_t k,
                       std::size_t state_budget = kDefaultStateBudget);

/// Re-expresses the automaton over `alphabet`, a superset of its profiles.
/// Symbol names are the profile indices in `alphabet`.
Nfa relabel(const AnnotatedSpec& spec, const std::vector<Profile>& alphabet);

/// Maps a profile word back to the word it annotates.
Word unannotate(const std::vector<Profile>& profile_seq);

/// Left-to-right capped counting with delayed emission: a position's profile
/// is counted once its right window is complete, the rest at flush time.
struct CountingState {
  Word buffer;  // last min(n, k-1) letters read
  std::map<Profile, std::uint64_t> counts;

  auto operator<=>(const CountingState&) const = default;
};

CountingState counting_step(const CountingState& s, Symbol c, std::size_t k,
                            std::uint64_t d);
std::map<Profile, std::uint64_t> counting_flush(const CountingState& s,
                                                std::size_t k, std::uint64_t d);

using Signature = std::map<Profile, std::uint64_t>;

/// All capped images of words of L(nfa, initial, final), by explicit
/// exploration of (state, counting state) pairs.
std::set<Signature> capped_signatures(const Nfa& nfa, const StateSet& initial,
                                      const StateSet& final, std::size_t k,
                                      std::uint64_t d, std::size_t state_budget);

}  // namespace ltsep
