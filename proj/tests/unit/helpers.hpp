#pragma once

#include <random>
#include <string>

#include "ltsep/automata.hpp"
#include "ltsep/testkit.hpp"

namespace ltsep::test {

inline const char* kParity =
    "alphabet: a\n"
    "states: 2\n"
    "trans: 0 a 1\n"
    "trans: 1 a 0\n"
    "I1: 0\nF1: 0\nI2: 0\nF2: 1\n";

/// L1 = {w1}, L2 = {w2} as straight-line automata over `alphabet`.
inline LangSpec singletons(const std::vector<std::string>& alphabet, const std::string& w1,
                           const std::string& w2) {
  LangSpec s;
  s.nfa = Nfa(0, alphabet);
  auto chain = [&](const std::string& w, StateSet& i, StateSet& f) {
    State q = s.nfa.add_state();
    i = {q};
    for (char c : w) {
      State r = s.nfa.add_state();
      s.nfa.add_transition(q, *s.nfa.find_symbol(std::string(1, c)), r);
      q = r;
    }
    f = {q};
  };
  chain(w1, s.i1, s.f1);
  chain(w2, s.i2, s.f2);
  return s;
}

inline Word w(const Nfa& nfa, const std::string& text) { return parse_word(nfa, text); }

/// Random trim spec with at most `max_states` states and `max_letters` letters.
inline LangSpec tiny_spec(std::mt19937_64& rng, std::size_t max_states, std::size_t max_letters) {
  std::size_t n = 1 + uniform_below(rng, max_states);
  std::size_t a = 1 + uniform_below(rng, max_letters);
  double density = 0.2 + 0.5 * unit_interval(rng);
  return gen_random(rng(), n, a, density);
}

}  // namespace ltsep::test
