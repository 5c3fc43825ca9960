#include "ltsep/testkit.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ltsep {

void Cnf3::validate() const {
  if (num_vars < 0) throw std::invalid_argument("negative variable count");
  for (const auto& c : clauses)
    for (int lit : c)
      if (lit == 0 || std::abs(lit) > num_vars)
        throw std::invalid_argument("literal out of range: " + std::to_string(lit));
}

Cnf3 parse_cnf(std::string_view text) {
  Cnf3 cnf;
  std::optional<int> declared_vars;
  std::vector<int> current;
  int max_var = 0;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  auto close_clause = [&](std::size_t at) {
    if (current.empty()) throw ParseError(at, "empty clause");
    if (current.size() > 3) throw ParseError(at, "clause with more than three literals");
    while (current.size() < 3) current.push_back(current.back());
    cnf.clauses.push_back({current[0], current[1], current[2]});
    current.clear();
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == 'c') continue;
    if (first == "%") break;
    if (first == "p") {
      std::string fmt;
      int v = 0, c = 0;
      if (!(ls >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0)
        throw ParseError(line_no, "malformed problem line");
      declared_vars = v;
      continue;
    }
    std::istringstream toks(line);
    std::string tok;
    while (toks >> tok) {
      int lit = 0;
      try {
        std::size_t used = 0;
        lit = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError(line_no, "invalid literal '" + tok + "'");
      }
      if (lit == 0) {
        close_clause(line_no);
      } else {
        current.push_back(lit);
        max_var = std::max(max_var, std::abs(lit));
      }
    }
  }
  if (!current.empty()) close_clause(line_no);
  cnf.num_vars = declared_vars.value_or(max_var);
  if (max_var > cnf.num_vars)
    throw ParseError(line_no, "literal exceeds declared variable count");
  return cnf;
}

std::string format_cnf(const Cnf3& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& c : cnf.clauses) out << c[0] << ' ' << c[1] << ' ' << c[2] << " 0\n";
  return out.str();
}

LangSpec gen_sat_instance(const Cnf3& cnf) {
  cnf.validate();
  const int n = cnf.num_vars;
  std::vector<std::string> alphabet{"#"};
  for (int i = 1; i <= n; ++i) alphabet.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n; ++i) alphabet.push_back("~x" + std::to_string(i));
  const Symbol hash = 0;
  auto lit_symbol = [&](int lit) {
    return static_cast<Symbol>(lit > 0 ? lit : n - lit);
  };

  LangSpec spec;
  spec.nfa = Nfa(0, alphabet);
  Nfa& a = spec.nfa;

  // First automaton: one chooser per variable, in order.
  std::vector<State> base{a.add_state()};
  a.add_transition(base[0], hash, base[0]);
  for (int i = 1; i <= n; ++i) {
    State next = a.add_state();
    a.add_transition(next, hash, next);
    for (int lit : {i, -i}) {
      State g = a.add_state();
      Symbol s = lit_symbol(lit);
      a.add_transition(base.back(), s, g);
      a.add_transition(g, hash, g);
      a.add_transition(g, s, g);
      a.add_transition(g, hash, next);
    }
    base.push_back(next);
  }
  spec.i1 = {base.front()};
  spec.f1 = {base.back()};

  // Second automaton: one literal chooser per clause, then anything.
  std::vector<State> hub{a.add_state()};
  for (const auto& clause : cnf.clauses) {
    State next = a.add_state();
    a.add_transition(hub.back(), hash, hub.back());
    std::vector<int> lits(clause.begin(), clause.end());
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (int lit : lits) {
      State g = a.add_state();
      Symbol s = lit_symbol(lit);
      a.add_transition(hub.back(), s, g);
      a.add_transition(g, hash, g);
      a.add_transition(g, s, g);
      a.add_transition(g, hash, next);
    }
    hub.push_back(next);
  }
  for (Symbol s = 0; s < a.alphabet_size(); ++s) a.add_transition(hub.back(), s, hub.back());
  spec.i2 = {hub.front()};
  spec.f2 = {hub.back()};
  return spec;
}

namespace {

// Adds an automaton for B_1* B_2* ... B_r* (each block nonempty) entered at
// `start`; returns its accepting states.
StateSet add_star_chain(Nfa& a, State start, const std::vector<Word>& blocks) {
  std::vector<State> hubs{start};
  for (const Word& b : blocks) {
    std::vector<State> path;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) path.push_back(a.add_state());
    State hub = a.add_state();
    path.push_back(hub);
    // Every earlier hub may start this block.
    std::vector<State> entries = hubs;
    entries.push_back(hub);
    for (State h : entries) a.add_transition(h, b[0], path[0]);
    for (std::size_t i = 1; i < b.size(); ++i) a.add_transition(path[i - 1], b[i], path[i]);
    hubs.push_back(hub);
  }
  return StateSet(hubs.begin(), hubs.end());
}

}  // namespace

LangSpec gen_threshold_family(int m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  std::vector<std::string> alphabet;
  for (int i = 1; i <= 2 * m; ++i) alphabet.push_back("a" + std::to_string(i));
  auto sym = [](int i) { return static_cast<Symbol>(i - 1); };
  LangSpec spec;
  spec.nfa = Nfa(0, alphabet);
  Nfa& a = spec.nfa;

  std::vector<Word> blocks1;
  for (int i = 1; i < m; ++i) blocks1.push_back({sym(2 * i), sym(2 * i + 1), sym(2 * i + 1)});
  blocks1.push_back({sym(2 * m), sym(2 * m), sym(2 * m)});
  State s1 = a.add_state();
  State h1 = a.add_state();
  a.add_transition(s1, sym(1), h1);
  spec.i1 = {s1};
  spec.f1 = add_star_chain(a, h1, blocks1);

  std::vector<Word> blocks2;
  for (int i = 1; i <= m; ++i) blocks2.push_back({sym(2 * i - 1), sym(2 * i), sym(2 * i)});
  State h2 = a.add_state();
  spec.i2 = {h2};
  spec.f2 = add_star_chain(a, h2, blocks2);
  return spec;
}

LangSpec gen_parity() {
  LangSpec spec;
  spec.nfa = Nfa(2, {"a"});
  spec.nfa.add_transition(0, 0, 1);
  spec.nfa.add_transition(1, 0, 0);
  spec.i1 = {0};
  spec.f1 = {0};
  spec.i2 = {0};
  spec.f2 = {1};
  return spec;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

LangSpec gen_random(std::uint64_t seed, std::size_t states, std::size_t alphabet_size,
                    double density) {
  if (states == 0 || alphabet_size == 0) throw std::invalid_argument("sizes must be positive");
  if (!(density > 0.0 && density <= 1.0)) throw std::invalid_argument("density must be in (0,1]");
  std::mt19937_64 rng(seed);
  std::vector<std::string> alphabet;
  for (std::size_t i = 0; i < alphabet_size; ++i)
    alphabet.push_back(alphabet_size <= 26 ? std::string(1, static_cast<char>('a' + i))
                                           : "s" + std::to_string(i));
  LangSpec raw;
  raw.nfa = Nfa(states, alphabet);
  for (State p = 0; p < states; ++p)
    for (Symbol a = 0; a < alphabet_size; ++a)
      for (State q = 0; q < states; ++q)
        if (unit_interval(rng) < density) raw.nfa.add_transition(p, a, q);
  auto pick = [&] {
    StateSet s;
    for (State q = 0; q < states; ++q)
      if (unit_interval(rng) < 0.3) s.insert(q);
    if (s.empty()) s.insert(static_cast<State>(uniform_below(rng, states)));
    return s;
  };
  raw.i1 = pick();
  raw.f1 = pick();
  raw.i2 = pick();
  raw.f2 = pick();

  std::vector<std::optional<State>> map;
  LangSpec spec;
  spec.nfa = trim(raw.nfa, {{raw.i1, raw.f1}, {raw.i2, raw.f2}}, &map);
  auto lift = [&](const StateSet& s) {
    StateSet r;
    for (State q : s)
      if (map[q]) r.insert(*map[q]);
    return r;
  };
  spec.i1 = lift(raw.i1);
  spec.f1 = lift(raw.f1);
  spec.i2 = lift(raw.i2);
  spec.f2 = lift(raw.f2);
  return spec;
}

Cnf3 random_cnf(std::uint64_t seed, int num_vars, int num_clauses) {
  if (num_vars < 1 || num_clauses < 0) throw std::invalid_argument("bad formula size");
  std::mt19937_64 rng(seed);
  Cnf3 cnf;
  cnf.num_vars = num_vars;
  for (int j = 0; j < num_clauses; ++j) {
    std::array<int, 3> c{};
    for (int& lit : c) {
      int v = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(num_vars)));
      lit = uniform_below(rng, 2) ? v : -v;
    }
    cnf.clauses.push_back(c);
  }
  return cnf;
}

bool sat_brute(const Cnf3& cnf) {
  cnf.validate();
  if (cnf.num_vars > 20) throw std::invalid_argument("sat_brute supports at most 20 variables");
  for (std::uint32_t mask = 0; mask < (1u << cnf.num_vars); ++mask) {
    bool all = true;
    for (const auto& c : cnf.clauses) {
      bool any = false;
      for (int lit : c) {
        bool value = (mask >> (std::abs(lit) - 1)) & 1u;
        if (value == (lit > 0)) any = true;
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

OracleVerdict exact_fixed_oracle(const LangSpec& spec, std::size_t k, std::uint64_t d,
                                 std::size_t state_budget) {
  auto s1 = capped_signatures(spec.nfa, spec.i1, spec.f1, k, d, state_budget);
  auto s2 = capped_signatures(spec.nfa, spec.i2, spec.f2, k, d, state_budget);
  for (const auto& s : s1)
    if (s2.count(s)) return OracleVerdict::Inseparable;
  return OracleVerdict::Separable;
}

std::optional<Word> sample_word(const Nfa& nfa, const StateSet& initial,
                                const StateSet& final, std::mt19937_64& rng,
                                std::size_t max_len) {
  const std::size_t n = nfa.num_states();
  // possible[r][q]: some word of length exactly r leads from q to a final state
  std::vector<std::vector<char>> possible(max_len + 1, std::vector<char>(n, 0));
  for (State q : final) possible[0][q] = 1;
  for (std::size_t r = 1; r <= max_len; ++r)
    for (State q = 0; q < n; ++q)
      for (Symbol a = 0; a < nfa.alphabet_size() && !possible[r][q]; ++a)
        for (State q2 : nfa.successors(q, a))
          if (possible[r - 1][q2]) {
            possible[r][q] = 1;
            break;
          }
  std::vector<std::size_t> lengths;
  for (std::size_t r = 0; r <= max_len; ++r)
    if (std::any_of(initial.begin(), initial.end(), [&](State q) { return possible[r][q]; }))
      lengths.push_back(r);
  if (lengths.empty()) return std::nullopt;
  std::size_t len = lengths[uniform_below(rng, lengths.size())];
  std::vector<State> starts;
  for (State q : initial)
    if (possible[len][q]) starts.push_back(q);
  State cur = starts[uniform_below(rng, starts.size())];
  Word w;
  for (std::size_t r = len; r > 0; --r) {
    std::vector<std::pair<Symbol, State>> moves;
    for (Symbol a = 0; a < nfa.alphabet_size(); ++a)
      for (State q2 : nfa.successors(cur, a))
        if (possible[r - 1][q2]) moves.emplace_back(a, q2);
    auto [a, q2] = moves[uniform_below(rng, moves.size())];
    w.push_back(a);
    cur = q2;
  }
  return w;
}

Word random_word(std::mt19937_64& rng, std::size_t alphabet_size, std::size_t max_len) {
  std::size_t len = uniform_below(rng, max_len + 1);
  Word w;
  for (std::size_t i = 0; i < len; ++i)
    w.push_back(static_cast<Symbol>(uniform_below(rng, alphabet_size)));
  return w;
}

std::vector<Word> enumerate_words(const Nfa& nfa, const StateSet& initial,
                                  const StateSet& final, std::size_t max_len) {
  StateSet live = coreachable(nfa, final);
  std::vector<Word> out;
  std::vector<std::pair<Word, StateSet>> level{{Word{}, initial}};
  for (std::size_t len = 0; len <= max_len && !level.empty(); ++len) {
    std::vector<std::pair<Word, StateSet>> next;
    for (const auto& [w, set] : level) {
      if (std::any_of(set.begin(), set.end(), [&](State q) { return final.count(q); }))
        out.push_back(w);
      if (len == max_len) continue;
      for (Symbol a = 0; a < nfa.alphabet_size(); ++a) {
        StateSet s2;
        for (State q : nfa.step(set, a))
          if (live.count(q)) s2.insert(q);
        if (s2.empty()) continue;
        Word w2 = w;
        w2.push_back(a);
        next.emplace_back(std::move(w2), std::move(s2));
      }
    }
    level = std::move(next);
  }
  return out;
}

}  // namespace ltsep
