#include "ltsep/reduction.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "ltsep/profiles.hpp"

namespace ltsep {

const char* to_string(SyncKind k) {
  switch (k) {
    case SyncKind::Weak: return "weak";
    case SyncKind::Prefix: return "prefix";
    case SyncKind::Infix: return "infix";
    case SyncKind::Suffix: return "suffix";
  }
  return "?";
}

namespace {

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::string set_label(const StateSet& s) {
  std::string out;
  for (State q : s) out += (out.empty() ? "" : ".") + std::to_string(q);
  return out;
}

std::string pairs_label(const std::vector<std::pair<State, State>>& pairs) {
  std::string out = "{";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += ',';
    out += "(" + std::to_string(pairs[i].first) + "," + std::to_string(pairs[i].second) + ")";
  }
  return out + "}";
}

BoolMatrix box(std::size_t n, const StateSet& rows, const StateSet& cols) {
  BoolMatrix m(n);
  for (State r : rows)
    for (State c : cols) m.set(r, c);
  return m;
}

// The spec restricted to states useful for either language, with maps back.
struct TrimmedSpec {
  LangSpec spec;
  std::vector<State> to_original;
};

TrimmedSpec trim_spec(const LangSpec& spec) {
  std::vector<std::optional<State>> map;
  Nfa nfa = trim(spec.nfa, {{spec.i1, spec.f1}, {spec.i2, spec.f2}}, &map);
  TrimmedSpec out;
  out.spec.nfa = std::move(nfa);
  out.to_original.resize(out.spec.nfa.num_states());
  for (State q = 0; q < map.size(); ++q)
    if (map[q]) out.to_original[*map[q]] = q;
  auto lift = [&](const StateSet& s) {
    StateSet r;
    for (State q : s)
      if (map[q]) r.insert(*map[q]);
    return r;
  };
  out.spec.i1 = lift(spec.i1);
  out.spec.f1 = lift(spec.f1);
  out.spec.i2 = lift(spec.i2);
  out.spec.f2 = lift(spec.f2);
  return out;
}

struct Letter {
  SyncKind kind;
  std::size_t left_set = 0, right_set = 0;  // meaningful per kind
  BoolMatrix relation;
  std::size_t element = 0;  // monoid element realizing the relation
};

struct Catalog {
  TrimmedSpec trimmed;
  TransitionMonoid monoid;
  std::vector<std::pair<StateSet, Word>> sets;  // trimmed ids
  std::vector<Letter> letters;
};

Catalog compute_catalog(const LangSpec& spec, const ReductionConfig& config) {
  spec.validate();
  Catalog cat;
  cat.trimmed = trim_spec(spec);
  const LangSpec& ts = cat.trimmed.spec;
  const std::size_t n = ts.nfa.num_states();
  cat.monoid = transition_monoid(ts.nfa, config.monoid_budget);
  cat.sets = maximal_sync_sets(cat.monoid);

  StateSet init = ts.i1, fin = ts.f1;
  init.insert(ts.i2.begin(), ts.i2.end());
  fin.insert(ts.f2.begin(), ts.f2.end());

  struct Key {
    SyncKind kind;
    std::size_t left, right;
    BoolMatrix mask;
  };
  std::vector<Key> keys;
  const std::size_t k = cat.sets.size();
  keys.push_back({SyncKind::Weak, 0, 0, box(n, init, fin)});
  for (std::size_t j = 0; j < k; ++j)
    keys.push_back({SyncKind::Prefix, 0, j, box(n, init, cat.sets[j].first)});
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      keys.push_back({SyncKind::Infix, i, j,
                      box(n, cat.sets[i].first, cat.sets[j].first)});
  for (std::size_t i = 0; i < k; ++i)
    keys.push_back({SyncKind::Suffix, i, 0, box(n, cat.sets[i].first, fin)});

  std::size_t total = 0;
  for (const auto& key : keys) {
    // Distinct restricted relations in shortlex order of their first witness.
    std::unordered_map<BoolMatrix, std::size_t, BoolMatrixHash> seen;
    std::vector<std::pair<BoolMatrix, std::size_t>> found;
    for (std::size_t e = 0; e < cat.monoid.size(); ++e) {
      BoolMatrix t = cat.monoid.elements[e].meet(key.mask);
      if (t.is_zero()) continue;
      if (seen.emplace(t, found.size()).second) found.emplace_back(std::move(t), e);
    }
    for (std::size_t a = 0; a < found.size(); ++a) {
      bool dominated = false;
      for (std::size_t b = 0; b < found.size() && !dominated; ++b)
        dominated = b != a && found[b].first.contains(found[a].first) &&
                    !(found[b].first == found[a].first);
      if (dominated) continue;
      if (++total > config.letter_budget)
        throw BudgetExceeded("reduced alphabet exceeds " +
                             std::to_string(config.letter_budget) + " letters");
      cat.letters.push_back({key.kind, key.left, key.right, found[a].first, found[a].second});
    }
  }
  return cat;
}

SyncSet to_sync_set(const Catalog& cat, const Letter& l) {
  const auto& back = cat.trimmed.to_original;
  SyncSet s;
  s.kind = l.kind;
  for (auto [p, q] : l.relation.entries()) s.pairs.emplace_back(back[p], back[q]);
  s.witness_mid = cat.monoid.words[l.element];
  if (l.kind == SyncKind::Infix || l.kind == SyncKind::Suffix) {
    s.left_set = l.left_set;
    s.witness_left = cat.sets[l.left_set].second;
  }
  if (l.kind == SyncKind::Infix || l.kind == SyncKind::Prefix) {
    s.right_set = l.right_set;
    s.witness_right = cat.sets[l.right_set].second;
  }
  auto orig = [&](std::size_t i) {
    StateSet r;
    for (State q : cat.sets[i].first) r.insert(back[q]);
    return set_label(r);
  };
  switch (l.kind) {
    case SyncKind::Weak: s.name = "w:"; break;
    case SyncKind::Prefix: s.name = "p[" + orig(l.right_set) + "]:"; break;
    case SyncKind::Infix:
      s.name = "i[" + orig(l.left_set) + "|" + orig(l.right_set) + "]:";
      break;
    case SyncKind::Suffix: s.name = "s[" + orig(l.left_set) + "]:"; break;
  }
  s.name += pairs_label(s.pairs);
  return s;
}

}  // namespace

std::vector<std::pair<StateSet, Word>> maximal_sync_sets(const TransitionMonoid& m) {
  std::map<StateSet, Word> best;
  for (std::size_t e = 0; e < m.size(); ++e) {
    if (!m.in_semigroup[e]) continue;
    StateSet d = m.elements[e].diagonal();
    if (d.empty()) continue;
    auto it = best.find(d);
    if (it == best.end() || shortlex_less(m.nonempty_words[e], it->second))
      best[d] = m.nonempty_words[e];
  }
  std::vector<std::pair<StateSet, Word>> out;
  for (const auto& [d, w] : best) {
    bool dominated = false;
    for (const auto& [d2, w2] : best) {
      if (d2.size() > d.size() &&
          std::includes(d2.begin(), d2.end(), d.begin(), d.end())) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.emplace_back(d, w);
  }
  return out;
}

std::vector<SyncSet> sync_sets(const LangSpec& spec, const ReductionConfig& config) {
  Catalog cat = compute_catalog(spec, config);
  std::vector<SyncSet> out;
  for (const auto& l : cat.letters) out.push_back(to_sync_set(cat, l));
  return out;
}

ReducedSpec build_reduced(const LangSpec& spec, const ReductionConfig& config) {
  Catalog cat = compute_catalog(spec, config);
  const LangSpec& ts = cat.trimmed.spec;
  const auto& back = cat.trimmed.to_original;
  ReducedSpec out;
  out.monoid_size = cat.monoid.size();
  for (const auto& [d, w] : cat.sets) {
    StateSet orig;
    for (State q : d) orig.insert(back[q]);
    out.sync_sets.push_back(orig);
    out.loop_words.push_back(w);
  }

  StateSet init = ts.i1, fin = ts.f1;
  init.insert(ts.i2.begin(), ts.i2.end());
  fin.insert(ts.f2.begin(), ts.f2.end());
  std::map<State, State> entry, exit;
  std::vector<std::map<State, State>> inner(cat.sets.size());
  for (State q : init) {
    entry[q] = static_cast<State>(out.states.size());
    out.states.push_back({ReducedState::Kind::Entry, back[q], 0});
  }
  for (State q : fin) {
    exit[q] = static_cast<State>(out.states.size());
    out.states.push_back({ReducedState::Kind::Exit, back[q], 0});
  }
  for (std::size_t i = 0; i < cat.sets.size(); ++i)
    for (State r : cat.sets[i].first) {
      inner[i][r] = static_cast<State>(out.states.size());
      out.states.push_back({ReducedState::Kind::Inner, back[r], i});
    }

  std::vector<std::string> names;
  for (const auto& l : cat.letters) {
    out.catalog.push_back(to_sync_set(cat, l));
    names.push_back(out.catalog.back().name);
  }
  out.nfa = Nfa(out.states.size(), names);
  for (Symbol s = 0; s < cat.letters.size(); ++s) {
    const Letter& l = cat.letters[s];
    for (auto [p, q] : l.relation.entries()) {
      switch (l.kind) {
        case SyncKind::Weak: out.nfa.add_transition(entry.at(p), s, exit.at(q)); break;
        case SyncKind::Prefix:
          out.nfa.add_transition(entry.at(p), s, inner[l.right_set].at(q));
          break;
        case SyncKind::Infix:
          out.nfa.add_transition(inner[l.left_set].at(p), s, inner[l.right_set].at(q));
          break;
        case SyncKind::Suffix:
          out.nfa.add_transition(inner[l.left_set].at(p), s, exit.at(q));
          break;
      }
    }
  }
  for (State q : ts.i1) out.i1.insert(entry.at(q));
  for (State q : ts.i2) out.i2.insert(entry.at(q));
  for (State q : ts.f1) out.f1.insert(exit.at(q));
  for (State q : ts.f2) out.f2.insert(exit.at(q));
  return out;
}

ReducedSpec prune_reduced(const ReducedSpec& reduced) {
  const Nfa& nfa = reduced.nfa;
  std::vector<char> allowed(nfa.alphabet_size(), 1);
  auto transitions = nfa.transitions();
  for (;;) {
    Nfa cur(nfa.num_states(), nfa.alphabet());
    for (const auto& t : transitions)
      if (allowed[t.symbol]) cur.add_transition(t.from, t.symbol, t.to);
    std::vector<char> used1(nfa.alphabet_size(), 0), used2(nfa.alphabet_size(), 0);
    auto mark = [&](const StateSet& i, const StateSet& f, std::vector<char>& used) {
      StateSet fw = reachable(cur, i), bw = coreachable(cur, f);
      for (const auto& t : cur.transitions())
        if (fw.count(t.from) && bw.count(t.to)) used[t.symbol] = 1;
    };
    mark(reduced.i1, reduced.f1, used1);
    mark(reduced.i2, reduced.f2, used2);
    bool changed = false;
    for (Symbol s = 0; s < allowed.size(); ++s)
      if (allowed[s] && !(used1[s] && used2[s])) allowed[s] = 0, changed = true;
    if (!changed) break;
  }

  Nfa restricted(nfa.num_states(), nfa.alphabet());
  for (const auto& t : transitions)
    if (allowed[t.symbol]) restricted.add_transition(t.from, t.symbol, t.to);
  std::vector<std::optional<State>> map;
  Nfa trimmed = trim(restricted, {{reduced.i1, reduced.f1}, {reduced.i2, reduced.f2}}, &map);

  std::vector<char> used(nfa.alphabet_size(), 0);
  for (const auto& t : trimmed.transitions()) used[t.symbol] = 1;
  ReducedSpec out;
  out.sync_sets = reduced.sync_sets;
  out.loop_words = reduced.loop_words;
  out.monoid_size = reduced.monoid_size;
  std::vector<Symbol> new_sym(nfa.alphabet_size(), 0);
  std::vector<std::string> names;
  for (Symbol s = 0; s < nfa.alphabet_size(); ++s)
    if (used[s]) {
      new_sym[s] = static_cast<Symbol>(names.size());
      names.push_back(nfa.symbol_name(s));
      out.catalog.push_back(reduced.catalog[s]);
    }
  out.nfa = Nfa(trimmed.num_states(), names);
  for (const auto& t : trimmed.transitions())
    out.nfa.add_transition(t.from, new_sym[t.symbol], t.to);
  out.states.resize(trimmed.num_states());
  for (State q = 0; q < map.size(); ++q)
    if (map[q]) out.states[*map[q]] = reduced.states[q];
  auto lift = [&](const StateSet& s) {
    StateSet r;
    for (State q : s)
      if (map[q]) r.insert(*map[q]);
    return r;
  };
  out.i1 = lift(reduced.i1);
  out.f1 = lift(reduced.f1);
  out.i2 = lift(reduced.i2);
  out.f2 = lift(reduced.f2);
  return out;
}

namespace {

// BFS over tuples of states, one component per tracked state.
std::optional<Word> tuple_search(const Nfa& nfa, const std::vector<State>& start,
                                 const std::vector<State>& goal, bool nonempty,
                                 std::size_t budget) {
  using Tuple = std::vector<State>;
  if (!nonempty && start == goal) return Word{};
  std::vector<Tuple> order{start};
  std::map<Tuple, std::size_t> id{{start, 0}};
  std::vector<std::pair<std::size_t, Symbol>> back{{0, 0}};  // (parent, symbol)
  auto rebuild = [&](Symbol last, std::size_t from) {
    Word w{last};
    for (std::size_t x = from; x != 0; x = back[x].first) w.push_back(back[x].second);
    std::reverse(w.begin(), w.end());
    return w;
  };
  for (std::size_t head = 0; head < order.size(); ++head) {
    Tuple cur = order[head];
    for (Symbol a = 0; a < nfa.alphabet_size(); ++a) {
      // Enumerate all successor tuples.
      std::vector<Tuple> succ{{}};
      for (State q : cur) {
        std::vector<Tuple> next;
        for (const auto& partial : succ)
          for (State q2 : nfa.successors(q, a)) {
            Tuple t = partial;
            t.push_back(q2);
            next.push_back(std::move(t));
          }
        succ = std::move(next);
        if (succ.empty()) break;
      }
      for (auto& t : succ) {
        if (t == goal) return rebuild(a, head);
        if (id.count(t)) continue;
        if (order.size() >= budget)
          throw BudgetExceeded("tuple search exceeds " + std::to_string(budget) + " states");
        id[t] = order.size();
        order.push_back(t);
        back.emplace_back(head, a);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Word> synchronizing_loop(const Nfa& nfa, const StateSet& states) {
  if (states.empty()) throw std::invalid_argument("empty state set");
  std::vector<State> t(states.begin(), states.end());
  return tuple_search(nfa, t, t, true, 2000000);
}

std::optional<Word> realizing_word(const Nfa& nfa,
                                   const std::vector<std::pair<State, State>>& pairs) {
  std::vector<State> from, to;
  for (auto [p, q] : pairs) from.push_back(p), to.push_back(q);
  return tuple_search(nfa, from, to, false, 2000000);
}

bool verify_sync_set(const Nfa& nfa, const SyncSet& s, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (s.pairs.empty()) return fail("empty pair set");
  bool needs_left = s.kind == SyncKind::Infix || s.kind == SyncKind::Suffix;
  bool needs_right = s.kind == SyncKind::Infix || s.kind == SyncKind::Prefix;
  if (needs_left != s.witness_left.has_value()) return fail("left witness presence");
  if (needs_right != s.witness_right.has_value()) return fail("right witness presence");
  for (auto [p, q] : s.pairs) {
    if (!accepts(nfa, {p}, {q}, s.witness_mid)) return fail("condition a) fails");
    if (s.witness_left && (s.witness_left->empty() || !accepts(nfa, {p}, {p}, *s.witness_left)))
      return fail("condition b) fails");
    if (s.witness_right &&
        (s.witness_right->empty() || !accepts(nfa, {q}, {q}, *s.witness_right)))
      return fail("condition c) fails");
  }
  return true;
}

Word Decomposition::instantiate(std::uint64_t exponent) const {
  Word w = u.at(0);
  for (std::size_t j = 0; j < v.size(); ++j) {
    for (std::uint64_t e = 0; e < exponent; ++e) w.insert(w.end(), v[j].begin(), v[j].end());
    w.insert(w.end(), u.at(j + 1).begin(), u.at(j + 1).end());
  }
  return w;
}

namespace {

// Some accepting state sequence of `w` through the reduced automaton.
std::vector<State> accepting_run(const Nfa& nfa, const StateSet& initial,
                                 const StateSet& final, const Word& w) {
  std::vector<std::map<State, State>> parent(w.size() + 1);
  for (State q : initial) parent[0][q] = q;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (const auto& [p, unused] : parent[i])
      for (State q : nfa.successors(p, w[i])) parent[i + 1].emplace(q, p);
  for (const auto& [q, unused] : parent[w.size()]) {
    if (!final.count(q)) continue;
    std::vector<State> run(w.size() + 1);
    run[w.size()] = q;
    for (std::size_t i = w.size(); i > 0; --i) run[i - 1] = parent[i].at(run[i]);
    return run;
  }
  throw std::invalid_argument("word not accepted by the reduced automaton");
}

Decomposition decompose(const ReducedSpec& r, const StateSet& initial,
                        const StateSet& final, const Word& w) {
  if (w.empty()) throw std::invalid_argument("empty reduced word");
  std::vector<State> run = accepting_run(r.nfa, initial, final, w);
  Decomposition dec;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const SyncSet& s = r.catalog.at(w[i]);
    bool first = i == 0, last = i + 1 == w.size();
    bool shape_ok = (s.kind == SyncKind::Weak && first && last) ||
                    (s.kind == SyncKind::Prefix && first && !last) ||
                    (s.kind == SyncKind::Infix && !first && !last) ||
                    (s.kind == SyncKind::Suffix && last && !first);
    if (!shape_ok) throw std::invalid_argument("reduced word has an invalid block shape");
    dec.u.push_back(s.witness_mid);
    if (!last) dec.v.push_back(r.loop_words.at(*s.right_set));
  }
  for (State q : run) dec.states.push_back(r.states.at(q).q);
  return dec;
}

}  // namespace

DecodedPattern decode_pattern(const ReducedSpec& reduced, const Word& w1,
                              const Word& w2, std::uint64_t d) {
  if (!equivalent(w1, w2, 1, d))
    throw std::invalid_argument("decode_pattern: capped images differ");
  DecodedPattern out;
  out.pattern.d = d;
  out.first = decompose(reduced, reduced.i1, reduced.f1, w1);
  out.second = decompose(reduced, reduced.i2, reduced.f2, w2);
  if (w1.size() == 1) {
    out.pattern.single = reduced.catalog.at(w1[0]).witness_mid;
    return out;
  }
  const SyncSet& pre = reduced.catalog.at(w1.front());
  const SyncSet& suf = reduced.catalog.at(w1.back());
  out.pattern.prefix_mid = pre.witness_mid;
  out.pattern.prefix_right = *pre.witness_right;
  out.pattern.suffix_left = *suf.witness_left;
  out.pattern.suffix_mid = suf.witness_mid;
  for (std::size_t i = 1; i + 1 < w1.size(); ++i) {
    const SyncSet& s = reduced.catalog.at(w1[i]);
    auto& c = out.pattern.counts[{*s.witness_left, s.witness_mid, *s.witness_right}];
    if (c < d) ++c;
  }
  return out;
}

bool verify_decomposition(const Nfa& nfa, const StateSet& initial,
                          const StateSet& final, const Decomposition& dec,
                          std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (dec.u.size() != dec.v.size() + 1 || dec.states.size() != dec.u.size() + 1)
    return fail("malformed decomposition");
  if (!initial.count(dec.states.front())) return fail("does not start initial");
  if (!final.count(dec.states.back())) return fail("does not end final");
  for (std::size_t j = 0; j < dec.u.size(); ++j)
    if (!accepts(nfa, {dec.states[j]}, {dec.states[j + 1]}, dec.u[j]))
      return fail("middle word " + std::to_string(j) + " does not connect");
  for (std::size_t j = 0; j < dec.v.size(); ++j)
    if (dec.v[j].empty() || !accepts(nfa, {dec.states[j + 1]}, {dec.states[j + 1]}, dec.v[j]))
      return fail("loop word " + std::to_string(j) + " is not a loop");
  return true;
}

std::pair<Word, Word> pump_pattern(const LangSpec& spec, const DecodedPattern& p,
                                   std::size_t ell, std::uint64_t d) {
  if (ell == 0 || d == 0) throw std::invalid_argument("pump_pattern: ell, d must be >= 1");
  if (d > p.pattern.d)
    throw std::invalid_argument("pump_pattern: threshold exceeds the pattern's");
  std::string why;
  if (!verify_decomposition(spec.nfa, spec.i1, spec.f1, p.first, &why))
    throw std::invalid_argument("pump_pattern: first decomposition: " + why);
  if (!verify_decomposition(spec.nfa, spec.i2, spec.f2, p.second, &why))
    throw std::invalid_argument("pump_pattern: second decomposition: " + why);
  std::uint64_t e = static_cast<std::uint64_t>(ell) * (d + 1);
  Word w1 = p.first.instantiate(e), w2 = p.second.instantiate(e);
  if (!accepts(spec.nfa, spec.i1, spec.f1, w1) || !accepts(spec.nfa, spec.i2, spec.f2, w2))
    throw std::invalid_argument("pump_pattern: pumped word rejected");
  if (!equivalent(w1, w2, ell, d))
    throw std::invalid_argument("pump_pattern: pumped words are not equivalent");
  return {std::move(w1), std::move(w2)};
}

std::string describe_pattern(const Nfa& nfa, const DPattern& p) {
  auto fmt = [&](const Word& w) {
    std::string s = format_word(nfa, w);
    return s.empty() ? std::string("ε") : s;
  };
  std::ostringstream out;
  if (p.single) {
    out << "word " << fmt(*p.single);
    return out.str();
  }
  out << "prefix (" << fmt(p.prefix_mid) << ", " << fmt(p.prefix_right) << ")";
  for (const auto& [b, c] : p.counts)
    out << "; block (" << fmt(b.left) << ", " << fmt(b.mid) << ", " << fmt(b.right)
        << ") x" << c;
  out << "; suffix (" << fmt(p.suffix_left) << ", " << fmt(p.suffix_mid) << ")";
  out << "; d=" << p.d;
  return out.str();
}

}  // namespace ltsep
