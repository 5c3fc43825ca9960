#include "ltsep/profiles.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <tuple>

namespace ltsep {

namespace {

void check_kd(std::size_t k, std::uint64_t d) {
  if (k == 0) throw std::invalid_argument("profile width k must be >= 1");
  if (d == 0) throw std::invalid_argument("threshold d must be >= 1");
}

}  // namespace

Profile profile_at(const Word& w, std::size_t x, std::size_t k) {
  if (k == 0) throw std::invalid_argument("profile width k must be >= 1");
  if (x >= w.size()) throw std::out_of_range("position out of range");
  std::size_t kl = left_width(k), kr = right_width(k);
  std::size_t lo = x >= kl ? x - kl : 0;
  std::size_t hi = std::min(x + kr, w.size());
  return {Word(w.begin() + lo, w.begin() + x), Word(w.begin() + x, w.begin() + hi)};
}

std::vector<Profile> profile_word(const Word& w, std::size_t k) {
  std::vector<Profile> out;
  out.reserve(w.size());
  for (std::size_t x = 0; x < w.size(); ++x) out.push_back(profile_at(w, x, k));
  return out;
}

CappedImage capped_image(const Word& w, std::size_t k, std::uint64_t d) {
  check_kd(k, d);
  CappedImage img;
  img.k = k;
  img.d = d;
  for (std::size_t x = 0; x < w.size(); ++x) {
    auto& c = img.counts[profile_at(w, x, k)];
    if (c < d) ++c;
  }
  return img;
}

bool equivalent(const Word& w1, const Word& w2, std::size_t k, std::uint64_t d) {
  return capped_image(w1, k, d) == capped_image(w2, k, d);
}

std::string profile_name(const Nfa& nfa, const Profile& p) {
  auto join = [&](const Word& w) {
    bool dotted = std::any_of(w.begin(), w.end(), [&](Symbol s) {
      return nfa.symbol_name(s).size() != 1;
    });
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i && dotted) out += '.';
      out += nfa.symbol_name(w[i]);
    }
    return out;
  };
  return "(" + join(p.left) + "," + join(p.right) + ")";
}

namespace {

struct AnnState {
  State q;
  Word left;
  Word pending;
  bool ended;
  bool fresh;

  auto operator<=>(const AnnState&) const = default;
};

}  // namespace

AnnotatedSpec annotate(const Nfa& nfa, const StateSet& initial,
                       const StateSet& final, std::size_t k,
                       std::size_t state_budget) {
  if (k == 0) throw std::invalid_argument("profile width k must be >= 1");
  const std::size_t kl = left_width(k), kr = right_width(k);
  const std::size_t sigma = nfa.alphabet_size();

  // Exploration over (NFA state after the lookahead, left window, unverified
  // lookahead, word-ended flag, nothing-emitted flag).
  std::map<AnnState, State> ids;
  std::vector<AnnState> states;
  std::map<Profile, Symbol> profile_ids;
  std::vector<Profile> profiles;
  std::vector<std::tuple<State, Symbol, State>> edges;
  std::deque<State> queue;

  auto intern = [&](AnnState s) {
    auto [it, fresh] = ids.emplace(s, static_cast<State>(states.size()));
    if (fresh) {
      if (states.size() >= state_budget)
        throw BudgetExceeded("annotation exceeds " +
                             std::to_string(state_budget) + " states");
      states.push_back(std::move(s));
      queue.push_back(it->second);
    }
    return it->second;
  };
  auto profile_id = [&](const Profile& p) {
    auto [it, fresh] = profile_ids.emplace(p, static_cast<Symbol>(profiles.size()));
    if (fresh) profiles.push_back(p);
    return it->second;
  };
  auto emit = [&](State from, const AnnState& src, const Word& r, State q,
                  bool ended) {
    Word left = src.left;
    left.push_back(r[0]);
    if (left.size() > kl) left.erase(left.begin(), left.end() - kl);
    Symbol sym = profile_id({src.left, r});
    State to = intern({q, std::move(left), Word(r.begin() + 1, r.end()), ended, false});
    edges.emplace_back(from, sym, to);
  };

  StateSet init_ids;
  for (State q : initial) init_ids.insert(intern({q, {}, {}, false, true}));

  while (!queue.empty()) {
    State id = queue.front();
    queue.pop_front();
    const AnnState cur = states[id];
    if (cur.fresh) {
      // First position: guess the whole first window and read it.
      std::vector<std::pair<Word, State>> frontier{{Word{}, cur.q}};
      for (std::size_t len = 1; len <= kr; ++len) {
        std::vector<std::pair<Word, State>> next;
        for (const auto& [w, q] : frontier)
          for (Symbol a = 0; a < sigma; ++a)
            for (State q2 : nfa.successors(q, a)) {
              Word w2 = w;
              w2.push_back(a);
              next.emplace_back(std::move(w2), q2);
            }
        for (const auto& [w, q] : next) emit(id, cur, w, q, len < kr);
        frontier = std::move(next);
      }
    } else if (!cur.ended) {
      if (cur.pending.size() + 1 != kr)
        throw std::logic_error("annotate: inconsistent lookahead");
      for (Symbol a = 0; a < sigma; ++a)
        for (State q2 : nfa.successors(cur.q, a)) {
          Word r = cur.pending;
          r.push_back(a);
          emit(id, cur, r, q2, false);
        }
      if (!cur.pending.empty()) emit(id, cur, cur.pending, cur.q, true);
    } else if (!cur.pending.empty()) {
      emit(id, cur, cur.pending, cur.q, true);
    }
  }

  StateSet fin_ids;
  for (State id = 0; id < states.size(); ++id) {
    const auto& s = states[id];
    if (final.count(s.q) && (s.fresh || s.pending.empty())) fin_ids.insert(id);
  }

  Nfa raw(states.size(), [&] {
    std::vector<std::string> names;
    for (Symbol s = 0; s < profiles.size(); ++s)
      names.push_back(std::to_string(s));
    return names;
  }());
  for (const auto& [p, s, q] : edges) raw.add_transition(p, s, q);

  std::vector<std::optional<State>> map;
  Nfa trimmed = trim(raw, {{init_ids, fin_ids}}, &map);

  // Keep only profiles labelling a surviving transition, sorted.
  std::vector<char> used(profiles.size(), 0);
  for (const auto& t : trimmed.transitions()) used[t.symbol] = 1;
  std::vector<Symbol> kept;
  for (Symbol s = 0; s < profiles.size(); ++s)
    if (used[s]) kept.push_back(s);
  std::sort(kept.begin(), kept.end(),
            [&](Symbol a, Symbol b) { return profiles[a] < profiles[b]; });
  std::vector<Symbol> new_sym(profiles.size(), 0);
  AnnotatedSpec out;
  out.k = k;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    new_sym[kept[i]] = static_cast<Symbol>(i);
    out.profiles.push_back(profiles[kept[i]]);
    names.push_back(profile_name(nfa, profiles[kept[i]]));
  }
  out.nfa = Nfa(trimmed.num_states(), names);
  for (const auto& t : trimmed.transitions())
    out.nfa.add_transition(t.from, new_sym[t.symbol], t.to);
  for (State q : init_ids)
    if (map[q]) out.initial.insert(*map[q]);
  for (State q : fin_ids)
    if (map[q]) out.final.insert(*map[q]);
  return out;
}

Nfa relabel(const AnnotatedSpec& spec, const std::vector<Profile>& alphabet) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < alphabet.size(); ++i) names.push_back(std::to_string(i));
  Nfa out(spec.nfa.num_states(), names);
  std::vector<Symbol> map;
  for (const auto& p : spec.profiles) {
    auto it = std::lower_bound(alphabet.begin(), alphabet.end(), p);
    if (it == alphabet.end() || *it != p)
      throw std::invalid_argument("relabel: profile missing from alphabet");
    map.push_back(static_cast<Symbol>(it - alphabet.begin()));
  }
  for (const auto& t : spec.nfa.transitions())
    out.add_transition(t.from, map[t.symbol], t.to);
  return out;
}

Word unannotate(const std::vector<Profile>& profile_seq) {
  Word w;
  w.reserve(profile_seq.size());
  for (const auto& p : profile_seq) {
    if (p.right.empty()) throw std::invalid_argument("profile with empty right window");
    w.push_back(p.right[0]);
  }
  return w;
}

namespace {

void bump(std::map<Profile, std::uint64_t>& counts, Profile p, std::uint64_t d) {
  auto& c = counts[std::move(p)];
  if (c < d) ++c;
}

}  // namespace

CountingState counting_step(const CountingState& s, Symbol c, std::size_t k,
                            std::uint64_t d) {
  check_kd(k, d);
  const std::size_t kl = left_width(k), kr = right_width(k);
  Word b = s.buffer;
  b.push_back(c);
  CountingState out;
  out.counts = s.counts;
  if (b.size() >= kr) {
    std::size_t x = b.size() - kr;
    std::size_t lo = x >= kl ? x - kl : 0;
    bump(out.counts, {Word(b.begin() + lo, b.begin() + x), Word(b.begin() + x, b.end())}, d);
  }
  if (b.size() > k - 1) b.erase(b.begin(), b.end() - (k - 1));
  out.buffer = std::move(b);
  return out;
}

std::map<Profile, std::uint64_t> counting_flush(const CountingState& s,
                                                std::size_t k, std::uint64_t d) {
  check_kd(k, d);
  const std::size_t kl = left_width(k), kr = right_width(k);
  const Word& b = s.buffer;
  auto counts = s.counts;
  std::size_t first = b.size() + 1 >= kr ? b.size() + 1 - kr : 0;
  for (std::size_t x = first; x < b.size(); ++x) {
    std::size_t lo = x >= kl ? x - kl : 0;
    bump(counts, {Word(b.begin() + lo, b.begin() + x), Word(b.begin() + x, b.end())}, d);
  }
  return counts;
}

std::set<Signature> capped_signatures(const Nfa& nfa, const StateSet& initial,
                                      const StateSet& final, std::size_t k,
                                      std::uint64_t d, std::size_t state_budget) {
  check_kd(k, d);
  using Node = std::pair<State, CountingState>;
  std::set<Node> seen;
  std::deque<Node> queue;
  for (State q : initial)
    if (seen.insert({q, CountingState{}}).second) queue.push_back({q, CountingState{}});
  std::set<Signature> out;
  while (!queue.empty()) {
    Node cur = std::move(queue.front());
    queue.pop_front();
    if (final.count(cur.first)) out.insert(counting_flush(cur.second, k, d));
    for (Symbol a = 0; a < nfa.alphabet_size(); ++a) {
      const auto& succ = nfa.successors(cur.first, a);
      if (succ.empty()) continue;
      CountingState next = counting_step(cur.second, a, k, d);
      for (State q : succ) {
        Node n{q, next};
        if (seen.count(n)) continue;
        if (seen.size() >= state_budget)
          throw BudgetExceeded("signature exploration exceeds " +
                               std::to_string(state_budget) + " states");
        seen.insert(n);
        queue.push_back(std::move(n));
      }
    }
  }
  return out;
}

}  // namespace ltsep
