#include "ltsep/separ.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

namespace ltsep {

const char* to_string(Problem p) {
  switch (p) {
    case Problem::LT: return "LT";
    case Problem::LTT: return "LTT";
    case Problem::Fixed: return "fixed";
  }
  return "?";
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Separable: return "separable";
    case Outcome::Inseparable: return "inseparable";
    case Outcome::Unknown: return "unknown";
  }
  return "?";
}

bool check_witness(const LangSpec& spec, const WitnessPair& w) {
  return accepts(spec.nfa, spec.i1, spec.f1, w.w1) &&
         accepts(spec.nfa, spec.i2, spec.f2, w.w2) && equivalent(w.w1, w.w2, w.k, w.d);
}

namespace {

void check_kd(std::size_t k, std::uint64_t d) {
  if (k == 0) throw std::invalid_argument("profile width k must be >= 1");
  if (d == 0) throw std::invalid_argument("threshold d must be >= 1");
}

// Removes transitions whose letter cannot occur in accepted words of both
// automata, until stable. Both automata share one alphabet.
void restrict_to_common_letters(Nfa& a, const StateSet& ia, const StateSet& fa,
                                Nfa& b, const StateSet& ib, const StateSet& fb) {
  auto usable = [](const Nfa& n, const StateSet& i, const StateSet& f) {
    std::vector<char> used(n.alphabet_size(), 0);
    StateSet fw = reachable(n, i), bw = coreachable(n, f);
    for (const auto& t : n.transitions())
      if (fw.count(t.from) && bw.count(t.to)) used[t.symbol] = 1;
    return used;
  };
  auto filter = [](const Nfa& n, const std::vector<char>& keep) {
    Nfa out(n.num_states(), n.alphabet());
    for (const auto& t : n.transitions())
      if (keep[t.symbol]) out.add_transition(t.from, t.symbol, t.to);
    return out;
  };
  for (;;) {
    auto ua = usable(a, ia, fa), ub = usable(b, ib, fb);
    std::vector<char> keep(a.alphabet_size());
    bool changed = false;
    for (std::size_t s = 0; s < keep.size(); ++s) {
      keep[s] = ua[s] && ub[s];
      if ((ua[s] || ub[s]) && !keep[s]) changed = true;
    }
    if (!changed) return;
    a = filter(a, keep);
    b = filter(b, keep);
  }
}

// Both sides annotated at width k over the union of realizable profiles.
struct FixedProblem {
  std::size_t k;
  AnnotatedSpec a1, a2;
  std::vector<Profile> alphabet;
  FlowSystem f1, f2;

  FixedProblem(const LangSpec& spec, std::size_t width, std::size_t budget) : k(width) {
    a1 = annotate(spec.nfa, spec.i1, spec.f1, k, budget);
    a2 = annotate(spec.nfa, spec.i2, spec.f2, k, budget);
    alphabet = a1.profiles;
    alphabet.insert(alphabet.end(), a2.profiles.begin(), a2.profiles.end());
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
    Nfa n1 = relabel(a1, alphabet), n2 = relabel(a2, alphabet);
    restrict_to_common_letters(n1, a1.initial, a1.final, n2, a2.initial, a2.final);
    f1 = flow_system(n1, a1.initial, a1.final);
    f2 = flow_system(n2, a2.initial, a2.final);
  }

  Word word(const FlowSystem& f, const FlowAssignment& a) const {
    std::vector<Profile> seq;
    for (Symbol s : realize_word(f, a)) seq.push_back(alphabet.at(s));
    return unannotate(seq);
  }
};

// Smallest d in 1..cap with `separated(d)`, assuming monotonicity in d.
struct ThresholdSearch {
  std::optional<std::uint64_t> value;
  bool unknown = false;
};

ThresholdSearch min_threshold(const std::function<SolveStatus(std::uint64_t)>& matched,
                              std::uint64_t cap) {
  // matched(d) is Sat when matching vectors exist at threshold d.
  ThresholdSearch res;
  std::uint64_t lo = 0, hi = 1;
  for (;;) {
    if (hi > cap) hi = cap;
    SolveStatus s = matched(hi);
    if (s == SolveStatus::Unknown) {
      res.unknown = true;
      return res;
    }
    if (s == SolveStatus::Unsat) break;
    lo = hi;
    if (hi == cap) return res;
    hi *= 2;
  }
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    SolveStatus s = matched(mid);
    if (s == SolveStatus::Unknown) {
      res.unknown = true;
      return res;
    }
    (s == SolveStatus::Sat ? lo : hi) = mid;
  }
  res.value = hi;
  return res;
}

SeparatorHandle handle_from(const LangSpec& spec, const FixedProblem& fp, std::uint64_t d) {
  SeparatorHandle h;
  h.k = fp.k;
  h.d = d;
  h.nfa = spec.nfa;
  h.i1 = spec.i1;
  h.f1 = spec.f1;
  h.annotated = fp.a1;
  h.flow = flow_system(fp.a1.nfa, fp.a1.initial, fp.a1.final);
  return h;
}

// Shared fast paths: a common word, or an empty side.
bool fast_path(const LangSpec& spec, Verdict& v, const DecideConfig& config,
               bool lt) {
  if (auto w = shortest_common_word(spec)) {
    v.outcome = Outcome::Inseparable;
    v.route = "intersection";
    std::size_t k = v.k.value_or(config.pump_width);
    std::uint64_t d = v.d.value_or(lt ? 1 : config.witness_d);
    v.witness = WitnessPair{*w, *w, k, d};
    DecodedPattern p;
    p.pattern.d = d;
    p.pattern.single = *w;
    v.pattern = p;
    if (v.problem == Problem::LTT) v.d_limit = true;
    return true;
  }
  if (is_empty(spec.nfa, spec.i1, spec.f1) || is_empty(spec.nfa, spec.i2, spec.f2)) {
    v.outcome = Outcome::Separable;
    v.route = "empty";
    if (!v.k) v.k = 1;
    if (!v.d) v.d = 1;
    if (config.want_separator) v.separator = make_separator(spec, *v.k, *v.d, config.state_budget);
    return true;
  }
  return false;
}

}  // namespace

SeparatorHandle make_separator(const LangSpec& spec, std::size_t k, std::uint64_t d,
                               std::size_t state_budget) {
  check_kd(k, d);
  SeparatorHandle h;
  h.k = k;
  h.d = d;
  h.nfa = spec.nfa;
  h.i1 = spec.i1;
  h.f1 = spec.f1;
  h.annotated = annotate(spec.nfa, spec.i1, spec.f1, k, state_budget);
  h.flow = flow_system(h.annotated.nfa, h.annotated.initial, h.annotated.final);
  return h;
}

Verdict decide_fixed(const LangSpec& spec, std::size_t k, std::uint64_t d,
                     const DecideConfig& config) {
  check_kd(k, d);
  spec.validate();
  Verdict v;
  v.problem = Problem::Fixed;
  v.k = k;
  v.d = d;
  if (fast_path(spec, v, config, false)) return v;

  FixedProblem fp(spec, k, config.state_budget);
  MatchResult r = match_fixed(fp.f1, fp.f2, d, config.solver);
  v.route = "annotated";
  if (r.status == SolveStatus::Unknown) {
    v.budget_flags.push_back("solver budget exhausted in match_fixed");
    return v;
  }
  if (r.status == SolveStatus::Sat) {
    WitnessPair w{fp.word(fp.f1, *r.first), fp.word(fp.f2, *r.second), k, d};
    if (!check_witness(spec, w))
      throw std::logic_error("decide_fixed: realized witness fails verification");
    v.outcome = Outcome::Inseparable;
    v.witness = std::move(w);
    return v;
  }
  v.outcome = Outcome::Separable;
  if (config.want_separator) v.separator = handle_from(spec, fp, d);
  return v;
}

std::optional<SeparatorHandle> find_separator(const LangSpec& spec, bool lt,
                                              const DecideConfig& config) {
  for (std::size_t k = 1; k <= config.separator_k_cap; ++k) {
    std::optional<FixedProblem> fp;
    try {
      fp.emplace(spec, k, config.state_budget);
    } catch (const BudgetExceeded&) {
      return std::nullopt;
    }
    if (lt) {
      if (match_fixed(fp->f1, fp->f2, 1, config.solver).status == SolveStatus::Unsat)
        return handle_from(spec, *fp, 1);
      continue;
    }
    LimitResult lim = match_limit(fp->f1, fp->f2, config.solver);
    if (lim.status != SolveStatus::Unsat) continue;
    auto t = min_threshold(
        [&](std::uint64_t d) { return match_fixed(fp->f1, fp->f2, d, config.solver).status; },
        config.threshold_cap);
    if (t.value) return handle_from(spec, *fp, *t.value);
  }
  return std::nullopt;
}

namespace {

std::shared_ptr<const ReducedSpec> reduced_for(const LangSpec& spec,
                                               const DecideConfig& config) {
  ReductionConfig rc;
  rc.monoid_budget = config.monoid_budget;
  rc.letter_budget = config.letter_budget;
  return std::make_shared<const ReducedSpec>(prune_reduced(build_reduced(spec, rc)));
}

void attach_separator(const LangSpec& spec, Verdict& v, bool lt,
                      const DecideConfig& config) {
  if (!config.want_separator) return;
  if (auto h = find_separator(spec, lt, config)) {
    v.k = h->k;
    v.d = h->d;
    v.separator = std::move(*h);
  } else {
    v.notes.push_back("no separator found for widths up to " +
                      std::to_string(config.separator_k_cap));
  }
}

std::uint64_t width_bound(const LangSpec& spec, const DecideConfig& config) {
  return profile_width_bound(transition_monoid(spec.nfa, config.monoid_budget));
}

}  // namespace

Verdict decide_lt(const LangSpec& spec, const DecideConfig& config) {
  spec.validate();
  Verdict v;
  v.problem = Problem::LT;
  v.d = 1;
  if (fast_path(spec, v, config, true)) return v;

  if (config.direct) {
    std::size_t k = width_bound(spec, config);
    Verdict r = decide_fixed(spec, k, 1, config);
    r.problem = Problem::LT;
    r.route = "direct";
    return r;
  }

  auto reduced = reduced_for(spec, config);
  v.route = "reduced";
  v.reduced_states = reduced->nfa.num_states();
  v.reduced_letters = reduced->nfa.alphabet_size();
  DecideConfig inner = config;
  inner.want_separator = false;
  Verdict r = decide_fixed(reduced->as_langspec(), 1, 1, inner);
  if (r.outcome == Outcome::Unknown) {
    v.budget_flags = r.budget_flags;
    return v;
  }
  if (r.outcome == Outcome::Inseparable) {
    v.outcome = Outcome::Inseparable;
    v.pattern = decode_pattern(*reduced, r.witness->w1, r.witness->w2, 1);
    auto [w1, w2] = pump_pattern(spec, *v.pattern, config.pump_width, 1);
    v.k = config.pump_width;
    v.witness = WitnessPair{std::move(w1), std::move(w2), config.pump_width, 1};
    return v;
  }
  v.outcome = Outcome::Separable;
  attach_separator(spec, v, true, config);
  return v;
}

WitnessPair replay_certificate(const LangSpec& spec, const LttEvidence& ev,
                               std::uint64_t d, std::size_t ell) {
  check_kd(ell, d);
  const auto& c = ev.certificate;
  Word r1 = realize_word(ev.flow1, pump(c.base1, c.cycle1, d));
  Word r2 = realize_word(ev.flow2, pump(c.base2, c.cycle2, d));
  DecodedPattern p = decode_pattern(*ev.reduced, r1, r2, d);
  auto [w1, w2] = pump_pattern(spec, p, ell, d);
  return {std::move(w1), std::move(w2), ell, d};
}

Verdict decide_ltt(const LangSpec& spec, const DecideConfig& config) {
  spec.validate();
  Verdict v;
  v.problem = Problem::LTT;
  if (fast_path(spec, v, config, false)) return v;

  if (config.direct) {
    std::size_t k = width_bound(spec, config);
    FixedProblem fp(spec, k, config.state_budget);
    v.route = "direct";
    v.k = k;
    LimitResult lim = match_limit(fp.f1, fp.f2, config.solver);
    if (lim.status == SolveStatus::Unknown) {
      v.budget_flags.push_back("solver budget exhausted in match_limit");
      return v;
    }
    if (lim.status == SolveStatus::Sat) {
      const auto& c = *lim.certificate;
      std::uint64_t d = config.witness_d;
      WitnessPair w{fp.word(fp.f1, pump(c.base1, c.cycle1, d)),
                    fp.word(fp.f2, pump(c.base2, c.cycle2, d)), k, d};
      if (!check_witness(spec, w))
        throw std::logic_error("decide_ltt: replayed witness fails verification");
      v.outcome = Outcome::Inseparable;
      v.d_limit = true;
      v.witness = std::move(w);
      return v;
    }
    v.outcome = Outcome::Separable;
    auto t = min_threshold(
        [&](std::uint64_t d) { return match_fixed(fp.f1, fp.f2, d, config.solver).status; },
        config.threshold_cap);
    if (t.unknown) v.budget_flags.push_back("solver budget exhausted in threshold search");
    if (t.value) {
      v.d = *t.value;
      if (config.want_separator) v.separator = handle_from(spec, fp, *t.value);
    }
    return v;
  }

  auto reduced = reduced_for(spec, config);
  v.route = "reduced";
  v.reduced_states = reduced->nfa.num_states();
  v.reduced_letters = reduced->nfa.alphabet_size();
  FlowSystem f1 = flow_system(reduced->nfa, reduced->i1, reduced->f1);
  FlowSystem f2 = flow_system(reduced->nfa, reduced->i2, reduced->f2);
  LimitResult lim = match_limit(f1, f2, config.solver);
  if (lim.status == SolveStatus::Unknown) {
    v.budget_flags.push_back("solver budget exhausted in match_limit");
    return v;
  }
  if (lim.status == SolveStatus::Sat) {
    std::string why;
    if (!check_certificate(f1, f2, *lim.certificate, &why))
      throw std::logic_error("decide_ltt: invalid pump certificate: " + why);
    v.outcome = Outcome::Inseparable;
    v.d_limit = true;
    v.evidence = LttEvidence{reduced, std::move(f1), std::move(f2), *lim.certificate};
    v.witness = replay_certificate(spec, *v.evidence, config.witness_d, config.pump_width);
    v.k = v.witness->k;
    v.d = v.witness->d;
    return v;
  }
  v.outcome = Outcome::Separable;
  auto t = min_threshold(
      [&](std::uint64_t d) { return match_fixed(f1, f2, d, config.solver).status; },
      config.threshold_cap);
  if (t.unknown) v.budget_flags.push_back("solver budget exhausted in threshold search");
  v.reduced_threshold = t.value;
  if (!t.value && !t.unknown)
    v.notes.push_back("reduced threshold above cap " + std::to_string(config.threshold_cap));
  attach_separator(spec, v, false, config);
  return v;
}

Membership separator_membership(const SeparatorHandle& h, const Word& w,
                                const SolverConfig& solver) {
  for (Symbol s : w)
    if (s >= h.nfa.alphabet_size()) throw std::out_of_range("symbol outside the alphabet");
  CappedImage img = capped_image(w, h.k, h.d);
  const auto& profs = h.annotated.profiles;
  for (const auto& [p, c] : img.counts)
    if (!std::binary_search(profs.begin(), profs.end(), p)) return Membership::Rejected;
  std::vector<LinearConstraint> cons;
  for (std::size_t i = 0; i < profs.size(); ++i) {
    auto it = img.counts.find(profs[i]);
    std::uint64_t c = it == img.counts.end() ? 0 : it->second;
    LinearConstraint lc;
    lc.letter_terms.push_back({i, 1});
    lc.rel = c < h.d ? Relation::Eq : Relation::Ge;
    lc.rhs = static_cast<std::int64_t>(c < h.d ? c : h.d);
    cons.push_back(std::move(lc));
  }
  FeasibleResult r = feasible(h.flow, cons, solver);
  switch (r.status) {
    case SolveStatus::Sat: return Membership::Accepted;
    case SolveStatus::Unsat: return Membership::Rejected;
    default: return Membership::Unknown;
  }
}

ExplicitSeparator separator_automaton(const SeparatorHandle& h, std::size_t budget) {
  std::set<Signature> sigs = capped_signatures(h.nfa, h.i1, h.f1, h.k, h.d, budget);
  std::map<CountingState, State> ids;
  std::vector<CountingState> states;
  std::vector<Transition> trans;
  ids[CountingState{}] = 0;
  states.emplace_back();
  for (std::size_t head = 0; head < states.size(); ++head) {
    for (Symbol a = 0; a < h.nfa.alphabet_size(); ++a) {
      CountingState next = counting_step(states[head], a, h.k, h.d);
      auto [it, fresh] = ids.emplace(next, static_cast<State>(states.size()));
      if (fresh) {
        if (states.size() >= budget)
          throw BudgetExceeded("explicit separator exceeds " + std::to_string(budget) +
                               " states; use the implicit handle");
        states.push_back(std::move(next));
      }
      trans.push_back({static_cast<State>(head), a, it->second});
    }
  }
  ExplicitSeparator out;
  out.nfa = Nfa(states.size(), h.nfa.alphabet());
  for (const auto& t : trans) out.nfa.add_transition(t.from, t.symbol, t.to);
  out.initial = {0};
  for (State q = 0; q < states.size(); ++q)
    if (sigs.count(counting_flush(states[q], h.k, h.d))) out.final.insert(q);
  return out;
}

}  // namespace ltsep
