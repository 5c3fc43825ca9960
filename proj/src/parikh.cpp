#include "ltsep/parikh.hpp"

#include <z3++.h>

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace ltsep {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "sat";
    case SolveStatus::Unsat: return "unsat";
    case SolveStatus::Unknown: return "unknown";
  }
  return "unknown";
}

FlowSystem flow_system(const Nfa& nfa, const StateSet& initial,
                       const StateSet& final) {
  FlowSystem sys{nfa, initial, final, nfa.transitions()};
  for (const StateSet* s : {&initial, &final})
    for (State q : *s)
      if (q >= nfa.num_states()) throw std::out_of_range("state out of range");
  return sys;
}

Counts letter_counts(const FlowSystem& system, const Counts& edges) {
  if (edges.size() != system.edges.size())
    throw std::invalid_argument("edge vector size mismatch");
  Counts out(system.num_letters(), 0);
  for (std::size_t e = 0; e < edges.size(); ++e)
    out[system.edges[e].symbol] += edges[e];
  return out;
}

Counts parikh_vector(const Word& w, std::size_t num_letters) {
  Counts out(num_letters, 0);
  for (Symbol a : w) out.at(a) += 1;
  return out;
}

namespace {

class Encoder {
 public:
  Encoder(z3::context& ctx, z3::solver& solver) : ctx_(ctx), solver_(solver) {}

  struct Flow {
    std::vector<z3::expr> edges;
    std::vector<z3::expr> src, tgt;  // Bool per state
    std::vector<z3::expr> letters;
  };

  Flow flow(const FlowSystem& sys, const std::string& tag) {
    const Nfa& nfa = sys.nfa;
    const std::size_t n = nfa.num_states();
    Flow f = declare_edges(sys, tag);
    StateSet live = reachable(nfa, sys.initial);
    {
      StateSet co = coreachable(nfa, sys.final);
      StateSet both;
      for (State q : live)
        if (co.count(q)) both.insert(q);
      live = std::move(both);
    }
    for (std::size_t e = 0; e < sys.edges.size(); ++e)
      if (!live.count(sys.edges[e].from) || !live.count(sys.edges[e].to))
        solver_.add(f.edges[e] == 0);

    z3::expr_vector src_terms(ctx_), tgt_terms(ctx_);
    for (State q = 0; q < n; ++q) {
      std::string s = tag + "_src" + std::to_string(q);
      std::string t = tag + "_tgt" + std::to_string(q);
      f.src.push_back(sys.initial.count(q) && live.count(q) ? ctx_.bool_const(s.c_str())
                                                            : ctx_.bool_val(false));
      f.tgt.push_back(sys.final.count(q) && live.count(q) ? ctx_.bool_const(t.c_str())
                                                          : ctx_.bool_val(false));
      src_terms.push_back(z3::ite(f.src[q], ctx_.int_val(1), ctx_.int_val(0)));
      tgt_terms.push_back(z3::ite(f.tgt[q], ctx_.int_val(1), ctx_.int_val(0)));
    }
    if (n == 0) {
      solver_.add(ctx_.bool_val(false));  // no states, empty language
    } else {
      solver_.add(z3::sum(src_terms) == 1);
      solver_.add(z3::sum(tgt_terms) == 1);
    }

    auto [out_sum, in_sum] = balance_terms(sys, f);
    for (State q = 0; q < n; ++q)
      solver_.add(out_sum[q] - in_sum[q] ==
                  z3::ite(f.src[q], ctx_.int_val(1), ctx_.int_val(0)) -
                      z3::ite(f.tgt[q], ctx_.int_val(1), ctx_.int_val(0)));

    // Every entered non-source state has a used predecessor of smaller depth.
    std::vector<z3::expr> depth;
    for (State q = 0; q < n; ++q) {
      std::string name = tag + "_dep" + std::to_string(q);
      depth.push_back(ctx_.int_const(name.c_str()));
      solver_.add(depth[q] >= 0 && depth[q] <= static_cast<int>(n));
    }
    auto support = vectors(n);
    for (std::size_t e = 0; e < sys.edges.size(); ++e) {
      const auto& t = sys.edges[e];
      if (t.from == t.to) continue;
      support[t.to].push_back(f.edges[e] >= 1 && depth[t.from] < depth[t.to]);
    }
    for (State q = 0; q < n; ++q) {
      z3::expr has_pred = support[q].empty() ? ctx_.bool_val(false)
                                             : z3::mk_or(support[q]);
      solver_.add(z3::implies(in_sum[q] >= 1 && !f.src[q], has_pred));
    }
    return f;
  }

  Flow circulation(const FlowSystem& sys, const std::string& tag,
                   const Flow& base) {
    Flow f = declare_edges(sys, tag);
    auto [out_sum, in_sum] = balance_terms(sys, f);
    for (State q = 0; q < sys.nfa.num_states(); ++q)
      solver_.add(out_sum[q] == in_sum[q]);
    for (std::size_t e = 0; e < sys.edges.size(); ++e)
      solver_.add(z3::implies(f.edges[e] >= 1, base.edges[e] >= 1));
    return f;
  }

  z3::expr linear(const Flow& f, const LinearConstraint& c) {
    z3::expr lhs = ctx_.int_val(0);
    for (auto [i, coef] : c.letter_terms)
      lhs = lhs + ctx_.int_val(static_cast<int64_t>(coef)) * f.letters.at(i);
    for (auto [e, coef] : c.edge_terms)
      lhs = lhs + ctx_.int_val(static_cast<int64_t>(coef)) * f.edges.at(e);
    z3::expr rhs = ctx_.int_val(static_cast<int64_t>(c.rhs));
    switch (c.rel) {
      case Relation::Le: return lhs <= rhs;
      case Relation::Ge: return lhs >= rhs;
      case Relation::Eq: return lhs == rhs;
    }
    throw std::logic_error("bad relation");
  }

 private:
  // Each entry needs its own handle; copies of an expr_vector share storage.
  std::vector<z3::expr_vector> vectors(std::size_t n) {
    std::vector<z3::expr_vector> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) v.emplace_back(ctx_);
    return v;
  }

  Flow declare_edges(const FlowSystem& sys, const std::string& tag) {
    Flow f;
    for (std::size_t e = 0; e < sys.edges.size(); ++e) {
      std::string name = tag + "_x" + std::to_string(e);
      f.edges.push_back(ctx_.int_const(name.c_str()));
      solver_.add(f.edges.back() >= 0);
    }
    auto per_letter = vectors(sys.num_letters());
    for (std::size_t e = 0; e < sys.edges.size(); ++e)
      per_letter[sys.edges[e].symbol].push_back(f.edges[e]);
    for (auto& v : per_letter)
      f.letters.push_back(v.empty() ? ctx_.int_val(0) : z3::sum(v));
    return f;
  }

  std::pair<std::vector<z3::expr>, std::vector<z3::expr>> balance_terms(
      const FlowSystem& sys, const Flow& f) {
    const std::size_t n = sys.nfa.num_states();
    auto out = vectors(n), in = vectors(n);
    for (std::size_t e = 0; e < sys.edges.size(); ++e) {
      out[sys.edges[e].from].push_back(f.edges[e]);
      in[sys.edges[e].to].push_back(f.edges[e]);
    }
    std::vector<z3::expr> outs, ins;
    for (State q = 0; q < n; ++q) {
      outs.push_back(out[q].empty() ? ctx_.int_val(0) : z3::sum(out[q]));
      ins.push_back(in[q].empty() ? ctx_.int_val(0) : z3::sum(in[q]));
    }
    return {outs, ins};
  }

  z3::context& ctx_;
  z3::solver& solver_;
};

void configure(z3::context& ctx, z3::solver& solver, const SolverConfig& config) {
  z3::params p(ctx);
  if (config.rlimit) p.set("rlimit", config.rlimit);
  if (config.timeout_ms) p.set("timeout", config.timeout_ms);
  solver.set(p);
}

SolveStatus run(z3::solver& solver) {
  switch (solver.check()) {
    case z3::sat: return SolveStatus::Sat;
    case z3::unsat: return SolveStatus::Unsat;
    default: return SolveStatus::Unknown;
  }
}

std::uint64_t value(const z3::model& m, const z3::expr& e) {
  z3::expr v = m.eval(e, true);
  std::uint64_t out = 0;
  if (!v.is_numeral_u64(out)) throw std::runtime_error("non-numeral model value");
  return out;
}

Counts values(const z3::model& m, const std::vector<z3::expr>& es) {
  Counts out;
  out.reserve(es.size());
  for (const auto& e : es) out.push_back(value(m, e));
  return out;
}

FlowAssignment extract(const z3::model& m, const Encoder::Flow& f) {
  FlowAssignment a;
  a.edges = values(m, f.edges);
  for (State q = 0; q < f.src.size(); ++q) {
    if (m.eval(f.src[q], true).is_true()) a.source = q;
    if (m.eval(f.tgt[q], true).is_true()) a.target = q;
  }
  return a;
}

void check_shared(const FlowSystem& a, const FlowSystem& b) {
  if (a.num_letters() != b.num_letters())
    throw std::invalid_argument("flow systems over different alphabets");
}

}  // namespace

FeasibleResult feasible(const FlowSystem& system,
                        const std::vector<LinearConstraint>& extra,
                        const SolverConfig& config) {
  z3::context ctx;
  z3::solver solver(ctx, "QF_LIA");
  configure(ctx, solver, config);
  Encoder enc(ctx, solver);
  auto f = enc.flow(system, "f");
  for (const auto& c : extra) solver.add(enc.linear(f, c));
  FeasibleResult res;
  res.status = run(solver);
  if (res.status == SolveStatus::Sat) res.assignment = extract(solver.get_model(), f);
  return res;
}

MatchResult match_fixed(const FlowSystem& a, const FlowSystem& b,
                        std::uint64_t d, const SolverConfig& config) {
  check_shared(a, b);
  if (d == 0) throw std::invalid_argument("threshold d must be >= 1");
  z3::context ctx;
  z3::solver solver(ctx, "QF_LIA");
  configure(ctx, solver, config);
  Encoder enc(ctx, solver);
  auto f1 = enc.flow(a, "a");
  auto f2 = enc.flow(b, "b");
  z3::expr dd = ctx.int_val(static_cast<uint64_t>(d));
  for (std::size_t i = 0; i < a.num_letters(); ++i)
    solver.add(f1.letters[i] == f2.letters[i] ||
               (f1.letters[i] >= dd && f2.letters[i] >= dd));
  MatchResult res;
  res.status = run(solver);
  if (res.status == SolveStatus::Sat) {
    auto m = solver.get_model();
    res.first = extract(m, f1);
    res.second = extract(m, f2);
  }
  return res;
}

LimitResult match_limit(const FlowSystem& a, const FlowSystem& b,
                        const SolverConfig& config) {
  check_shared(a, b);
  z3::context ctx;
  z3::solver solver(ctx, "QF_LIA");
  configure(ctx, solver, config);
  Encoder enc(ctx, solver);
  auto base1 = enc.flow(a, "a");
  auto base2 = enc.flow(b, "b");
  auto cyc1 = enc.circulation(a, "ca", base1);
  auto cyc2 = enc.circulation(b, "cb", base2);
  std::vector<z3::expr> unbounded;
  for (std::size_t i = 0; i < a.num_letters(); ++i) {
    std::string name = "u" + std::to_string(i);
    unbounded.push_back(ctx.bool_const(name.c_str()));
    solver.add(z3::implies(unbounded[i], cyc1.letters[i] >= 1 && cyc2.letters[i] >= 1));
    solver.add(z3::implies(!unbounded[i], base1.letters[i] == base2.letters[i] &&
                                              cyc1.letters[i] == cyc2.letters[i]));
  }
  LimitResult res;
  res.status = run(solver);
  if (res.status == SolveStatus::Sat) {
    auto m = solver.get_model();
    PumpCertificate cert;
    cert.base1 = extract(m, base1);
    cert.base2 = extract(m, base2);
    cert.cycle1 = values(m, cyc1.edges);
    cert.cycle2 = values(m, cyc2.edges);
    for (const auto& u : unbounded) cert.unbounded.push_back(m.eval(u, true).is_true());
    res.certificate = std::move(cert);
  }
  return res;
}

bool is_feasible_flow(const FlowSystem& system, const FlowAssignment& flow,
                      std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const Nfa& nfa = system.nfa;
  if (flow.edges.size() != system.edges.size()) return fail("edge count mismatch");
  if (!system.initial.count(flow.source)) return fail("source not initial");
  if (!system.final.count(flow.target)) return fail("target not final");
  std::vector<std::int64_t> balance(nfa.num_states(), 0);
  std::vector<std::vector<State>> adj(nfa.num_states());
  std::vector<char> used(nfa.num_states(), 0);
  for (std::size_t e = 0; e < flow.edges.size(); ++e) {
    if (!flow.edges[e]) continue;
    const auto& t = system.edges[e];
    balance[t.from] += static_cast<std::int64_t>(flow.edges[e]);
    balance[t.to] -= static_cast<std::int64_t>(flow.edges[e]);
    adj[t.from].push_back(t.to);
    used[t.from] = used[t.to] = 1;
  }
  balance[flow.source] -= 1;
  balance[flow.target] += 1;
  for (State q = 0; q < nfa.num_states(); ++q)
    if (balance[q] != 0) return fail("flow not conserved at state " + std::to_string(q));
  std::vector<char> seen(nfa.num_states(), 0);
  std::deque<State> queue{flow.source};
  seen[flow.source] = 1;
  while (!queue.empty()) {
    State p = queue.front();
    queue.pop_front();
    for (State q : adj[p])
      if (!seen[q]) seen[q] = 1, queue.push_back(q);
  }
  for (State q = 0; q < nfa.num_states(); ++q)
    if (used[q] && !seen[q]) return fail("used state " + std::to_string(q) + " not connected");
  return true;
}

FlowAssignment pump(const FlowAssignment& base, const Counts& cycle,
                    std::uint64_t t) {
  if (cycle.size() != base.edges.size()) throw std::invalid_argument("cycle size mismatch");
  FlowAssignment out = base;
  for (std::size_t e = 0; e < cycle.size(); ++e) out.edges[e] += t * cycle[e];
  return out;
}

bool check_certificate(const FlowSystem& a, const FlowSystem& b,
                       const PumpCertificate& cert, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (cert.unbounded.size() != a.num_letters()) return fail("unbounded set size");
  for (std::uint64_t t : {0u, 1u, 2u}) {
    std::string reason;
    if (!is_feasible_flow(a, pump(cert.base1, cert.cycle1, t), &reason))
      return fail("side 1 at t=" + std::to_string(t) + ": " + reason);
    if (!is_feasible_flow(b, pump(cert.base2, cert.cycle2, t), &reason))
      return fail("side 2 at t=" + std::to_string(t) + ": " + reason);
  }
  Counts b1 = letter_counts(a, cert.base1.edges), b2 = letter_counts(b, cert.base2.edges);
  Counts c1 = letter_counts(a, cert.cycle1), c2 = letter_counts(b, cert.cycle2);
  for (std::size_t i = 0; i < a.num_letters(); ++i) {
    if (cert.unbounded[i]) {
      if (c1[i] == 0 || c2[i] == 0) return fail("unbounded letter without pumping");
    } else if (b1[i] != b2[i] || c1[i] != c2[i]) {
      return fail("bounded letter counts differ");
    }
  }
  return true;
}

Word realize_word(const FlowSystem& system, const FlowAssignment& flow) {
  std::string why;
  if (!is_feasible_flow(system, flow, &why))
    throw std::invalid_argument("realize_word: " + why);
  // Hierholzer over the multigraph, from source to target.
  const std::size_t n = system.nfa.num_states();
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t e = 0; e < system.edges.size(); ++e)
    if (flow.edges[e]) out[system.edges[e].from].push_back(e);
  Counts remaining = flow.edges;
  std::vector<std::size_t> cursor(n, 0);
  std::vector<std::pair<State, std::optional<std::size_t>>> stack{{flow.source, std::nullopt}};
  std::vector<std::size_t> path;
  while (!stack.empty()) {
    State v = stack.back().first;
    auto& c = cursor[v];
    while (c < out[v].size() && remaining[out[v][c]] == 0) ++c;
    if (c == out[v].size()) {
      if (stack.back().second) path.push_back(*stack.back().second);
      stack.pop_back();
      continue;
    }
    std::size_t e = out[v][c];
    --remaining[e];
    stack.emplace_back(system.edges[e].to, e);
  }
  std::reverse(path.begin(), path.end());
  Word w;
  w.reserve(path.size());
  for (std::size_t e : path) w.push_back(system.edges[e].symbol);
  return w;
}

Word realize_word(const Nfa& nfa, const StateSet& initial, const StateSet& final,
                  const FlowAssignment& flow) {
  return realize_word(flow_system(nfa, initial, final), flow);
}

}  // namespace ltsep
