#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ltsep/automata.hpp"
#include "ltsep/monoid.hpp"
#include "ltsep/profiles.hpp"
#include "ltsep/reduction.hpp"
#include "ltsep/report.hpp"
#include "ltsep/separ.hpp"
#include "ltsep/testkit.hpp"

namespace ltsep {

namespace {

constexpr int kExitError = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string spec_path;
  std::string problem = "ltt";
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> d;
  bool json = false;
  bool emit_witness = true;
  bool no_witness = false;
  bool emit_separator = false;
  std::size_t pump_width = 2;
  unsigned solver_cap = 0;
  std::uint64_t branch_cap = 1024;
  std::size_t candidate_cap = 200000;
  std::size_t monoid_budget = kDefaultMonoidBudget;
  std::size_t state_budget = kDefaultStateBudget;
  bool no_timing = false;
  bool direct = false;
  std::string dot;
  std::string spec_out;
  std::string catalog_out;

  DecideConfig decide_config() const {
    DecideConfig c;
    c.solver.rlimit = solver_cap;
    c.threshold_cap = branch_cap;
    c.letter_budget = candidate_cap;
    c.monoid_budget = monoid_budget;
    c.state_budget = state_budget;
    c.pump_width = pump_width;
    c.direct = direct;
    c.want_separator = emit_separator;
    if (d && problem != "fixed") c.witness_d = *d;
    return c;
  }
};

void add_budget_options(CLI::App* app, RunConfig& rc) {
  app->add_option("--solver-cap", rc.solver_cap, "Solver resource limit per query (0 = none)");
  app->add_option("--branch-cap", rc.branch_cap, "Largest threshold tried by threshold searches")
      ->check(CLI::PositiveNumber);
  app->add_option("--candidate-cap", rc.candidate_cap, "Letter budget of the reduced automaton")
      ->check(CLI::PositiveNumber);
  app->add_option("--monoid-budget", rc.monoid_budget, "Transition monoid element budget")
      ->check(CLI::PositiveNumber);
  app->add_option("--state-budget", rc.state_budget, "Annotation state budget")
      ->check(CLI::PositiveNumber);
}

void add_decision_options(CLI::App* app, RunConfig& rc) {
  app->add_option("spec", rc.spec_path, "Spec file")->required();
  app->add_option("--class", rc.problem, "Separation class")
      ->check(CLI::IsMember({"lt", "ltt", "fixed"}));
  app->add_option("--k", rc.k, "Profile width (fixed class)")->check(CLI::PositiveNumber);
  app->add_option("--d", rc.d, "Threshold (fixed class) or witness threshold (lt/ltt)")
      ->check(CLI::PositiveNumber);
  app->add_flag("--json", rc.json, "Print the verdict as JSON");
  app->add_flag("--emit-witness", rc.emit_witness, "Include witnesses (default)");
  app->add_flag("--no-witness", rc.no_witness, "Omit witnesses");
  app->add_flag("--emit-separator", rc.emit_separator, "Compute and describe a separator");
  app->add_option("--pump-width", rc.pump_width, "Profile width used to pump witnesses")
      ->check(CLI::PositiveNumber);
  app->add_flag("--no-timing", rc.no_timing, "Omit timings from the output");
  app->add_flag("--direct", rc.direct, "Use the k = 4(|M|+1) profile path for lt/ltt");
  app->add_option("--dot", rc.dot, "Write the input automaton as DOT");
  add_budget_options(app, rc);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

Verdict run_decision(const LangSpec& spec, const RunConfig& rc) {
  DecideConfig cfg = rc.decide_config();
  if (rc.problem == "fixed") {
    if (!rc.k || !rc.d) throw UsageError("--class fixed requires --k and --d");
    return decide_fixed(spec, *rc.k, *rc.d, cfg);
  }
  if (rc.k) throw UsageError("--k applies to --class fixed only");
  return rc.problem == "lt" ? decide_lt(spec, cfg) : decide_ltt(spec, cfg);
}

int cmd_decide(const RunConfig& rc, bool witness_only, std::ostream& out) {
  LangSpec spec = load_spec(rc.spec_path);
  if (!rc.dot.empty()) write_file(rc.dot, dot_export(spec));
  auto t0 = std::chrono::steady_clock::now();
  Verdict v = run_decision(spec, rc);
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  ReportOptions opts;
  opts.emit_witness = rc.emit_witness && !rc.no_witness;
  opts.emit_separator = rc.emit_separator;
  if (!rc.no_timing) opts.elapsed_ms = ms;
  if (witness_only) {
    opts.emit_witness = true;
    opts.emit_separator = false;
    if (rc.json) {
      auto j = nlohmann::ordered_json::parse(verdict_json(spec, v, opts));
      out << nlohmann::ordered_json{{"status", j["status"]}, {"witness", j["witness"]}}.dump(2)
          << '\n';
    } else if (v.witness) {
      out << format_word(spec.nfa, v.witness->w1) << '\n'
          << format_word(spec.nfa, v.witness->w2) << '\n';
    } else {
      out << "no witness (" << to_string(v.outcome) << ")\n";
    }
    return exit_code(v);
  }
  out << (rc.json ? verdict_json(spec, v, opts) + "\n" : verdict_text(spec, v, opts));
  return exit_code(v);
}

struct SeparatorArgs {
  std::vector<std::string> members;
  bool explicit_automaton = false;
  std::size_t explicit_budget = 100000;
};

int cmd_separator(RunConfig rc, const SeparatorArgs& sa, std::ostream& out) {
  LangSpec spec = load_spec(rc.spec_path);
  rc.emit_separator = true;
  std::optional<SeparatorHandle> handle;
  Verdict v;
  if (rc.k && rc.d) {
    rc.problem = "fixed";
    v = run_decision(spec, rc);
  } else if (rc.k || rc.d) {
    throw UsageError("give both --k and --d, or neither");
  } else {
    if (rc.problem == "fixed") throw UsageError("--class fixed requires --k and --d");
    v = run_decision(spec, rc);
  }
  int code = exit_code(v);
  if (code != 0 || !v.separator) {
    out << "no separator: " << (code == 1 ? "inseparable" : "unknown") << '\n';
    for (const auto& n : v.notes) out << "note: " << n << '\n';
    return code == 0 ? 2 : code;
  }
  const SeparatorHandle& h = *v.separator;
  out << "separator: closure of L1 at k=" << h.k << ", d=" << h.d << '\n'
      << "profiles realized by L1: " << h.annotated.profiles.size() << '\n';
  for (const auto& p : h.annotated.profiles) out << "  " << profile_name(spec.nfa, p) << '\n';
  for (const auto& text : sa.members) {
    Word w = parse_word(spec.nfa, text);
    Membership m = separator_membership(h, w, rc.decide_config().solver);
    out << (text.empty() ? "ε" : text) << ": "
        << (m == Membership::Accepted ? "in" : m == Membership::Rejected ? "out" : "unknown")
        << '\n';
  }
  if (sa.explicit_automaton || !rc.dot.empty()) {
    ExplicitSeparator ex = separator_automaton(h, sa.explicit_budget);
    out << "explicit automaton: " << ex.nfa.num_states() << " states, "
        << ex.final.size() << " accepting\n";
    if (!rc.dot.empty())
      write_file(rc.dot, dot_export(ex.nfa, {{"", ex.initial}}, {{"", ex.final}}));
  }
  return 0;
}

nlohmann::ordered_json catalog_json(const Nfa& nfa, const ReducedSpec& red) {
  auto word = [&](const std::optional<Word>& w) -> nlohmann::ordered_json {
    if (!w) return nullptr;
    return format_word(nfa, *w);
  };
  nlohmann::ordered_json letters = nlohmann::ordered_json::array();
  for (Symbol a = 0; a < red.catalog.size(); ++a) {
    const SyncSet& e = red.catalog[a];
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (auto [p, q] : e.pairs) pairs.push_back({p, q});
    nlohmann::ordered_json j;
    j["letter"] = red.nfa.symbol_name(a);
    j["kind"] = to_string(e.kind);
    j["pairs"] = std::move(pairs);
    j["witness_mid"] = format_word(nfa, e.witness_mid);
    j["witness_left"] = word(e.witness_left);
    j["witness_right"] = word(e.witness_right);
    letters.push_back(std::move(j));
  }
  nlohmann::ordered_json sets = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < red.sync_sets.size(); ++i)
    sets.push_back({{"states", std::vector<State>(red.sync_sets[i].begin(), red.sync_sets[i].end())},
                    {"loop", format_word(nfa, red.loop_words[i])}});
  return {{"maximal_sets", std::move(sets)}, {"letters", std::move(letters)}};
}

int cmd_reduce(const RunConfig& rc, std::ostream& out) {
  LangSpec spec = load_spec(rc.spec_path);
  ReductionConfig cfg;
  cfg.monoid_budget = rc.monoid_budget;
  cfg.letter_budget = rc.candidate_cap;
  ReducedSpec full = build_reduced(spec, cfg);
  ReducedSpec red = prune_reduced(full);
  if (!rc.dot.empty()) write_file(rc.dot, dot_export(red.as_langspec()));
  if (!rc.spec_out.empty()) write_file(rc.spec_out, serialize_spec(red.as_langspec()));
  if (!rc.catalog_out.empty()) write_file(rc.catalog_out, catalog_json(spec.nfa, red).dump(2) + "\n");
  if (rc.json) {
    nlohmann::ordered_json j;
    j["monoid_size"] = red.monoid_size;
    nlohmann::ordered_json sets = nlohmann::ordered_json::array();
    for (const auto& s : red.sync_sets) sets.push_back(std::vector<State>(s.begin(), s.end()));
    j["maximal_sets"] = std::move(sets);
    j["states"] = full.nfa.num_states();
    j["letters"] = full.nfa.alphabet_size();
    j["pruned_states"] = red.nfa.num_states();
    j["pruned_letters"] = red.nfa.alphabet_size();
    nlohmann::ordered_json letters = nlohmann::ordered_json::array();
    for (Symbol a = 0; a < red.nfa.alphabet_size(); ++a) letters.push_back(red.nfa.symbol_name(a));
    j["letter_names"] = std::move(letters);
    out << j.dump(2) << '\n';
    return 0;
  }
  out << "monoid size: " << red.monoid_size << '\n'
      << "maximal synchronizable sets: " << red.sync_sets.size() << '\n';
  for (std::size_t i = 0; i < red.sync_sets.size(); ++i) {
    out << "  {";
    bool first = true;
    for (State q : red.sync_sets[i]) {
      out << (first ? "" : ",") << q;
      first = false;
    }
    out << "} loop " << format_word(spec.nfa, red.loop_words[i]) << '\n';
  }
  out << "reduced automaton: " << full.nfa.num_states() << " states, "
      << full.nfa.alphabet_size() << " letters\n"
      << "after pruning: " << red.nfa.num_states() << " states, " << red.nfa.alphabet_size()
      << " letters\n";
  for (Symbol a = 0; a < red.nfa.alphabet_size(); ++a) out << "  " << red.nfa.symbol_name(a) << '\n';
  return 0;
}

int cmd_bounds(const RunConfig& rc, std::ostream& out) {
  LangSpec spec = load_spec(rc.spec_path);
  TransitionMonoid m = transition_monoid(spec.nfa, rc.monoid_budget);
  std::uint64_t k = profile_width_bound(m);
  std::uint64_t sigma = spec.nfa.alphabet_size();
  BigInt ak = profile_alphabet_size(k, sigma);
  std::uint64_t n_monoid = m.size() + 1;
  std::uint64_t n_automaton = spec.nfa.size() + 1;
  std::string d_monoid = format_bound(k, sigma, n_monoid);
  std::string d_automaton = format_bound(k, sigma, n_automaton);
  if (rc.json) {
    nlohmann::ordered_json j{{"monoid_size", m.size()},
                             {"k", k},
                             {"alphabet_size", sigma},
                             {"profile_alphabet_size", ak.str()},
                             {"d_monoid", {{"n", n_monoid}, {"d", d_monoid}}},
                             {"d_automaton", {{"n", n_automaton}, {"d", d_automaton}}}};
    out << j.dump(2) << '\n';
    return 0;
  }
  out << "|M| = " << m.size() << '\n'
      << "k = 4(|M|+1) = " << k << '\n'
      << "|A| = " << sigma << ", |A_k| = " << ak.str() << '\n'
      << "d (n = |M|+1 = " << n_monoid << ") = " << d_monoid << '\n'
      << "d (n = |automaton|+1 = " << n_automaton << ") = " << d_automaton << '\n';
  return 0;
}

int cmd_profiles(const RunConfig& rc, const std::string& word_text, std::ostream& out) {
  LangSpec spec = load_spec(rc.spec_path);
  if (!rc.k) throw UsageError("profiles requires --k");
  std::uint64_t d = rc.d.value_or(1);
  Word w = parse_word(spec.nfa, word_text);
  if (rc.json) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json positions = nlohmann::ordered_json::array();
    for (const auto& p : profile_word(w, *rc.k)) positions.push_back(profile_name(spec.nfa, p));
    j["profiles"] = std::move(positions);
    nlohmann::ordered_json img = nlohmann::ordered_json::object();
    for (const auto& [p, c] : capped_image(w, *rc.k, d).counts) img[profile_name(spec.nfa, p)] = c;
    j["capped_image"] = std::move(img);
    out << j.dump(2) << '\n';
    return 0;
  }
  auto profs = profile_word(w, *rc.k);
  for (std::size_t x = 0; x < profs.size(); ++x)
    out << x << ' ' << profile_name(spec.nfa, profs[x]) << '\n';
  out << "capped image (d=" << d << "):\n";
  for (const auto& [p, c] : capped_image(w, *rc.k, d).counts)
    out << "  " << profile_name(spec.nfa, p) << ' ' << c << '\n';
  return 0;
}

int cmd_oracle(const RunConfig& rc, std::ostream& out) {
  LangSpec spec = load_spec(rc.spec_path);
  if (!rc.k || !rc.d) throw UsageError("oracle requires --k and --d");
  OracleVerdict v = exact_fixed_oracle(spec, *rc.k, *rc.d, rc.state_budget);
  out << (v == OracleVerdict::Separable ? "separable" : "inseparable") << '\n';
  return v == OracleVerdict::Separable ? 0 : 1;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"LT and LTT separability of regular languages", "ltsep"};
  app.require_subcommand(1);
  RunConfig rc;

  auto* decide = app.add_subcommand("decide", "Decide separability");
  add_decision_options(decide, rc);
  auto* witness = app.add_subcommand("witness", "Print an inseparability witness");
  add_decision_options(witness, rc);

  SeparatorArgs sa;
  auto* separator = app.add_subcommand("separator", "Build a separator and query it");
  add_decision_options(separator, rc);
  separator->add_option("--member", sa.members, "Word to test against the separator");
  separator->add_flag("--explicit", sa.explicit_automaton, "Materialize the separator automaton");
  separator->add_option("--explicit-budget", sa.explicit_budget, "State budget of the automaton")
      ->check(CLI::PositiveNumber);

  auto* reduce = app.add_subcommand("reduce", "Build the reduced automaton");
  reduce->add_option("spec", rc.spec_path, "Spec file")->required();
  reduce->add_flag("--json", rc.json, "JSON output");
  reduce->add_option("--dot", rc.dot, "Write the pruned reduced automaton as DOT");
  reduce->add_option("--spec-out", rc.spec_out, "Write the pruned reduced automaton as a spec");
  reduce->add_option("--catalog", rc.catalog_out, "Write the letter catalog as JSON");
  add_budget_options(reduce, rc);

  auto* bounds = app.add_subcommand("bounds", "Print the width and threshold bounds");
  bounds->add_option("spec", rc.spec_path, "Spec file")->required();
  bounds->add_flag("--json", rc.json, "JSON output");
  add_budget_options(bounds, rc);

  std::string word_text;
  auto* profiles = app.add_subcommand("profiles", "List the profiles of a word");
  profiles->add_option("spec", rc.spec_path, "Spec file giving the alphabet")->required();
  profiles->add_option("word", word_text, "Word")->required();
  profiles->add_option("--k", rc.k, "Profile width")->check(CLI::PositiveNumber);
  profiles->add_option("--d", rc.d, "Threshold")->check(CLI::PositiveNumber);
  profiles->add_flag("--json", rc.json, "JSON output");

  auto* oracle = app.add_subcommand("oracle", "Explicit capped-counting oracle at fixed (k, d)");
  oracle->add_option("spec", rc.spec_path, "Spec file")->required();
  oracle->add_option("--k", rc.k, "Profile width")->check(CLI::PositiveNumber);
  oracle->add_option("--d", rc.d, "Threshold")->check(CLI::PositiveNumber);
  oracle->add_option("--state-budget", rc.state_budget, "Exploration budget")
      ->check(CLI::PositiveNumber);

  std::string output;
  auto* gen = app.add_subcommand("gen", "Generate instance specs");
  gen->require_subcommand(1);
  std::string cnf_path;
  auto* gen_sat = gen->add_subcommand("sat", "3-SAT reduction instance");
  gen_sat->add_option("cnf", cnf_path, "DIMACS-like CNF file")->required();
  int family_m = 1;
  auto* gen_threshold = gen->add_subcommand("threshold", "Threshold optimality family");
  gen_threshold->add_option("m", family_m, "Family index")->required()->check(CLI::PositiveNumber);
  auto* gen_par = gen->add_subcommand("parity", "(aa)* against a(aa)*");
  std::uint64_t seed = 0;
  std::size_t n_states = 1, n_letters = 1;
  double density = 0.5;
  auto* gen_rand = gen->add_subcommand("random", "Random trim spec");
  gen_rand->add_option("seed", seed, "Seed")->required();
  gen_rand->add_option("n", n_states, "States")->required()->check(CLI::PositiveNumber);
  gen_rand->add_option("k", n_letters, "Alphabet size")->required()->check(CLI::PositiveNumber);
  gen_rand->add_option("density", density, "Transition density")
      ->required()
      ->check(CLI::Range(0.0, 1.0));

  for (auto* sub : {gen_sat, gen_threshold, gen_par, gen_rand})
    sub->add_option("-o,--output", output, "Write the spec to a file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitError;
  }

  try {
    if (*decide) return cmd_decide(rc, false, out);
    if (*witness) return cmd_decide(rc, true, out);
    if (*separator) return cmd_separator(rc, sa, out);
    if (*reduce) return cmd_reduce(rc, out);
    if (*bounds) return cmd_bounds(rc, out);
    if (*profiles) return cmd_profiles(rc, word_text, out);
    if (*oracle) return cmd_oracle(rc, out);
    if (*gen) {
      LangSpec spec;
      if (*gen_sat) spec = gen_sat_instance(parse_cnf(read_file(cnf_path)));
      else if (*gen_threshold) spec = gen_threshold_family(family_m);
      else if (*gen_par) spec = gen_parity();
      else if (*gen_rand) {
        if (density <= 0.0) throw UsageError("density must be in (0,1]");
        spec = gen_random(seed, n_states, n_letters, density);
      }
      std::string text = serialize_spec(spec);
      if (output.empty()) out << text;
      else write_file(output, text);
      return 0;
    }
  } catch (const ParseError& e) {
    err << "parse error at line " << e.line() << ": " << e.what() << '\n';
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace ltsep
