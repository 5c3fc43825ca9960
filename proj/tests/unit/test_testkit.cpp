#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "ltsep/separ.hpp"

using namespace ltsep;

namespace {

Cnf3 cnf(int vars, std::vector<std::array<int, 3>> clauses) { return {vars, std::move(clauses)}; }

}  // namespace

TEST_CASE("SAT reduction examples") {
  LangSpec sat = gen_sat_instance(cnf(1, {{1, 1, 1}}));
  CHECK(decide_ltt(sat).outcome == Outcome::Inseparable);
  CHECK(decide_lt(sat).outcome == Outcome::Inseparable);
  LangSpec unsat = gen_sat_instance(cnf(1, {{1, 1, 1}, {-1, -1, -1}}));
  CHECK(decide_ltt(unsat).outcome == Outcome::Separable);
  CHECK(decide_lt(unsat).outcome == Outcome::Separable);
  LangSpec none = gen_sat_instance(cnf(2, {}));
  CHECK_FALSE(is_empty(none.nfa, none.i1, none.f1));
  CHECK_FALSE(is_empty(none.nfa, none.i2, none.f2));
  CHECK(decide_ltt(none).outcome == Outcome::Inseparable);
}

TEST_CASE("SAT instance alphabet and shape") {
  LangSpec s = gen_sat_instance(cnf(2, {{1, -2, 2}}));
  REQUIRE(s.nfa.alphabet_size() == 5);
  CHECK(s.nfa.symbol_name(0) == "#");
  CHECK(s.nfa.symbol_name(1) == "x1");
  CHECK(s.nfa.symbol_name(4) == "~x2");
  // The first side picks one literal per variable, with # padding.
  CHECK(accepts(s.nfa, s.i1, s.f1, test::w(s.nfa, "# x1 # ~x2 #")));
  CHECK_FALSE(accepts(s.nfa, s.i1, s.f1, test::w(s.nfa, "x1 # x1 #")));
  // The second side needs one literal from the clause, then anything.
  CHECK(accepts(s.nfa, s.i2, s.f2, test::w(s.nfa, "~x2 # x1 x1")));
  CHECK_FALSE(accepts(s.nfa, s.i2, s.f2, test::w(s.nfa, "x2")));
}

TEST_CASE("SAT reduction agrees with brute force on small formulas") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Cnf3 f = random_cnf(seed, 2, 1 + static_cast<int>(seed % 5) * 2);
    Outcome expect = sat_brute(f) ? Outcome::Inseparable : Outcome::Separable;
    CHECK(decide_ltt(gen_sat_instance(f)).outcome == expect);
  }
}

TEST_CASE("threshold family languages") {
  LangSpec s = gen_threshold_family(1);
  auto in1 = [&](const std::string& t) { return accepts(s.nfa, s.i1, s.f1, test::w(s.nfa, t)); };
  auto in2 = [&](const std::string& t) { return accepts(s.nfa, s.i2, s.f2, test::w(s.nfa, t)); };
  CHECK(in1("a1"));
  CHECK(in1("a1 a2 a2 a2"));
  CHECK_FALSE(in1("a1 a2 a2"));
  CHECK(in2(""));
  CHECK(in2("a1 a2 a2 a1 a2 a2"));
  CHECK_FALSE(in2("a1 a2"));

  LangSpec t = gen_threshold_family(2);
  REQUIRE(t.nfa.alphabet_size() == 4);
  auto t1 = [&](const std::string& x) { return accepts(t.nfa, t.i1, t.f1, test::w(t.nfa, x)); };
  auto t2 = [&](const std::string& x) { return accepts(t.nfa, t.i2, t.f2, test::w(t.nfa, x)); };
  CHECK(t1("a1"));
  CHECK(t1("a1 a2 a3 a3 a4 a4 a4"));
  CHECK_FALSE(t1("a1 a4 a4 a4 a2 a3 a3"));
  CHECK(t2("a1 a2 a2 a3 a4 a4"));
  CHECK(t2(""));
  CHECK_FALSE(t2("a3 a4 a4 a1 a2 a2"));
  CHECK_THROWS(gen_threshold_family(0));
}

TEST_CASE("threshold family optimal thresholds") {
  LangSpec s = gen_threshold_family(1);
  CHECK(decide_fixed(s, 1, 2).outcome == Outcome::Inseparable);
  CHECK(decide_fixed(s, 1, 3).outcome == Outcome::Separable);
}

TEST_CASE("parity generator") {
  LangSpec s = gen_parity();
  CHECK(serialize_spec(s) == serialize_spec(parse_spec(test::kParity)));
}

TEST_CASE("random generator is deterministic and trim") {
  LangSpec a = gen_random(1, 4, 2, 0.5), b = gen_random(1, 4, 2, 0.5);
  CHECK(serialize_spec(a) == serialize_spec(b));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    LangSpec s = gen_random(rng(), 1 + uniform_below(rng, 5), 1 + uniform_below(rng, 3), 0.3);
    if (s.nfa.num_states() == 0) continue;
    StateSet useful;
    for (const auto& [i, f] : {std::pair{s.i1, s.f1}, std::pair{s.i2, s.f2}}) {
      StateSet co = coreachable(s.nfa, f);
      for (State q : reachable(s.nfa, i))
        if (co.count(q)) useful.insert(q);
    }
    CHECK(useful.size() == s.nfa.num_states());
  }
  LangSpec u = gen_random(5, 1, 2, 1.0);
  CHECK(u.nfa.num_transitions() == 2);
  CHECK(decide_ltt(u).outcome == Outcome::Inseparable);
  CHECK_THROWS(gen_random(1, 0, 2, 0.5));
  CHECK_THROWS(gen_random(1, 2, 2, 0.0));
}

TEST_CASE("oracle examples") {
  LangSpec fam = gen_threshold_family(1);
  CHECK(exact_fixed_oracle(fam, 1, 2, 100000) == OracleVerdict::Inseparable);
  CHECK(exact_fixed_oracle(fam, 1, 3, 100000) == OracleVerdict::Separable);
  LangSpec par = gen_parity();
  CHECK(exact_fixed_oracle(par, 2, 2, 100000) == OracleVerdict::Inseparable);
  LangSpec ab = test::singletons({"a", "b"}, "a", "b");
  CHECK(exact_fixed_oracle(ab, 1, 1, 100000) == OracleVerdict::Separable);
  CHECK_THROWS_AS(exact_fixed_oracle(par, 2, 2, 1), BudgetExceeded);
}

TEST_CASE("oracle agrees with decide_fixed") {
  std::mt19937_64 rng(401);
  int checked = 0;
  while (checked < 40) {
    LangSpec s = test::tiny_spec(rng, 4, 2);
    if (s.nfa.num_states() == 0) continue;
    ++checked;
    std::size_t k = 1 + uniform_below(rng, 2);
    std::uint64_t d = 1 + uniform_below(rng, 2);
    DecideConfig cfg;
    cfg.want_separator = false;
    Outcome o = decide_fixed(s, k, d, cfg).outcome;
    OracleVerdict r = exact_fixed_oracle(s, k, d, 1000000);
    CHECK((o == Outcome::Inseparable) == (r == OracleVerdict::Inseparable));
  }
}

TEST_CASE("brute-force SAT") {
  CHECK(sat_brute(cnf(1, {{1, 1, 1}})));
  CHECK_FALSE(sat_brute(cnf(1, {{1, 1, 1}, {-1, -1, -1}})));
  CHECK(sat_brute(cnf(3, {})));
  CHECK_FALSE(sat_brute(cnf(2, {{1, 2, 2}, {-1, 2, 2}, {1, -2, -2}, {-1, -2, -2}})));
}

TEST_CASE("CNF text round trip and padding") {
  Cnf3 f = parse_cnf("c comment\np cnf 3 2\n1 -2 0\n3\n-1 2 0\n");
  CHECK(f.num_vars == 3);
  REQUIRE(f.clauses.size() == 2);
  CHECK(f.clauses[0] == std::array<int, 3>{1, -2, -2});
  CHECK(f.clauses[1] == std::array<int, 3>{3, -1, 2});
  Cnf3 g = parse_cnf(format_cnf(f));
  CHECK(g.num_vars == f.num_vars);
  CHECK(g.clauses == f.clauses);
  CHECK(parse_cnf("1 2 0\n-3 0\n").num_vars == 3);
  CHECK(parse_cnf("1 2 0\n%\n0\n").clauses.size() == 1);
  CHECK_THROWS(parse_cnf("0\n"));
  CHECK_THROWS(parse_cnf("1 2 3 4 0\n"));
  CHECK_THROWS(parse_cnf("p cnf 1 1\n2 0\n"));
  CHECK_THROWS(cnf(1, {{0, 1, 1}}).validate());
}

TEST_CASE("random CNF formulas are well formed and reproducible") {
  Cnf3 a = random_cnf(3, 5, 7), b = random_cnf(3, 5, 7);
  CHECK(a.clauses == b.clauses);
  CHECK(a.clauses.size() == 7);
  CHECK_NOTHROW(a.validate());
}

TEST_CASE("sampled words are accepted and cover short lengths") {
  LangSpec s = gen_parity();
  std::mt19937_64 rng(17);
  std::set<std::size_t> lengths;
  for (int i = 0; i < 200; ++i) {
    auto x = sample_word(s.nfa, s.i2, s.f2, rng, 7);
    REQUIRE(x.has_value());
    CHECK(accepts(s.nfa, s.i2, s.f2, *x));
    lengths.insert(x->size());
  }
  CHECK(lengths == std::set<std::size_t>{1, 3, 5, 7});
  Nfa n(2, {"a"});
  CHECK_FALSE(sample_word(n, {0}, {1}, rng, 5).has_value());
}

TEST_CASE("enumeration is complete and in shortlex order") {
  Nfa n(1, {"a", "b"});
  n.add_transition(0, 0, 0);
  n.add_transition(0, 1, 0);
  auto all = enumerate_words(n, {0}, {0}, 3);
  CHECK(all.size() == 15);
  for (std::size_t i = 1; i < all.size(); ++i)
    CHECK((all[i - 1].size() < all[i].size() ||
           (all[i - 1].size() == all[i].size() && all[i - 1] < all[i])));
}

TEST_CASE("random words respect the bounds") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 100; ++i) {
    Word x = random_word(rng, 3, 5);
    CHECK(x.size() <= 5);
    for (Symbol c : x) CHECK(c < 3);
  }
  for (int i = 0; i < 1000; ++i) {
    CHECK(uniform_below(rng, 7) < 7);
    double u = unit_interval(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
