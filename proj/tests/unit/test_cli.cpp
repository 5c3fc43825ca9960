#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "../../tools/cli.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"

using namespace ltsep;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("ltsep-cli-" + std::to_string(::getpid()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content = "") const {
    fs::path p = path_ / name;
    if (!content.empty()) std::ofstream(p) << content;
    return p.string();
  }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("fixed decisions on the threshold family") {
  TempDir dir;
  std::string spec = dir.file("t1.spec", serialize_spec(gen_threshold_family(1)));
  CHECK(run({"decide", spec, "--class", "fixed", "--k", "1", "--d", "3"}).code == 0);
  Run ins = run({"decide", spec, "--class", "fixed", "--k", "1", "--d", "2"});
  CHECK(ins.code == 1);
  CHECK(ins.out.find("inseparable") != std::string::npos);
}

TEST_CASE("LTT on parity reports a witness") {
  TempDir dir;
  std::string spec = dir.file("p.spec", test::kParity);
  Run r = run({"decide", spec, "--class", "ltt", "--json", "--no-timing"});
  REQUIRE(r.code == 1);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["problem"] == "ltt");
  CHECK(j["status"] == "inseparable");
  CHECK(j["separable"] == false);
  CHECK(j["d"] == "limit");
  REQUIRE(j["witness"].is_object());
  LangSpec s = parse_spec(test::kParity);
  Word w1 = parse_word(s.nfa, j["witness"]["pair"]["w1"].get<std::string>());
  Word w2 = parse_word(s.nfa, j["witness"]["pair"]["w2"].get<std::string>());
  CHECK(w1.size() % 2 == 0);
  CHECK(w2.size() % 2 == 1);
  CHECK(j["witness"]["certificate"].is_object());
}

TEST_CASE("JSON verdicts have a fixed shape") {
  TempDir dir;
  std::string spec = dir.file("t1.spec", serialize_spec(gen_threshold_family(1)));
  Run r = run({"decide", spec, "--class", "fixed", "--k", "1", "--d", "3", "--json",
               "--emit-separator"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::ordered_json::parse(r.out);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"problem", "status", "separable", "k", "d", "route",
                                         "witness", "separator", "reduced", "budget_flags",
                                         "notes", "timing_ms"});
  CHECK(j["separator"]["k"] == 1);
  CHECK(j["separator"]["d"] == 3);
  CHECK(j["witness"].is_null());
  CHECK(j["timing_ms"].is_number());
}

TEST_CASE("--no-timing output is reproducible") {
  TempDir dir;
  std::string spec = dir.file("p.spec", test::kParity);
  for (const char* cls : {"lt", "ltt"}) {
    std::vector<std::string> args{"decide", spec, "--class", cls, "--json", "--no-timing"};
    Run a = run(args), b = run(args);
    CHECK(a.out == b.out);
    CHECK(a.out.find("timing_ms") == std::string::npos);
  }
}

TEST_CASE("bounds on parity") {
  TempDir dir;
  Run r = run({"bounds", dir.file("p.spec", test::kParity)});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("|M| = 2") != std::string::npos);
  CHECK(r.out.find("k = 4(|M|+1) = 12") != std::string::npos);
}

TEST_CASE("usage and input errors exit with 3") {
  TempDir dir;
  std::string spec = dir.file("p.spec", test::kParity);
  CHECK(run({}).code == 3);
  CHECK(run({"decide", spec, "--class", "lt", "--k", "3"}).code == 3);
  CHECK(run({"decide", spec, "--class", "fixed"}).code == 3);
  CHECK(run({"decide", spec, "--class", "bogus"}).code == 3);
  CHECK(run({"decide", spec, "--no-such-flag"}).code == 3);
  CHECK(run({"decide", dir.file("missing.spec")}).code == 3);
  Run bad = run({"decide", dir.file("bad.spec", "alphabet: a\nstates: x\n")});
  CHECK(bad.code == 3);
  CHECK(bad.err.find("2") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("gen writes specs that decide as expected") {
  TempDir dir;
  std::string out = dir.file("g.spec");
  REQUIRE(run({"gen", "parity", "-o", out}).code == 0);
  CHECK(run({"decide", out, "--class", "lt"}).code == 1);
  std::string cnf = dir.file("u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
  REQUIRE(run({"gen", "sat", cnf, "-o", out}).code == 0);
  CHECK(run({"decide", out, "--class", "ltt"}).code == 0);
  REQUIRE(run({"gen", "threshold", "2", "-o", out}).code == 0);
  CHECK(run({"decide", out, "--class", "fixed", "--k", "1", "--d", "8"}).code == 1);
  Run rnd = run({"gen", "random", "7", "3", "2", "0.5"});
  CHECK(rnd.code == 0);
  CHECK_NOTHROW(parse_spec(rnd.out));
}

TEST_CASE("oracle, profiles and separator subcommands") {
  TempDir dir;
  std::string spec = dir.file("t1.spec", serialize_spec(gen_threshold_family(1)));
  CHECK(run({"oracle", spec, "--k", "1", "--d", "2"}).code == 1);
  CHECK(run({"oracle", spec, "--k", "1", "--d", "3"}).code == 0);
  Run p = run({"profiles", spec, "a1 a2", "--k", "2", "--d", "1"});
  CHECK(p.code == 0);
  CHECK(p.out.find("(a1,a2)") != std::string::npos);
  Run s = run({"separator", spec, "--class", "fixed", "--k", "1", "--d", "3", "--member", "a1",
               "--member", "a1 a2 a2"});
  CHECK(s.code == 0);
  CHECK(s.out.find("a1: in") != std::string::npos);
  CHECK(s.out.find("a1 a2 a2: out") != std::string::npos);
}

TEST_CASE("reduce writes a spec and a catalog") {
  TempDir dir;
  std::string spec = dir.file("p.spec", test::kParity);
  std::string red = dir.file("r.spec"), cat = dir.file("c.json");
  REQUIRE(run({"reduce", spec, "--spec-out", red, "--catalog", cat}).code == 0);
  std::ifstream in(red);
  std::stringstream text;
  text << in.rdbuf();
  LangSpec r = parse_spec(text.str());
  std::ifstream cin(cat);
  auto j = nlohmann::json::parse(cin);
  CHECK(j["letters"].size() == r.nfa.alphabet_size());
  CHECK(run({"decide", red, "--class", "fixed", "--k", "1", "--d", "1"}).code == 1);
}
