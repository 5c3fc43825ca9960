#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "ltsep/automata.hpp"
#include "ltsep/monoid.hpp"
#include "ltsep/profiles.hpp"
#include "ltsep/report.hpp"
#include "ltsep/separ.hpp"
#include "ltsep/testkit.hpp"

namespace py = pybind11;
using namespace ltsep;

namespace {

std::string decide(const std::string& spec_text, const std::string& problem,
                   std::optional<std::size_t> k, std::optional<std::uint64_t> d,
                   bool emit_separator) {
  LangSpec spec = parse_spec(spec_text);
  DecideConfig cfg;
  cfg.want_separator = emit_separator;
  Verdict v;
  {
    py::gil_scoped_release release;
    if (problem == "fixed") {
      if (!k || !d) throw std::invalid_argument("fixed problems need k and d");
      v = decide_fixed(spec, *k, *d, cfg);
    } else if (problem == "lt" || problem == "ltt") {
      if (k) throw std::invalid_argument("k applies to fixed problems only");
      if (d) cfg.witness_d = *d;
      v = problem == "lt" ? decide_lt(spec, cfg) : decide_ltt(spec, cfg);
    } else {
      throw std::invalid_argument("problem must be lt, ltt or fixed");
    }
  }
  ReportOptions opts;
  opts.emit_separator = emit_separator;
  return verdict_json(spec, v, opts);
}

py::tuple run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = run_cli(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

std::vector<std::string> profiles(const std::vector<std::string>& alphabet,
                                  const std::string& word, std::size_t k) {
  Nfa n(1, alphabet);
  std::vector<std::string> out;
  for (const auto& p : profile_word(parse_word(n, word), k)) out.push_back(profile_name(n, p));
  return out;
}

bool equiv(const std::vector<std::string>& alphabet, const std::string& w1,
           const std::string& w2, std::size_t k, std::uint64_t d) {
  Nfa n(1, alphabet);
  return equivalent(parse_word(n, w1), parse_word(n, w2), k, d);
}

std::string bound(std::uint64_t k, std::uint64_t sigma, std::uint64_t n) {
  return threshold_bound(k, sigma, n).str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "LT and LTT separability of regular languages";
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def("decide", &decide, py::arg("spec"), py::arg("problem") = "ltt",
        py::arg("k") = py::none(), py::arg("d") = py::none(), py::arg("emit_separator") = false,
        "Decide separability; returns the verdict as JSON text.");
  m.def("run_cli", &run, py::arg("args"), "Run a command line; returns (code, stdout, stderr).");
  m.def("profiles", &profiles, py::arg("alphabet"), py::arg("word"), py::arg("k"));
  m.def("equivalent", &equiv, py::arg("alphabet"), py::arg("w1"), py::arg("w2"), py::arg("k"),
        py::arg("d"));
  m.def("threshold_bound", &bound, py::arg("k"), py::arg("alphabet_size"), py::arg("n"),
        "Exact (|A_k|·n)^|A_k| as a decimal string.");
  m.def("profile_width_bound", py::overload_cast<std::uint64_t>(&profile_width_bound),
        py::arg("monoid_size"));
  m.def("normalize_spec", [](const std::string& text) { return serialize_spec(parse_spec(text)); });
  m.def("gen_parity", [] { return serialize_spec(gen_parity()); });
  m.def("gen_threshold_family", [](int mm) { return serialize_spec(gen_threshold_family(mm)); },
        py::arg("m"));
  m.def("gen_sat", [](const std::string& cnf) { return serialize_spec(gen_sat_instance(parse_cnf(cnf))); },
        py::arg("cnf"));
  m.def("gen_random",
        [](std::uint64_t seed, std::size_t states, std::size_t letters, double density) {
          return serialize_spec(gen_random(seed, states, letters, density));
        },
        py::arg("seed"), py::arg("states"), py::arg("alphabet_size"), py::arg("density"));
}
