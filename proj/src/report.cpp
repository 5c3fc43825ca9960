#include "ltsep/report.hpp"

#include <sstream>

#include "json.hpp"

namespace ltsep {

namespace {

using nlohmann::ordered_json;

std::string word_text(const Nfa& nfa, const Word& w) { return format_word(nfa, w); }

ordered_json block_json(const Nfa& nfa, const Block& b, std::uint64_t count) {
  return {{"left", word_text(nfa, b.left)},
          {"mid", word_text(nfa, b.mid)},
          {"right", word_text(nfa, b.right)},
          {"count", count}};
}

ordered_json pattern_json(const Nfa& nfa, const DPattern& p) {
  ordered_json j;
  j["d"] = p.d;
  if (p.single) {
    j["single"] = word_text(nfa, *p.single);
    return j;
  }
  j["prefix"] = {{"mid", word_text(nfa, p.prefix_mid)},
                 {"right", word_text(nfa, p.prefix_right)}};
  j["suffix"] = {{"left", word_text(nfa, p.suffix_left)},
                 {"mid", word_text(nfa, p.suffix_mid)}};
  ordered_json blocks = ordered_json::array();
  for (const auto& [b, c] : p.counts) blocks.push_back(block_json(nfa, b, c));
  j["blocks"] = std::move(blocks);
  return j;
}

ordered_json certificate_json(const LttEvidence& ev) {
  const auto& c = ev.certificate;
  const Nfa& red = ev.reduced->nfa;
  auto total = [](const Counts& x) {
    std::uint64_t s = 0;
    for (auto v : x) s += v;
    return s;
  };
  ordered_json unbounded = ordered_json::array();
  for (std::size_t a = 0; a < c.unbounded.size(); ++a)
    if (c.unbounded[a]) unbounded.push_back(red.symbol_name(static_cast<Symbol>(a)));
  return {{"reduced_states", red.num_states()},
          {"reduced_letters", red.alphabet_size()},
          {"base_lengths", {total(c.base1.edges), total(c.base2.edges)}},
          {"cycle_lengths", {total(c.cycle1), total(c.cycle2)}},
          {"unbounded_letters", std::move(unbounded)}};
}

ordered_json separator_json(const SeparatorHandle& h) {
  ordered_json profiles = ordered_json::array();
  for (const auto& p : h.annotated.profiles) profiles.push_back(profile_name(h.nfa, p));
  return {{"k", h.k},
          {"d", h.d},
          {"language", "closure of L1 under (k,d)-equivalence"},
          {"annotated_states", h.annotated.nfa.num_states()},
          {"profiles", std::move(profiles)}};
}

const char* problem_key(Problem p) {
  switch (p) {
    case Problem::LT: return "lt";
    case Problem::LTT: return "ltt";
    default: return "fixed";
  }
}

}  // namespace

int exit_code(const Verdict& v) {
  if (!v.budget_flags.empty()) return 2;
  switch (v.outcome) {
    case Outcome::Separable: return 0;
    case Outcome::Inseparable: return 1;
    default: return 2;
  }
}

std::string verdict_json(const LangSpec& spec, const Verdict& v, const ReportOptions& opts) {
  ordered_json j;
  j["problem"] = problem_key(v.problem);
  int code = exit_code(v);
  j["status"] = code == 0 ? "separable" : code == 1 ? "inseparable" : "unknown";
  if (code == 2)
    j["separable"] = "unknown";
  else
    j["separable"] = code == 0;
  j["k"] = v.k ? ordered_json(*v.k) : ordered_json(nullptr);
  if (v.d_limit)
    j["d"] = "limit";
  else
    j["d"] = v.d ? ordered_json(*v.d) : ordered_json(nullptr);
  j["route"] = v.route;

  ordered_json witness = nullptr;
  if (opts.emit_witness && code == 1) {
    witness = ordered_json::object();
    if (v.witness)
      witness["pair"] = {{"w1", word_text(spec.nfa, v.witness->w1)},
                         {"w2", word_text(spec.nfa, v.witness->w2)},
                         {"k", v.witness->k},
                         {"d", v.witness->d}};
    if (v.pattern) witness["pattern"] = pattern_json(spec.nfa, v.pattern->pattern);
    if (v.evidence) witness["certificate"] = certificate_json(*v.evidence);
  }
  j["witness"] = std::move(witness);

  if (opts.emit_separator && v.separator)
    j["separator"] = separator_json(*v.separator);
  else
    j["separator"] = nullptr;

  if (v.route == "reduced")
    j["reduced"] = {{"states", v.reduced_states},
                    {"letters", v.reduced_letters},
                    {"threshold", v.reduced_threshold ? ordered_json(*v.reduced_threshold)
                                                      : ordered_json(nullptr)}};
  else
    j["reduced"] = nullptr;
  j["budget_flags"] = v.budget_flags;
  j["notes"] = v.notes;
  if (opts.elapsed_ms) j["timing_ms"] = *opts.elapsed_ms;
  return j.dump(2);
}

std::string verdict_text(const LangSpec& spec, const Verdict& v, const ReportOptions& opts) {
  std::ostringstream out;
  int code = exit_code(v);
  out << to_string(v.problem) << ": "
      << (code == 0 ? "separable" : code == 1 ? "inseparable" : "unknown");
  if (v.k) out << "  k=" << *v.k;
  if (v.d_limit)
    out << "  d=limit";
  else if (v.d)
    out << "  d=" << *v.d;
  out << "  (route: " << v.route << ")\n";
  if (v.reduced_threshold) out << "threshold on the reduced automaton: " << *v.reduced_threshold << '\n';
  if (opts.emit_witness && code == 1) {
    if (v.witness)
      out << "w1 = " << word_text(spec.nfa, v.witness->w1) << "\nw2 = "
          << word_text(spec.nfa, v.witness->w2) << "\nequivalent at k=" << v.witness->k
          << ", d=" << v.witness->d << '\n';
    if (v.pattern) out << "pattern: " << describe_pattern(spec.nfa, v.pattern->pattern) << '\n';
  }
  if (opts.emit_separator && v.separator)
    out << "separator: closure of L1 at k=" << v.separator->k << ", d=" << v.separator->d
        << " over " << v.separator->annotated.profiles.size() << " profiles\n";
  for (const auto& f : v.budget_flags) out << "budget: " << f << '\n';
  for (const auto& n : v.notes) out << "note: " << n << '\n';
  if (opts.elapsed_ms) out << "time: " << *opts.elapsed_ms << " ms\n";
  return out.str();
}

}  // namespace ltsep
