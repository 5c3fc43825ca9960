#pragma once

// JSON rendering of verdicts.

#include <optional>
#include <string>

#include "ltsep/separ.hpp"

namespace ltsep {

struct ReportOptions {
  bool emit_witness = true;
  bool emit_separator = false;
  std::optional<double> elapsed_ms;  // omitted from the document when unset
};

/// Serialized JSON text (two-space indentation, stable key order).
std::string verdict_json(const LangSpec& spec, const Verdict& v, const ReportOptions& opts);

/// One-paragraph human summary.
std::string verdict_text(const LangSpec& spec, const Verdict& v, const ReportOptions& opts);

/// 0 separable, 1 inseparable, 2 unknown.
int exit_code(const Verdict& v);

}  // namespace ltsep
