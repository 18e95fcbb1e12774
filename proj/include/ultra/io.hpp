#pragma once

#include <string>

#include "ultra/decider.hpp"
#include "ultra/graph.hpp"

namespace ultra {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FrameworkFile {
  Framework framework;
  std::optional<Model> model;  // optional default model from the file
};

/// Parses the JSON framework format.  Rationals must be strings ("num" or
/// "num/den"); floats are rejected.
FrameworkFile parse_framework_text(const std::string& text);
FrameworkFile load_framework(const std::string& path);

std::string serialize_framework(const FrameworkFile& file);

/// Machine-readable decide report (stable key order, no timing data so
/// reports are byte-identical across runs with fixed seed and threads).
std::string decide_report(const Framework& fw, Model model,
                          const Verdict& verdict, const DecideOptions& opts);

/// Spectrum table: header line then tab-separated k_i/N fractions and the
/// nullity, one row per spectrum point.
std::string rum_table(const std::vector<RumPoint>& spectrum, int d);

/// Decimal rendering of an exact rational, `digits` significant digits.
std::string rat_to_decimal(const Rat& q, int digits);

}  // namespace ultra
