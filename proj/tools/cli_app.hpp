#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mexp/analysis.hpp"
#include "mexp/records.hpp"

namespace mexp::cli {

/// Everything a command depends on. `to_json` is the canonical form echoed in
/// JSON output; from_json(to_json()) reproduces the config.
struct RunConfig {
  std::string command;
  std::string alpha = "quad:2";
  std::vector<std::uint64_t> xs;
  std::optional<std::string> x_range;  // kept for the echo; xs already expanded
  std::optional<Ratio> tau;
  std::optional<std::uint64_t> M, N;
  Ratio epsilon{1, 20};
  std::uint64_t sieve_limit = 0;  // 0: smallest limit the command needs
  int frac_bits = FixedPointAlpha::kDefaultFracBits;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string output;  // empty: stdout
  std::size_t count = 10;
  GammaVariant gamma_variant = GammaVariant::exact;
  SequenceChoice seq = SequenceChoice::mobius;
  int workers = 0;
  bool lemmas = false;
  std::string plot_data;  // path for --emit-plot-data, empty when off
  std::uint64_t memory_budget = kDefaultMemoryBudget;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// "1e4", "250000": a decimal integer or an integer mantissa with a decimal exponent.
std::uint64_t parse_count(const std::string& text);

/// "start:stop:xK" expands to start, start*K, ... up to stop.
std::vector<std::uint64_t> parse_x_range(const std::string& text);

/// The columns each command emits.
std::vector<Column> columns_for(const std::string& command);

/// Runs the command described by `cfg` and returns its record table.
/// `status` receives 4 when decompose sees a residual beyond its budget.
Table build_table(const RunConfig& cfg, int& status);

/// Parses argv, runs, writes the result. Returns the process exit code:
/// 0 ok, 2 usage or configuration, 3 capacity/precision/range, 4 invariant.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mexp::cli
