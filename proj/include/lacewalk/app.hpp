#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lacewalk/model.hpp"
#include "lacewalk/scalar.hpp"

namespace lacewalk::app {

inline constexpr const char* kConfigSchema = "lacewalk.run/1";

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;

/// Invalid or malformed run configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Run configuration, schema "lacewalk.run/1":
///   {
///     "schema": "lacewalk.run/1",
///     "dimension": 2,
///     "kappa": "0.02",                     decimal or "p/q" string, or a number
///     "interaction": true,                 false disables U entirely
///     "stepDistribution": {...},           see below
///     "arithmetic": "float" | "rational",
///     "budget": 1000000000, "seed": 0, "threads": 1, "output": "out"
///   }
/// stepDistribution is one of
///   {"family": "exponential" | "gaussian", "L": 1, "cutoff": 2}
///   {"family": "profile", "xi": [...], "h": [...], "L": 1, "cutoff": 2}
///   {"family": "nearest-neighbor"}
///   {"family": "table", "path": "steps.json"}   (relative to the config file)
///   {"family": "table", "entries": [{"coords": [1, 0], "weight": "1/4"}, ...]}
struct RunConfig {
  int dimension = 1;
  std::optional<Rational> kappa;
  bool interaction = true;
  nlohmann::json step_distribution;
  Arithmetic arithmetic = Arithmetic::Float;
  std::uint64_t budget = 1'000'000'000ull;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string output = ".";
  std::filesystem::path base_dir;
};

/// Throws ConfigError; JSON syntax errors carry "line L, column C".
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// The configured D; rationalized in rational mode.
StepDistribution make_distribution(const RunConfig& config);
/// kappa from the config, else from a table file, else 0.
Potential make_potential(const RunConfig& config);

struct CommandOptions {
  std::optional<int> nmax;
  std::optional<int> n;
  std::optional<int> max_lace;
  std::optional<int> truncation;
  std::optional<std::uint64_t> count;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> budget;
  std::optional<unsigned> threads;
  std::optional<double> mu;
  std::optional<std::string> out;
};

struct RunResult {
  int exit_code = kExitOk;
  std::string summary;
  std::vector<std::filesystem::path> artifacts;
};

/// Dispatches enumerate | lace | verify | series | sample. Artifacts are
/// named {command}-{hash}.{csv|json} with the hash taken over the resolved
/// inputs, and schema.md is (re)written next to them.
RunResult run(const std::string& command, const RunConfig& config, const CommandOptions& options);

/// 16 hex digits of FNV-1a over the compact dump.
std::string config_hash(const nlohmann::json& canonical);

}  // namespace lacewalk::app
