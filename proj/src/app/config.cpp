#include <fstream>
#include <set>
#include <sstream>

#include "lacewalk/app.hpp"
#include "lacewalk/step_io.hpp"

namespace lacewalk::app {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("invalid config: " + msg); }

std::string where(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  const std::size_t stop = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < stop; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Rational read_rational(const nlohmann::json& v, const std::string& key) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number()) return parse_rational(format_double(v.get<double>()));
  } catch (const std::invalid_argument& e) {
    fail("'" + key + "': " + e.what());
  }
  fail("'" + key + "' must be a number or numeric string");
}

std::uint64_t read_count(const nlohmann::json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0 && d <= 1.8e19 && d == std::floor(d)) return static_cast<std::uint64_t>(d);
  }
  fail("'" + key + "' must be a nonnegative integer");
}

double read_positive(const nlohmann::json& spec, const std::string& key) {
  if (!spec.contains(key) || !spec[key].is_number()) fail("stepDistribution needs a numeric '" + key + "'");
  const double v = spec[key].get<double>();
  if (!(v > 0) || !std::isfinite(v)) fail("stepDistribution '" + key + "' must be positive");
  return v;
}

void only_keys(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& what) {
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) fail("unknown key '" + k + "' in " + what);
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path.string() + "' at " + where(text, e.byte) + ": " + e.what());
  }
}

StepDocument load_table(const RunConfig& c) {
  const auto& spec = c.step_distribution;
  const bool has_path = spec.contains("path");
  const bool has_entries = spec.contains("entries");
  if (has_path == has_entries) fail("a table distribution needs exactly one of 'path' or 'entries'");
  nlohmann::json doc;
  if (has_path) {
    if (!spec["path"].is_string()) fail("'path' must be a string");
    std::filesystem::path p = spec["path"].get<std::string>();
    if (p.is_relative()) p = c.base_dir / p;
    doc = read_json_file(p);
  } else {
    doc = {{"dimension", c.dimension}, {"entries", spec["entries"]}};
  }
  try {
    auto out = step_distribution_from_json(doc);
    if (out.distribution.dim() != c.dimension) fail("table dimension does not match 'dimension'");
    return out;
  } catch (const std::invalid_argument& e) {
    fail(std::string("step table: ") + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed JSON at " + where(text, e.byte) + ": " + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");
  only_keys(j, {"schema", "dimension", "kappa", "interaction", "stepDistribution", "arithmetic", "budget", "seed",
                "threads", "output"},
            "config");
  if (!j.contains("schema")) fail("missing 'schema' (expected \"" + std::string(kConfigSchema) + "\")");
  if (j["schema"] != kConfigSchema) fail("unsupported schema " + j["schema"].dump());

  RunConfig c;
  c.base_dir = base_dir;
  if (!j.contains("dimension") || !j["dimension"].is_number_integer()) fail("'dimension' must be an integer");
  c.dimension = j["dimension"].get<int>();
  if (c.dimension < 1 || c.dimension > kMaxDimension) fail("'dimension' must be in [1, " + std::to_string(kMaxDimension) + "]");
  if (j.contains("kappa")) {
    c.kappa = read_rational(j["kappa"], "kappa");
    if (sgn(*c.kappa) < 0) fail("'kappa' must be >= 0");
  }
  if (j.contains("interaction")) {
    if (!j["interaction"].is_boolean()) fail("'interaction' must be true or false");
    c.interaction = j["interaction"].get<bool>();
  }
  if (j.contains("arithmetic")) {
    const auto a = j["arithmetic"];
    if (a == "float") {
      c.arithmetic = Arithmetic::Float;
    } else if (a == "rational") {
      c.arithmetic = Arithmetic::Rational;
    } else {
      fail("'arithmetic' must be \"float\" or \"rational\"");
    }
  }
  if (j.contains("budget")) {
    c.budget = read_count(j["budget"], "budget");
    if (c.budget == 0) fail("'budget' must be positive");
  }
  if (j.contains("seed")) c.seed = read_count(j["seed"], "seed");
  if (j.contains("threads")) {
    const auto t = read_count(j["threads"], "threads");
    if (t < 1 || t > 1024) fail("'threads' must be in [1, 1024]");
    c.threads = static_cast<unsigned>(t);
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) fail("'output' must be a string");
    c.output = j["output"].get<std::string>();
  }

  if (!j.contains("stepDistribution") || !j["stepDistribution"].is_object()) fail("missing 'stepDistribution' object");
  c.step_distribution = j["stepDistribution"];
  const auto& spec = c.step_distribution;
  if (!spec.contains("family") || !spec["family"].is_string()) fail("stepDistribution needs a 'family'");
  const std::string family = spec["family"];
  if (family == "exponential" || family == "gaussian") {
    only_keys(spec, {"family", "L", "cutoff"}, "stepDistribution");
  } else if (family == "profile") {
    only_keys(spec, {"family", "xi", "h", "L", "cutoff"}, "stepDistribution");
  } else if (family == "nearest-neighbor") {
    only_keys(spec, {"family"}, "stepDistribution");
  } else if (family == "table") {
    only_keys(spec, {"family", "path", "entries"}, "stepDistribution");
  } else {
    fail("unknown stepDistribution family '" + family + "'");
  }
  // Build once so that every error surfaces here.
  make_distribution(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

StepDistribution make_distribution(const RunConfig& c) {
  const auto& spec = c.step_distribution;
  const std::string family = spec.at("family");
  std::optional<StepDistribution> D;
  try {
    if (family == "exponential" || family == "gaussian") {
      D = build_step_distribution(Profile::from_name(family), read_positive(spec, "L"), c.dimension,
                                  read_positive(spec, "cutoff"));
    } else if (family == "profile") {
      if (!spec.contains("xi") || !spec.contains("h")) fail("a profile distribution needs 'xi' and 'h' arrays");
      D = build_step_distribution(Profile::tabulated(spec["xi"].get<std::vector<double>>(), spec["h"].get<std::vector<double>>()),
                                  read_positive(spec, "L"), c.dimension, read_positive(spec, "cutoff"));
    } else if (family == "nearest-neighbor") {
      D = StepDistribution::uniform_nearest_neighbor(c.dimension);
    } else {
      D = load_table(c).distribution;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(std::string("stepDistribution: ") + e.what());
  }
  if (c.arithmetic == Arithmetic::Rational && !D->has_exact_weights()) return D->rationalized();
  return *D;
}

Potential make_potential(const RunConfig& c) {
  if (!c.interaction) return Potential::disabled();
  if (c.kappa) return Potential(*c.kappa);
  if (c.step_distribution.value("family", "") == "table") {
    if (auto k = load_table(c).kappa) return Potential(*k);
  }
  return Potential(Rational(0));
}

std::string config_hash(const nlohmann::json& canonical) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace lacewalk::app
