#include "lacewalk/step_io.hpp"

#include <stdexcept>

namespace lacewalk {

namespace {

Rational read_number(const nlohmann::json& v, const std::string& what) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number()) return parse_rational(format_double(v.get<double>()));
  throw std::invalid_argument(what + " must be a number or a numeric string");
}

}  // namespace

nlohmann::json step_distribution_to_json(const StepDistribution& D, const std::optional<Rational>& kappa) {
  nlohmann::json doc;
  doc["schema"] = kStepSchema;
  doc["dimension"] = D.dim();
  if (kappa) doc["kappa"] = to_string(*kappa);
  auto entries = nlohmann::json::array();
  for (std::size_t i = 0; i < D.size(); ++i) {
    const auto& e = D.entries()[i];
    entries.push_back({{"coords", e.offset.coords()},
                       {"weight", D.has_exact_weights() ? to_string(D.exact_weight(i)) : format_double(e.weight)}});
  }
  doc["entries"] = std::move(entries);
  return doc;
}

StepDocument step_distribution_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("step distribution must be a JSON object");
  if (doc.contains("schema") && doc["schema"] != kStepSchema) {
    throw std::invalid_argument("unsupported step distribution schema " + doc["schema"].dump());
  }
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer()) {
    throw std::invalid_argument("step distribution needs an integer 'dimension'");
  }
  const int dim = doc["dimension"].get<int>();
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    throw std::invalid_argument("step distribution needs an 'entries' array");
  }
  std::vector<std::pair<LatticePoint, Rational>> table;
  for (const auto& e : doc["entries"]) {
    if (!e.is_object() || !e.contains("coords") || !e.contains("weight") || !e["coords"].is_array()) {
      throw std::invalid_argument("each entry needs 'coords' and 'weight'");
    }
    std::vector<int> coords;
    for (const auto& c : e["coords"]) {
      if (!c.is_number_integer()) throw std::invalid_argument("coordinates must be integers");
      coords.push_back(c.get<int>());
    }
    if (static_cast<int>(coords.size()) != dim) throw std::invalid_argument("entry coordinates do not match 'dimension'");
    table.emplace_back(LatticePoint(coords), read_number(e["weight"], "weight"));
  }
  StepDocument out{StepDistribution::from_table(dim, table), std::nullopt};
  if (doc.contains("kappa") && !doc["kappa"].is_null()) out.kappa = read_number(doc["kappa"], "kappa");
  return out;
}

}  // namespace lacewalk
