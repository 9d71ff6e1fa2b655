#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "lacewalk/model.hpp"

namespace lacewalk {

inline constexpr const char* kStepSchema = "lacewalk.steps/1";

/// {schema, dimension, kappa?, entries: [{coords: [...], weight: "..."}]}.
/// Exact weights are written as "p/q" strings, float weights as the
/// shortest round-trip decimal string.
nlohmann::json step_distribution_to_json(const StepDistribution& D, const std::optional<Rational>& kappa = {});

struct StepDocument {
  StepDistribution distribution;
  std::optional<Rational> kappa;
};

/// Accepts string weights ("p/q" or decimal, read exactly) and numeric
/// weights (read as their shortest decimal). The result always carries
/// exact weights. Throws std::invalid_argument on a malformed document.
StepDocument step_distribution_from_json(const nlohmann::json& doc);

}  // namespace lacewalk
