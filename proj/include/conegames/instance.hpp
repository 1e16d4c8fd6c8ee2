#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "conegames/classify.hpp"
#include "conegames/game.hpp"
#include "conegames/irreducibility.hpp"

namespace conegames {

using nlohmann::json;

// Expected-results block of a fixture; every field optional, provenance is a
// free-form sourcing note.
struct ExpectedBlock {
  std::optional<double> value;
  std::optional<std::string> mixed;
  std::optional<bool> cone_irreducible;
  std::optional<bool> space_irreducible;
  std::optional<std::string> z;
  std::optional<std::string> positive;
  std::optional<std::string> lyapunov_like;
  std::string provenance;
};

struct Instance {
  int schema = 1;
  std::string label;
  AlgebraPtr algebra;
  LinearOperator op;
  json operator_json;  // original spec of the operator, for round trips
  std::optional<ExpectedBlock> expected;
};

AlgebraPtr algebra_from_json(const json& j);
json algebra_to_json(const AlgebraPtr& a);
LinearOperator operator_from_json(const AlgebraPtr& a, const json& j);

Instance instance_from_json(const json& j);
json instance_to_json(const Instance& inst);
Instance load_instance(const std::string& path);
void emit_report(const json& report, const std::string& path);

json to_json(const Element& x);
json to_json(const GameSolution& sol);
json to_json(const MixedReport& rep);
json to_json(const ClassificationReport& rep);
json to_json(const IrreducibilityReport& rep);

// Hand-analyzed fixture instances shipped with the library.
std::vector<Instance> builtin_fixtures();
void write_fixtures(const std::string& directory);

}  // namespace conegames
