#pragma once

#include <string>
#include <vector>

#include "conegames/instance.hpp"

namespace conegames {

struct SuiteFailure {
  std::string description;
  uint64_t seed = 0;
  json instance;  // serialized failing instance, when one exists
};

struct SuiteReport {
  std::string name;
  int trials = 0;
  int passes = 0;
  std::vector<SuiteFailure> failures;
  std::vector<std::string> notes;  // recorded observations that assert nothing
  double wall_seconds = 0;
  bool passed() const { return failures.empty(); }
};

std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name, uint64_t seed, int trials);
json to_json(const SuiteReport& rep);

}  // namespace conegames
