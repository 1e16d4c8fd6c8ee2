// Command-line front end: solves game instances, classifies operators,
// decides irreducibility, and runs the verification suites.
//
// Exit codes: 0 success, 1 expected-result mismatch or suite failure,
// 2 invalid input.

#include <cmath>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "conegames/instance.hpp"
#include "conegames/suites.hpp"

using namespace conegames;

namespace {

struct GlobalOpts {
  std::string instance_path;
  double tol = tol::game_gap;
  int budget = 64;
  uint64_t seed = 0;
  bool as_json = false;
};

int report_mismatch(const std::string& what) {
  std::cerr << "MISMATCH: " << what << "\n";
  return 1;
}

SearchBudget budget_of(const GlobalOpts& g) {
  SearchBudget b;
  b.multistarts = g.budget;
  b.seed = g.seed;
  return b;
}

int cmd_value(const GlobalOpts& g) {
  Instance inst = load_instance(g.instance_path);
  GameSolution sol = value(inst.op, g.tol);
  if (g.as_json)
    std::cout << to_json(sol).dump(2) << "\n";
  else
    std::cout << "value = " << sol.value << "  (gap " << sol.gap << ", " << sol.iterations
              << " Newton steps)\n";
  if (inst.expected && inst.expected->value) {
    double tolerance = std::max(1e-6, 2 * sol.gap);
    if (std::abs(sol.value - *inst.expected->value) > tolerance)
      return report_mismatch("value " + std::to_string(sol.value) + " vs expected " +
                             std::to_string(*inst.expected->value));
  }
  return 0;
}

int cmd_mixed(const GlobalOpts& g) {
  Instance inst = load_instance(g.instance_path);
  MixedReport rep = is_completely_mixed(inst.op, g.tol, g.seed);
  if (g.as_json)
    std::cout << to_json(rep).dump(2) << "\n";
  else
    std::cout << "mixed verdict = " << to_string(rep.verdict) << "  (path "
              << to_string(rep.path) << ", value " << rep.game_value << ")\n";
  if (inst.expected && inst.expected->mixed && *inst.expected->mixed != to_string(rep.verdict))
    return report_mismatch(std::string("mixed verdict ") + to_string(rep.verdict) +
                           " vs expected " + *inst.expected->mixed);
  return 0;
}

int cmd_classify(const GlobalOpts& g, const std::string& which) {
  Instance inst = load_instance(g.instance_path);
  json out = json::object();
  int rc = 0;
  auto run_one = [&](const std::string& name) {
    ClassificationReport rep;
    if (name == "positive")
      rep = is_positive(inst.op, budget_of(g));
    else if (name == "z")
      rep = is_z(inst.op, budget_of(g));
    else
      rep = is_lyapunov_like(inst.op);
    out[name] = to_json(rep);
    if (!g.as_json)
      std::cout << name << ": " << to_string(rep.verdict) << (rep.sampled ? " (sampled)" : "")
                << "  margin " << rep.worst_margin << "\n";
    const std::optional<std::string>* expected = nullptr;
    if (inst.expected) {
      if (name == "positive") expected = &inst.expected->positive;
      if (name == "z") expected = &inst.expected->z;
      if (name == "lyapunov_like") expected = &inst.expected->lyapunov_like;
    }
    if (expected && expected->has_value() && **expected != to_string(rep.verdict))
      rc = report_mismatch(name + " verdict " + to_string(rep.verdict) + " vs expected " +
                           **expected);
  };
  if (which == "all") {
    run_one("positive");
    run_one("z");
    run_one("lyapunov_like");
  } else {
    run_one(which);
  }
  if (g.as_json) std::cout << out.dump(2) << "\n";
  return rc;
}

int cmd_irreducible(const GlobalOpts& g, const std::string& mode) {
  Instance inst = load_instance(g.instance_path);
  IrreducibilityReport rep = mode == "cone" ? cone_irreducible(inst.op, budget_of(g))
                                            : space_irreducible(inst.op, budget_of(g));
  if (g.as_json)
    std::cout << to_json(rep).dump(2) << "\n";
  else
    std::cout << mode << " irreducibility: " << to_string(rep.verdict) << "  (method "
              << to_string(rep.method) << (rep.sampled ? ", sampled" : "") << ")\n";
  const std::optional<bool>& expected =
      mode == "cone" ? (inst.expected ? inst.expected->cone_irreducible : std::nullopt)
                     : (inst.expected ? inst.expected->space_irreducible : std::nullopt);
  if (expected.has_value()) {
    if (*expected && rep.verdict == IrrVerdict::reducible)
      return report_mismatch("reducible but expected irreducible");
    if (!*expected && rep.verdict == IrrVerdict::irreducible)
      return report_mismatch("irreducible but expected reducible");
  }
  return 0;
}

int cmd_verify(const GlobalOpts& g, const std::string& suite, int trials) {
  std::vector<std::string> to_run;
  if (suite == "all")
    to_run = suite_names();
  else
    to_run.push_back(suite);
  bool all_ok = true;
  json out = json::array();
  for (const std::string& name : to_run) {
    SuiteReport rep = run_suite(name, g.seed, trials);
    out.push_back(to_json(rep));
    std::cout << name << ": " << rep.passes << "/" << rep.trials << " passed in "
              << rep.wall_seconds << " s" << (rep.passed() ? "" : "  ** FAILURES **") << "\n";
    for (const auto& f : rep.failures)
      std::cerr << "  failure (seed " << f.seed << "): " << f.description << "\n";
    all_ok = all_ok && rep.passed();
  }
  if (g.as_json) std::cout << out.dump(2) << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-sum linear games over symmetric cones"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may appear after the subcommand

  GlobalOpts g;
  app.add_option("--tol", g.tol, "solver gap target")->capture_default_str();
  app.add_option("--budget", g.budget, "multistart budget for sampled searches")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_flag("--json", g.as_json, "emit JSON reports");

  auto* value_cmd = app.add_subcommand("value", "solve the game value");
  value_cmd->add_option("-i,--instance", g.instance_path, "instance JSON file")->required();

  auto* mixed_cmd = app.add_subcommand("mixed", "decide the completely mixed property");
  mixed_cmd->add_option("-i,--instance", g.instance_path, "instance JSON file")->required();

  std::string which_class = "all";
  auto* classify_cmd = app.add_subcommand("classify", "classify the operator");
  classify_cmd->add_option("-i,--instance", g.instance_path, "instance JSON file")->required();
  classify_cmd->add_option("--class", which_class, "positive|z|lyapunov_like|all")
      ->check(CLI::IsMember({"positive", "z", "lyapunov_like", "all"}))
      ->capture_default_str();

  std::string mode = "cone";
  auto* irr_cmd = app.add_subcommand("irreducible", "decide irreducibility");
  irr_cmd->add_option("-i,--instance", g.instance_path, "instance JSON file")->required();
  irr_cmd->add_option("--mode", mode, "cone or space")
      ->check(CLI::IsMember({"cone", "space"}))
      ->required();

  std::string suite = "all";
  int trials = 20;
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("--suite", suite, "suite name or 'all'")->capture_default_str();
  verify_cmd->add_option("--trials", trials, "trials per suite")->capture_default_str();

  std::string emit_dir;
  auto* fixtures_cmd = app.add_subcommand("fixtures", "write the bundled fixture files");
  fixtures_cmd->add_option("--emit", emit_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (value_cmd->parsed()) return cmd_value(g);
    if (mixed_cmd->parsed()) return cmd_mixed(g);
    if (classify_cmd->parsed()) return cmd_classify(g, which_class);
    if (irr_cmd->parsed()) return cmd_irreducible(g, mode);
    if (verify_cmd->parsed()) {
      if (suite != "all") {
        auto names = suite_names();
        if (std::find(names.begin(), names.end(), suite) == names.end()) {
          std::cerr << "unknown suite '" << suite << "'\n";
          return 2;
        }
      }
      return cmd_verify(g, suite, trials);
    }
    if (fixtures_cmd->parsed()) {
      write_fixtures(emit_dir);
      std::cout << "fixtures written to " << emit_dir << "\n";
      return 0;
    }
  } catch (const InvalidInput& err) {
    std::cerr << "invalid input: " << err.what() << "\n";
    return 2;
  } catch (const GameSolverError& err) {
    std::cerr << "solver did not converge: " << err.what() << "\n";
    return 2;
  } catch (const ComputeError& err) {
    std::cerr << "computation failed: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
