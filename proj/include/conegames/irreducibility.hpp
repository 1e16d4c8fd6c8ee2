#pragma once

#include <optional>
#include <string>

#include "conegames/manifolds.hpp"
#include "conegames/operators.hpp"

namespace conegames {

enum class IrrVerdict { irreducible, reducible, no_witness_found };
enum class IrrMode { cone, space };
enum class IrrMethod {
  graph_scc,
  eigenvector,
  power_positivity,
  invariant_subspace,
  idempotent_search,
  delegated_positive_part,
};

const char* to_string(IrrVerdict v);
const char* to_string(IrrMode m);
const char* to_string(IrrMethod m);

// Outcome of one of the mutually checking cone tests: 1 = witness found,
// 0 = passed, -1 = not run.
struct ConeTestOutcomes {
  int eigenvector = -1;
  int power = -1;
  int face = -1;
};

struct IrreducibilityReport {
  IrrVerdict verdict = IrrVerdict::no_witness_found;
  IrrMode mode = IrrMode::cone;
  IrrMethod method = IrrMethod::idempotent_search;
  bool sampled = false;
  std::optional<Idempotent> witness_face;       // invariant face, 0 < tr(c) < n
  std::optional<Element> boundary_eigenvector;  // for the eigenvector route
  double leakage = -1;                          // ||(I−Π₁)LΠ₁|| at the witness
  ConeTestOutcomes cone_tests;
  std::string note;
};

// K-irreducibility of a positive transformation. The caller attests
// positivity (recorded in the note). Three mutually checking tests: boundary
// eigenvectors, (I+T)^{rank−1} power positivity, and the face inner-product
// search of the appendix equivalence; exact on R^n via strong connectivity.
IrreducibilityReport cone_irreducible(const LinearOperator& T, const SearchBudget& budget = {});

// Space-irreducibility: exact on R^n (off-diagonal strong connectivity), via
// the real/complex Schur form for Lyapunov operators on S^n/H^n, by
// delegation to cone_irreducible(S) when L = rI − S with S positive, and by
// budgeted leakage search otherwise (which never certifies, only refutes).
IrreducibilityReport space_irreducible(const LinearOperator& L, const SearchBudget& budget = {});

// Leakage ||(I−Π₁)·L·Π₁||_F of the Peirce 1-projector of c; values at or
// below tol certify c as a reducibility witness.
double validate_invariant_face(const LinearOperator& L, const Idempotent& c);

struct ExpBridgeReport {
  bool exp_cone_irreducible = false;
  bool space_not_reducible = false;
  bool implication_violated = false;  // exp(−tL) K-irreducible but L reducible
  IrreducibilityReport cone_report, space_report;
};

// For Z-transformations: cone-irreducibility of exp(−tL) vs
// space-irreducibility of L (the first implies the second).
ExpBridgeReport exp_irreducibility_bridge(const LinearOperator& L, double t,
                                          const SearchBudget& budget = {});

}  // namespace conegames
