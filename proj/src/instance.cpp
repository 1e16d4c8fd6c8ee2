#include "conegames/instance.hpp"

#include <filesystem>
#include <fstream>

namespace conegames {

namespace {

[[noreturn]] void fail_field(const std::string& field, const std::string& what) {
  throw InvalidInput("instance: field '" + field + "' " + what);
}

double number_at(const json& j, const std::string& field) {
  if (!j.contains(field)) fail_field(field, "is missing");
  if (!j[field].is_number()) fail_field(field, "must be a number");
  return j[field].get<double>();
}

int int_at(const json& j, const std::string& field) {
  if (!j.contains(field)) fail_field(field, "is missing");
  if (!j[field].is_number_integer()) fail_field(field, "must be an integer");
  return j[field].get<int>();
}

std::string string_at(const json& j, const std::string& field) {
  if (!j.contains(field)) fail_field(field, "is missing");
  if (!j[field].is_string()) fail_field(field, "must be a string");
  return j[field].get<std::string>();
}

VectorXd vector_at(const json& j, const std::string& field, int expect_len) {
  if (!j.contains(field)) fail_field(field, "is missing");
  if (!j[field].is_array()) fail_field(field, "must be an array");
  VectorXd v(j[field].size());
  int k = 0;
  for (const auto& item : j[field]) {
    if (!item.is_number()) fail_field(field, "must contain only numbers");
    v[k++] = item.get<double>();
  }
  if (expect_len >= 0 && v.size() != expect_len)
    fail_field(field, "expected length " + std::to_string(expect_len) + ", got " +
                          std::to_string(v.size()));
  return v;
}

MatrixXd matrix_at(const json& j, const std::string& field, int expect_n) {
  if (!j.contains(field)) fail_field(field, "is missing");
  if (!j[field].is_array() || j[field].empty()) fail_field(field, "must be a nonempty array");
  const auto& rows = j[field];
  int nrows = static_cast<int>(rows.size());
  int ncols = -1;
  MatrixXd m;
  for (int i = 0; i < nrows; ++i) {
    if (!rows[i].is_array()) fail_field(field, "rows must be arrays");
    if (ncols < 0) {
      ncols = static_cast<int>(rows[i].size());
      m.resize(nrows, ncols);
    }
    if (static_cast<int>(rows[i].size()) != ncols) fail_field(field, "rows have unequal lengths");
    for (int c = 0; c < ncols; ++c) {
      if (!rows[i][c].is_number()) fail_field(field, "entries must be numbers");
      m(i, c) = rows[i][c].get<double>();
    }
  }
  if (expect_n >= 0 && (nrows != expect_n || ncols != expect_n))
    fail_field(field, "expected a " + std::to_string(expect_n) + "x" + std::to_string(expect_n) +
                          " matrix, got " + std::to_string(nrows) + "x" + std::to_string(ncols));
  return m;
}

json matrix_to_json(const MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_to_json(const VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

AlgebraPtr algebra_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("instance: field 'algebra' must be an object");
  std::string kind = string_at(j, "kind");
  if (kind == "rn") return Algebra::real_n(int_at(j, "n"));
  if (kind == "sym") return Algebra::sym(int_at(j, "n"));
  if (kind == "herm") return Algebra::herm(int_at(j, "n"));
  if (kind == "spin") return Algebra::spin(int_at(j, "n"));
  if (kind == "sum") {
    if (!j.contains("parts") || !j["parts"].is_array() || j["parts"].empty())
      fail_field("parts", "must be a nonempty array");
    std::vector<AlgebraPtr> parts;
    for (const auto& pj : j["parts"]) parts.push_back(algebra_from_json(pj));
    return Algebra::direct_sum(std::move(parts));
  }
  fail_field("kind", "must be one of rn|sym|herm|spin|sum, got '" + kind + "'");
}

json algebra_to_json(const AlgebraPtr& a) {
  switch (a->kind()) {
    case AlgebraKind::RealVectors:
      return {{"kind", "rn"}, {"n", a->param_n()}};
    case AlgebraKind::SymMatrices:
      return {{"kind", "sym"}, {"n", a->param_n()}};
    case AlgebraKind::HermMatrices:
      return {{"kind", "herm"}, {"n", a->param_n()}};
    case AlgebraKind::SpinAlgebra:
      return {{"kind", "spin"}, {"n", a->param_n()}};
    case AlgebraKind::DirectSum: {
      json parts = json::array();
      for (const auto& p : a->parts()) parts.push_back(algebra_to_json(p));
      return {{"kind", "sum"}, {"parts", parts}};
    }
  }
  throw ComputeError("algebra_to_json: unknown kind");
}

LinearOperator operator_from_json(const AlgebraPtr& a, const json& j) {
  if (!j.is_object()) throw InvalidInput("instance: field 'operator' must be an object");
  std::string type = string_at(j, "type");
  if (type == "dense") return from_dense(a, matrix_at(j, "matrix", a->dim()));
  if (type == "lyap_vec") return lyapunov_op(make_element(a, vector_at(j, "a", a->dim())));
  if (type == "quad_rep") return quad_rep(make_element(a, vector_at(j, "a", a->dim())));
  if (type == "lyap_mat" || type == "stein") {
    MatrixXd are = matrix_at(j, "A", a->param_n());
    if (j.contains("A_im")) {
      MatrixXd aim = matrix_at(j, "A_im", a->param_n());
      Eigen::MatrixXcd A = are.cast<std::complex<double>>() +
                           std::complex<double>(0, 1) * aim.cast<std::complex<double>>();
      return type == "lyap_mat" ? lyapunov_matrix_op(a, A) : stein_matrix_op(a, A);
    }
    return type == "lyap_mat" ? lyapunov_matrix_op(a, are) : stein_matrix_op(a, are);
  }
  if (type == "m_transform") {
    if (!j.contains("S")) fail_field("S", "is missing");
    LinearOperator S = operator_from_json(a, j["S"]);
    double r;
    if (j.contains("r") && j["r"].is_string() && j["r"].get<std::string>() == "rho")
      r = spectrum(S).rho;
    else
      r = number_at(j, "r");
    return m_transform(r, S);
  }
  if (type == "rank_one")
    return rank_one_op(make_element(a, vector_at(j, "x", a->dim())),
                       make_element(a, vector_at(j, "y", a->dim())));
  fail_field("type", "unknown operator type '" + type + "'");
}

namespace {

ExpectedBlock expected_from_json(const json& j) {
  ExpectedBlock e;
  if (j.contains("value")) e.value = number_at(j, "value");
  if (j.contains("mixed")) e.mixed = string_at(j, "mixed");
  if (j.contains("cone_irreducible")) e.cone_irreducible = j["cone_irreducible"].get<bool>();
  if (j.contains("space_irreducible")) e.space_irreducible = j["space_irreducible"].get<bool>();
  if (j.contains("z")) e.z = string_at(j, "z");
  if (j.contains("positive")) e.positive = string_at(j, "positive");
  if (j.contains("lyapunov_like")) e.lyapunov_like = string_at(j, "lyapunov_like");
  if (j.contains("provenance")) e.provenance = string_at(j, "provenance");
  return e;
}

json expected_to_json(const ExpectedBlock& e) {
  json j = json::object();
  if (e.value) j["value"] = *e.value;
  if (e.mixed) j["mixed"] = *e.mixed;
  if (e.cone_irreducible) j["cone_irreducible"] = *e.cone_irreducible;
  if (e.space_irreducible) j["space_irreducible"] = *e.space_irreducible;
  if (e.z) j["z"] = *e.z;
  if (e.positive) j["positive"] = *e.positive;
  if (e.lyapunov_like) j["lyapunov_like"] = *e.lyapunov_like;
  if (!e.provenance.empty()) j["provenance"] = e.provenance;
  return j;
}

}  // namespace

Instance instance_from_json(const json& j) {
  Instance inst;
  if (j.contains("schema")) {
    inst.schema = int_at(j, "schema");
    if (inst.schema != 1) fail_field("schema", "unsupported version");
  }
  if (j.contains("label")) inst.label = string_at(j, "label");
  if (!j.contains("algebra")) fail_field("algebra", "is missing");
  inst.algebra = algebra_from_json(j["algebra"]);
  if (!j.contains("operator")) fail_field("operator", "is missing");
  inst.operator_json = j["operator"];
  inst.op = operator_from_json(inst.algebra, j["operator"]);
  if (j.contains("expected")) inst.expected = expected_from_json(j["expected"]);
  return inst;
}

json instance_to_json(const Instance& inst) {
  json j;
  j["schema"] = inst.schema;
  j["label"] = inst.label;
  j["algebra"] = algebra_to_json(inst.algebra);
  j["operator"] = inst.operator_json.is_null()
                      ? json{{"type", "dense"}, {"matrix", matrix_to_json(inst.op.matrix)}}
                      : inst.operator_json;
  if (inst.expected) j["expected"] = expected_to_json(*inst.expected);
  return j;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("load_instance: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw InvalidInput("load_instance: '" + path + "' is not valid JSON: " + err.what());
  }
  return instance_from_json(j);
}

void emit_report(const json& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("emit_report: cannot open '" + path + "' for writing");
  out << report.dump(2) << "\n";
}

json to_json(const Element& x) { return vector_to_json(x.coords); }

json to_json(const GameSolution& sol) {
  json j;
  j["schema"] = 1;
  j["value"] = sol.value;
  j["gap"] = sol.gap;
  j["xbar"] = to_json(sol.xbar);
  j["ybar"] = to_json(sol.ybar);
  j["residuals"] = {sol.residuals.first, sol.residuals.second};
  j["iterations"] = sol.iterations;
  j["warned"] = sol.warned;
  return j;
}

json to_json(const MixedReport& rep) {
  json j;
  j["schema"] = 1;
  j["verdict"] = to_string(rep.verdict);
  j["path"] = to_string(rep.path);
  j["value"] = rep.game_value;
  j["kernel_dim"] = rep.kernel_dim;
  if (rep.xbar.coords.size()) j["xbar"] = to_json(rep.xbar);
  if (rep.ybar.coords.size()) j["ybar"] = to_json(rep.ybar);
  j["interiority_margins"] = {rep.interiority_margins.first, rep.interiority_margins.second};
  j["s_commutation_residuals"] = {rep.s_commutation_residuals.first,
                                  rep.s_commutation_residuals.second};
  j["sampled"] = rep.sampled;
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

json to_json(const ClassificationReport& rep) {
  json j;
  j["schema"] = 1;
  j["verdict"] = to_string(rep.verdict);
  j["class"] = to_string(rep.op_class);
  j["sampled"] = rep.sampled;
  j["worst_margin"] = rep.worst_margin;
  j["budget_used"] = rep.budget_used;
  if (rep.witness_pair) {
    j["witness"]["x"] = to_json(rep.witness_pair->first);
    j["witness"]["y"] = to_json(rep.witness_pair->second);
  }
  if (rep.witness_point) j["witness"]["point"] = to_json(*rep.witness_point);
  if (rep.gamma) j["gamma"] = *rep.gamma;
  if (rep.decomposition) {
    j["decomposition"]["a"] = to_json(rep.decomposition->first);
    j["decomposition"]["derivation"] = matrix_to_json(rep.decomposition->second.matrix);
  }
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

json to_json(const IrreducibilityReport& rep) {
  json j;
  j["schema"] = 1;
  j["verdict"] = to_string(rep.verdict);
  j["mode"] = to_string(rep.mode);
  j["method"] = to_string(rep.method);
  j["sampled"] = rep.sampled;
  if (rep.witness_face) {
    j["witness"]["idempotent"] = to_json(rep.witness_face->element);
    j["witness"]["rank"] = rep.witness_face->rank_k;
  }
  if (rep.boundary_eigenvector) j["witness"]["boundary_eigenvector"] = to_json(*rep.boundary_eigenvector);
  if (rep.leakage >= 0) j["leakage"] = rep.leakage;
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

// ---------------------------------------------------------------------------
// Fixtures

namespace {

json dense_json(const MatrixXd& m) { return {{"type", "dense"}, {"matrix", matrix_to_json(m)}}; }

Instance make_fixture(const std::string& label, const json& algebra, const json& op,
                      const json& expected) {
  json j;
  j["schema"] = 1;
  j["label"] = label;
  j["algebra"] = algebra;
  j["operator"] = op;
  j["expected"] = expected;
  return instance_from_json(j);
}

}  // namespace

std::vector<Instance> builtin_fixtures() {
  std::vector<Instance> out;
  MatrixXd m;

  m = MatrixXd(2, 2);
  m << 1, -1, -1, 1;
  out.push_back(make_fixture(
      "ex31", {{"kind", "rn"}, {"n", 2}}, dense_json(m),
      {{"value", 0.0},
       {"mixed", "completely_mixed"},
       {"space_irreducible", true},
       {"z", "certified"},
       {"provenance",
        "hand analysis: the ones vector spans the kernel, so both players mix (1/2, 1/2)"}}));

  m = MatrixXd(2, 2);
  m << -1, -1, -1, -1;
  out.push_back(make_fixture(
      "ex32", {{"kind", "rn"}, {"n", 2}}, dense_json(m),
      {{"value", -1.0},
       {"mixed", "not_completely_mixed"},
       {"z", "certified"},
       {"provenance", "hand analysis: every strategy pair pays -1; pure pairs are optimal"}}));

  out.push_back(make_fixture(
      "ex51_rn", {{"kind", "rn"}, {"n", 3}},
      {{"type", "m_transform"},
       {"r", "rho"},
       {"S", {{"type", "rank_one"}, {"x", {1, 1, 1}}, {"y", {1, 1, 1}}}}},
      {{"value", 0.0},
       {"mixed", "completely_mixed"},
       {"space_irreducible", true},
       {"z", "certified"},
       {"provenance", "singular M-transformation built from the trace map; Perron vector is the "
                      "ones vector"}}));

  out.push_back(make_fixture(
      "ex51_sym", {{"kind", "sym"}, {"n", 3}},
      {{"type", "m_transform"},
       {"r", "rho"},
       {"S", {{"type", "rank_one"}, {"x", {1, 1, 1, 0, 0, 0}}, {"y", {1, 1, 1, 0, 0, 0}}}}},
      {{"value", 0.0},
       {"mixed", "completely_mixed"},
       {"z", "certified"},
       {"provenance", "singular M-transformation from the trace map on 3x3 symmetric matrices; "
                      "the identity is the Perron direction"}}));

  m = MatrixXd(2, 2);
  m << 0, 1, -1, 0;
  out.push_back(make_fixture(
      "ex52", {{"kind", "sym"}, {"n", 2}}, {{"type", "lyap_mat"}, {"A", matrix_to_json(m)}},
      {{"value", 0.0},
       {"mixed", "completely_mixed"},
       {"lyapunov_like", "certified"},
       {"space_irreducible", true},
       {"z", "certified"},
       {"provenance", "skew generator: the operator annihilates exactly the multiples of the "
                      "identity, and the generator has no real eigenvector"}}));

  m = MatrixXd(2, 2);
  m << 0, 1, 0, 0;
  out.push_back(make_fixture(
      "ex61", {{"kind", "rn"}, {"n", 2}}, dense_json(m),
      {{"value", 0.0},
       {"mixed", "not_completely_mixed"},
       {"cone_irreducible", false},
       {"positive", "certified"},
       {"provenance", "nilpotent nonnegative matrix: spectral radius zero, first coordinate face "
                      "is invariant"}}));

  m = MatrixXd(2, 2);
  m << 1, 1, 1, 1;
  out.push_back(make_fixture(
      "ex62", {{"kind", "rn"}, {"n", 2}}, dense_json(m),
      {{"value", 1.0},
       {"mixed", "not_completely_mixed"},
       {"cone_irreducible", true},
       {"positive", "certified"},
       {"provenance", "all-ones matrix: value 1 with optimal pure pairs on the boundary"}}));

  out.push_back(make_fixture(
      "lorentz_m", {{"kind", "spin"}, {"n", 4}},
      {{"type", "m_transform"},
       {"r", "rho"},
       {"S",
        {{"type", "rank_one"},
         {"x", {std::sqrt(2.0), 0, 0, 0}},
         {"y", {std::sqrt(2.0), 0, 0, 0}}}}},
      {{"value", 0.0},
       {"mixed", "completely_mixed"},
       {"z", "certified"},
       {"provenance", "singular M-transformation from the trace map on the Lorentz cone"}}));

  m = MatrixXd::Identity(4, 4);
  out.push_back(make_fixture(
      "lorentz_z", {{"kind", "spin"}, {"n", 4}}, dense_json(m),
      {{"value", 0.5},
       {"mixed", "completely_mixed"},
       {"z", "certified"},
       {"provenance", "identity on the spin algebra of rank 2: value 1/2 at the barycenter"}}));

  m = MatrixXd(2, 2);
  m << 0, 1, 0, 0;
  MatrixXd mim(2, 2);
  mim << 1, 0, 0, -2;
  out.push_back(make_fixture(
      "herm2_lyap", {{"kind", "herm"}, {"n", 2}},
      {{"type", "lyap_mat"}, {"A", matrix_to_json(m)}, {"A_im", matrix_to_json(mim)}},
      {{"space_irreducible", false},
       {"lyapunov_like", "certified"},
       {"provenance", "complex triangularization always yields an invariant line, hence an "
                      "invariant face"}}));

  return out;
}

void write_fixtures(const std::string& directory) {
  std::filesystem::create_directories(directory);
  for (const Instance& inst : builtin_fixtures()) {
    std::filesystem::path p = std::filesystem::path(directory) / (inst.label + ".json");
    emit_report(instance_to_json(inst), p.string());
  }
}

}  // namespace conegames
