#include "fracvar/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fracvar/csv.hpp"
#include "fracvar/errors.hpp"
#include "fracvar/quadrature.hpp"

namespace fracvar {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw SchemaError("problem file: " + message);
}

const json& member(const json& node, const char* key, const char* where) {
  const auto it = node.find(key);
  if (it == node.end()) {
    fail("missing field '" + std::string(key) + "' in " + where);
  }
  return *it;
}

void reject_unknown_keys(const json& node, const char* where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : node.items()) {
    bool ok = false;
    for (const char* name : allowed) {
      if (key == name) {
        ok = true;
        break;
      }
    }
    if (!ok) fail("unknown field '" + key + "' in " + where);
  }
}

// Numbers may be JSON numbers or strings holding constant expressions
// (e.g. "ml(0.5, 1)" for a Mittag-Leffler boundary value).
double number_field(const json& node, const char* where) {
  double value = 0.0;
  if (node.is_number()) {
    value = node.get<double>();
  } else if (node.is_string()) {
    Expression e = Expression::parse(node.get<std::string>());
    if (!e.is_constant()) {
      fail(std::string(where) + " must be a constant; '" +
           node.get<std::string>() + "' is not");
    }
    value = e.constant_value();
  } else {
    fail(std::string(where) + " must be a number or constant expression");
  }
  if (!std::isfinite(value)) {
    fail(std::string(where) + " must be finite");
  }
  return value;
}

Expression expression_field(const json& node, const char* where) {
  if (!node.is_string()) fail(std::string(where) + " must be a string");
  try {
    return Expression::parse(node.get<std::string>());
  } catch (const ParseError& e) {
    fail(std::string(where) + ": " + e.what());
  }
}

std::shared_ptr<const CoefficientSet> load_coefficients(
    const json& root, const std::filesystem::path& base_dir) {
  auto set = std::make_shared<CoefficientSet>();
  const auto it = root.find("coefficients");
  if (it == root.end()) return set;
  if (!it->is_array()) fail("'coefficients' must be an array");
  for (const json& entry : *it) {
    reject_unknown_keys(entry, "coefficient entry",
                        {"name", "kind", "alpha", "csv", "samples"});
    const std::string name =
        member(entry, "name", "coefficient entry").get<std::string>();
    const std::string kind =
        member(entry, "kind", "coefficient entry").get<std::string>();
    if (kind == "ml_alpha_power") {
      const double alpha =
          number_field(member(entry, "alpha", "coefficient entry"), "alpha");
      set->add(name, std::make_shared<MlAlphaPowerCoefficient>(alpha));
    } else if (kind == "tabulated") {
      std::vector<std::pair<double, double>> samples;
      if (entry.contains("csv")) {
        const auto path = base_dir / entry["csv"].get<std::string>();
        const CsvTable table = read_csv(path);
        if (table.columns.size() < 2) {
          fail("tabulated coefficient '" + name + "': " + path.string() +
               " needs two columns (x, value)");
        }
        for (std::size_t r = 0; r < table.rows(); ++r) {
          samples.emplace_back(table.columns[0][r], table.columns[1][r]);
        }
      } else if (entry.contains("samples")) {
        for (const json& pair : entry["samples"]) {
          if (!pair.is_array() || pair.size() != 2) {
            fail("tabulated coefficient '" + name +
                 "': samples must be [x, value] pairs");
          }
          samples.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
      } else {
        fail("tabulated coefficient '" + name + "' needs 'csv' or 'samples'");
      }
      try {
        set->add(name, std::make_shared<TabulatedCoefficient>(std::move(samples)));
      } catch (const DomainError& e) {
        fail("tabulated coefficient '" + name + "': " + e.what());
      }
    } else {
      fail("coefficient '" + name + "' has unknown kind '" + kind +
           "' (expected ml_alpha_power or tabulated)");
    }
  }
  return set;
}

void require_declared(const Expression& e, const CoefficientSet& coeffs,
                      const char* where) {
  for (const auto& name : e.coefficient_names()) {
    if (!coeffs.contains(name)) {
      fail(std::string(where) + " references undeclared coefficient '" +
           name + "'");
    }
  }
}

BoundarySpec load_boundary(const json& node, double a, double b,
                           const CoefficientSet& coeffs) {
  const std::string mode =
      member(node, "mode", "boundary").get<std::string>();
  const double ya = number_field(member(node, "ya", "boundary"), "ya");

  const auto t_range = [&](bool required, double def_lo) {
    double lo = def_lo, hi = b;
    if (node.contains("t_range")) {
      const json& r = node["t_range"];
      if (!r.is_array() || r.size() != 2) {
        fail("'t_range' must be [lo, hi]");
      }
      lo = number_field(r[0], "t_range lo");
      hi = number_field(r[1], "t_range hi");
    } else if (required) {
      fail("boundary mode '" + mode + "' needs 't_range'");
    }
    if (!(a < lo && lo <= hi && hi <= b)) {
      fail("'t_range' must satisfy a < lo <= hi <= b");
    }
    return std::pair<double, double>{lo, hi};
  };

  if (mode == "fixed") {
    reject_unknown_keys(node, "boundary", {"mode", "ya", "yb"});
    const double yb = number_field(member(node, "yb", "boundary"), "yb");
    return FixedBoundary{ya, yb};
  }
  if (mode == "free_right_value") {
    reject_unknown_keys(node, "boundary", {"mode", "ya"});
    return FreeRightValue{ya};
  }
  if (mode == "free_right_point") {
    reject_unknown_keys(node, "boundary", {"mode", "ya", "t_range"});
    const auto [lo, hi] = t_range(true, 0.0);
    return FreeRightPoint{ya, lo, hi};
  }
  if (mode == "curve") {
    reject_unknown_keys(node, "boundary", {"mode", "ya", "psi", "t_range"});
    Expression psi = expression_field(member(node, "psi", "boundary"), "psi");
    require_declared(psi, coeffs, "boundary curve");
    // Default search window: the upper seven-eighths of the interval.
    const auto [lo, hi] = t_range(false, a + 0.125 * (b - a));
    return CurveBoundary{ya, std::move(psi), lo, hi};
  }
  fail("unknown boundary mode '" + mode + "'");
}

void apply_solver_overrides(const json& node, SolverOptions& options) {
  reject_unknown_keys(node, "solver",
                      {"max_iters", "grad_tol", "objective_rel_tol",
                       "armijo_c", "backtrack", "lbfgs_history",
                       "residual_tol", "constraint_tol", "abnormal_tol",
                       "lambda_range", "lambda_scan_points",
                       "lambda_max_iters", "terminal_tol"});
  if (node.contains("max_iters")) options.max_iters = node["max_iters"].get<std::size_t>();
  if (node.contains("grad_tol")) options.grad_tol = node["grad_tol"].get<double>();
  if (node.contains("objective_rel_tol")) {
    options.objective_rel_tol = node["objective_rel_tol"].get<double>();
  }
  if (node.contains("armijo_c")) options.armijo_c = node["armijo_c"].get<double>();
  if (node.contains("backtrack")) options.backtrack = node["backtrack"].get<double>();
  if (node.contains("lbfgs_history")) {
    options.lbfgs_history = node["lbfgs_history"].get<std::size_t>();
  }
  if (node.contains("residual_tol")) options.residual_tol = node["residual_tol"].get<double>();
  if (node.contains("constraint_tol")) {
    options.constraint_tol = node["constraint_tol"].get<double>();
  }
  if (node.contains("abnormal_tol")) options.abnormal_tol = node["abnormal_tol"].get<double>();
  if (node.contains("lambda_range")) {
    const json& r = node["lambda_range"];
    if (!r.is_array() || r.size() != 2) fail("'lambda_range' must be [lo, hi]");
    options.lambda_lo = r[0].get<double>();
    options.lambda_hi = r[1].get<double>();
    if (!(options.lambda_lo < options.lambda_hi)) {
      fail("'lambda_range' must satisfy lo < hi");
    }
  }
  if (node.contains("lambda_scan_points")) {
    options.lambda_scan_points = node["lambda_scan_points"].get<std::size_t>();
  }
  if (node.contains("lambda_max_iters")) {
    options.lambda_max_iters = node["lambda_max_iters"].get<std::size_t>();
  }
  if (node.contains("terminal_tol")) {
    options.terminal_tol = node["terminal_tol"].get<double>();
  }
}

}  // namespace

LoadedProblem load_problem_text(const std::string& text,
                                const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("top level must be an object");
  reject_unknown_keys(root, "problem",
                      {"interval", "orders", "lagrangian", "extremize",
                       "boundary", "constraint", "coefficients", "solver"});

  const json& interval = member(root, "interval", "problem");
  reject_unknown_keys(interval, "interval", {"a", "b"});
  const double a = number_field(member(interval, "a", "interval"), "a");
  const double b = number_field(member(interval, "b", "interval"), "b");
  if (!(a < b)) fail("interval requires a < b");

  const json& orders = member(root, "orders", "problem");
  reject_unknown_keys(orders, "orders", {"alpha", "beta"});
  const double alpha = number_field(member(orders, "alpha", "orders"), "alpha");
  const double beta = orders.contains("beta")
                          ? number_field(orders["beta"], "beta")
                          : alpha;
  if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0)) {
    fail("orders must lie in (0, 1)");
  }

  auto coefficients = load_coefficients(root, base_dir);

  Expression lagrangian =
      expression_field(member(root, "lagrangian", "problem"), "lagrangian");
  require_declared(lagrangian, *coefficients, "lagrangian");

  bool maximize = false;
  if (root.contains("extremize")) {
    const std::string which = root["extremize"].get<std::string>();
    if (which == "max") maximize = true;
    else if (which != "min") fail("'extremize' must be \"min\" or \"max\"");
  }

  BoundarySpec boundary =
      load_boundary(member(root, "boundary", "problem"), a, b, *coefficients);

  std::optional<IsoConstraint> constraint;
  if (root.contains("constraint")) {
    const json& c = root["constraint"];
    reject_unknown_keys(c, "constraint", {"g", "l"});
    Expression g = expression_field(member(c, "g", "constraint"), "g");
    require_declared(g, *coefficients, "constraint");
    const json& l_node = member(c, "l", "constraint");
    double target = 0.0;
    if (l_node.is_string() &&
        l_node.get<std::string>().rfind("auto:", 0) == 0) {
      const std::string name = l_node.get<std::string>().substr(5);
      if (!coefficients->contains(name)) {
        fail("constraint target references undeclared coefficient '" + name +
             "'");
      }
      // l = int coeff(x)^2 dx, the natural target when the constraint is
      // calibrated to known data.
      target = de_integrate(
          [&](double x) {
            const double c0 = coefficients->eval(name, x);
            return c0 * c0;
          },
          a, b, 1e-11);
    } else {
      target = number_field(l_node, "constraint target l");
    }
    constraint = IsoConstraint{
        Lagrangian::from_expression(std::move(g), coefficients), target};
  }

  LoadedProblem loaded{
      VariationalProblem{
          Lagrangian::from_expression(std::move(lagrangian), coefficients),
          FracOrder(alpha), FracOrder(beta), a, b, std::move(boundary),
          std::move(constraint), maximize},
      SolverOptions{}, coefficients};

  if (root.contains("solver")) {
    apply_solver_overrides(root["solver"], loaded.options);
  }
  return loaded;
}

LoadedProblem load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open problem file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_problem_text(buffer.str(), path.parent_path());
}

}  // namespace fracvar
