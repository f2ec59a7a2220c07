#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "fracvar/coefficients.hpp"
#include "fracvar/solver.hpp"

namespace fracvar {

/// Fully resolved problem file: expressions parsed and differentiated,
/// coefficients materialized, "auto" constraint targets computed.
struct LoadedProblem {
  VariationalProblem problem;
  SolverOptions options;
  std::shared_ptr<const CoefficientSet> coefficients;
};

/// Loads a structured problem file (JSON syntax; see docs/problem-format.md
/// and the bundled problems/example_s4.prob). Relative CSV paths for
/// tabulated coefficients resolve against base_dir.
LoadedProblem load_problem_text(const std::string& text,
                                const std::filesystem::path& base_dir = ".");

LoadedProblem load_problem_file(const std::filesystem::path& path);

}  // namespace fracvar
