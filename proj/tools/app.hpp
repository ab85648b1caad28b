#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "distdeg/approx.hpp"
#include "distdeg/critical_system.hpp"
#include "distdeg/degree.hpp"
#include "distdeg/norms.hpp"
#include "distdeg/solver.hpp"
#include "distdeg/variety.hpp"

namespace distdeg::app {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInvalid = 2, kSolverFailure = 3 };

struct Problem {
  std::string name;
  VarietySpec variety;
  NormSpec norm;
  Formulation formulation = Formulation::Auto;
  std::optional<std::vector<double>> x;
  std::vector<std::vector<double>> probe_points;
  TrackingConfig cfg;
  double gap_tol = 1e-6;
  Json echo;
};

struct Diagnostic {
  std::string field;
  std::string message;
  std::optional<std::size_t> position;
};

/// Collects every problem-file error instead of stopping at the first.
class ProblemError : public ValidationError {
 public:
  explicit ProblemError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

Problem parse_problem(const Json& doc);
/// Throws ProblemError, including for unreadable files and malformed JSON.
Problem load_problem(const std::string& path);

struct Flags {
  std::uint64_t seed = 0;
  std::size_t trials = 8;
  std::size_t loops = 5;
  std::size_t samples = 100;
  double scale = 1.0;
  std::optional<double> tol_residual;
  std::optional<double> tol_real;
  std::optional<double> tol_dedup;
  std::optional<double> paths_tol;
  std::optional<int> max_steps;
  std::optional<std::vector<double>> x;
  bool timing = true;
};

/// Runs one subcommand and writes the JSON report to `out`; returns the exit code.
int run(const std::string& command, const std::string& problem_path, const Flags& flags,
        std::ostream& out);

/// Pretty JSON with doubles at 17 significant digits; non-finite numbers become null.
std::string dump(const Json& j);

}  // namespace distdeg::app
