#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "distdeg/critical_system.hpp"
#include "distdeg/errors.hpp"
#include "distdeg/variety.hpp"

namespace distdeg {

struct TrackingConfig {
  std::uint64_t gamma_seed = 0;
  double initial_step = 0.01;
  double min_step = 1e-12;
  double max_step = 0.05;
  int max_steps = 50000;
  /// Relative Newton-correction size accepted by the corrector.
  double corrector_tol = 1e-9;
  double residual_tol = 1e-10;
  double real_tol = 1e-8;
  /// Relative distance below which two solutions are the same point.
  double dedup_tol = 1e-6;
  int newton_max_iter = 50;
  double tol_rank = 1e-8;
  /// Residual threshold on the unsquared equations of a squared-up system.
  double filter_tol = 1e-8;
  /// Paths that fail (not counting divergence to infinity) beyond this
  /// fraction abort the solve.
  double max_failure_fraction = 0.2;
  /// Looser clustering for singular endpoints, which Newton only resolves
  /// to about eps^(1/multiplicity).
  double singular_cluster_tol = 1e-4;
  /// Solutions beyond this norm are treated as escaping to infinity.
  double divergence_norm = 1e8;
  /// newton_refine is local: it gives up when the iterate moves farther than
  /// refine_radius * max(1, ||start||) from its start.
  double refine_radius = 0.5;

  /// Throws ValidationError on non-positive tolerances or min_step >= initial_step.
  void validate() const;
};

struct Solution {
  Eigen::VectorXcd point;  ///< all unknowns
  Eigen::VectorXcd y;      ///< projection to the y coordinates
  double residual = 0.0;
  bool is_real = false;
  bool is_singular_on_C = false;
  bool on_discriminant = false;
  /// Jacobian of the solved system is (numerically) rank deficient here.
  bool system_singular = false;
  int path_id = -1;
  /// Paths that converged to this point.
  std::size_t multiplicity = 1;
  /// Distinct auxiliary lifts (lambda, t) merged into this y.
  std::size_t lifts = 1;
  int newton_iterations = 0;
  /// ||step_k|| / ||step_{k-1}|| at the end of Newton; near 0 for quadratic
  /// convergence.
  double last_step_ratio = 0.0;

  std::vector<double> real_y() const;
};

class NewtonError : public SolverError {
 public:
  enum class Kind { NoConvergence, SingularJacobian, LeftNeighborhood };
  NewtonError(Kind kind, const std::string& what) : SolverError(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Some equation vanishes identically at the chosen parameter.
class DegenerateSystemError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// A CriticalSystem with its parameters fixed, compiled for evaluation.
class SystemAtParameter {
 public:
  SystemAtParameter(const CriticalSystem& system, std::span<const Complex> x);

  const CriticalSystem& system() const noexcept { return *system_; }
  std::span<const Complex> x() const noexcept { return x_; }
  Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(system_->num_unknowns()); }

  void evaluate(const Eigen::VectorXcd& z, Eigen::VectorXcd& f) const;
  void evaluate(const Eigen::VectorXcd& z, Eigen::VectorXcd& f, Eigen::MatrixXcd& jac) const;

  /// max_i |f_i(z)| / (||f_i||_1 * max(1, ||z||_inf)^deg f_i) over the square system.
  double residual(const Eigen::VectorXcd& z) const;
  /// Same measure over the unsquared (defining) equations.
  double defining_residual(const Eigen::VectorXcd& z) const;
  /// Implicit systems: dG/dt(x - y, t) vanishes at z (relative 1e-8).
  bool on_discriminant(const Eigen::VectorXcd& z) const;
  /// Degree in the unknowns of each square-system equation.
  const std::vector<std::size_t>& degrees() const noexcept;
  /// Specialized square-system equations in the unknowns.
  const std::vector<Polynomial>& specialized() const noexcept;

  Eigen::VectorXcd y_part(const Eigen::VectorXcd& z) const;

 private:
  struct Impl;
  const CriticalSystem* system_;
  std::vector<Complex> x_;
  std::shared_ptr<const Impl> impl_;
};

struct SolveReport {
  std::vector<Solution> solutions;
  std::size_t paths = 0;
  std::size_t finite_endpoints = 0;
  std::size_t diverged = 0;
  std::size_t failed = 0;
  /// Endpoints rejected by the unsquared-equation filter.
  std::size_t spurious_filtered = 0;
  std::vector<std::string> warnings;

  double failure_fraction() const {
    return paths == 0 ? 0.0 : static_cast<double>(failed) / static_cast<double>(paths);
  }
  /// Distinct, finite solutions that are not singular points of C.
  std::size_t smooth_count() const;
};

class PathFailureError : public SolverError {
 public:
  explicit PathFailureError(SolveReport report);
  const SolveReport& report() const noexcept { return report_; }

 private:
  SolveReport report_;
};

/// Total-degree homotopy with the gamma trick, tracked on a random affine
/// patch of projective space. Endpoints are Newton-refined, filtered against
/// the unsquared equations, classified and deduplicated. Throws
/// PathFailureError when too many paths fail and DegenerateSystemError when an
/// equation vanishes identically at x.
SolveReport solve_at(const CriticalSystem& s, std::span<const Complex> x,
                     const TrackingConfig& cfg);
SolveReport solve_at(const CriticalSystem& s, std::span<const double> x,
                     const TrackingConfig& cfg);

/// Local damped Newton refinement. Throws NewtonError.
Solution newton_refine(const SystemAtParameter& sys, const Eigen::VectorXcd& start,
                       const TrackingConfig& cfg);

/// Independent cross-check: Newton from `starts` random complex points in the
/// box |Re|, |Im| <= box, then dedup. Not used on the primary path.
std::vector<Solution> multistart_oracle(const SystemAtParameter& sys, std::size_t starts,
                                        double box, std::uint64_t seed,
                                        const TrackingConfig& cfg);

/// Merges solutions with equal points (recording multiplicity), then equal y
/// (recording lifts), flags reality and singularity on C, and sorts by the
/// rounded real parts of y.
std::vector<Solution> classify_and_dedup(std::vector<Solution> sols, const VarietySpec& v,
                                         const TrackingConfig& cfg);

/// Tracks solutions of a CriticalSystem along straight segments in complex
/// parameter space.
class ParameterTracker {
 public:
  ParameterTracker(const CriticalSystem& s, const TrackingConfig& cfg);

  /// Endpoint at `to`, or nothing when the path fails.
  std::optional<Eigen::VectorXcd> track(const Eigen::VectorXcd& start,
                                        std::span<const Complex> from,
                                        std::span<const Complex> to) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace distdeg
