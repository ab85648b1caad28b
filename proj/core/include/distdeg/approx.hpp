#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "distdeg/critical_system.hpp"
#include "distdeg/norms.hpp"
#include "distdeg/solver.hpp"
#include "distdeg/variety.hpp"

namespace distdeg {

/// No real critical point was found, so no distance can be claimed.
class NoRealCandidateError : public SolverError {
 public:
  using SolverError::SolverError;
};

struct ApproxOptions {
  /// Absolute, in norm units.
  double gap_tol = 1e-6;
  std::uint64_t seed = 0;
  Formulation formulation = Formulation::Auto;
  /// Relative size of the parameter nudge used at degenerate x.
  double perturbation = 1e-6;
  std::size_t perturbation_directions = 4;
};

struct Candidate {
  std::vector<double> y;
  double distance = 0.0;
  bool singular = false;
  /// Found at a nudged parameter and verified critical at x.
  bool from_perturbation = false;
};

struct ApproxResult {
  std::vector<double> x;
  /// Sorted by distance.
  std::vector<Candidate> candidates;
  std::vector<double> best;
  double distance = 0.0;
  /// Second-best minus best distance; infinite with a single candidate.
  double gap = 0.0;
  bool unique = false;
  bool best_singular = false;
  std::size_t path_failures = 0;
  std::vector<std::string> notes;
};

/// Builds the critical system once and answers nearest-point queries.
class Approximator {
 public:
  Approximator(const VarietySpec& v, const NormSpec& norm, ApproxOptions opts,
               TrackingConfig cfg);

  /// Throws NoRealCandidateError when the real critical set is empty.
  ApproxResult operator()(std::span<const double> x) const;

  const CriticalSystem& system() const noexcept { return *system_; }
  const ApproxOptions& options() const noexcept { return opts_; }

 private:
  VarietySpec variety_;
  NormSpec norm_;
  ApproxOptions opts_;
  TrackingConfig cfg_;
  std::shared_ptr<const CriticalSystem> system_;
};

ApproxResult best_approximation(const VarietySpec& v, const NormSpec& norm,
                                std::span<const double> x, const TrackingConfig& cfg,
                                const ApproxOptions& opts = {});

struct ProbeReport {
  std::size_t samples = 0;
  std::size_t unique_count = 0;
  double unique_fraction = 0.0;
  /// Samples whose gap is at most gap_tol.
  std::vector<std::vector<double>> near_ties;
  std::vector<double> near_tie_gaps;
  /// Samples where no real candidate was found (counted as not unique).
  std::size_t failures = 0;
};

/// Real Gaussian samples at the given scale.
ProbeReport uniqueness_probe(const VarietySpec& v, const NormSpec& norm, std::size_t samples,
                             double scale, std::uint64_t seed, const TrackingConfig& cfg,
                             const ApproxOptions& opts = {});
/// Explicit sample list.
ProbeReport uniqueness_probe(const VarietySpec& v, const NormSpec& norm,
                             std::span<const std::vector<double>> samples,
                             const TrackingConfig& cfg, const ApproxOptions& opts = {});

struct BoundaryGradientReport {
  /// Max central-difference gradient norm of x -> dist(x, C)^a.
  double max_gradient_norm = 0.0;
  /// Max |dist(y +- h e_j)^a| / h, the one-sided difference quotients.
  double max_one_sided_slope = 0.0;
  std::vector<double> gradient_norms;
};

/// Central differences of dist^a at points of C with step h. The gradient
/// vanishes for a > 1; a = 1 shows up in the one-sided slopes. Throws
/// ValidationError unless a > 0, NotOnVarietyError on points off C.
BoundaryGradientReport boundary_gradient_check(const VarietySpec& v, const NormSpec& norm,
                                               double a,
                                               std::span<const std::vector<double>> points,
                                               const TrackingConfig& cfg,
                                               const ApproxOptions& opts = {}, double h = 1e-4);

}  // namespace distdeg
