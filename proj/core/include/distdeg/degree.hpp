#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "distdeg/critical_system.hpp"
#include "distdeg/norms.hpp"
#include "distdeg/solver.hpp"
#include "distdeg/variety.hpp"

namespace distdeg {

/// Distinct finite solutions of s at x that are smooth points of C.
std::size_t fiber_count(const CriticalSystem& s, std::span<const Complex> x,
                        const TrackingConfig& cfg);

struct MonodromyReport {
  std::vector<double> x0;
  /// Smooth fiber at x0, as y vectors in solve order.
  std::size_t fiber_size = 0;
  std::vector<std::size_t> real_indices;
  /// Orbits of the generated permutation group (indices into the fiber).
  std::vector<std::vector<std::size_t>> orbits;
  /// Members of the orbits that contain a real solution.
  std::size_t sigma1_degree = 0;
  /// Size of the permutation group generated by the loops (capped).
  std::size_t group_size = 0;
  bool group_size_capped = false;
  std::size_t loops_completed = 0;
  std::size_t loops_discarded = 0;
  /// Orbit partition unchanged over two consecutive doubling rounds.
  bool stable = false;
};

/// Tracks the smooth fiber at a real x0 around random complex triangles in
/// parameter space and collects the orbits through the real solutions.
/// Throws SolverError when x0 has no real smooth solution.
MonodromyReport monodromy_real_component(const CriticalSystem& s, std::span<const double> x0,
                                         std::size_t loops, std::uint64_t seed,
                                         const TrackingConfig& cfg);

struct DegreeReport {
  std::vector<std::size_t> trial_counts;
  std::optional<std::size_t> delta_hat;
  double stability = 0.0;
  /// Real smooth critical counts at real Gaussian x.
  std::vector<std::size_t> real_counts;
  std::map<std::size_t, std::size_t> real_count_distribution;
  std::optional<std::size_t> sigma1_degree;
  std::optional<MonodromyReport> monodromy;
  std::uint64_t bezout = 0;
  Formulation formulation = Formulation::Auto;
  std::size_t path_failures = 0;
  std::size_t failed_trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> trial_seeds;
  std::vector<std::string> warnings;
};

struct DegreeOptions {
  std::size_t trials = 8;
  std::size_t loops = 5;
  std::uint64_t seed = 0;
  Formulation formulation = Formulation::Auto;
  /// Scale of the Gaussian parameter draws.
  double scale = 1.0;
};

/// Mode of fiber counts over complex Gaussian x. Throws ValidationError when
/// trials < 3. Low stability is reported without a delta_hat.
DegreeReport nu_distance_degree(const VarietySpec& v, const NormSpec& norm,
                                const DegreeOptions& opts, const TrackingConfig& cfg);

}  // namespace distdeg
