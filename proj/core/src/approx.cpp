#include "distdeg/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "distdeg/random.hpp"

namespace distdeg {

namespace {

constexpr double kCriticalTol = 1e-4;

double distance_to(const NormSpec& norm, std::span<const double> x, std::span<const double> y) {
  std::vector<double> d(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) d[j] = x[j] - y[j];
  return norm_eval(norm, d);
}

bool same_point(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  double diff = 0.0;
  double scale = 1.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    diff = std::max(diff, std::abs(a[j] - b[j]));
    scale = std::max(scale, std::abs(a[j]));
  }
  return diff <= tol * scale;
}

}  // namespace

Approximator::Approximator(const VarietySpec& v, const NormSpec& norm, ApproxOptions opts,
                           TrackingConfig cfg)
    : variety_(v), norm_(norm), opts_(opts), cfg_(cfg) {
  if (!(opts_.gap_tol >= 0.0) || !(opts_.perturbation > 0.0)) {
    throw ValidationError("gap_tol must be non-negative and perturbation positive");
  }
  cfg_.validate();
  system_ = std::make_shared<const CriticalSystem>(
      build_system(variety_, norm_, opts_.formulation, opts_.seed));
}

ApproxResult Approximator::operator()(std::span<const double> x) const {
  if (x.size() != variety_.n()) {
    throw std::invalid_argument("query point has " + std::to_string(x.size()) +
                                " coordinates, expected " + std::to_string(variety_.n()));
  }
  ApproxResult result;
  result.x.assign(x.begin(), x.end());
  std::vector<Candidate> found;
  bool degenerate = false;

  auto add_real = [&](const SolveReport& r, bool perturbed) {
    for (const auto& sol : r.solutions) {
      if (!sol.is_real) continue;
      Candidate c;
      c.y = sol.real_y();
      if (perturbed && !sol.is_singular_on_C &&
          critical_condition_residual(variety_, norm_, x, c.y) > kCriticalTol) {
        continue;
      }
      c.distance = distance_to(norm_, x, c.y);
      c.singular = sol.is_singular_on_C;
      c.from_perturbation = perturbed;
      const bool seen = std::any_of(found.begin(), found.end(), [&](const Candidate& o) {
        return same_point(o.y, c.y, cfg_.dedup_tol);
      });
      if (!seen) found.push_back(std::move(c));
    }
  };

  try {
    const auto r = solve_at(*system_, x, cfg_);
    result.path_failures += r.failed;
    add_real(r, false);
    degenerate = std::any_of(r.solutions.begin(), r.solutions.end(), [](const Solution& s) {
      return s.is_real && s.system_singular && !s.is_singular_on_C;
    });
  } catch (const DegenerateSystemError&) {
    degenerate = true;
  } catch (const PathFailureError& e) {
    result.path_failures += e.report().failed;
    degenerate = true;
  }
  if (found.empty()) degenerate = true;

  if (degenerate) {
    // Nudge x and keep the real solutions that remain critical at x itself.
    double scale = 1.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    Rng rng(derive_seed(opts_.seed, 0xA99));
    for (std::size_t k = 0; k < opts_.perturbation_directions; ++k) {
      auto dir = rng.normal_vector(x.size());
      double len = 0.0;
      for (double v : dir) len += v * v;
      len = std::sqrt(len);
      std::vector<double> xp(x.begin(), x.end());
      for (std::size_t j = 0; j < xp.size(); ++j) {
        xp[j] += opts_.perturbation * scale * dir[j] / len;
      }
      try {
        const auto r = solve_at(*system_, std::span<const double>(xp), cfg_);
        result.path_failures += r.failed;
        add_real(r, true);
      } catch (const SolverError&) {
      }
    }
    result.notes.push_back("degenerate query point; candidates include solutions at nudged x");
  }

  if (found.empty()) {
    throw NoRealCandidateError("no real critical point found; the distance is not determined");
  }
  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.y < b.y;
  });
  result.candidates = std::move(found);
  const auto& best = result.candidates.front();
  result.best = best.y;
  result.distance = best.distance;
  result.best_singular = best.singular;
  result.gap = result.candidates.size() > 1
                   ? result.candidates[1].distance - best.distance
                   : std::numeric_limits<double>::infinity();
  result.unique = result.gap > opts_.gap_tol;
  if (best.singular) {
    result.notes.push_back("best candidate is a singular point of C; smooth critical theory "
                           "does not certify it");
  }
  if (result.path_failures > 0) {
    result.notes.push_back("path failures occurred; minimality is relative to an incomplete "
                           "critical set");
  }
  return result;
}

ApproxResult best_approximation(const VarietySpec& v, const NormSpec& norm,
                                std::span<const double> x, const TrackingConfig& cfg,
                                const ApproxOptions& opts) {
  return Approximator(v, norm, opts, cfg)(x);
}

namespace {

ProbeReport probe(const Approximator& approx, std::span<const std::vector<double>> samples) {
  ProbeReport report;
  report.samples = samples.size();
  for (const auto& x : samples) {
    try {
      const auto r = approx(x);
      if (r.unique) {
        ++report.unique_count;
      } else {
        report.near_ties.push_back(x);
        report.near_tie_gaps.push_back(r.gap);
      }
    } catch (const SolverError&) {
      ++report.failures;
    }
  }
  report.unique_fraction = report.samples == 0 ? 0.0
                                               : static_cast<double>(report.unique_count) /
                                                     static_cast<double>(report.samples);
  return report;
}

}  // namespace

ProbeReport uniqueness_probe(const VarietySpec& v, const NormSpec& norm, std::size_t samples,
                             double scale, std::uint64_t seed, const TrackingConfig& cfg,
                             const ApproxOptions& opts) {
  if (samples == 0) throw ValidationError("probe needs at least one sample");
  if (!(scale > 0.0)) throw ValidationError("probe scale must be positive");
  std::vector<std::vector<double>> xs;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(derive_seed(seed, i));
    xs.push_back(rng.normal_vector(v.n(), scale));
  }
  return probe(Approximator(v, norm, opts, cfg), xs);
}

ProbeReport uniqueness_probe(const VarietySpec& v, const NormSpec& norm,
                             std::span<const std::vector<double>> samples,
                             const TrackingConfig& cfg, const ApproxOptions& opts) {
  if (samples.empty()) throw ValidationError("probe needs at least one sample");
  return probe(Approximator(v, norm, opts, cfg), samples);
}

BoundaryGradientReport boundary_gradient_check(const VarietySpec& v, const NormSpec& norm,
                                               double a,
                                               std::span<const std::vector<double>> points,
                                               const TrackingConfig& cfg,
                                               const ApproxOptions& opts, double h) {
  if (!(a > 0.0)) throw ValidationError("exponent a must be positive");
  if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");
  for (const auto& y : points) {
    if (y.size() != v.n()) throw std::invalid_argument("point has the wrong dimension");
    const double res = membership_residual(v, std::span<const double>(y));
    if (res > 1e-8) {
      throw NotOnVarietyError("point is not on C (membership residual " + std::to_string(res) +
                              ")");
    }
  }
  const Approximator approx(v, norm, opts, cfg);
  auto f = [&](const std::vector<double>& x) { return std::pow(approx(x).distance, a); };

  BoundaryGradientReport report;
  for (const auto& y : points) {
    double sq = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      auto plus = y;
      auto minus = y;
      plus[j] += h;
      minus[j] -= h;
      const double fp = f(plus);
      const double fm = f(minus);
      const double g = (fp - fm) / (2.0 * h);
      sq += g * g;
      // dist is 0 on C.
      report.max_one_sided_slope = std::max({report.max_one_sided_slope, fp / h, fm / h});
    }
    report.gradient_norms.push_back(std::sqrt(sq));
    report.max_gradient_norm = std::max(report.max_gradient_norm, std::sqrt(sq));
  }
  return report;
}

}  // namespace distdeg
