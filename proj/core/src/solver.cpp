#include "distdeg/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "compiled.hpp"
#include "distdeg/random.hpp"
#include "tracker.hpp"

namespace distdeg {

void TrackingConfig::validate() const {
  const double positives[] = {initial_step, min_step,  max_step,      corrector_tol,
                              residual_tol, real_tol,  dedup_tol,     tol_rank,
                              filter_tol,   singular_cluster_tol, divergence_norm,
                              refine_radius};
  for (double v : positives) {
    if (!(v > 0.0)) throw ValidationError("tracking tolerances and steps must be positive");
  }
  if (min_step >= initial_step) throw ValidationError("min_step must be below initial_step");
  if (max_steps <= 0 || newton_max_iter <= 0) {
    throw ValidationError("iteration limits must be positive");
  }
  if (max_failure_fraction < 0.0 || max_failure_fraction > 1.0) {
    throw ValidationError("max_failure_fraction must lie in [0, 1]");
  }
}

std::vector<double> Solution::real_y() const {
  std::vector<double> r(static_cast<std::size_t>(y.size()));
  for (Eigen::Index j = 0; j < y.size(); ++j) r[static_cast<std::size_t>(j)] = y[j].real();
  return r;
}

std::size_t SolveReport::smooth_count() const {
  return static_cast<std::size_t>(std::count_if(
      solutions.begin(), solutions.end(), [](const Solution& s) { return !s.is_singular_on_C; }));
}

PathFailureError::PathFailureError(SolveReport report)
    : SolverError(std::to_string(report.failed) + " of " + std::to_string(report.paths) +
                  " paths failed; re-run with a different gamma seed or smaller steps"),
      report_(std::move(report)) {}

// ---------------------------------------------------------------------------
// SystemAtParameter

namespace {

struct ScaledEquations {
  std::vector<Polynomial> polys;
  std::vector<std::size_t> degrees;
  std::vector<double> norms;
  /// Unknowns each equation depends on.
  std::vector<std::vector<Eigen::Index>> support;

  double residual(const Eigen::VectorXcd& z, const Eigen::VectorXcd* values) const {
    std::vector<Complex> point(z.data(), z.data() + z.size());
    double r = 0.0;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      if (norms[i] == 0.0) continue;
      const Complex v = values ? (*values)[static_cast<Eigen::Index>(i)]
                               : evaluate(polys[i], std::span<const Complex>(point));
      double base = 1.0;
      for (auto j : support[i]) base = std::max(base, std::abs(z[j]));
      const double scale = norms[i] * std::pow(base, static_cast<double>(degrees[i]));
      r = std::max(r, std::abs(v) / scale);
    }
    return r;
  }
};

ScaledEquations specialize_all(const std::vector<Polynomial>& eqs, std::size_t unknowns,
                               std::span<const Complex> x) {
  ScaledEquations out;
  std::vector<std::size_t> slots(unknowns);
  for (std::size_t i = 0; i < unknowns; ++i) slots[i] = i;
  for (const auto& e : eqs) {
    out.degrees.push_back(e.degree_in(slots));
    out.polys.push_back(detail::specialize_trailing(e, unknowns, x));
    out.norms.push_back(out.polys.back().coefficient_norm());
    auto& support = out.support.emplace_back();
    for (std::size_t j = 0; j < unknowns; ++j) {
      if (out.polys.back().depends_on(j)) support.push_back(static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

}  // namespace

struct SystemAtParameter::Impl {
  ScaledEquations square;
  ScaledEquations defining;
  std::optional<ScaledEquations> discriminant;
  detail::CompiledSystem compiled;
  std::vector<std::size_t> y_slots;
};

SystemAtParameter::SystemAtParameter(const CriticalSystem& system, std::span<const Complex> x)
    : system_(&system), x_(x.begin(), x.end()) {
  if (x.size() != system.num_params()) {
    throw std::invalid_argument("parameter vector has " + std::to_string(x.size()) +
                                " entries, system expects " +
                                std::to_string(system.num_params()));
  }
  auto impl = std::make_shared<Impl>();
  const std::size_t u = system.num_unknowns();
  impl->square = specialize_all(system.equations, u, x);
  if (system.squared_up()) impl->defining = specialize_all(system.original_equations, u, x);
  if (system.discriminant) impl->discriminant = specialize_all({*system.discriminant}, u, x);
  impl->compiled = detail::CompiledSystem(impl->square.polys);
  impl->y_slots = system.y_slots;
  impl_ = std::move(impl);
}

void SystemAtParameter::evaluate(const Eigen::VectorXcd& z, Eigen::VectorXcd& f) const {
  impl_->compiled.evaluate(z, f);
}

void SystemAtParameter::evaluate(const Eigen::VectorXcd& z, Eigen::VectorXcd& f,
                                 Eigen::MatrixXcd& jac) const {
  impl_->compiled.evaluate(z, f, jac);
}

double SystemAtParameter::residual(const Eigen::VectorXcd& z) const {
  Eigen::VectorXcd f;
  impl_->compiled.evaluate(z, f);
  return impl_->square.residual(z, &f);
}

double SystemAtParameter::defining_residual(const Eigen::VectorXcd& z) const {
  if (!system_->squared_up()) return residual(z);
  return impl_->defining.residual(z, nullptr);
}

bool SystemAtParameter::on_discriminant(const Eigen::VectorXcd& z) const {
  if (!impl_->discriminant) return false;
  return impl_->discriminant->residual(z, nullptr) < 1e-8;
}

const std::vector<std::size_t>& SystemAtParameter::degrees() const noexcept {
  return impl_->square.degrees;
}

const std::vector<Polynomial>& SystemAtParameter::specialized() const noexcept {
  return impl_->square.polys;
}

Eigen::VectorXcd SystemAtParameter::y_part(const Eigen::VectorXcd& z) const {
  Eigen::VectorXcd y(static_cast<Eigen::Index>(impl_->y_slots.size()));
  for (std::size_t j = 0; j < impl_->y_slots.size(); ++j) {
    y[static_cast<Eigen::Index>(j)] = z[static_cast<Eigen::Index>(impl_->y_slots[j])];
  }
  return y;
}

// ---------------------------------------------------------------------------
// Newton refinement

Solution newton_refine(const SystemAtParameter& sys, const Eigen::VectorXcd& start,
                       const TrackingConfig& cfg) {
  if (start.size() != sys.dim()) {
    throw std::invalid_argument("start point has " + std::to_string(start.size()) +
                                " coordinates, system has " + std::to_string(sys.dim()) +
                                " unknowns");
  }
  Eigen::VectorXcd z = start;
  const double radius = cfg.refine_radius * std::max(1.0, start.norm());
  Eigen::VectorXcd f;
  Eigen::MatrixXcd jac;
  double r = sys.residual(z);
  double cond = 1.0;
  double previous_step = 0.0;
  double ratio = 0.0;
  int iterations = 0;

  for (;;) {
    if (!z.allFinite()) {
      throw NewtonError(NewtonError::Kind::NoConvergence, "Newton iterate is not finite");
    }
    sys.evaluate(z, f, jac);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    cond = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1]
                                   : std::numeric_limits<double>::infinity();
    svd.setThreshold(1e-14);
    const Eigen::VectorXcd step = svd.solve(f);
    if (!step.allFinite()) break;
    const double step_norm = step.norm();
    if (r < cfg.residual_tol && step_norm <= 1e-13 * (1.0 + z.norm())) break;
    if (iterations >= cfg.newton_max_iter) break;

    // Below tolerance, keep polishing only while the steps contract.
    if (r < cfg.residual_tol && previous_step > 0.0 && step_norm >= previous_step) break;
    Eigen::VectorXcd next = z - step;
    const double r_next = sys.residual(next);
    ratio = previous_step > 0.0 ? step_norm / previous_step : 0.0;
    previous_step = step_norm;
    z = std::move(next);
    r = r_next;
    ++iterations;
    if ((z - start).norm() > radius) {
      throw NewtonError(NewtonError::Kind::LeftNeighborhood,
                        "Newton left the refinement neighbourhood of its start point");
    }
  }

  if (!(r < cfg.residual_tol)) {
    if (cond > 1e14) {
      throw NewtonError(NewtonError::Kind::SingularJacobian,
                        "singular linearization (condition number " + std::to_string(cond) + ")");
    }
    throw NewtonError(NewtonError::Kind::NoConvergence,
                      "Newton did not converge in " + std::to_string(cfg.newton_max_iter) +
                          " iterations (residual " + std::to_string(r) + ")");
  }

  Solution sol;
  sol.point = z;
  sol.y = sys.y_part(z);
  sol.residual = r;
  sol.newton_iterations = iterations;
  sol.last_step_ratio = ratio;
  sol.system_singular = cond > 1e10;
  sol.on_discriminant = sys.on_discriminant(z);
  return sol;
}

// ---------------------------------------------------------------------------
// Classification and deduplication

namespace {

bool close(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double tol) {
  return (a - b).norm() <= tol * std::max(1.0, std::max(a.norm(), b.norm()));
}

double rounded(double v) { return std::nearbyint(v * 1e8) / 1e8; }

bool solution_order(const Solution& a, const Solution& b) {
  for (Eigen::Index j = 0; j < a.y.size(); ++j) {
    const double ra = rounded(a.y[j].real());
    const double rb = rounded(b.y[j].real());
    if (ra != rb) return ra < rb;
  }
  for (Eigen::Index j = 0; j < a.y.size(); ++j) {
    const double ia = rounded(a.y[j].imag());
    const double ib = rounded(b.y[j].imag());
    if (ia != ib) return ia < ib;
  }
  return a.path_id < b.path_id;
}

}  // namespace

std::vector<Solution> classify_and_dedup(std::vector<Solution> sols, const VarietySpec& v,
                                         const TrackingConfig& cfg) {
  auto flag_singular = [&](Solution& s) {
    std::vector<Complex> y(s.y.data(), s.y.data() + s.y.size());
    try {
      s.is_singular_on_C = singular_test(v, y, cfg.tol_rank, 1e-6);
    } catch (const NotOnVarietyError&) {
      s.is_singular_on_C = false;
    }
  };
  for (auto& s : sols) flag_singular(s);
  auto tolerance = [&](const Solution& a, const Solution& b) {
    const bool singular =
        a.system_singular || b.system_singular || a.is_singular_on_C || b.is_singular_on_C;
    return singular ? std::max(cfg.dedup_tol, cfg.singular_cluster_tol) : cfg.dedup_tol;
  };

  // Same point in all unknowns: paths converging together.
  std::vector<Solution> points;
  std::vector<Eigen::VectorXcd> sums;
  for (auto& s : sols) {
    auto it = std::find_if(points.begin(), points.end(), [&](const Solution& c) {
      return close(c.point, s.point, tolerance(c, s));
    });
    if (it == points.end()) {
      sums.push_back(s.point * static_cast<double>(s.multiplicity));
      points.push_back(std::move(s));
      continue;
    }
    sums[static_cast<std::size_t>(it - points.begin())] +=
        s.point * static_cast<double>(s.multiplicity);
    it->multiplicity += s.multiplicity;
    it->system_singular = it->system_singular || s.system_singular;
    it->on_discriminant = it->on_discriminant || s.on_discriminant;
    it->residual = std::min(it->residual, s.residual);
  }
  // The centroid of a cluster is far more accurate than its members, which
  // a singular root scatters by about eps^(1/multiplicity).
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& p = points[i];
    if (p.multiplicity > 1) {
      p.point = sums[i] / static_cast<double>(p.multiplicity);
      // y occupies the leading unknowns.
      p.y = p.point.head(p.y.size());
      flag_singular(p);
    }
    p.is_real = p.y.imag().cwiseAbs().maxCoeff() < cfg.real_tol;
  }

  // Same y: auxiliary unknowns are forgotten.
  std::vector<Solution> merged;
  for (auto& s : points) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Solution& c) {
      return close(c.y, s.y, tolerance(c, s));
    });
    if (it == merged.end()) {
      merged.push_back(std::move(s));
      continue;
    }
    it->lifts += s.lifts;
    it->multiplicity = std::max(it->multiplicity, s.multiplicity);
    it->system_singular = it->system_singular || s.system_singular;
    it->on_discriminant = it->on_discriminant || s.on_discriminant;
  }

  std::sort(merged.begin(), merged.end(), solution_order);
  return merged;
}

// ---------------------------------------------------------------------------
// Total-degree homotopy

namespace {

class TotalDegreeHomotopy final : public detail::Homotopy {
 public:
  TotalDegreeHomotopy(const std::vector<Polynomial>& homogenized,
                      std::vector<std::size_t> degrees, Complex gamma, Eigen::VectorXcd patch)
      : target_(homogenized), degrees_(std::move(degrees)), gamma_(gamma),
        patch_(std::move(patch)) {}

  Eigen::Index dim() const override { return patch_.size(); }

  void evaluate(const Eigen::VectorXcd& w, double s, Eigen::VectorXcd& h, Eigen::MatrixXcd& hz,
                Eigen::VectorXcd* hs) const override {
    const Eigen::Index n = dim() - 1;
    target_.evaluate(w, f_, jf_);
    h.resize(n + 1);
    hz.resize(n + 1, n + 1);
    if (hs) hs->resize(n + 1);
    const Complex w0 = w[0];
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto d = static_cast<int>(degrees_[static_cast<std::size_t>(i)]);
      const Complex wi = w[i + 1];
      const Complex wi_d1 = std::pow(wi, d - 1);
      const Complex w0_d1 = std::pow(w0, d - 1);
      const Complex g = wi_d1 * wi - w0_d1 * w0;
      h[i] = (1.0 - s) * gamma_ * g + s * f_[i];
      hz.row(i) = s * jf_.row(i);
      hz(i, i + 1) += (1.0 - s) * gamma_ * static_cast<double>(d) * wi_d1;
      hz(i, 0) -= (1.0 - s) * gamma_ * static_cast<double>(d) * w0_d1;
      if (hs) (*hs)[i] = f_[i] - gamma_ * g;
    }
    h[n] = patch_.cwiseProduct(w).sum() - 1.0;
    hz.row(n) = patch_.transpose();
    if (hs) (*hs)[n] = 0.0;
  }

  Eigen::VectorXcd start_point(std::size_t index) const {
    const Eigen::Index n = dim() - 1;
    Eigen::VectorXcd w(n + 1);
    w[0] = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto d = degrees_[static_cast<std::size_t>(i)];
      const auto k = index % d;
      index /= d;
      w[i + 1] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                     static_cast<double>(d));
    }
    const Complex scale = patch_.cwiseProduct(w).sum();
    return w / scale;
  }

 private:
  detail::CompiledSystem target_;
  std::vector<std::size_t> degrees_;
  Complex gamma_;
  Eigen::VectorXcd patch_;
  mutable Eigen::VectorXcd f_;
  mutable Eigen::MatrixXcd jf_;
};

// Min-norm Newton on the target system at s = 1 in projective coordinates;
// singular endpoints at infinity converge (linearly) to w0 = 0.
Eigen::VectorXcd projective_polish(const TotalDegreeHomotopy& h, Eigen::VectorXcd w,
                                   int max_iter) {
  Eigen::VectorXcd value;
  Eigen::MatrixXcd jac;
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    h.evaluate(w, 1.0, value, jac, nullptr);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-14);
    const Eigen::VectorXcd step = svd.solve(value);
    const double norm = step.norm();
    if (!step.allFinite() || norm >= previous) break;
    w -= step;
    previous = norm;
    if (norm <= 1e-14 * w.norm()) break;
  }
  return w;
}

}  // namespace

SolveReport solve_at(const CriticalSystem& s, std::span<const Complex> x,
                     const TrackingConfig& cfg) {
  cfg.validate();
  if (!s.is_square()) throw std::logic_error("solve_at needs a square system; call square_up");
  const SystemAtParameter sys(s, x);
  const auto& degrees = sys.degrees();
  std::vector<Polynomial> homogenized;
  std::size_t paths = 1;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] == 0) {
      throw std::logic_error("equation " + std::to_string(i + 1) +
                             " does not involve the unknowns");
    }
    if (sys.specialized()[i].is_zero()) {
      throw DegenerateSystemError("equation " + std::to_string(i + 1) +
                                  " vanishes identically at this parameter");
    }
    homogenized.push_back(detail::homogenize(sys.specialized()[i], degrees[i]));
    paths *= degrees[i];
  }

  Rng rng(derive_seed(cfg.gamma_seed, 0x6A11A));
  const Complex gamma = rng.unit_complex();
  Eigen::VectorXcd patch(static_cast<Eigen::Index>(degrees.size() + 1));
  for (auto& a : patch) a = rng.complex_normal();
  const TotalDegreeHomotopy homotopy(homogenized, degrees, gamma, patch);

  SolveReport report;
  report.paths = paths;
  std::vector<Solution> raw;
  for (std::size_t path = 0; path < paths; ++path) {
    const auto outcome = detail::track(homotopy, homotopy.start_point(path), cfg);
    using Status = detail::TrackOutcome::Status;
    if (outcome.status == Status::Diverged) {
      ++report.diverged;
      continue;
    }
    const bool reached_end = outcome.status == Status::Success || outcome.s > 0.9;
    if (!reached_end) {
      ++report.failed;
      continue;
    }
    const Eigen::VectorXcd w = projective_polish(homotopy, outcome.z, cfg.newton_max_iter);
    const double w0_rel = std::abs(w[0]) / w.norm();
    if (w0_rel <= 1e-8) {
      ++report.diverged;
      continue;
    }
    const Eigen::VectorXcd affine = w.tail(w.size() - 1) / w[0];
    if (affine.norm() > cfg.divergence_norm) {
      ++report.diverged;
      continue;
    }
    try {
      Solution sol = newton_refine(sys, affine, cfg);
      sol.path_id = static_cast<int>(path);
      if (sol.point.norm() > cfg.divergence_norm) {
        ++report.diverged;
        continue;
      }
      ++report.finite_endpoints;
      if (s.squared_up() && sys.defining_residual(sol.point) > cfg.filter_tol) {
        ++report.spurious_filtered;
        continue;
      }
      raw.push_back(std::move(sol));
    } catch (const NewtonError&) {
      // A path that stalls close to the hyperplane at infinity is escaping.
      if (w0_rel < 1e-3) {
        ++report.diverged;
      } else {
        ++report.failed;
      }
    }
  }

  report.solutions = classify_and_dedup(std::move(raw), s.variety, cfg);
  for (const auto& sol : report.solutions) {
    if (sol.multiplicity > 1 && !sol.is_singular_on_C && !sol.system_singular) {
      report.warnings.push_back("solution reached by " + std::to_string(sol.multiplicity) +
                                " paths; parameter may be non-generic");
      break;
    }
  }
  if (report.failed > 0) {
    report.warnings.push_back(std::to_string(report.failed) + " of " +
                              std::to_string(report.paths) + " paths failed");
  }
  if (report.failure_fraction() > cfg.max_failure_fraction) throw PathFailureError(report);
  return report;
}

SolveReport solve_at(const CriticalSystem& s, std::span<const double> x,
                     const TrackingConfig& cfg) {
  std::vector<Complex> xc(x.begin(), x.end());
  return solve_at(s, std::span<const Complex>(xc), cfg);
}

// ---------------------------------------------------------------------------
// Multistart oracle

std::vector<Solution> multistart_oracle(const SystemAtParameter& sys, std::size_t starts,
                                        double box, std::uint64_t seed,
                                        const TrackingConfig& cfg) {
  Rng rng(seed);
  const Eigen::Index n = sys.dim();
  std::vector<Solution> found;
  Eigen::VectorXcd f;
  Eigen::VectorXcd trial_f;
  Eigen::MatrixXcd jac;
  for (std::size_t k = 0; k < starts; ++k) {
    Eigen::VectorXcd z(n);
    for (auto& c : z) c = Complex{rng.uniform(-box, box), rng.uniform(-box, box)};

    sys.evaluate(z, f, jac);
    double fn = f.norm();
    for (int it = 0; it < 100 && z.allFinite(); ++it) {
      const Eigen::VectorXcd step = jac.partialPivLu().solve(f);
      if (!step.allFinite()) break;
      double damping = 1.0;
      Eigen::VectorXcd next = z - step;
      sys.evaluate(next, trial_f);
      for (int b = 0; b < 10 && trial_f.norm() >= fn; ++b) {
        damping *= 0.5;
        next = z - damping * step;
        sys.evaluate(next, trial_f);
      }
      z = std::move(next);
      sys.evaluate(z, f, jac);
      fn = f.norm();
      if (damping * step.norm() <= 1e-12 * (1.0 + z.norm())) break;
      if (z.norm() > 1e6 * (1.0 + box)) break;
    }
    if (!z.allFinite() || sys.residual(z) > 1e-6) continue;
    try {
      Solution sol = newton_refine(sys, z, cfg);
      if (sys.system().squared_up() && sys.defining_residual(sol.point) > cfg.filter_tol) continue;
      sol.path_id = static_cast<int>(k);
      // Cheap pre-merge keeps the candidate list short.
      const bool seen = std::any_of(found.begin(), found.end(), [&](const Solution& c) {
        return close(c.point, sol.point, cfg.dedup_tol);
      });
      if (!seen) found.push_back(std::move(sol));
    } catch (const NewtonError&) {
    }
  }
  return classify_and_dedup(std::move(found), sys.system().variety, cfg);
}

// ---------------------------------------------------------------------------
// Parameter homotopy

namespace {

class ParameterHomotopy final : public detail::Homotopy {
 public:
  ParameterHomotopy(const detail::CompiledSystem& full, Eigen::Index unknowns,
                    Eigen::VectorXcd from, Eigen::VectorXcd to)
      : full_(full), unknowns_(unknowns), from_(std::move(from)), to_(std::move(to)) {}

  Eigen::Index dim() const override { return unknowns_; }

  void evaluate(const Eigen::VectorXcd& z, double s, Eigen::VectorXcd& h, Eigen::MatrixXcd& hz,
                Eigen::VectorXcd* hs) const override {
    Eigen::VectorXcd v(full_.num_vars());
    v.head(unknowns_) = z;
    v.tail(from_.size()) = from_ + s * (to_ - from_);
    full_.evaluate(v, h, jac_);
    hz = jac_.leftCols(unknowns_);
    if (hs) *hs = jac_.rightCols(from_.size()) * (to_ - from_);
  }

 private:
  const detail::CompiledSystem& full_;
  Eigen::Index unknowns_;
  Eigen::VectorXcd from_;
  Eigen::VectorXcd to_;
  mutable Eigen::MatrixXcd jac_;
};

}  // namespace

struct ParameterTracker::Impl {
  detail::CompiledSystem full;
  Eigen::Index unknowns = 0;
  TrackingConfig cfg;
};

ParameterTracker::ParameterTracker(const CriticalSystem& s, const TrackingConfig& cfg) {
  if (!s.is_square()) throw std::logic_error("parameter tracking needs a square system");
  cfg.validate();
  auto impl = std::make_shared<Impl>();
  impl->full = detail::CompiledSystem(s.equations);
  impl->unknowns = static_cast<Eigen::Index>(s.num_unknowns());
  impl->cfg = cfg;
  impl_ = std::move(impl);
}

std::optional<Eigen::VectorXcd> ParameterTracker::track(const Eigen::VectorXcd& start,
                                                        std::span<const Complex> from,
                                                        std::span<const Complex> to) const {
  const auto n = static_cast<Eigen::Index>(from.size());
  if (static_cast<Eigen::Index>(to.size()) != n ||
      n + impl_->unknowns != impl_->full.num_vars() || start.size() != impl_->unknowns) {
    throw std::invalid_argument("parameter tracking dimensions do not match the system");
  }
  const Eigen::VectorXcd a = Eigen::Map<const Eigen::VectorXcd>(from.data(), n);
  const Eigen::VectorXcd b = Eigen::Map<const Eigen::VectorXcd>(to.data(), n);
  const ParameterHomotopy h(impl_->full, impl_->unknowns, a, b);
  auto outcome = detail::track(h, start, impl_->cfg);
  if (outcome.status != detail::TrackOutcome::Status::Success) return std::nullopt;

  Eigen::VectorXcd hv;
  Eigen::MatrixXcd hz;
  Eigen::VectorXcd z = outcome.z;
  for (int k = 0; k < 3; ++k) {
    h.evaluate(z, 1.0, hv, hz, nullptr);
    const Eigen::VectorXcd delta = hz.partialPivLu().solve(hv);
    if (!delta.allFinite()) return std::nullopt;
    z -= delta;
    if (delta.norm() <= 1e-14 * (1.0 + z.norm())) break;
  }
  return z;
}

}  // namespace distdeg
