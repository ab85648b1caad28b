#include "distdeg/norms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "distdeg/errors.hpp"
#include "distdeg/random.hpp"

namespace distdeg {

namespace {

double euclid(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

// (sum |x_j|^p)^(1/p) with the usual max-abs rescaling.
double power_mean_norm(std::span<const double> x, double p) {
  const double s = max_abs(x);
  if (s == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += std::pow(std::abs(v) / s, p);
  return s * std::pow(acc, 1.0 / p);
}

// Real roots of sum_j c_j t^j, ascending coefficient order.
std::vector<double> real_roots(std::vector<double> c) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {};
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
  if (c.size() < 2) return {};

  const auto degree = static_cast<Eigen::Index>(c.size() - 1);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < degree; ++i) {
    companion(i, degree - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);

  auto eval = [&c](double t, double& dv) {
    double v = 0.0;
    dv = 0.0;
    for (auto j = c.size(); j-- > 0;) {
      dv = dv * t + v;
      v = v * t + c[j];
    }
    return v;
  };

  std::vector<double> roots;
  for (Eigen::Index i = 0; i < degree; ++i) {
    const std::complex<double> r = es.eigenvalues()[i];
    if (std::abs(r.imag()) > 1e-7 * std::max(1.0, std::abs(r))) continue;
    double t = r.real();
    for (int it = 0; it < 5; ++it) {
      double dv = 0.0;
      const double v = eval(t, dv);
      if (dv == 0.0) break;
      const double step = v / dv;
      t -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(t))) break;
    }
    roots.push_back(t);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double implicit_eval(const ImplicitNorm& b, std::span<const double> x) {
  if (x.size() + 1 != b.G.num_vars()) {
    throw std::invalid_argument("implicit norm expects " + std::to_string(b.G.num_vars() - 1) +
                                " coordinates");
  }
  if (max_abs(x) == 0.0) return 0.0;
  // Solve in tau = t / s so the companion matrix is well scaled for small or large x.
  const double s = max_abs(x);
  std::vector<double> coeffs;
  coeffs.reserve(b.t_coefficients.size());
  double sj = 1.0;
  for (const auto& a : b.t_coefficients) {
    coeffs.push_back(evaluate(a, x).real() * sj);
    sj *= s;
  }
  const auto roots = real_roots(coeffs);
  for (double r : roots) {
    if (r > 1e-14) return r * s;
  }
  throw BranchError("implicit norm branch has no positive real root at the given point");
}

}  // namespace

NormSpec NormSpec::euclidean() {
  NormSpec s;
  s.v_ = EuclideanNorm{};
  return s;
}

NormSpec NormSpec::lp(int m, int l) {
  if (l < 0 || m <= l) {
    throw ValidationError("l_p norm needs integers m > l >= 0 (got m=" + std::to_string(m) +
                          ", l=" + std::to_string(l) + ")");
  }
  NormSpec s;
  s.v_ = LpNorm{m, l};
  return s;
}

NormSpec NormSpec::implicit(Polynomial G) {
  const std::size_t nv = G.num_vars();
  if (nv < 2) throw ValidationError("implicit norm polynomial needs variables z1..zn and t");
  const std::size_t t = nv - 1;
  const std::size_t degree_t = G.degree_in(t);
  if (degree_t == 0) throw ValidationError("implicit norm polynomial G does not depend on t");

  ImplicitNorm b;
  b.t_coefficients.assign(degree_t + 1, Polynomial(nv - 1));
  for (const auto& [e, c] : G.terms()) {
    Exponent z(e.begin(), e.end() - 1);
    b.t_coefficients[e[t]].add_term(z, c);
  }
  for (std::size_t j = 0; j < t; ++j) b.z_gradient.push_back(differentiate(G, j));
  b.t_derivative = differentiate(G, t);
  b.G = std::move(G);

  NormSpec s;
  s.v_ = std::move(b);
  return s;
}

NormSpec::Kind NormSpec::kind() const noexcept {
  switch (v_.index()) {
    case 0:
      return Kind::Euclidean;
    case 1:
      return Kind::Lp;
    default:
      return Kind::Implicit;
  }
}

double NormSpec::p() const {
  const auto lp = lp_params();
  return 2.0 * lp.m / (2.0 * lp.l + 1.0);
}

LpNorm NormSpec::lp_params() const {
  if (kind() == Kind::Euclidean) return LpNorm{1, 0};
  if (kind() == Kind::Lp) return std::get<LpNorm>(v_);
  throw std::logic_error("implicit norms have no l_p exponent");
}

const ImplicitNorm& NormSpec::implicit_branch() const {
  if (kind() != Kind::Implicit) throw std::logic_error("not an implicit norm");
  return std::get<ImplicitNorm>(v_);
}

std::size_t NormSpec::implicit_dimension() const {
  return kind() == Kind::Implicit ? implicit_branch().G.num_vars() - 1 : 0;
}

std::string NormSpec::describe() const {
  switch (kind()) {
    case Kind::Euclidean:
      return "euclidean";
    case Kind::Lp: {
      const auto lp = lp_params();
      return "lp(m=" + std::to_string(lp.m) + ",l=" + std::to_string(lp.l) + ")";
    }
    case Kind::Implicit:
      return "implicit";
  }
  return "?";
}

double odd_root_power(double x, int m, int l) {
  const int k = 2 * l + 1;
  double root = 0.0;
  if (k == 1) {
    root = x;
  } else if (k == 3) {
    root = std::cbrt(x);
  } else {
    root = std::copysign(std::pow(std::abs(x), 1.0 / k), x);
  }
  double r = 1.0;
  for (int i = 0; i < 2 * m; ++i) r *= root;
  return r;
}

double norm_eval(const NormSpec& spec, std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("norm_eval needs a finite vector");
  }
  switch (spec.kind()) {
    case NormSpec::Kind::Euclidean:
      return power_mean_norm(x, 2.0);
    case NormSpec::Kind::Lp: {
      const auto [m, l] = spec.lp_params();
      const double s = max_abs(x);
      if (s == 0.0) return 0.0;
      double acc = 0.0;
      for (double v : x) acc += odd_root_power(v / s, m, l);
      return s * std::pow(acc, 1.0 / spec.p());
    }
    case NormSpec::Kind::Implicit:
      return implicit_eval(spec.implicit_branch(), x);
  }
  return 0.0;
}

std::vector<double> norm_power_gradient(const NormSpec& spec, std::span<const double> x) {
  if (spec.kind() == NormSpec::Kind::Implicit) {
    throw std::invalid_argument("norm_power_gradient is defined for l_p norms only");
  }
  if (max_abs(x) <= 1e-12) throw std::domain_error("norm is not differentiable at 0");
  const double p = spec.p();
  const auto [m, l] = spec.lp_params();
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (l == 0) {
      // Polynomial map 2m x^(2m-1).
      double v = 1.0;
      for (int i = 0; i < 2 * m - 1; ++i) v *= x[j];
      g[j] = 2.0 * m * v;
    } else {
      g[j] = p * std::copysign(std::pow(std::abs(x[j]), p - 1.0), x[j]);
    }
  }
  return g;
}

std::vector<double> norm_sq_gradient(const NormSpec& spec, std::span<const double> x) {
  std::vector<double> g(x.size(), 0.0);
  if (max_abs(x) == 0.0) return g;
  switch (spec.kind()) {
    case NormSpec::Kind::Euclidean:
      for (std::size_t j = 0; j < x.size(); ++j) g[j] = 2.0 * x[j];
      return g;
    case NormSpec::Kind::Lp: {
      // grad nu^2 = 2 nu^(2-p) sign(x) |x|^(p-1)
      const double p = spec.p();
      const double nu = norm_eval(spec, x);
      const double factor = 2.0 * std::pow(nu, 2.0 - p);
      for (std::size_t j = 0; j < x.size(); ++j) {
        g[j] = factor * std::copysign(std::pow(std::abs(x[j]), p - 1.0), x[j]);
      }
      return g;
    }
    case NormSpec::Kind::Implicit: {
      const auto& b = spec.implicit_branch();
      const double t = norm_eval(spec, x);
      std::vector<double> zt(x.begin(), x.end());
      zt.push_back(t);
      const double gt = evaluate(b.t_derivative, std::span<const double>(zt)).real();
      double size = std::abs(gt * t);
      for (std::size_t j = 0; j < x.size(); ++j) {
        g[j] = evaluate(b.z_gradient[j], std::span<const double>(zt)).real();
        size += std::abs(g[j] * x[j]);
      }
      if (std::abs(gt * t) <= 1e-12 * size) {
        throw BranchError("point lies on the discriminant dG/dt = 0");
      }
      for (std::size_t j = 0; j < x.size(); ++j) g[j] = 2.0 * t * (-g[j] / gt);
      return g;
    }
  }
  return g;
}

Rational dual_exponent(const NormSpec& spec) {
  const auto [m, l] = spec.lp_params();
  long num = 2L * m;
  long den = 2L * m - 2L * l - 1;
  const long g = std::gcd(num, den);
  return {num / g, den / g};
}

double dual_norm_eval(const NormSpec& spec, std::span<const double> x) {
  return power_mean_norm(x, dual_exponent(spec).value());
}

double sampled_dual_pairing(const NormSpec& spec, std::span<const double> x,
                            std::size_t samples, std::uint64_t seed) {
  const double q = dual_exponent(spec).value();
  Rng rng(seed);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    auto y = rng.normal_vector(x.size());
    const double ny = power_mean_norm(y, q);
    if (ny == 0.0) continue;
    double dot = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) dot += y[j] / ny * x[j];
    best = std::max(best, dot);
  }
  return best;
}

EquivalenceBounds analytic_equivalence_bounds(const NormSpec& spec, std::size_t n) {
  const double p = spec.p();
  const double f = std::pow(static_cast<double>(n), 1.0 / p - 0.5);
  return p >= 2.0 ? EquivalenceBounds{f, 1.0} : EquivalenceBounds{1.0, f};
}

EquivalenceBounds sampled_equivalence_bounds(const NormSpec& spec, std::size_t n,
                                             std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  EquivalenceBounds b{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t s = 0; s < samples; ++s) {
    const auto x = rng.normal_vector(n);
    const double r = norm_eval(spec, x) / euclid(x);
    b.lower = std::min(b.lower, r);
    b.upper = std::max(b.upper, r);
  }
  return b;
}

std::vector<double> gradient_map(const NormSpec& spec, GradientMap map,
                                 std::span<const double> x) {
  if (map == GradientMap::NormSquared) return norm_sq_gradient(spec, x);
  if (max_abs(x) == 0.0) return std::vector<double>(x.size(), 0.0);
  return norm_power_gradient(spec, x);
}

namespace {

Eigen::MatrixXd gradient_map_jacobian(const NormSpec& spec, GradientMap map,
                                      const std::vector<double>& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  if (map == GradientMap::NormPower) {
    const double p = spec.p();
    for (Eigen::Index j = 0; j < n; ++j) {
      J(j, j) = p * (p - 1.0) * std::pow(std::abs(x[static_cast<std::size_t>(j)]), p - 2.0);
    }
    return J;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    auto xp = x;
    auto xm = x;
    const double h = 1e-6 * std::max(1.0, std::abs(x[static_cast<std::size_t>(j)]));
    xp[static_cast<std::size_t>(j)] += h;
    xm[static_cast<std::size_t>(j)] -= h;
    const auto gp = gradient_map(spec, map, xp);
    const auto gm = gradient_map(spec, map, xm);
    for (Eigen::Index i = 0; i < n; ++i) {
      J(i, j) = (gp[static_cast<std::size_t>(i)] - gm[static_cast<std::size_t>(i)]) / (2 * h);
    }
  }
  return J;
}

double misfit(const std::vector<double>& g, std::span<const double> target) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += (g[i] - target[i]) * (g[i] - target[i]);
  return std::sqrt(s);
}

}  // namespace

GradientInverse invert_gradient(const NormSpec& spec, GradientMap map,
                                std::span<const double> target,
                                std::span<const double> start, double tol, int max_iter) {
  GradientInverse out;
  out.x.assign(start.begin(), start.end());
  const double scale = std::max(1.0, euclid(target));
  double r = misfit(gradient_map(spec, map, out.x), target);
  for (; out.iterations < max_iter; ++out.iterations) {
    if (r <= tol * scale) break;
    const auto g = gradient_map(spec, map, out.x);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
      rhs[static_cast<Eigen::Index>(i)] = g[i] - target[i];
    }
    const Eigen::VectorXd step =
        gradient_map_jacobian(spec, map, out.x).completeOrthogonalDecomposition().solve(rhs);
    if (!step.allFinite()) break;

    double damping = 1.0;
    bool improved = false;
    for (int b = 0; b < 30; ++b, damping *= 0.5) {
      auto trial = out.x;
      for (std::size_t i = 0; i < trial.size(); ++i) {
        trial[i] -= damping * step[static_cast<Eigen::Index>(i)];
      }
      const double rt = misfit(gradient_map(spec, map, trial), target);
      if (rt < r) {
        out.x = std::move(trial);
        r = rt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  out.residual = r / scale;
  out.converged = r <= tol * scale;
  return out;
}

InjectivityReport grad_sq_injectivity_probe(const NormSpec& spec, std::size_t n,
                                            std::size_t samples, std::uint64_t seed,
                                            GradientMap map) {
  InjectivityReport rep;
  Rng rng(seed);
  rep.min_separation_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const auto x = rng.normal_vector(n);
    auto xp = x;
    // Half the pairs are close neighbours, where a collision would show first.
    const double spread = (s % 2 == 0) ? 1.0 : 1e-3;
    for (auto& v : xp) v += spread * rng.normal();
    const auto gx = gradient_map(spec, map, x);
    const auto gxp = gradient_map(spec, map, xp);
    double dx = 0.0;
    double dg = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      dx += (x[j] - xp[j]) * (x[j] - xp[j]);
      dg += (gx[j] - gxp[j]) * (gx[j] - gxp[j]);
    }
    dx = std::sqrt(dx);
    dg = std::sqrt(dg);
    if (dx == 0.0) continue;
    ++rep.pairs;
    rep.min_separation_ratio = std::min(rep.min_separation_ratio, dg / dx);
    rep.max_collision_proximity = std::max(
        rep.max_collision_proximity,
        dg == 0.0 ? std::numeric_limits<double>::infinity() : dx / dg);
  }

  const double start_scale = map == GradientMap::NormPower ? spec.p() : 2.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto w = rng.normal_vector(n);
    std::vector<double> start(w);
    for (auto& v : start) v /= start_scale;
    const auto inv = invert_gradient(spec, map, w, start);
    ++rep.inversions;
    rep.max_inversion_residual = std::max(rep.max_inversion_residual, inv.residual);
    if (inv.residual < 1e-8) ++rep.inversions_succeeded;
  }
  rep.inversion_success_rate =
      rep.inversions == 0 ? 0.0
                          : static_cast<double>(rep.inversions_succeeded) /
                                static_cast<double>(rep.inversions);
  return rep;
}

}  // namespace distdeg
