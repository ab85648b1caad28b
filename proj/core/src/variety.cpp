#include "distdeg/variety.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "distdeg/errors.hpp"
#include "distdeg/random.hpp"

namespace distdeg {

VarietySpec::VarietySpec(std::size_t n, std::vector<Polynomial> generators, std::size_t codim,
                         std::string name)
    : n_(n), generators_(std::move(generators)), codim_(codim), name_(std::move(name)) {
  if (n_ < 2) throw ValidationError("ambient dimension must be at least 2");
  if (codim_ < 1 || codim_ > n_ - 1) {
    throw ValidationError("codim must satisfy 1 <= codim <= n-1 (got codim=" +
                          std::to_string(codim_) + ", n=" + std::to_string(n_) + ")");
  }
  if (generators_.size() < codim_) {
    throw ValidationError("codim " + std::to_string(codim_) + " needs at least as many generators (got " +
                          std::to_string(generators_.size()) + ")");
  }
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (generators_[i].num_vars() != n_) {
      throw ValidationError("generator " + std::to_string(i + 1) + " is not in y1..yn");
    }
    if (generators_[i].is_constant()) {
      throw ValidationError("generator " + std::to_string(i + 1) + " is constant");
    }
  }
}

VarietySpec VarietySpec::from_text(std::size_t n, std::span<const std::string> generators,
                                   std::size_t codim, std::string name) {
  std::vector<std::string> vars;
  for (std::size_t j = 0; j < n; ++j) vars.push_back("y" + std::to_string(j + 1));
  std::vector<Polynomial> gens;
  for (const auto& g : generators) gens.push_back(parse_polynomial(g, vars));
  return VarietySpec(n, std::move(gens), codim, std::move(name));
}

std::vector<std::string> VarietySpec::variable_names() const {
  std::vector<std::string> vars;
  for (std::size_t j = 0; j < n_; ++j) vars.push_back("y" + std::to_string(j + 1));
  return vars;
}

PolyMatrix jacobian(const VarietySpec& v) {
  PolyMatrix J(v.n(), v.generators().size(), v.n());
  for (std::size_t i = 0; i < v.generators().size(); ++i) {
    for (std::size_t j = 0; j < v.n(); ++j) J.set(j, i, differentiate(v.generators()[i], j));
  }
  return J;
}

namespace {

template <typename T>
double membership_impl(const VarietySpec& v, std::span<const T> y) {
  if (y.size() != v.n()) throw std::invalid_argument("point dimension does not match variety");
  double inf = 0.0;
  for (const auto& c : y) inf = std::max(inf, std::abs(c));
  double r = 0.0;
  for (const auto& p : v.generators()) {
    const double scale = std::max(1.0, std::pow(inf, static_cast<double>(p.total_degree())));
    r = std::max(r, std::abs(evaluate(p, y)) / scale);
  }
  return r;
}

}  // namespace

double membership_residual(const VarietySpec& v, std::span<const Complex> y) {
  return membership_impl(v, y);
}

double membership_residual(const VarietySpec& v, std::span<const double> y) {
  return membership_impl(v, y);
}

Eigen::MatrixXcd normalized_jacobian(const VarietySpec& v, std::span<const Complex> y) {
  if (y.size() != v.n()) throw std::invalid_argument("point dimension does not match variety");
  double inf = 0.0;
  for (const auto& c : y) inf = std::max(inf, std::abs(c));
  const auto m = v.generators().size();
  Eigen::MatrixXcd J(static_cast<Eigen::Index>(v.n()), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = v.generators()[i];
    const double deg = static_cast<double>(p.total_degree());
    const double scale = p.coefficient_norm() * std::max(1.0, std::pow(inf, deg - 1.0));
    for (std::size_t j = 0; j < v.n(); ++j) {
      J(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          evaluate(differentiate(p, j), y) / scale;
    }
  }
  return J;
}

std::size_t numerical_rank(const VarietySpec& v, std::span<const Complex> y, double tol_rank) {
  const Eigen::MatrixXcd J = normalized_jacobian(v, y);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0;
  const double threshold = tol_rank * std::max(1.0, s[0]);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > threshold) ++rank;
  }
  return rank;
}

bool singular_test(const VarietySpec& v, std::span<const Complex> y, double tol_rank,
                   double membership_tol) {
  const double r = membership_residual(v, y);
  if (r > membership_tol) {
    throw NotOnVarietyError("point is not on " + v.name() + " (membership residual " +
                            std::to_string(r) + ")");
  }
  return numerical_rank(v, y, tol_rank) < v.codim();
}

std::vector<std::vector<double>> sample_real_points(const VarietySpec& v, std::size_t count,
                                                    std::uint64_t seed, double scale) {
  const auto n = static_cast<Eigen::Index>(v.n());
  const auto m = static_cast<Eigen::Index>(v.generators().size());
  const PolyMatrix J = jacobian(v);
  Rng rng(seed);
  std::vector<std::vector<double>> points;
  std::size_t attempts = 0;
  while (points.size() < count && attempts < 50 * count + 100) {
    ++attempts;
    std::vector<double> y = rng.normal_vector(v.n(), scale);
    for (int it = 0; it < 100; ++it) {
      Eigen::VectorXd f(m);
      Eigen::MatrixXd Jt(m, n);
      for (Eigen::Index i = 0; i < m; ++i) {
        f[i] = evaluate(v.generators()[static_cast<std::size_t>(i)], y).real();
        for (Eigen::Index j = 0; j < n; ++j) {
          Jt(i, j) = evaluate(J.at(static_cast<std::size_t>(j), static_cast<std::size_t>(i)), y)
                         .real();
        }
      }
      const Eigen::VectorXd step = Jt.completeOrthogonalDecomposition().solve(f);
      if (!step.allFinite()) break;
      for (Eigen::Index j = 0; j < n; ++j) y[static_cast<std::size_t>(j)] -= step[j];
      if (step.norm() < 1e-15 * (1.0 + Eigen::Map<Eigen::VectorXd>(y.data(), n).norm())) break;
    }
    bool finite = std::all_of(y.begin(), y.end(), [](double c) { return std::isfinite(c); });
    if (finite && membership_residual(v, std::span<const double>(y)) < 1e-12) {
      points.push_back(std::move(y));
    }
  }
  return points;
}

}  // namespace distdeg
