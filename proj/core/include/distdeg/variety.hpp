#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "distdeg/polynomial.hpp"

namespace distdeg {

/// Real algebraic variety C given by generators p_1..p_m in y_1..y_n with a
/// declared codimension. The declaration is trusted here and cross-checked
/// at solved points; irreducibility is never verified.
class VarietySpec {
 public:
  /// Throws ValidationError when the description is inconsistent.
  VarietySpec(std::size_t n, std::vector<Polynomial> generators, std::size_t codim,
              std::string name = "C");

  /// Parses generator texts in the variables y1..yn.
  static VarietySpec from_text(std::size_t n, std::span<const std::string> generators,
                               std::size_t codim, std::string name = "C");

  std::size_t n() const noexcept { return n_; }
  std::size_t codim() const noexcept { return codim_; }
  std::size_t dimension() const noexcept { return n_ - codim_; }
  const std::vector<Polynomial>& generators() const noexcept { return generators_; }
  const std::string& name() const noexcept { return name_; }
  bool is_complete_intersection() const noexcept { return generators_.size() == codim_; }

  /// y1..yn
  std::vector<std::string> variable_names() const;

 private:
  std::size_t n_;
  std::vector<Polynomial> generators_;
  std::size_t codim_;
  std::string name_;
};

/// n x m matrix with entry (j, i) = dp_i / dy_j.
PolyMatrix jacobian(const VarietySpec& v);

/// max_i |p_i(y)| / max(1, ||y||_inf^deg p_i).
double membership_residual(const VarietySpec& v, std::span<const Complex> y);
double membership_residual(const VarietySpec& v, std::span<const double> y);

/// Jacobian evaluated at y with column i divided by
/// ||p_i||_1 * max(1, ||y||_inf)^(deg p_i - 1), which makes rank decisions
/// independent of generator scaling.
Eigen::MatrixXcd normalized_jacobian(const VarietySpec& v, std::span<const Complex> y);

/// Number of singular values of the normalized Jacobian above
/// tol_rank * max(1, sigma_max).
std::size_t numerical_rank(const VarietySpec& v, std::span<const Complex> y,
                           double tol_rank = 1e-8);

/// True when y is (numerically) in Sing C: rank D(C)(y) < codim.
/// Throws NotOnVarietyError when membership_residual(v, y) > membership_tol.
bool singular_test(const VarietySpec& v, std::span<const Complex> y, double tol_rank = 1e-8,
                   double membership_tol = 1e-8);

/// Real points on C obtained by Gauss-Newton projection of Gaussian starts.
std::vector<std::vector<double>> sample_real_points(const VarietySpec& v, std::size_t count,
                                                    std::uint64_t seed, double scale = 2.0);

}  // namespace distdeg
