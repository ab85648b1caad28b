#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "distdeg/polynomial.hpp"

namespace distdeg::detail {

/// Flattened polynomial system for repeated evaluation with Jacobian.
class CompiledSystem {
 public:
  CompiledSystem() = default;
  explicit CompiledSystem(std::span<const Polynomial> equations);

  Eigen::Index num_equations() const { return static_cast<Eigen::Index>(eq_begin_.size()) - 1; }
  Eigen::Index num_vars() const { return num_vars_; }

  void evaluate(const Eigen::VectorXcd& z, Eigen::VectorXcd& f) const;
  void evaluate(const Eigen::VectorXcd& z, Eigen::VectorXcd& f, Eigen::MatrixXcd& jac) const;

 private:
  struct Factor {
    std::uint32_t var;
    std::uint32_t exp;
  };
  struct Term {
    Complex coef;
    std::uint32_t factor_begin;
    std::uint32_t factor_end;
  };

  void fill_powers(const Eigen::VectorXcd& z) const;

  Eigen::Index num_vars_ = 0;
  std::vector<std::uint32_t> eq_begin_{0};
  std::vector<Term> terms_;
  std::vector<Factor> factors_;
  std::vector<std::uint32_t> max_exp_;
  std::vector<std::uint32_t> pow_offset_;
  mutable std::vector<Complex> powers_;
};

/// Substitutes values for the trailing variables, keeping the first `keep`.
Polynomial specialize_trailing(const Polynomial& p, std::size_t keep,
                               std::span<const Complex> values);

/// Homogenizes to the given degree with a new leading variable w0.
Polynomial homogenize(const Polynomial& p, std::size_t degree);

}  // namespace distdeg::detail
