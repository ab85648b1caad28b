#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "distdeg/norms.hpp"
#include "distdeg/polynomial.hpp"
#include "distdeg/variety.hpp"

namespace distdeg {

enum class Formulation {
  Auto,
  L2Minor,     ///< generators + (codim+1)-minors of [D(C)(y) | x - y]
  LpLagrange,  ///< generators + (x-y)^(2m-2l-1) = (D(C)(y) lambda)^(2l+1)
  LpMinor,     ///< generators + (codim+1)-minors of [D(C)(y) | (x-y)^(2m-1)]
  Implicit,    ///< generators + G(x-y,t) + dG/dz(x-y,t) = D(C)(y) lambda
};

std::string_view to_string(Formulation f);
/// Accepts "auto", "l2-minor", "lp-lagrange", "lp-minor", "implicit".
Formulation formulation_from_string(std::string_view s);

/// Parametric critical-point system in unknowns (y, [lambda], [t]) with
/// parameters x. Every polynomial lives in the joint context
/// (unknowns..., x_1..x_n).
struct CriticalSystem {
  VarietySpec variety;
  Formulation formulation = Formulation::L2Minor;
  int m = 1;
  int l = 0;

  std::vector<Polynomial> equations{};
  std::vector<std::string> unknowns{};
  std::vector<std::string> parameters{};
  std::vector<std::size_t> y_slots{};
  /// Leading block of `equations` holding (possibly combined) generators.
  std::size_t generator_block = 0;

  /// Full unsquared equation list; empty unless square_up combined equations.
  std::vector<Polynomial> original_equations{};
  /// Full minor list retained when the minor block was squared up.
  std::vector<Polynomial> original_minors{};

  /// dG/dt(x - y, t) for implicit systems (discriminant test).
  std::optional<Polynomial> discriminant{};

  /// Product of equation total degrees; 0 while the system is not square.
  std::uint64_t bezout = 0;

  std::size_t num_unknowns() const noexcept { return unknowns.size(); }
  std::size_t num_params() const noexcept { return parameters.size(); }
  std::size_t num_vars() const noexcept { return unknowns.size() + parameters.size(); }
  bool is_square() const noexcept { return equations.size() == unknowns.size(); }
  bool squared_up() const noexcept { return !original_equations.empty(); }
  /// Index of the auxiliary t unknown for implicit systems.
  std::optional<std::size_t> t_slot() const;

  /// Unknown names followed by parameter names.
  std::vector<std::string> variable_names() const;
  /// Degree of each equation in the unknowns only.
  std::vector<std::size_t> unknown_degrees() const;
  /// Equations that every solution must satisfy (original list when squared up).
  const std::vector<Polynomial>& defining_equations() const;
};

CriticalSystem build_l2_minor_system(const VarietySpec& v);
/// Requires a complete-intersection presentation (#generators == codim).
CriticalSystem build_lp_lagrange_system(const VarietySpec& v, int m, int l);
CriticalSystem build_lp_minor_system(const VarietySpec& v, int m);
/// G in variables (z_1..z_n, t). Requires #generators == codim and t-dependence.
CriticalSystem build_implicit_norm_system(const VarietySpec& v, const Polynomial& G);

/// Replaces the over-complete blocks with random complex combinations so the
/// system becomes square. Identity on square input; throws ValidationError on
/// underdetermined input.
CriticalSystem square_up(const CriticalSystem& s, std::uint64_t seed);

/// Throws std::logic_error on a non-square system.
std::uint64_t bezout_bound(const CriticalSystem& s);

/// Resolves `Auto`, checks compatibility with the norm and presentation,
/// builds and squares up. Throws ValidationError on incompatibility.
Formulation resolve_formulation(const VarietySpec& v, const NormSpec& norm, Formulation f);
CriticalSystem build_system(const VarietySpec& v, const NormSpec& norm, Formulation f,
                            std::uint64_t seed);

/// ||P_T grad_y g_x(y)|| / ||grad_y g_x(y)|| with g_x(y) = nu(x - y)^2 and P_T
/// the orthogonal projector onto the tangent space (orthogonal complement of
/// the Jacobian column space) at y. 0 when x = y.
double critical_condition_residual(const VarietySpec& v, const NormSpec& norm,
                                   std::span<const double> x, std::span<const double> y);

}  // namespace distdeg
