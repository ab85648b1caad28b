#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "distdeg/polynomial.hpp"

namespace distdeg {

struct EuclideanNorm {};

/// l_p norm with p = 2m / (2l + 1), m > l >= 0.
struct LpNorm {
  int m = 1;
  int l = 0;
};

/// Norm given implicitly as the smallest positive real root t of G(z, t) = 0.
/// G lives in variables (z_1, ..., z_n, t).
struct ImplicitNorm {
  Polynomial G;
  /// a_j(z) with G = sum_j a_j(z) t^j, each in variables z_1..z_n.
  std::vector<Polynomial> t_coefficients;
  /// dG/dz_j and dG/dt in the (z, t) context.
  std::vector<Polynomial> z_gradient;
  Polynomial t_derivative;
};

struct Rational {
  long num = 0;
  long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

class NormSpec {
 public:
  enum class Kind { Euclidean, Lp, Implicit };

  static NormSpec euclidean();
  /// Throws ValidationError unless m > l >= 0.
  static NormSpec lp(int m, int l);
  /// Throws ValidationError if G has no positive degree in t (the last variable).
  static NormSpec implicit(Polynomial G);

  Kind kind() const noexcept;
  /// Exponent p; 2 for Euclidean. Throws for implicit norms.
  double p() const;
  /// (m, l) of the rational exponent; Euclidean is (1, 0).
  LpNorm lp_params() const;
  const ImplicitNorm& implicit_branch() const;
  /// Number of z-variables for implicit norms; 0 (any dimension) otherwise.
  std::size_t implicit_dimension() const;
  std::string describe() const;

 private:
  std::variant<EuclideanNorm, LpNorm, ImplicitNorm> v_;
};

/// Real (2l+1)-th root of x raised to the power 2m, i.e. |x|^(2m/(2l+1)),
/// computed through the negative real root for negative x.
double odd_root_power(double x, int m, int l);

/// nu(x). For implicit norms throws BranchError when G(x, .) has no positive root.
double norm_eval(const NormSpec& spec, std::span<const double> x);

/// Gradient of ||x||_p^p: p * sign(x_j) |x_j|^(p-1). Euclidean and l_p only;
/// rejects x = 0.
std::vector<double> norm_power_gradient(const NormSpec& spec, std::span<const double> x);

/// Gradient of nu^2 = 2 nu grad(nu), for every norm kind. For implicit norms
/// grad(nu) = -F(x, t) / dG/dt(x, t) at t = nu(x).
std::vector<double> norm_sq_gradient(const NormSpec& spec, std::span<const double> x);

/// q = p / (p - 1) as a reduced fraction.
Rational dual_exponent(const NormSpec& spec);

/// ||x||_q for the dual exponent q.
double dual_norm_eval(const NormSpec& spec, std::span<const double> x);

/// max over `samples` random y with ||y||_q = 1 of y^T x. Approaches ||x||_p
/// from below.
double sampled_dual_pairing(const NormSpec& spec, std::span<const double> x,
                            std::size_t samples, std::uint64_t seed);

/// Bounds c, C with c ||x||_2 <= nu(x) <= C ||x||_2 on R^n (l_p only).
struct EquivalenceBounds {
  double lower = 0.0;
  double upper = 0.0;
};
EquivalenceBounds analytic_equivalence_bounds(const NormSpec& spec, std::size_t n);
/// Observed range of nu(x) / ||x||_2 over Gaussian samples.
EquivalenceBounds sampled_equivalence_bounds(const NormSpec& spec, std::size_t n,
                                             std::size_t samples, std::uint64_t seed);

enum class GradientMap {
  NormSquared,  ///< x -> grad nu(x)^2
  NormPower,    ///< x -> grad ||x||_p^p (l_p and Euclidean only)
};

std::vector<double> gradient_map(const NormSpec& spec, GradientMap map,
                                 std::span<const double> x);

/// Damped Newton inversion of a gradient map. Returns the preimage and its
/// residual; `converged` is false when the iteration stalls.
struct GradientInverse {
  std::vector<double> x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};
GradientInverse invert_gradient(const NormSpec& spec, GradientMap map,
                                std::span<const double> target,
                                std::span<const double> start, double tol = 1e-12,
                                int max_iter = 100);

struct InjectivityReport {
  std::size_t pairs = 0;
  /// Smallest observed ||g(x) - g(x')|| / ||x - x'|| over sampled pairs.
  double min_separation_ratio = 0.0;
  /// Largest observed ||x - x'|| / ||g(x) - g(x')|| (how close a collision came).
  double max_collision_proximity = 0.0;
  std::size_t inversions = 0;
  std::size_t inversions_succeeded = 0;
  double inversion_success_rate = 0.0;
  double max_inversion_residual = 0.0;
};

/// Samples pairs for distinct images and random targets for Newton
/// inversion (residual < 1e-8 counts as success).
InjectivityReport grad_sq_injectivity_probe(const NormSpec& spec, std::size_t n,
                                            std::size_t samples, std::uint64_t seed,
                                            GradientMap map = GradientMap::NormSquared);

}  // namespace distdeg
