#include "distdeg/critical_system.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "distdeg/errors.hpp"
#include "distdeg/random.hpp"

namespace distdeg {

std::string_view to_string(Formulation f) {
  switch (f) {
    case Formulation::Auto:
      return "auto";
    case Formulation::L2Minor:
      return "l2-minor";
    case Formulation::LpLagrange:
      return "lp-lagrange";
    case Formulation::LpMinor:
      return "lp-minor";
    case Formulation::Implicit:
      return "implicit";
  }
  return "?";
}

Formulation formulation_from_string(std::string_view s) {
  for (auto f : {Formulation::Auto, Formulation::L2Minor, Formulation::LpLagrange,
                 Formulation::LpMinor, Formulation::Implicit}) {
    if (to_string(f) == s) return f;
  }
  throw ValidationError("unknown formulation '" + std::string(s) + "'");
}

std::optional<std::size_t> CriticalSystem::t_slot() const {
  if (formulation != Formulation::Implicit) return std::nullopt;
  return unknowns.size() - 1;
}

std::vector<std::string> CriticalSystem::variable_names() const {
  std::vector<std::string> names = unknowns;
  names.insert(names.end(), parameters.begin(), parameters.end());
  return names;
}

std::vector<std::size_t> CriticalSystem::unknown_degrees() const {
  std::vector<std::size_t> slots(unknowns.size());
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
  std::vector<std::size_t> d;
  d.reserve(equations.size());
  for (const auto& e : equations) d.push_back(e.degree_in(slots));
  return d;
}

const std::vector<Polynomial>& CriticalSystem::defining_equations() const {
  return original_equations.empty() ? equations : original_equations;
}

namespace {

// Variable context shared by all builders: unknowns first, then x_1..x_n.
struct Context {
  std::size_t n;
  std::size_t unknowns;
  std::size_t total() const { return unknowns + n; }
  Polynomial y(std::size_t j) const { return Polynomial::variable(total(), j); }
  Polynomial x(std::size_t j) const { return Polynomial::variable(total(), unknowns + j); }
  Polynomial unknown(std::size_t k) const { return Polynomial::variable(total(), k); }
  Polynomial constant(Complex c) const { return Polynomial::constant(total(), c); }

  // Re-expresses a polynomial in y_1..y_n inside the joint context.
  Polynomial embed_y(const Polynomial& p) const {
    std::vector<Polynomial> images;
    for (std::size_t j = 0; j < n; ++j) images.push_back(y(j));
    return compose(p, images);
  }
  Polynomial x_minus_y(std::size_t j) const { return x(j) - y(j); }
};

CriticalSystem make_base(const VarietySpec& v, Formulation f, std::size_t unknowns) {
  CriticalSystem s{.variety = v, .formulation = f};
  for (std::size_t j = 0; j < v.n(); ++j) {
    s.unknowns.push_back("y" + std::to_string(j + 1));
    s.parameters.push_back("x" + std::to_string(j + 1));
    s.y_slots.push_back(j);
  }
  s.unknowns.reserve(unknowns);
  const Context ctx{v.n(), unknowns};
  for (const auto& p : v.generators()) s.equations.push_back(ctx.embed_y(p));
  s.generator_block = v.generators().size();
  return s;
}

std::vector<Polynomial> embedded_jacobian_column_products(const VarietySpec& v,
                                                          const Context& ctx,
                                                          std::size_t lambda_offset) {
  // (D(C)(y) lambda)_j = sum_i dp_i/dy_j * lambda_i
  const PolyMatrix J = jacobian(v);
  std::vector<Polynomial> out;
  for (std::size_t j = 0; j < v.n(); ++j) {
    Polynomial acc = ctx.constant(0.0);
    for (std::size_t i = 0; i < v.generators().size(); ++i) {
      acc += ctx.embed_y(J.at(j, i)) * ctx.unknown(lambda_offset + i);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

std::uint64_t degree_product(const std::vector<Polynomial>& eqs) {
  std::uint64_t b = 1;
  for (const auto& e : eqs) b *= std::max<std::size_t>(1, e.total_degree());
  return b;
}

void finalize(CriticalSystem& s) {
  const std::size_t u = s.unknowns.size();
  for (std::size_t j = 0; j < s.parameters.size(); ++j) {
    const bool used = std::any_of(s.equations.begin(), s.equations.end(),
                                  [&](const Polynomial& p) { return p.depends_on(u + j); });
    if (!used) {
      throw std::logic_error("parameter " + s.parameters[j] + " does not enter the system");
    }
  }
  s.bezout = s.is_square() ? degree_product(s.equations) : 0;
}

CriticalSystem build_minor_system(const VarietySpec& v, Formulation f, int odd_power) {
  CriticalSystem s = make_base(v, f, v.n());
  const Context ctx{v.n(), v.n()};
  const PolyMatrix J = jacobian(v);
  std::vector<Polynomial> entries;
  for (const auto& e : J.entries()) entries.push_back(ctx.embed_y(e));
  const PolyMatrix Je(J.rows(), J.cols(), std::move(entries));

  std::vector<Polynomial> column;
  for (std::size_t j = 0; j < v.n(); ++j) {
    column.push_back(pow(ctx.x_minus_y(j), static_cast<std::uint32_t>(odd_power)));
  }
  for (auto& minor : all_minors(Je.with_column(column), v.codim() + 1)) {
    if (!minor.is_zero()) s.equations.push_back(std::move(minor));
  }
  if (f == Formulation::LpMinor) s.m = (odd_power + 1) / 2;
  finalize(s);
  return s;
}

}  // namespace

CriticalSystem build_l2_minor_system(const VarietySpec& v) {
  return build_minor_system(v, Formulation::L2Minor, 1);
}

CriticalSystem build_lp_minor_system(const VarietySpec& v, int m) {
  if (m < 1) throw ValidationError("lp-minor needs m >= 1");
  return build_minor_system(v, Formulation::LpMinor, 2 * m - 1);
}

CriticalSystem build_lp_lagrange_system(const VarietySpec& v, int m, int l) {
  if (l < 0 || m <= l) throw ValidationError("lp-lagrange needs integers m > l >= 0");
  if (!v.is_complete_intersection()) {
    throw ValidationError("lp-lagrange needs #generators == codim (got " +
                          std::to_string(v.generators().size()) + " generators, codim " +
                          std::to_string(v.codim()) + "); use a minor formulation");
  }
  const std::size_t c = v.codim();
  const Context ctx{v.n(), v.n() + c};
  CriticalSystem s = make_base(v, Formulation::LpLagrange, ctx.unknowns);
  s.m = m;
  s.l = l;
  for (std::size_t i = 0; i < c; ++i) s.unknowns.push_back("lam" + std::to_string(i + 1));

  const auto normal = embedded_jacobian_column_products(v, ctx, v.n());
  const auto lhs_power = static_cast<std::uint32_t>(2 * m - 2 * l - 1);
  const auto rhs_power = static_cast<std::uint32_t>(2 * l + 1);
  for (std::size_t j = 0; j < v.n(); ++j) {
    s.equations.push_back(pow(ctx.x_minus_y(j), lhs_power) - pow(normal[j], rhs_power));
  }
  finalize(s);
  return s;
}

CriticalSystem build_implicit_norm_system(const VarietySpec& v, const Polynomial& G) {
  if (G.num_vars() != v.n() + 1) {
    throw ValidationError("implicit norm G must be a polynomial in z1..z" +
                          std::to_string(v.n()) + ",t");
  }
  if (!G.depends_on(v.n())) throw ValidationError("implicit norm G does not depend on t");
  if (!v.is_complete_intersection()) {
    throw ValidationError("implicit formulation needs #generators == codim (got " +
                          std::to_string(v.generators().size()) + " generators, codim " +
                          std::to_string(v.codim()) + ")");
  }
  const std::size_t c = v.codim();
  const Context ctx{v.n(), v.n() + c + 1};
  CriticalSystem s = make_base(v, Formulation::Implicit, ctx.unknowns);
  for (std::size_t i = 0; i < c; ++i) s.unknowns.push_back("lam" + std::to_string(i + 1));
  s.unknowns.push_back("t");
  const std::size_t t = v.n() + c;

  // (z, t) -> (x - y, t)
  std::vector<Polynomial> images;
  for (std::size_t j = 0; j < v.n(); ++j) images.push_back(ctx.x_minus_y(j));
  images.push_back(ctx.unknown(t));

  s.equations.push_back(compose(G, images));
  const auto normal = embedded_jacobian_column_products(v, ctx, v.n());
  for (std::size_t j = 0; j < v.n(); ++j) {
    s.equations.push_back(compose(differentiate(G, j), images) - normal[j]);
  }
  s.discriminant = compose(differentiate(G, v.n()), images);
  finalize(s);
  return s;
}

CriticalSystem square_up(const CriticalSystem& s, std::uint64_t seed) {
  const std::size_t u = s.num_unknowns();
  if (s.equations.size() < u) {
    throw ValidationError("system is underdetermined: " + std::to_string(s.equations.size()) +
                          " equations in " + std::to_string(u) + " unknowns");
  }
  if (s.is_square()) return s;

  const std::size_t gens = s.generator_block;
  const std::size_t codim = s.variety.codim();
  // The generator block only has to cut out C: codim random combinations.
  const std::size_t gen_target = std::min(gens, codim);
  const std::size_t rest = s.equations.size() - gens;
  if (gen_target > u || u - gen_target > rest) {
    throw ValidationError("cannot square up: not enough independent equations");
  }
  const std::size_t rest_target = u - gen_target;

  Rng rng(seed);
  auto combine = [&](std::size_t begin, std::size_t count, std::size_t target) {
    std::vector<Polynomial> out;
    for (std::size_t k = 0; k < target; ++k) {
      Polynomial acc(s.num_vars());
      for (std::size_t i = 0; i < count; ++i) acc += s.equations[begin + i] * rng.complex_normal();
      out.push_back(std::move(acc));
    }
    return out;
  };

  CriticalSystem r = s;
  r.original_equations = s.equations;
  r.original_minors.assign(s.equations.begin() + static_cast<std::ptrdiff_t>(gens),
                           s.equations.end());
  r.equations.clear();
  if (gen_target == gens) {
    r.equations.assign(s.equations.begin(), s.equations.begin() + static_cast<std::ptrdiff_t>(gens));
  } else {
    r.equations = combine(0, gens, gen_target);
  }
  r.generator_block = gen_target;
  if (rest_target == rest) {
    r.equations.insert(r.equations.end(), s.equations.begin() + static_cast<std::ptrdiff_t>(gens),
                       s.equations.end());
  } else {
    auto mixed = combine(gens, rest, rest_target);
    r.equations.insert(r.equations.end(), mixed.begin(), mixed.end());
  }
  r.bezout = degree_product(r.equations);
  return r;
}

std::uint64_t bezout_bound(const CriticalSystem& s) {
  if (!s.is_square()) {
    throw std::logic_error("Bezout bound requested for a non-square system (" +
                           std::to_string(s.equations.size()) + " equations, " +
                           std::to_string(s.num_unknowns()) + " unknowns)");
  }
  return degree_product(s.equations);
}

Formulation resolve_formulation(const VarietySpec& v, const NormSpec& norm, Formulation f) {
  const auto kind = norm.kind();
  if (f == Formulation::Auto) {
    if (kind == NormSpec::Kind::Implicit) return Formulation::Implicit;
    const auto lp = norm.lp_params();
    if (lp.l == 0) return lp.m == 1 ? Formulation::L2Minor : Formulation::LpMinor;
    f = Formulation::LpLagrange;
  }
  switch (f) {
    case Formulation::L2Minor:
      if (kind == NormSpec::Kind::Implicit || norm.lp_params().m != 1 || norm.lp_params().l != 0) {
        throw ValidationError("l2-minor formulation needs the Euclidean norm");
      }
      break;
    case Formulation::LpMinor:
      if (kind == NormSpec::Kind::Implicit || norm.lp_params().l != 0) {
        throw ValidationError("lp-minor formulation needs an even integer p (l = 0)");
      }
      break;
    case Formulation::LpLagrange:
      if (kind == NormSpec::Kind::Implicit) {
        throw ValidationError("lp-lagrange formulation needs an l_p or Euclidean norm");
      }
      if (!v.is_complete_intersection()) {
        throw ValidationError("lp-lagrange needs #generators == codim (got " +
                              std::to_string(v.generators().size()) + " generators, codim " +
                              std::to_string(v.codim()) + ")");
      }
      break;
    case Formulation::Implicit:
      if (kind != NormSpec::Kind::Implicit) {
        throw ValidationError("implicit formulation needs an implicit norm");
      }
      if (!v.is_complete_intersection()) {
        throw ValidationError("implicit formulation needs #generators == codim");
      }
      if (norm.implicit_dimension() != v.n()) {
        throw ValidationError("implicit norm dimension does not match the variety");
      }
      break;
    case Formulation::Auto:
      break;
  }
  return f;
}

CriticalSystem build_system(const VarietySpec& v, const NormSpec& norm, Formulation f,
                            std::uint64_t seed) {
  f = resolve_formulation(v, norm, f);
  CriticalSystem s = [&] {
    switch (f) {
      case Formulation::L2Minor:
        return build_l2_minor_system(v);
      case Formulation::LpMinor:
        return build_lp_minor_system(v, norm.lp_params().m);
      case Formulation::LpLagrange:
        return build_lp_lagrange_system(v, norm.lp_params().m, norm.lp_params().l);
      case Formulation::Implicit:
        return build_implicit_norm_system(v, norm.implicit_branch().G);
      case Formulation::Auto:
        break;
    }
    throw std::logic_error("unresolved formulation");
  }();
  return square_up(s, derive_seed(seed, 0x5C0A));
}

double critical_condition_residual(const VarietySpec& v, const NormSpec& norm,
                                   std::span<const double> x, std::span<const double> y) {
  const auto n = v.n();
  std::vector<double> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = x[j] - y[j];
  const auto gz = norm_sq_gradient(norm, z);
  Eigen::VectorXd grad(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) grad[static_cast<Eigen::Index>(j)] = -gz[j];
  const double gnorm = grad.norm();
  if (gnorm == 0.0) return 0.0;

  std::vector<Complex> yc(y.begin(), y.end());
  const Eigen::MatrixXd J = normalized_jacobian(v, yc).real();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU);
  const Eigen::MatrixXd U = svd.matrixU().leftCols(static_cast<Eigen::Index>(v.codim()));
  const Eigen::VectorXd tangential = grad - U * (U.transpose() * grad);
  return tangential.norm() / gnorm;
}

}  // namespace distdeg
