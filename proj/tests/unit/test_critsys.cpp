#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "distdeg/critical_system.hpp"
#include "distdeg/errors.hpp"
#include "distdeg/random.hpp"
#include "distdeg/solver.hpp"

using namespace distdeg;

namespace {

VarietySpec make(std::size_t n, std::vector<std::string> gens, std::size_t codim) {
  return VarietySpec::from_text(n, gens, codim);
}

const VarietySpec kCircle = make(2, {"y1^2 + y2^2 - 1"}, 1);
const VarietySpec kLine = make(2, {"y1 - y2"}, 1);
const VarietySpec kCusp = make(2, {"y2^2 - y1^3"}, 1);

void check_equations(const CriticalSystem& s, const std::vector<std::string>& expected) {
  const auto vars = s.variable_names();
  REQUIRE(s.equations.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto want = parse_polynomial(expected[i], vars);
    INFO("equation " << i << ": " << to_string(s.equations[i], vars));
    CHECK(max_coefficient_distance(s.equations[i], want) < 1e-14);
  }
}

// Sorted real parts of the smooth y's, one row per solution.
std::vector<std::vector<double>> y_set(const SolveReport& r) {
  std::vector<std::vector<double>> out;
  for (const auto& s : r.solutions) {
    if (s.is_singular_on_C) continue;
    std::vector<double> row;
    for (const auto& c : s.y) {
      row.push_back(c.real());
      row.push_back(c.imag());
    }
    out.push_back(row);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool same_sets(const SolveReport& a, const SolveReport& b, double tol) {
  auto ya = y_set(a);
  const auto yb = y_set(b);
  if (ya.size() != yb.size()) return false;
  for (const auto& row : yb) {
    auto it = std::find_if(ya.begin(), ya.end(), [&](const auto& r) {
      double d = 0.0;
      for (std::size_t k = 0; k < r.size(); ++k) d = std::max(d, std::abs(r[k] - row[k]));
      return d < tol;
    });
    if (it == ya.end()) return false;
    ya.erase(it);
  }
  return true;
}

}  // namespace

TEST_CASE("l2 minor systems") {
  const auto c = build_l2_minor_system(kCircle);
  CHECK(c.unknowns == std::vector<std::string>{"y1", "y2"});
  CHECK(c.parameters == std::vector<std::string>{"x1", "x2"});
  check_equations(c, {"y1^2 + y2^2 - 1", "2*y1*(x2 - y2) - 2*y2*(x1 - y1)"});
  check_equations(build_l2_minor_system(kLine), {"y1 - y2", "(x2 - y2) + (x1 - y1)"});
  check_equations(build_l2_minor_system(kCusp),
                  {"y2^2 - y1^3", "-3*y1^2*(x2 - y2) - 2*y2*(x1 - y1)"});
}

TEST_CASE("lp Lagrange systems") {
  const auto line = build_lp_lagrange_system(kLine, 2, 0);
  CHECK(line.unknowns == std::vector<std::string>{"y1", "y2", "lam1"});
  check_equations(line, {"y1 - y2", "(x1 - y1)^3 - lam1", "(x2 - y2)^3 + lam1"});
  check_equations(build_lp_lagrange_system(kCircle, 1, 0),
                  {"y1^2 + y2^2 - 1", "(x1 - y1) - 2*lam1*y1", "(x2 - y2) - 2*lam1*y2"});
  check_equations(build_lp_lagrange_system(kCircle, 2, 1),
                  {"y1^2 + y2^2 - 1", "(x1 - y1) - (2*lam1*y1)^3", "(x2 - y2) - (2*lam1*y2)^3"});
  CHECK(line.y_slots == std::vector<std::size_t>{0, 1});
}

TEST_CASE("lp Lagrange needs a complete intersection") {
  const auto three = make(3, {"y2 - y1^2", "y3 - y1*y2", "y1*y3 - y2^2"}, 1);
  CHECK_THROWS_AS(build_lp_lagrange_system(three, 2, 0), ValidationError);
}

TEST_CASE("lp minor systems") {
  check_equations(build_lp_minor_system(kLine, 2), {"y1 - y2", "(x1 - y1)^3 + (x2 - y2)^3"});
  check_equations(build_lp_minor_system(kCircle, 2),
                  {"y1^2 + y2^2 - 1", "2*y1*(x2 - y2)^3 - 2*y2*(x1 - y1)^3"});
  for (const auto& v : {kCircle, kLine, kCusp}) {
    const auto a = build_lp_minor_system(v, 1);
    const auto b = build_l2_minor_system(v);
    REQUIRE(a.equations.size() == b.equations.size());
    for (std::size_t i = 0; i < a.equations.size(); ++i) CHECK(a.equations[i] == b.equations[i]);
  }
}

TEST_CASE("implicit norm systems") {
  const std::vector<std::string> zt{"z1", "z2", "t"};
  const auto s = build_implicit_norm_system(kCircle, parse_polynomial("t^2 - z1^2 - z2^2", zt));
  CHECK(s.unknowns == std::vector<std::string>{"y1", "y2", "lam1", "t"});
  REQUIRE(s.t_slot().has_value());
  CHECK(*s.t_slot() == 3);
  check_equations(s, {"y1^2 + y2^2 - 1", "t^2 - (x1 - y1)^2 - (x2 - y2)^2",
                      "-2*(x1 - y1) - 2*lam1*y1", "-2*(x2 - y2) - 2*lam1*y2"});
  CHECK(s.discriminant.has_value());
  CHECK_THROWS_AS(build_implicit_norm_system(kCircle, parse_polynomial("z1^2 + z2^2", zt)),
                  ValidationError);
}

TEST_CASE("square_up") {
  const auto square = build_l2_minor_system(kCircle);
  const auto same = square_up(square, 1);
  REQUIRE(same.equations.size() == square.equations.size());
  for (std::size_t i = 0; i < same.equations.size(); ++i) CHECK(same.equations[i] == square.equations[i]);
  CHECK_FALSE(same.squared_up());

  // A circle presented by two generators: 3 minors of a 2x3 matrix, 1 needed.
  const auto twice = make(2, {"y1^2 + y2^2 - 1", "(y1 + 2)*(y1^2 + y2^2 - 1)"}, 1);
  const auto raw = build_l2_minor_system(twice);
  CHECK(raw.equations.size() == 5);
  const auto sq = square_up(raw, 7);
  CHECK(sq.is_square());
  CHECK(sq.equations.size() == 2);
  CHECK(sq.original_minors.size() == 3);
  CHECK(sq.squared_up());
  const auto again = square_up(raw, 7);
  for (std::size_t i = 0; i < sq.equations.size(); ++i) CHECK(sq.equations[i] == again.equations[i]);

  // Every survivor satisfies the full original equation list.
  const std::vector<double> x{3, 4};
  const auto r = solve_at(sq, std::span<const double>(x), TrackingConfig{});
  const SystemAtParameter at(sq, std::vector<Complex>{3, 4});
  REQUIRE(r.smooth_count() == 2);
  for (const auto& sol : r.solutions) {
    CHECK(at.defining_residual(sol.point) < 1e-8);
    CHECK(std::abs(std::abs(sol.y[0]) - 0.6) < 1e-10);
  }

  auto under = build_l2_minor_system(kCircle);
  under.equations.pop_back();
  CHECK_THROWS_AS(square_up(under, 1), ValidationError);
}

TEST_CASE("bezout bounds") {
  CHECK(bezout_bound(build_l2_minor_system(kCircle)) == 4);
  CHECK(bezout_bound(build_lp_lagrange_system(kCircle, 1, 0)) == 8);
  CHECK(bezout_bound(build_lp_lagrange_system(kLine, 2, 0)) == 9);
  CHECK(bezout_bound(build_l2_minor_system(kCusp)) == 9);
}

TEST_CASE("formulation names") {
  for (auto f : {Formulation::Auto, Formulation::L2Minor, Formulation::LpLagrange,
                 Formulation::LpMinor, Formulation::Implicit}) {
    CHECK(formulation_from_string(to_string(f)) == f);
  }
  CHECK_THROWS_AS(formulation_from_string("bogus"), ValidationError);
  CHECK(resolve_formulation(kCircle, NormSpec::euclidean(), Formulation::Auto) == Formulation::L2Minor);
  CHECK(resolve_formulation(kCircle, NormSpec::lp(2, 0), Formulation::Auto) == Formulation::LpMinor);
  CHECK(resolve_formulation(kCircle, NormSpec::lp(2, 1), Formulation::Auto) == Formulation::LpLagrange);
}

TEST_CASE("Lagrange and minor forms agree for even p") {
  const TrackingConfig cfg;
  const VarietySpec ellipse = make(2, {"y1^2/4 + y2^2 - 1"}, 1);
  for (const auto& v : {kCircle, kLine, ellipse}) {
    const auto lag = build_lp_lagrange_system(v, 2, 0);
    const auto minor = build_lp_minor_system(v, 2);
    Rng rng(derive_seed(5, 0));
    for (int k = 0; k < 20; ++k) {
      const auto x = rng.normal_vector(2, 2.0);
      const auto a = solve_at(lag, std::span<const double>(x), cfg);
      const auto b = solve_at(minor, std::span<const double>(x), cfg);
      CHECK(same_sets(a, b, 1e-6));
    }
  }
}

TEST_CASE("critical condition residual") {
  const std::vector<double> x{3, 4};
  CHECK(critical_condition_residual(kCircle, NormSpec::euclidean(), x, std::vector<double>{0.6, 0.8}) < 1e-12);
  CHECK(critical_condition_residual(kCircle, NormSpec::euclidean(), x, std::vector<double>{1, 0}) > 0.1);
  CHECK(critical_condition_residual(kLine, NormSpec::lp(2, 0), std::vector<double>{0, 1},
                                    std::vector<double>{0.5, 0.5}) < 1e-12);
}
