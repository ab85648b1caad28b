#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "distdeg/critical_system.hpp"
#include "distdeg/random.hpp"
#include "distdeg/solver.hpp"

using namespace distdeg;

namespace {

VarietySpec make(std::size_t n, std::vector<std::string> gens, std::size_t codim) {
  return VarietySpec::from_text(n, gens, codim);
}

const VarietySpec kCircle = make(2, {"y1^2 + y2^2 - 1"}, 1);
const VarietySpec kLine = make(2, {"y1 - y2"}, 1);
const VarietySpec kEllipse = make(2, {"y1^2/4 + y2^2 - 1"}, 1);
const VarietySpec kCusp = make(2, {"y2^2 - y1^3"}, 1);

// Greedy bipartite match of two y lists within tol (max-abs).
bool same_y_sets(const std::vector<Solution>& a, const std::vector<Solution>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& s : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j) {
      if (!used[j] && (s.y - b[j].y).cwiseAbs().maxCoeff() < tol) found = used[j] = true;
    }
    if (!found) return false;
  }
  return true;
}

std::vector<Solution> smooth(const SolveReport& r) {
  std::vector<Solution> out;
  for (const auto& s : r.solutions) {
    if (!s.is_singular_on_C) out.push_back(s);
  }
  return out;
}

Solution at_point(std::initializer_list<Complex> y) {
  Solution s;
  s.point = Eigen::VectorXcd(static_cast<Eigen::Index>(y.size()));
  Eigen::Index i = 0;
  for (auto v : y) s.point[i++] = v;
  s.y = s.point;
  return s;
}

}  // namespace

TEST_CASE("circle Lagrange at (3,4)") {
  const auto s = build_lp_lagrange_system(kCircle, 1, 0);
  const std::vector<double> x{3, 4};
  const auto r = solve_at(s, std::span<const double>(x), TrackingConfig{});
  REQUIRE(r.solutions.size() == 2);
  CHECK(r.smooth_count() == 2);
  // Sorted by real parts of y: (-0.6,-0.8) first.
  CHECK(std::abs(r.solutions[0].y[0] - Complex(-0.6)) < 1e-12);
  CHECK(std::abs(r.solutions[0].y[1] - Complex(-0.8)) < 1e-12);
  CHECK(std::abs(r.solutions[1].y[0] - Complex(0.6)) < 1e-12);
  CHECK(std::abs(r.solutions[1].y[1] - Complex(0.8)) < 1e-12);
  for (const auto& sol : r.solutions) {
    CHECK(sol.is_real);
    CHECK(sol.residual < 1e-10);
  }
  CHECK(r.smooth_count() <= s.bezout);
}

TEST_CASE("line l4 Lagrange: one real solution at the midpoint") {
  const auto s = build_lp_lagrange_system(kLine, 2, 0);
  Rng rng(11);
  for (int k = 0; k < 10; ++k) {
    const auto x = rng.normal_vector(2, 2.0);
    const auto r = solve_at(s, std::span<const double>(x), TrackingConfig{});
    CHECK(r.smooth_count() == 3);
    std::size_t real = 0;
    for (const auto& sol : r.solutions) {
      if (!sol.is_real) continue;
      ++real;
      const double mid = (x[0] + x[1]) / 2;
      CHECK(std::abs(sol.y[0].real() - mid) < 1e-8);
      CHECK(std::abs(sol.y[1].real() - mid) < 1e-8);
    }
    CHECK(real == 1);
  }
}

TEST_CASE("ellipse: homotopy matches the multistart oracle") {
  const auto s = build_l2_minor_system(kEllipse);
  const TrackingConfig cfg;
  Rng rng(12);
  for (int k = 0; k < 2; ++k) {
    const auto x = rng.normal_vector(2, 2.0);
    const auto r = solve_at(s, std::span<const double>(x), cfg);
    CHECK(r.smooth_count() == 4);
    const std::vector<Complex> xc(x.begin(), x.end());
    const SystemAtParameter at(s, xc);
    const auto oracle = multistart_oracle(at, 2000, 3.0, 100 + k, cfg);
    CHECK(same_y_sets(smooth(r), oracle, 1e-6));
  }
}

TEST_CASE("multistart oracle examples") {
  const TrackingConfig cfg;
  const auto circle = build_l2_minor_system(kCircle);
  const SystemAtParameter c34(circle, std::vector<Complex>{3, 4});
  const auto oracle = multistart_oracle(c34, 10000, 3.0, 1, cfg);
  const auto r = solve_at(circle, std::vector<Complex>{3, 4}, cfg);
  CHECK(oracle.size() == 2);
  CHECK(same_y_sets(oracle, r.solutions, 1e-6));

  const auto line = build_lp_lagrange_system(kLine, 2, 0);
  const SystemAtParameter l(line, std::vector<Complex>{0.3, 1.7});
  CHECK(multistart_oracle(l, 10000, 3.0, 2, cfg).size() == 3);

  CHECK(multistart_oracle(c34, 0, 3.0, 3, cfg).empty());
}

TEST_CASE("newton_refine") {
  const auto s = build_lp_lagrange_system(kCircle, 1, 0);
  const SystemAtParameter at(s, std::vector<Complex>{3, 4});
  const TrackingConfig cfg;

  Eigen::VectorXcd near(3);
  near << 0.61, 0.79, 2.0;  // lambda = 2 solves (x - y) = 2 lambda y at y = (0.6, 0.8)
  const auto sol = newton_refine(at, near, cfg);
  CHECK(sol.residual < 1e-12);
  CHECK(std::abs(sol.point[0] - Complex(0.6)) < 1e-12);
  CHECK(std::abs(sol.point[2] - Complex(2.0)) < 1e-12);
  CHECK(sol.last_step_ratio < 1e-3);

  Eigen::VectorXcd exact(3);
  exact << 0.6, 0.8, 2.0;
  CHECK(newton_refine(at, exact, cfg).newton_iterations == 0);

  Eigen::VectorXcd far(3);
  far << 1e3, 1e3, 0.0;
  CHECK_THROWS_AS(newton_refine(at, far, cfg), NewtonError);
}

TEST_CASE("classify_and_dedup examples") {
  const TrackingConfig cfg;
  std::vector<Solution> pair{at_point({0.6, 0.8}), at_point({0.6 + 1e-9, 0.8})};
  pair[1].path_id = 1;
  const auto merged = classify_and_dedup(pair, kCircle, cfg);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].multiplicity == 2);
  CHECK(merged[0].is_real);

  const Complex y1(1.2, 0.3);
  const Complex y2 = std::sqrt(Complex(1) - y1 * y1);
  std::vector<Solution> conj{at_point({y1, y2}), at_point({std::conj(y1), std::conj(y2)})};
  conj[1].path_id = 1;
  const auto c = classify_and_dedup(conj, kCircle, cfg);
  REQUIRE(c.size() == 2);
  CHECK_FALSE(c[0].is_real);
  CHECK_FALSE(c[1].is_real);

  std::vector<Solution> origin{at_point({0, 0}), at_point({1, 1})};
  origin[1].path_id = 1;
  const auto o = classify_and_dedup(origin, kCusp, cfg);
  REQUIRE(o.size() == 2);
  CHECK(o[0].is_singular_on_C);
  CHECK_FALSE(o[1].is_singular_on_C);
}

TEST_CASE("cusp origin is singular and excluded from the count") {
  const auto s = build_l2_minor_system(kCusp);
  Rng rng(13);
  for (int k = 0; k < 4; ++k) {
    const auto x = rng.normal_vector(2, 2.0);
    const auto r = solve_at(s, std::span<const double>(x), TrackingConfig{});
    CHECK(r.smooth_count() == 4);
    const auto singular = std::count_if(r.solutions.begin(), r.solutions.end(),
                                        [](const Solution& sol) { return sol.is_singular_on_C; });
    CHECK(singular == 1);
    for (const auto& sol : r.solutions) {
      if (sol.is_singular_on_C) CHECK(sol.y.norm() < 1e-6);
    }
  }
}

TEST_CASE("determinism and gamma independence") {
  const auto s = build_l2_minor_system(kEllipse);
  const std::vector<double> x{0.7, -1.3};
  TrackingConfig cfg;
  cfg.gamma_seed = 42;
  const auto a = solve_at(s, std::span<const double>(x), cfg);
  const auto b = solve_at(s, std::span<const double>(x), cfg);
  REQUIRE(a.solutions.size() == b.solutions.size());
  for (std::size_t i = 0; i < a.solutions.size(); ++i) {
    CHECK(a.solutions[i].point == b.solutions[i].point);
    CHECK(a.solutions[i].path_id == b.solutions[i].path_id);
  }
  cfg.gamma_seed = 43;
  const auto c = solve_at(s, std::span<const double>(x), cfg);
  CHECK(same_y_sets(a.solutions, c.solutions, 1e-8));
}

TEST_CASE("solver contract") {
  const auto s = build_l2_minor_system(kCircle);
  CHECK_THROWS_AS(solve_at(s, std::vector<Complex>{1, 2, 3}, TrackingConfig{}), std::invalid_argument);
  TrackingConfig bad;
  bad.min_step = 1.0;
  CHECK_THROWS(bad.validate());
  const std::vector<double> origin{0, 0};
  CHECK_THROWS_AS(solve_at(s, std::span<const double>(origin), TrackingConfig{}),
                  DegenerateSystemError);
}
