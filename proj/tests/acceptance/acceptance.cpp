// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "app.hpp"
#include "distdeg/approx.hpp"
#include "distdeg/critical_system.hpp"
#include "distdeg/degree.hpp"
#include "distdeg/random.hpp"
#include "distdeg/solver.hpp"

using namespace distdeg;

namespace {

namespace fs = std::filesystem;
using Vec = std::vector<double>;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

VarietySpec make(std::size_t n, std::vector<std::string> gens, std::size_t codim) {
  return VarietySpec::from_text(n, gens, codim);
}

std::string problem(const std::string& name) {
  return std::string(DISTDEG_PROBLEMS) + "/" + name + ".json";
}

std::vector<std::string> fixtures() {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(DISTDEG_PROBLEMS)) out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<Eigen::VectorXcd> smooth_ys(const SolveReport& r) {
  std::vector<Eigen::VectorXcd> out;
  for (const auto& s : r.solutions) {
    if (!s.is_singular_on_C) out.push_back(s.y);
  }
  return out;
}

std::vector<Eigen::VectorXcd> ys_of(const std::vector<Solution>& sols) {
  std::vector<Eigen::VectorXcd> out;
  for (const auto& s : sols) out.push_back(s.y);
  return out;
}

// Both lists have the same size and every entry of a has a distinct partner in b.
bool same_sets(const std::vector<Eigen::VectorXcd>& a, const std::vector<Eigen::VectorXcd>& b,
               double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& y : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j) {
      if (!used[j] && (y - b[j]).cwiseAbs().maxCoeff() < tol) found = used[j] = true;
    }
    if (!found) return false;
  }
  return true;
}

// Tangential part of grad nu^2(x - y), relative, with the normal space taken
// from the Jacobian columns evaluated at y.
double projected_gradient(const VarietySpec& v, const NormSpec& norm, const Vec& x, const Vec& y) {
  const auto n = static_cast<Eigen::Index>(v.n());
  Vec z(v.n());
  for (std::size_t j = 0; j < v.n(); ++j) z[j] = x[j] - y[j];
  const auto g = norm_sq_gradient(norm, z);
  const Eigen::VectorXd grad = Eigen::Map<const Eigen::VectorXd>(g.data(), n);
  const auto J = jacobian(v);
  Eigen::MatrixXd A(n, static_cast<Eigen::Index>(J.cols()));
  for (std::size_t r = 0; r < J.rows(); ++r) {
    for (std::size_t c = 0; c < J.cols(); ++c) {
      A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          evaluate(J.at(r, c), std::span<const double>(y)).real();
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-8);
  const Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd U = Q.leftCols(qr.rank());
  const Eigen::VectorXd tangential = grad - U * (U.transpose() * grad);
  return grad.norm() == 0.0 ? 0.0 : tangential.norm() / grad.norm();
}

std::string report_text(const std::string& command, const std::string& path, std::uint64_t seed) {
  app::Flags f;
  f.seed = seed;
  f.timing = false;
  f.samples = 20;
  std::ostringstream out;
  app::run(command, path, f, out);
  return out.str();
}

Outcome circle_ed_degree() {
  Outcome o;
  const auto v = make(2, {"y1^2 + y2^2 - 1"}, 1);
  DegreeOptions opts;
  opts.trials = 8;
  opts.seed = 0;
  const auto r = nu_distance_degree(v, NormSpec::euclidean(), opts, TrackingConfig{});
  if (!r.delta_hat || *r.delta_hat != 2) o.fail("delta_hat != 2");
  if (r.stability != 1.0) o.fail("stability " + fmt(r.stability));
  // Closed form: the critical points are +-x/|x|.
  const auto s = build_l2_minor_system(v);
  Rng rng(1);
  for (int k = 0; k < 8; ++k) {
    const auto x = rng.normal_vector(2, 2.0);
    const double nx = std::hypot(x[0], x[1]);
    const auto ys = smooth_ys(solve_at(s, std::span<const double>(x), TrackingConfig{}));
    std::vector<Eigen::VectorXcd> expect(2, Eigen::VectorXcd(2));
    expect[0] << x[0] / nx, x[1] / nx;
    expect[1] = -expect[0];
    if (!same_sets(ys, expect, 1e-8)) o.fail("fiber differs from +-x/|x|");
  }
  if (o.pass) o.detail = "delta_hat 2, stability 1.0";
  return o;
}

Outcome ellipse_ed_degree() {
  Outcome o;
  const auto v = make(2, {"y1^2/4 + y2^2 - 1"}, 1);
  const TrackingConfig cfg;
  const auto r = nu_distance_degree(v, NormSpec::euclidean(), {}, cfg);
  if (!r.delta_hat || *r.delta_hat != 4) o.fail("delta_hat != 4");
  const auto s = build_l2_minor_system(v);
  Rng rng(2);
  for (int k = 0; k < 3; ++k) {
    const auto x = rng.complex_normal_vector(2, 1.0);
    const auto homotopy = smooth_ys(solve_at(s, x, cfg));
    const SystemAtParameter at(s, x);
    const auto oracle = ys_of(multistart_oracle(at, 10000, 3.0, derive_seed(2, k), cfg));
    if (!same_sets(homotopy, oracle, 1e-6)) {
      o.fail("multistart y-set differs at trial " + std::to_string(k) + " (" +
             std::to_string(homotopy.size()) + " vs " + std::to_string(oracle.size()) + ")");
    }
  }
  if (o.pass) o.detail = "delta_hat 4; 3 multistart y-sets (10^4 starts) agree";
  return o;
}

Outcome line_l4() {
  Outcome o;
  const auto prob = app::load_problem(problem("line-l4"));
  const auto s = build_system(prob.variety, prob.norm, Formulation::Auto, 0);
  const TrackingConfig cfg;
  Rng crng(3);
  for (int k = 0; k < 8; ++k) {
    const auto x = crng.complex_normal_vector(2, 1.0);
    const auto c = fiber_count(s, x, cfg);
    if (c != 3) o.fail("fiber count " + std::to_string(c));
  }
  const auto r = nu_distance_degree(prob.variety, prob.norm, {}, cfg);
  if (!r.sigma1_degree || *r.sigma1_degree != 1) o.fail("sigma1_degree != 1");
  double worst = 0.0;
  Rng rng(4);
  for (int k = 0; k < 100; ++k) {
    const auto x = rng.normal_vector(2, 2.0);
    const auto sol = solve_at(s, std::span<const double>(x), cfg);
    std::size_t real = 0;
    for (const auto& p : sol.solutions) {
      if (!p.is_real || p.is_singular_on_C) continue;
      ++real;
      const double mid = (x[0] + x[1]) / 2;
      worst = std::max({worst, std::abs(p.y[0].real() - mid), std::abs(p.y[1].real() - mid)});
    }
    if (real != 1) o.fail(std::to_string(real) + " real solutions at a real x");
  }
  if (worst > 1e-8) o.fail("midpoint error " + fmt(worst));
  if (o.pass) o.detail = "fiber 3 at 8 x, sigma1 1, midpoint error " + fmt(worst);
  return o;
}

Outcome best_approx() {
  Outcome o;
  const auto v = make(2, {"y1^2 + y2^2 - 1"}, 1);
  const TrackingConfig cfg;
  const auto a = best_approximation(v, NormSpec::euclidean(), Vec{3, 4}, cfg);
  if (std::abs(a.best[0] - 0.6) > 1e-8 || std::abs(a.best[1] - 0.8) > 1e-8) o.fail("best != (0.6,0.8)");
  if (std::abs(a.distance - 4.0) > 1e-8) o.fail("distance " + fmt(a.distance));
  if (!a.unique) o.fail("(3,4) not unique");
  const auto b = best_approximation(v, NormSpec::euclidean(), Vec{0, 0}, cfg);
  if (b.unique) o.fail("(0,0) reported unique");
  if (!(b.gap < 1e-6)) o.fail("(0,0) gap " + fmt(b.gap));
  if (o.pass) o.detail = "(3,4) -> (0.6,0.8) d=4 unique; (0,0) gap " + fmt(b.gap);
  return o;
}

Outcome implicit_cross_check() {
  Outcome o;
  const auto v = make(2, {"y1 - y2"}, 1);
  const std::vector<std::string> zt{"z1", "z2", "t"};
  const auto implicit = build_implicit_norm_system(v, parse_polynomial("t^4 - z1^4 - z2^4", zt));
  const auto minor = build_lp_minor_system(v, 2);
  const TrackingConfig cfg;
  Rng rng(5);
  std::size_t flagged = 0;
  for (int k = 0; k < 20; ++k) {
    const auto x = rng.normal_vector(2, 2.0);
    const auto a = solve_at(implicit, std::span<const double>(x), cfg);
    const auto b = solve_at(minor, std::span<const double>(x), cfg);
    if (!same_sets(smooth_ys(a), smooth_ys(b), 1e-6)) o.fail("y-sets differ at x #" + std::to_string(k));
    for (const auto& s : a.solutions) flagged += s.on_discriminant;
  }
  if (flagged > 0) o.fail(std::to_string(flagged) + " solutions flagged on the discriminant");
  if (o.pass) o.detail = "20 x, y-sets agree, no discriminant flags";
  return o;
}

Outcome critical_condition() {
  Outcome o;
  const TrackingConfig cfg;
  double worst = 0.0;
  std::size_t checked = 0;
  for (const auto& path : fixtures()) {
    const auto prob = app::load_problem(path);
    const auto s = build_system(prob.variety, prob.norm, prob.formulation, 0);
    Rng rng(derive_seed(6, checked));
    std::vector<Vec> xs{rng.normal_vector(prob.variety.n(), 2.0), rng.normal_vector(prob.variety.n(), 2.0)};
    if (prob.x) xs.push_back(*prob.x);
    for (const auto& x : xs) {
      SolveReport r;
      try {
        r = solve_at(s, std::span<const double>(x), cfg);
      } catch (const DegenerateSystemError&) {
        continue;
      }
      for (const auto& sol : r.solutions) {
        if (!sol.is_real || sol.is_singular_on_C) continue;
        const double g = projected_gradient(prob.variety, prob.norm, x, sol.real_y());
        worst = std::max(worst, g);
        ++checked;
      }
    }
  }
  if (checked == 0) o.fail("no real critical points checked");
  if (worst >= 1e-6) o.fail("max projected gradient " + fmt(worst));
  if (o.pass) o.detail = std::to_string(checked) + " points, max " + fmt(worst);
  return o;
}

Outcome uniqueness() {
  Outcome o;
  const auto v = make(2, {"y1^2 + y2^2 - 1"}, 1);
  const TrackingConfig cfg;
  const auto r = uniqueness_probe(v, NormSpec::euclidean(), 1000, 3.0, 0, cfg);
  if (r.unique_fraction != 1.0) o.fail("unique fraction " + fmt(r.unique_fraction));
  const std::vector<Vec> forced{{0, 0}};
  const auto z = uniqueness_probe(v, NormSpec::euclidean(), forced, cfg);
  if (z.unique_count != 0) o.fail("(0,0) reported unique");
  if (o.pass) o.detail = "1000 samples, fraction 1.000; (0,0) non-unique";
  return o;
}

Outcome boundary_gradient() {
  Outcome o;
  const TrackingConfig cfg;
  const auto circle = make(2, {"y1^2 + y2^2 - 1"}, 1);
  std::vector<Vec> pts;
  for (int k = 0; k < 10; ++k) {
    const double th = 2 * std::numbers::pi * k / 10 + 0.1;
    pts.push_back({std::cos(th), std::sin(th)});
  }
  const auto a = boundary_gradient_check(circle, NormSpec::euclidean(), 2.0, pts, cfg);
  if (!(a.max_gradient_norm < 1e-5)) o.fail("circle gradient " + fmt(a.max_gradient_norm));
  const auto line = make(2, {"y1 - y2"}, 1);
  const std::vector<Vec> origin{{0, 0}};
  const auto b = boundary_gradient_check(line, NormSpec::lp(2, 0), 4.0, origin, cfg);
  if (!(b.max_gradient_norm < 1e-5)) o.fail("line gradient " + fmt(b.max_gradient_norm));
  if (o.pass) {
    o.detail = "circle max " + fmt(a.max_gradient_norm) + ", line l4 " + fmt(b.max_gradient_norm);
  }
  return o;
}

Outcome bezout_and_determinism() {
  Outcome o;
  const TrackingConfig cfg;
  std::size_t runs = 0;
  for (const auto& path : fixtures()) {
    const auto prob = app::load_problem(path);
    const auto s = build_system(prob.variety, prob.norm, prob.formulation, 0);
    const auto bound = bezout_bound(s);
    Rng rng(derive_seed(9, runs));
    for (int k = 0; k < 3; ++k) {
      const auto x = rng.complex_normal_vector(prob.variety.n(), 1.0);
      const auto c = solve_at(s, x, cfg).smooth_count();
      if (c > bound) o.fail(path + ": count " + std::to_string(c) + " > " + std::to_string(bound));
    }
    for (const char* cmd : {"validate", "solve", "degree", "approx"}) {
      if (report_text(cmd, path, 11) != report_text(cmd, path, 11)) {
        o.fail(std::string(cmd) + " report differs on " + fs::path(path).filename().string());
      }
      ++runs;
    }
  }
  if (o.pass) o.detail = std::to_string(runs) + " report pairs identical, counts within Bezout";
  return o;
}

Outcome singular_filtering() {
  Outcome o;
  const auto v = make(2, {"y2^2 - y1^3"}, 1);
  const auto s = build_l2_minor_system(v);
  const TrackingConfig cfg;
  Rng rng(10);
  std::vector<std::size_t> counts;
  for (int k = 0; k < 8; ++k) {
    const auto x = rng.complex_normal_vector(2, 1.0);
    const auto r = solve_at(s, x, cfg);
    std::size_t origin = 0;
    for (const auto& sol : r.solutions) {
      if (sol.y.norm() < 1e-4) {
        ++origin;
        if (!sol.is_singular_on_C) o.fail("origin not flagged singular");
      } else if (sol.is_singular_on_C) {
        o.fail("smooth point flagged singular");
      }
    }
    if (origin == 0) o.fail("origin missing from the solution list");
    counts.push_back(r.smooth_count());
  }
  if (std::adjacent_find(counts.begin(), counts.end(), std::not_equal_to<>()) != counts.end()) {
    o.fail("smooth counts vary across x");
  }
  if (o.pass) o.detail = "origin flagged at 8 x, smooth count " + std::to_string(counts[0]);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;  // 0 = no runtime bound
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"circle ED degree", 5, circle_ed_degree},
      {"ellipse ED degree", 15, ellipse_ed_degree},
      {"line under l4", 10, line_l4},
      {"best approximation", 0, best_approx},
      {"implicit-norm cross-check", 0, implicit_cross_check},
      {"critical-condition equivalence", 0, critical_condition},
      {"uniqueness probe", 0, uniqueness},
      {"boundary gradient", 0, boundary_gradient},
      {"Bezout ceiling and determinism", 0, bezout_and_determinism},
      {"singular filtering", 0, singular_filtering},
  };
  int failed = 0;
  int index = 1;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (c.budget_s > 0 && secs >= c.budget_s) o.fail("runtime " + fmt(secs) + " s over " + fmt(c.budget_s) + " s");
    std::printf("%s %2d %-32s %6.2fs  %s\n", o.pass ? "PASS" : "FAIL", index++, c.name, secs,
                o.detail.c_str());
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
