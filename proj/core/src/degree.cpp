#include "distdeg/degree.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "distdeg/random.hpp"

namespace distdeg {

std::size_t fiber_count(const CriticalSystem& s, std::span<const Complex> x,
                        const TrackingConfig& cfg) {
  return solve_at(s, x, cfg).smooth_count();
}

namespace {

using Permutation = std::vector<std::size_t>;

std::optional<std::size_t> match(const std::vector<Eigen::VectorXcd>& fiber,
                                 const Eigen::VectorXcd& y, double tol) {
  std::optional<std::size_t> hit;
  for (std::size_t i = 0; i < fiber.size(); ++i) {
    const double scale = std::max(1.0, fiber[i].norm());
    if ((fiber[i] - y).norm() <= tol * scale) {
      if (hit) return std::nullopt;
      hit = i;
    }
  }
  return hit;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::vector<std::vector<std::size_t>> orbits_of(std::size_t n,
                                                const std::vector<Permutation>& perms) {
  UnionFind uf(n);
  for (const auto& p : perms) {
    for (std::size_t i = 0; i < n; ++i) uf.unite(i, p[i]);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

std::pair<std::size_t, bool> group_closure(std::size_t n, const std::vector<Permutation>& gens,
                                           std::size_t cap) {
  Permutation identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  std::set<Permutation> seen{identity};
  std::vector<Permutation> frontier{identity};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& g : frontier) {
      for (const auto& h : gens) {
        Permutation c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = h[g[i]];
        if (seen.insert(c).second) {
          if (seen.size() >= cap) return {seen.size(), true};
          next.push_back(std::move(c));
        }
      }
    }
    frontier = std::move(next);
  }
  return {seen.size(), false};
}

}  // namespace

MonodromyReport monodromy_real_component(const CriticalSystem& s, std::span<const double> x0,
                                         std::size_t loops, std::uint64_t seed,
                                         const TrackingConfig& cfg) {
  if (loops == 0) throw ValidationError("monodromy needs at least one loop");
  MonodromyReport report;
  report.x0.assign(x0.begin(), x0.end());
  const auto solved = solve_at(s, x0, cfg);

  std::vector<Eigen::VectorXcd> points;
  std::vector<Eigen::VectorXcd> ys;
  for (const auto& sol : solved.solutions) {
    if (sol.is_singular_on_C) continue;
    if (sol.is_real) report.real_indices.push_back(points.size());
    points.push_back(sol.point);
    ys.push_back(sol.y);
  }
  report.fiber_size = points.size();
  if (report.real_indices.empty()) {
    throw SolverError("monodromy base point has no real smooth critical point");
  }

  const std::size_t n = x0.size();
  std::vector<Complex> base(x0.begin(), x0.end());
  double radius = 0.0;
  for (double v : x0) radius += v * v;
  radius = std::max(1.0, std::sqrt(radius));

  const ParameterTracker tracker(s, cfg);
  Rng rng(seed);
  std::vector<Permutation> perms;
  const double match_tol = std::max(cfg.dedup_tol, 1e-6);

  auto run_loop = [&]() -> std::optional<Permutation> {
    const auto a = rng.complex_normal_vector(n, radius);
    const auto b = rng.complex_normal_vector(n, radius);
    std::vector<Complex> va(n);
    std::vector<Complex> vb(n);
    for (std::size_t j = 0; j < n; ++j) {
      va[j] = base[j] + a[j];
      vb[j] = base[j] + b[j];
    }
    const std::span<const Complex> legs[4] = {base, va, vb, base};
    Permutation perm(points.size());
    std::vector<bool> hit(points.size(), false);
    for (std::size_t i = 0; i < points.size(); ++i) {
      Eigen::VectorXcd z = points[i];
      for (int leg = 0; leg < 3; ++leg) {
        auto next = tracker.track(z, legs[leg], legs[leg + 1]);
        if (!next) return std::nullopt;
        z = std::move(*next);
      }
      Eigen::VectorXcd y(static_cast<Eigen::Index>(s.y_slots.size()));
      for (std::size_t j = 0; j < s.y_slots.size(); ++j) {
        y[static_cast<Eigen::Index>(j)] = z[static_cast<Eigen::Index>(s.y_slots[j])];
      }
      const auto target = match(ys, y, match_tol);
      if (!target || hit[*target]) return std::nullopt;
      hit[*target] = true;
      perm[i] = *target;
    }
    return perm;
  };

  auto add_loops = [&](std::size_t count) {
    std::size_t done = 0;
    std::size_t attempts = 0;
    while (done < count && attempts < 4 * count) {
      ++attempts;
      if (auto p = run_loop()) {
        perms.push_back(std::move(*p));
        ++done;
        ++report.loops_completed;
      } else {
        ++report.loops_discarded;
      }
    }
  };

  add_loops(loops);
  auto orbits = orbits_of(points.size(), perms);
  int stable_rounds = 0;
  // Rare swaps can hide behind a few quiet rounds; stability only counts
  // once 4 * loops loops are in.
  const std::size_t warmup = 4 * loops;
  const std::size_t max_loops = 32 * loops;
  while (stable_rounds < 2 && report.loops_completed < max_loops) {
    const std::size_t before = report.loops_completed;
    add_loops(std::max<std::size_t>(report.loops_completed, 1));
    auto updated = orbits_of(points.size(), perms);
    if (report.loops_completed == before) break;
    if (before >= warmup) stable_rounds = updated == orbits ? stable_rounds + 1 : 0;
    orbits = std::move(updated);
  }
  report.stable = stable_rounds >= 2;
  report.orbits = orbits;

  std::set<std::size_t> real(report.real_indices.begin(), report.real_indices.end());
  for (const auto& orbit : orbits) {
    const bool has_real =
        std::any_of(orbit.begin(), orbit.end(), [&](std::size_t i) { return real.count(i) > 0; });
    if (has_real) report.sigma1_degree += orbit.size();
  }
  const auto [size, capped] = group_closure(points.size(), perms, 100000);
  report.group_size = size;
  report.group_size_capped = capped;
  return report;
}

DegreeReport nu_distance_degree(const VarietySpec& v, const NormSpec& norm,
                                const DegreeOptions& opts, const TrackingConfig& cfg) {
  if (opts.trials < 3) throw ValidationError("degree estimation needs at least 3 trials");
  cfg.validate();
  DegreeReport report;
  report.seed = opts.seed;
  report.formulation = resolve_formulation(v, norm, opts.formulation);
  const auto system = build_system(v, norm, report.formulation, opts.seed);
  report.bezout = system.bezout;

  auto trial_cfg = [&](std::uint64_t stream) {
    TrackingConfig c = cfg;
    c.gamma_seed = derive_seed(cfg.gamma_seed ^ opts.seed, stream);
    return c;
  };

  for (std::size_t i = 0; i < opts.trials; ++i) {
    const std::uint64_t trial_seed = derive_seed(opts.seed, 1000 + i);
    report.trial_seeds.push_back(trial_seed);
    Rng rng(trial_seed);
    const auto x = rng.complex_normal_vector(v.n(), opts.scale);
    try {
      const auto r = solve_at(system, std::span<const Complex>(x), trial_cfg(trial_seed));
      report.trial_counts.push_back(r.smooth_count());
      report.path_failures += r.failed;
    } catch (const PathFailureError& e) {
      ++report.failed_trials;
      report.path_failures += e.report().failed;
    }
  }

  std::map<std::size_t, std::size_t> freq;
  for (auto c : report.trial_counts) ++freq[c];
  if (!freq.empty()) {
    const auto mode = std::max_element(freq.begin(), freq.end(), [](const auto& a, const auto& b) {
      return a.second < b.second;
    });
    report.stability = static_cast<double>(mode->second) / static_cast<double>(opts.trials);
    if (report.stability >= 0.5) report.delta_hat = mode->first;
  }
  if (!report.delta_hat) {
    report.warnings.push_back("fiber counts unstable across trials; no degree reported");
  } else if (report.stability < 0.8) {
    report.warnings.push_back("fiber counts agree in fewer than 80% of trials");
  }
  if (report.failed_trials > 0) {
    report.warnings.push_back(std::to_string(report.failed_trials) +
                              " trials aborted on path failures");
  }

  for (std::size_t i = 0; i < opts.trials; ++i) {
    const std::uint64_t real_seed = derive_seed(opts.seed, 2000 + i);
    Rng rng(real_seed);
    const auto x = rng.normal_vector(v.n(), opts.scale);
    try {
      const auto r = solve_at(system, std::span<const double>(x), trial_cfg(real_seed));
      const auto count = static_cast<std::size_t>(
          std::count_if(r.solutions.begin(), r.solutions.end(),
                        [](const Solution& s) { return s.is_real && !s.is_singular_on_C; }));
      report.real_counts.push_back(count);
      ++report.real_count_distribution[count];
      report.path_failures += r.failed;
      if (report.delta_hat && count > *report.delta_hat) {
        report.warnings.push_back("real critical count exceeds the degree estimate");
      }
    } catch (const PathFailureError& e) {
      report.path_failures += e.report().failed;
    }
  }

  if (norm.kind() == NormSpec::Kind::Implicit) {
    report.warnings.push_back("monodromy skipped for implicit norms; full fiber count only");
    return report;
  }

  // Monodromy at two real base points; disagreement means too few loops or a
  // non-generic x0.
  std::vector<MonodromyReport> runs;
  for (std::uint64_t stream = 3000; stream < 3040 && runs.size() < 2; ++stream) {
    const std::uint64_t mseed = derive_seed(opts.seed, stream);
    Rng rng(mseed);
    const auto x0 = rng.normal_vector(v.n(), std::max(1.0, 2.0 * opts.scale));
    try {
      runs.push_back(monodromy_real_component(system, x0, opts.loops, derive_seed(mseed, 1),
                                              trial_cfg(mseed)));
    } catch (const SolverError&) {
    }
  }
  if (runs.empty()) {
    report.warnings.push_back("monodromy found no real base point with a real critical point");
    return report;
  }
  if (runs.size() == 2 && runs[0].sigma1_degree != runs[1].sigma1_degree) {
    report.warnings.push_back("real-component degree differs between two base points (" +
                              std::to_string(runs[0].sigma1_degree) + " vs " +
                              std::to_string(runs[1].sigma1_degree) + "); reporting the larger");
    if (runs[1].sigma1_degree > runs[0].sigma1_degree) std::swap(runs[0], runs[1]);
  }
  if (!runs[0].stable) report.warnings.push_back("monodromy orbits did not stabilize");
  report.sigma1_degree = runs[0].sigma1_degree;
  report.monodromy = runs[0];
  if (norm.kind() != NormSpec::Kind::Euclidean && report.delta_hat &&
      *report.sigma1_degree < *report.delta_hat) {
    report.warnings.push_back("fiber contains points off the real component; its degree is "
                              "sigma1_degree, the full fiber count is delta_hat");
  }
  return report;
}

}  // namespace distdeg
