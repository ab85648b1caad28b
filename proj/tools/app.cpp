#include "app.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace distdeg::app {

namespace {

std::string join_messages(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    if (!out.empty()) out += "; ";
    out += d.field + ": " + d.message;
  }
  return out;
}

Json complex_vector(const Eigen::VectorXcd& v) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    re.push_back(v[j].real());
    im.push_back(v[j].imag());
  }
  return Json{{"re", re}, {"im", im}};
}

Json diagnostic_json(const Diagnostic& d) {
  Json j{{"field", d.field}, {"message", d.message}};
  if (d.position) j["position"] = *d.position;
  return j;
}

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
  // Keep floats recognisable as floats.
  if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos) out += ".0";
}

void write(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(key).dump() + ": ";
        write(out, value, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write(out, j[i], indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        write(out, j[i], indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

std::vector<double> number_list(const Json& j, const std::string& field,
                                std::vector<Diagnostic>& diags) {
  std::vector<double> out;
  if (!j.is_array()) {
    diags.push_back({field, "must be an array of numbers", std::nullopt});
    return out;
  }
  for (const auto& e : j) {
    if (!e.is_number()) {
      diags.push_back({field, "must be an array of numbers", std::nullopt});
      return {};
    }
    out.push_back(e.get<double>());
  }
  return out;
}

void apply_config(const Json& c, TrackingConfig& cfg, double& gap_tol,
                  std::vector<Diagnostic>& diags) {
  if (!c.is_object()) {
    diags.push_back({"config", "must be an object", std::nullopt});
    return;
  }
  for (const auto& [key, value] : c.items()) {
    const std::string field = "config." + key;
    if (!value.is_number()) {
      diags.push_back({field, "must be a number", std::nullopt});
      continue;
    }
    const double v = value.get<double>();
    if (key == "initial_step") cfg.initial_step = v;
    else if (key == "min_step") cfg.min_step = v;
    else if (key == "max_step") cfg.max_step = v;
    else if (key == "max_steps") cfg.max_steps = static_cast<int>(v);
    else if (key == "corrector_tol") cfg.corrector_tol = v;
    else if (key == "residual_tol") cfg.residual_tol = v;
    else if (key == "real_tol") cfg.real_tol = v;
    else if (key == "dedup_tol") cfg.dedup_tol = v;
    else if (key == "newton_max_iter") cfg.newton_max_iter = static_cast<int>(v);
    else if (key == "tol_rank") cfg.tol_rank = v;
    else if (key == "filter_tol") cfg.filter_tol = v;
    else if (key == "max_failure_fraction") cfg.max_failure_fraction = v;
    else if (key == "gap_tol") gap_tol = v;
    else diags.push_back({field, "unknown configuration key", std::nullopt});
  }
}

std::optional<NormSpec> parse_norm(const Json& j, std::size_t n, std::vector<Diagnostic>& diags) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    diags.push_back({"norm", "must be an object with a string \"type\"", std::nullopt});
    return std::nullopt;
  }
  const auto type = j["type"].get<std::string>();
  try {
    if (type == "euclidean") return NormSpec::euclidean();
    if (type == "lp") {
      if (!j.contains("m") || !j["m"].is_number_integer()) {
        diags.push_back({"norm.m", "lp norm needs an integer m", std::nullopt});
        return std::nullopt;
      }
      const int l = j.contains("l") && j["l"].is_number_integer() ? j["l"].get<int>() : 0;
      return NormSpec::lp(j["m"].get<int>(), l);
    }
    if (type == "implicit") {
      if (!j.contains("G") || !j["G"].is_string()) {
        diags.push_back({"norm.G", "implicit norm needs a polynomial text G", std::nullopt});
        return std::nullopt;
      }
      std::vector<std::string> vars;
      for (std::size_t i = 1; i <= n; ++i) vars.push_back("z" + std::to_string(i));
      vars.push_back("t");
      return NormSpec::implicit(parse_polynomial(j["G"].get<std::string>(), vars));
    }
    diags.push_back({"norm.type", "unknown norm type \"" + type + "\"", std::nullopt});
  } catch (const ParseError& e) {
    diags.push_back({"norm.G", e.what(), e.position()});
  } catch (const ValidationError& e) {
    diags.push_back({"norm", e.what(), std::nullopt});
  }
  return std::nullopt;
}

TrackingConfig effective_config(const Problem& p, const Flags& f) {
  TrackingConfig cfg = p.cfg;
  cfg.gamma_seed = f.seed;
  if (f.tol_residual) cfg.residual_tol = *f.tol_residual;
  if (f.tol_real) cfg.real_tol = *f.tol_real;
  if (f.tol_dedup) cfg.dedup_tol = *f.tol_dedup;
  if (f.paths_tol) cfg.max_failure_fraction = *f.paths_tol;
  if (f.max_steps) cfg.max_steps = *f.max_steps;
  cfg.validate();
  return cfg;
}

Json solution_json(const Solution& s) {
  return Json{{"y", complex_vector(s.y)},
              {"residual", s.residual},
              {"is_real", s.is_real},
              {"is_singular_on_C", s.is_singular_on_C},
              {"on_discriminant", s.on_discriminant},
              {"system_singular", s.system_singular},
              {"multiplicity", s.multiplicity},
              {"lifts", s.lifts},
              {"path_id", s.path_id},
              {"newton_iterations", s.newton_iterations},
              {"last_step_ratio", s.last_step_ratio}};
}

Json solve_json(const SolveReport& r, const CriticalSystem& s) {
  Json sols = Json::array();
  for (const auto& sol : r.solutions) sols.push_back(solution_json(sol));
  return Json{{"bezout", s.bezout},
              {"paths", r.paths},
              {"finite_endpoints", r.finite_endpoints},
              {"diverged", r.diverged},
              {"failed", r.failed},
              {"spurious_filtered", r.spurious_filtered},
              {"smooth_count", r.smooth_count()},
              {"solutions", sols}};
}

Json degree_json(const DegreeReport& r) {
  Json dist = Json::object();
  for (const auto& [count, freq] : r.real_count_distribution) dist[std::to_string(count)] = freq;
  Json j{{"formulation", std::string(to_string(r.formulation))},
         {"bezout", r.bezout},
         {"trial_counts", r.trial_counts},
         {"delta_hat", r.delta_hat ? Json(*r.delta_hat) : Json(nullptr)},
         {"stability", r.stability},
         {"real_counts", r.real_counts},
         {"real_count_distribution", dist},
         {"sigma1_degree", r.sigma1_degree ? Json(*r.sigma1_degree) : Json(nullptr)},
         {"path_failures", r.path_failures},
         {"failed_trials", r.failed_trials},
         {"seed", r.seed},
         {"trial_seeds", r.trial_seeds}};
  if (r.monodromy) {
    const auto& m = *r.monodromy;
    j["monodromy"] = Json{{"x0", m.x0},
                          {"fiber_size", m.fiber_size},
                          {"real_indices", m.real_indices},
                          {"orbits", m.orbits},
                          {"group_size", m.group_size},
                          {"group_size_capped", m.group_size_capped},
                          {"loops_completed", m.loops_completed},
                          {"loops_discarded", m.loops_discarded},
                          {"stable", m.stable}};
  }
  return j;
}

Json approx_json(const ApproxResult& r) {
  Json cands = Json::array();
  for (const auto& c : r.candidates) {
    cands.push_back(Json{{"y", c.y},
                         {"distance", c.distance},
                         {"singular", c.singular},
                         {"from_perturbation", c.from_perturbation}});
  }
  return Json{{"x", r.x},
              {"best", r.best},
              {"distance", r.distance},
              {"gap", r.gap},
              {"unique", r.unique},
              {"best_singular", r.best_singular},
              {"path_failures", r.path_failures},
              {"candidates", cands},
              {"notes", r.notes}};
}

Json probe_json(const ProbeReport& r) {
  return Json{{"samples", r.samples},
              {"unique_count", r.unique_count},
              {"unique_fraction", r.unique_fraction},
              {"failures", r.failures},
              {"near_ties", r.near_ties},
              {"near_tie_gaps", r.near_tie_gaps}};
}

Json validate_json(const Problem& p, const CriticalSystem& s) {
  Json eqs = Json::array();
  const auto names = s.variable_names();
  for (const auto& e : s.equations) eqs.push_back(to_string(e, names));
  return Json{{"ok", true},
              {"formulation", std::string(to_string(s.formulation))},
              {"norm", p.norm.describe()},
              {"unknowns", s.unknowns},
              {"parameters", s.parameters},
              {"equations", eqs},
              {"squared_up", s.squared_up()},
              {"bezout", s.bezout}};
}

const std::vector<double>& require_x(const Problem& p, const Flags& f) {
  if (f.x) return *f.x;
  if (p.x) return *p.x;
  throw ProblemError({Diagnostic{"x", "this command needs a query point (problem field x or --x)",
                       std::nullopt}});
}

}  // namespace

ProblemError::ProblemError(std::vector<Diagnostic> diags)
    : ValidationError(join_messages(diags)), diags_(std::move(diags)) {}

Problem parse_problem(const Json& doc) {
  std::vector<Diagnostic> diags;
  if (!doc.is_object()) throw ProblemError({Diagnostic{"", "problem file must be a JSON object", std::nullopt}});

  std::size_t n = 0;
  std::size_t codim = 0;
  if (!doc.contains("n") || !doc["n"].is_number_unsigned()) {
    diags.push_back({"n", "required non-negative integer", std::nullopt});
  } else {
    n = doc["n"].get<std::size_t>();
  }
  if (!doc.contains("codim") || !doc["codim"].is_number_unsigned()) {
    diags.push_back({"codim", "required non-negative integer", std::nullopt});
  } else {
    codim = doc["codim"].get<std::size_t>();
  }
  const std::string name = doc.value("name", std::string("C"));

  std::vector<Polynomial> gens;
  if (!doc.contains("generators") || !doc["generators"].is_array() || doc["generators"].empty()) {
    diags.push_back({"generators", "required non-empty array of polynomial texts", std::nullopt});
  } else if (n > 0) {
    std::vector<std::string> vars;
    for (std::size_t i = 1; i <= n; ++i) vars.push_back("y" + std::to_string(i));
    for (std::size_t i = 0; i < doc["generators"].size(); ++i) {
      const auto& g = doc["generators"][i];
      const std::string field = "generators[" + std::to_string(i) + "]";
      if (!g.is_string()) {
        diags.push_back({field, "must be a string", std::nullopt});
        continue;
      }
      try {
        gens.push_back(parse_polynomial(g.get<std::string>(), vars));
      } catch (const ParseError& e) {
        diags.push_back({field, e.what(), e.position()});
      }
    }
  }

  std::optional<NormSpec> norm;
  if (!doc.contains("norm")) {
    diags.push_back({"norm", "required", std::nullopt});
  } else {
    norm = parse_norm(doc["norm"], n, diags);
  }

  Formulation formulation = Formulation::Auto;
  if (doc.contains("formulation")) {
    try {
      formulation = formulation_from_string(doc["formulation"].get<std::string>());
    } catch (const std::exception& e) {
      diags.push_back({"formulation", e.what(), std::nullopt});
    }
  }

  std::optional<std::vector<double>> x;
  if (doc.contains("x") && !doc["x"].is_null()) {
    x = number_list(doc["x"], "x", diags);
    if (n > 0 && x->size() != n) {
      diags.push_back({"x", "length " + std::to_string(x->size()) + " differs from n = " +
                                std::to_string(n), std::nullopt});
    }
  }
  std::vector<std::vector<double>> probe_points;
  if (doc.contains("probe_points")) {
    if (!doc["probe_points"].is_array()) {
      diags.push_back({"probe_points", "must be an array of points", std::nullopt});
    } else {
      for (const auto& pt : doc["probe_points"]) {
        probe_points.push_back(number_list(pt, "probe_points", diags));
        if (n > 0 && probe_points.back().size() != n) {
          diags.push_back({"probe_points", "point length differs from n", std::nullopt});
        }
      }
    }
  }

  TrackingConfig cfg;
  double gap_tol = 1e-6;
  if (doc.contains("config")) apply_config(doc["config"], cfg, gap_tol, diags);
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    diags.push_back({"config", e.what(), std::nullopt});
  }

  std::optional<VarietySpec> variety;
  if (diags.empty()) {
    try {
      variety.emplace(n, gens, codim, name);
    } catch (const ValidationError& e) {
      diags.push_back({"variety", e.what(), std::nullopt});
    }
  }
  if (variety && norm) {
    try {
      formulation = resolve_formulation(*variety, *norm, formulation);
    } catch (const ValidationError& e) {
      diags.push_back({"formulation", e.what(), std::nullopt});
    }
  }
  if (!diags.empty()) throw ProblemError(std::move(diags));

  return Problem{name,          std::move(*variety), std::move(*norm), formulation, x,
                 probe_points, cfg,                  gap_tol,          doc};
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError({Diagnostic{"path", "cannot read problem file " + path, std::nullopt}});
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ProblemError({Diagnostic{"json", e.what(), e.byte}});
  }
  return parse_problem(doc);
}

std::string dump(const Json& j) {
  std::string out;
  write(out, j, 0);
  out += "\n";
  return out;
}

int run(const std::string& command, const std::string& problem_path, const Flags& flags,
        std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  Json report{{"tool", "distdeg"}, {"version", kVersion}, {"command", command},
              {"seed", flags.seed}};
  int code = kOk;
  std::vector<std::string> warnings;

  auto fail = [&](int exit_code, const std::string& kind, const std::string& message) {
    report["error"] = Json{{"kind", kind}, {"message", message}};
    code = exit_code;
  };

  try {
    const Problem p = load_problem(problem_path);
    report["problem"] = p.echo;
    const TrackingConfig cfg = effective_config(p, flags);
    ApproxOptions aopts;
    aopts.gap_tol = p.gap_tol;
    aopts.seed = flags.seed;
    aopts.formulation = p.formulation;

    if (command == "validate") {
      const auto s = build_system(p.variety, p.norm, p.formulation, flags.seed);
      report["result"] = validate_json(p, s);
    } else if (command == "solve") {
      const auto& x = require_x(p, flags);
      const auto s = build_system(p.variety, p.norm, p.formulation, flags.seed);
      const auto r = solve_at(s, std::span<const double>(x), cfg);
      report["result"] = solve_json(r, s);
      warnings = r.warnings;
    } else if (command == "degree") {
      DegreeOptions opts;
      opts.trials = flags.trials;
      opts.loops = flags.loops;
      opts.seed = flags.seed;
      opts.formulation = p.formulation;
      const auto r = nu_distance_degree(p.variety, p.norm, opts, cfg);
      report["result"] = degree_json(r);
      warnings = r.warnings;
      if (!r.delta_hat) fail(kSolverFailure, "unstable", "fiber counts unstable; no degree claimed");
    } else if (command == "approx") {
      const auto& x = require_x(p, flags);
      const auto r = best_approximation(p.variety, p.norm, x, cfg, aopts);
      report["result"] = approx_json(r);
    } else if (command == "probe") {
      const auto r =
          p.probe_points.empty()
              ? uniqueness_probe(p.variety, p.norm, flags.samples, flags.scale, flags.seed, cfg,
                                 aopts)
              : uniqueness_probe(p.variety, p.norm, p.probe_points, cfg, aopts);
      report["result"] = probe_json(r);
    } else {
      fail(kInvalid, "usage", "unknown command \"" + command + "\"");
    }
  } catch (const ProblemError& e) {
    Json diags = Json::array();
    for (const auto& d : e.diagnostics()) diags.push_back(diagnostic_json(d));
    fail(kInvalid, "validation", e.what());
    report["error"]["diagnostics"] = diags;
  } catch (const ParseError& e) {
    fail(kInvalid, "parse", e.what());
    report["error"]["position"] = e.position();
  } catch (const ValidationError& e) {
    fail(kInvalid, "validation", e.what());
  } catch (const PathFailureError& e) {
    fail(kSolverFailure, "path_failure", e.what());
    report["error"]["paths"] = e.report().paths;
    report["error"]["failed"] = e.report().failed;
  } catch (const SolverError& e) {
    fail(kSolverFailure, "solver", e.what());
  } catch (const std::domain_error& e) {
    fail(kSolverFailure, "domain", e.what());
  }

  report["warnings"] = warnings;
  if (flags.timing) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    report["timing_seconds"] = elapsed.count();
  }
  out << dump(report);
  return code;
}

}  // namespace distdeg::app
