#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfuse/error.hpp"
#include "cfuse/localglue.hpp"
#include "cfuse/perturb.hpp"
#include "cfuse/qdual.hpp"
#include "cfuse/scenario.hpp"
#include "digest.hpp"
#include "report.hpp"

namespace cfuse::cli {
namespace {

struct Options {
  std::string scenario;
  std::string json_out;
  std::string emit;
  Tolerances tol;
  std::uint64_t seed = 0;
  int trials = 1000;
  double lam = 0.0;
  double eps = 0.0;
};

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotAFrame:
      return kNotAFrame;
    case ErrorKind::ShapeMismatch:
    case ErrorKind::DimensionMismatch:
      return kShape;
    case ErrorKind::NotADual:
      return kVerdictFalse;
    default:
      return kParse;
  }
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json bounds_section(const CFusionFrame& f, const Tolerances& tol) {
  Json j = bounds_json(frame_bounds(f, tol));
  j["ambient_dim"] = f.ambient_dim();
  j["atoms"] = f.size();
  return j;
}

Json verdict(int code, const std::string& reason) {
  return Json{{"passed", code == kOk}, {"exit_code", code}, {"reason", reason}};
}

// A command body fills "parameters" and "results" and returns the exit code.
using Body = std::function<int(const ScenarioFile*, const Options&, Json& report)>;

int run(const std::string& command, const Options& o, bool needs_scenario, const Body& body) {
  Json report;
  report["schema"] = kReportSchema;
  report["command"] = command;
  int code = kOk;
  try {
    o.tol.validate();
    report["tolerances"] = tolerances_json(o.tol);
    std::optional<ScenarioFile> scenario;
    if (needs_scenario) {
      const std::string bytes = read_bytes(o.scenario);
      report["input"] = Json{{"path", o.scenario}, {"sha256", sha256_hex(bytes)}};
      scenario = parse_scenario(bytes);
    }
    code = body(scenario ? &*scenario : nullptr, o, report);
  } catch (const Error& e) {
    code = exit_code_for(e.kind());
    report["error"] = Json{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    report["verdict"] = verdict(code, "error");
    std::cerr << "cfuse " << command << ": " << e.what() << "\n";
  }

  render_text(std::cout, report);
  if (!o.json_out.empty()) {
    std::ofstream out(o.json_out, std::ios::binary);
    out << report.dump(2) << "\n";
    if (!out) {
      std::cerr << "cfuse " << command << ": cannot write '" << o.json_out << "'\n";
      return kParse;
    }
  }
  return code;
}

int cmd_bounds(const ScenarioFile* s, const Options& o, Json& report) {
  const CFusionFrame f = scenario_frame(*s, o.tol);
  const FrameBounds b = frame_bounds(f, o.tol);
  report["results"]["frame"] = bounds_section(f, o.tol);
  if (s->dual) report["results"]["dual"] = bounds_section(scenario_dual(*s, o.tol), o.tol);
  const int code = b.is_frame() ? kOk : kNotAFrame;
  report["verdict"] = verdict(code, b.parseval ? "Parseval" : std::string(to_string(b.classification)));
  return code;
}

Json dimension_json(const DimensionCheck& d) {
  return Json{{"lower_bound", d.lower_bound}, {"upper_bound", d.upper_bound}, {"lhs", d.lhs},
              {"mid", d.mid},                 {"rhs", d.rhs},                 {"weight_mass", d.weight_mass},
              {"holds_first", d.holds_first}, {"holds_second", d.holds_second}};
}

int cmd_verify_dual(const ScenarioFile* s, const Options& o, Json& report) {
  const CFusionFrame f = scenario_frame(*s, o.tol);
  const CFusionFrame g = scenario_dual(*s, o.tol);
  const QOperator q = scenario_q(*s, f, g);
  ProbeOptions probes;
  probes.seed = o.seed;
  report["parameters"] = Json{{"seed", o.seed}, {"probe_pairs", probes.pairs}, {"probe_slack", probes.slack}};
  const DualityReport r = verify_duality(f, g, q, o.tol, probes);
  Json& res = report["results"];
  res["residual"] = r.residual;
  res["is_dual"] = r.is_dual;
  res["q_norm"] = r.q_norm;
  res["conditions"] = conditions_json(r.conditions);
  if (r.is_dual) {
    const NormFloor nf = q_norm_floor(f, g, q, o.tol);
    res["norm_floor"] = Json{{"q_norm", nf.q_norm}, {"floor", nf.floor}, {"holds", nf.holds}};
  }
  res["dimension_lemma"] = dimension_json(dimension_check(f, o.tol));
  const int code = r.is_dual ? kOk : kVerdictFalse;
  report["verdict"] = verdict(code, r.is_dual ? "dual" : "not dual");
  return code;
}

int cmd_solve_q(const ScenarioFile* s, const Options& o, Json& report) {
  const CFusionFrame f = scenario_frame(*s, o.tol);
  const CFusionFrame g = scenario_dual(*s, o.tol);
  const QSolution sol = solve_q(f, g, o.tol);
  Json& res = report["results"];
  res["unknowns"] = sol.unknowns;
  res["constraint_rank"] = sol.constraint_rank;
  res["nullspace_dim"] = sol.nullspace_dim;
  res["unique"] = sol.unique;
  res["consistent"] = sol.particular.has_value();
  res["residual"] = sol.residual;
  res["uniqueness_hypothesis"] = uniqueness_hypothesis(f, g, o.tol);
  if (sol.particular) {
    res["q_norm"] = spectral_norm(sol.particular->matrix());
    if (!o.emit.empty()) {
      write_scenario_file(o.emit, make_scenario(f, &g, &*sol.particular));
      res["emitted"] = o.emit;
    }
  }
  const int code = sol.particular ? kOk : kVerdictFalse;
  report["verdict"] = verdict(code, sol.particular ? "consistent" : "no Q makes G a dual of F");
  return code;
}

int cmd_canonical(const ScenarioFile* s, const Options& o, Json& report) {
  const CFusionFrame f = scenario_frame(*s, o.tol);
  const CanonicalDual c = canonical_qdual(f, o.tol);
  const DualityReport r = verify_duality(f, c.dual, c.q, o.tol);
  Json& res = report["results"];
  Json dims = Json::array();
  for (const Subspace& sub : c.dual.fibers()) dims.push_back(sub.dim());
  res["dual_fiber_dims"] = std::move(dims);
  res["dual_bounds"] = bounds_json(frame_bounds(c.dual, o.tol));
  res["q_norm"] = r.q_norm;
  res["residual"] = r.residual;
  if (!o.emit.empty()) {
    write_scenario_file(o.emit, make_scenario(f, &c.dual, &c.q));
    res["emitted"] = o.emit;
  }
  const int code = r.is_dual ? kOk : kVerdictFalse;
  report["verdict"] = verdict(code, r.is_dual ? "dual" : "canonical dual failed verification");
  return code;
}

int cmd_perturb(const ScenarioFile* s, const Options& o, Json& report) {
  const CFusionFrame f = scenario_frame(*s, o.tol);
  const CFusionFrame g = scenario_dual(*s, o.tol);
  const QOperator q = scenario_q(*s, f, g);
  report["parameters"] = Json{{"lam", o.lam}, {"eps", o.eps}, {"trials", o.trials}, {"seed", o.seed}};
  const PerturbationReport r = perturbation_check(f, g, q, {o.lam, o.eps}, o.trials, o.seed, o.tol);
  Json& res = report["results"];
  res["hypothesis_margin"] = r.hypothesis_margin;
  res["probe_violations"] = r.probe_violations;
  res["max_probe_excess"] = r.max_probe_excess;
  res["deviation"] = r.deviation;
  res["guaranteed_lower"] = r.guaranteed_lower;
  res["actual_lower"] = r.actual_lower;
  res["pinv_norm"] = r.pinv_norm;
  res["sound_lower"] = r.sound_lower;
  res["concluded"] = r.concluded;
  res["cross_check"] = !r.concluded || r.actual_lower >= r.guaranteed_lower - 1e-8;
  const int code = r.concluded ? kOk : kVerdictFalse;
  report["verdict"] = verdict(code, r.reason);
  return code;
}

int cmd_glue(const ScenarioFile* s, const Options& o, Json& report) {
  const LocalFrameFamily l = scenario_local_family(*s, false, o.tol);
  const CFusionFrame f = scenario_frame(*s, o.tol);
  const GlueReport g = glue_report(l, f.weights(), o.tol);
  const EquivalenceProbe eq = equivalence_probe(l, f.weights(), o.tol);
  Json& res = report["results"];
  res["local_lower"] = g.local_lower;
  res["local_upper"] = g.local_upper;
  res["cfusion"] = bounds_json(g.cfusion);
  res["glued"] = bounds_json(g.glued);
  res["sandwich_holds"] = g.sandwich_holds;
  res["equivalence"] = Json{{"cfusion_is_frame", eq.cfusion_is_frame}, {"glued_is_frame", eq.glued_is_frame},
                            {"agree", eq.agree}};
  bool local_duals_ok = true;
  if (s->local_families && s->local_families->dual && s->dual) {
    const LocalFrameFamily lg = scenario_local_family(*s, true, o.tol);
    const CFusionFrame gd = scenario_dual(*s, o.tol);
    const QOperator q = q_from_local_duals(l, lg);
    const DualityReport r = verify_duality(f, gd, q, o.tol);
    res["local_duals"] = Json{{"residuals", local_dual_pair_residuals(l, f.weights(), lg, gd.weights())},
                              {"assembled_residual", r.residual},
                              {"is_dual", r.is_dual}};
    local_duals_ok = r.is_dual;
  }
  int code = kOk;
  std::string reason = "glued frame";
  if (!g.glued.is_frame()) {
    code = kNotAFrame;
    reason = "glued family is not a frame";
  } else if (!g.sandwich_holds || !eq.agree || !local_duals_ok) {
    code = kVerdictFalse;
    reason = !local_duals_ok ? "assembled Q is not a dual" : "bound sandwich violated";
  }
  report["verdict"] = verdict(code, reason);
  return code;
}

int cmd_selftest(const ScenarioFile*, const Options& o, Json& report) {
  const double m1 = 1.5;
  const double m2 = M_PI - 1.5;
  const ScenarioFile disk = disk_example_scenario(m1, m2);
  const std::string text = serialize_scenario(disk);
  report["input"] = Json{{"builtin", "disk_example"}, {"masses", {m1, m2}}, {"sha256", sha256_hex(text)}};
  report["parameters"] = Json{{"seed", o.seed}, {"trials", o.trials}};

  Json checks = Json::array();
  bool all = true;
  auto check = [&](const std::string& name, bool passed, Json value) {
    checks.push_back(Json{{"name", name}, {"passed", passed}, {"value", std::move(value)}});
    all = all && passed;
  };

  const ScenarioFile back = parse_scenario(text);
  check("scenario_round_trip", back == disk && serialize_scenario(back) == text, text.size());

  const CFusionFrame f = scenario_frame(back, o.tol);
  const CFusionFrame g = scenario_dual(back, o.tol);
  const QOperator q = scenario_q(back, f, g);
  const FrameBounds bf = frame_bounds(f, o.tol);
  const FrameBounds bg = frame_bounds(g, o.tol);
  check("frame_parseval", std::abs(bf.lower - 1.0) <= 1e-12 && std::abs(bf.upper - 1.0) <= 1e-12,
        bounds_json(bf));
  check("dual_parseval", std::abs(bg.lower - 1.0) <= 1e-12 && std::abs(bg.upper - 1.0) <= 1e-12,
        bounds_json(bg));

  ProbeOptions probes;
  probes.seed = o.seed;
  const DualityReport r = verify_duality(f, g, q, o.tol, probes);
  bool all_conditions = true;
  for (bool h : r.conditions.holds) all_conditions = all_conditions && h;
  check("swap_q_dual", r.residual <= 1e-12 && all_conditions, r.residual);

  const NormFloor nf = q_norm_floor(f, g, q, o.tol);
  check("norm_floor", nf.holds, Json{{"q_norm", nf.q_norm}, {"floor", nf.floor}});
  const DimensionCheck dc = dimension_check(f, o.tol);
  check("dimension_lemma", dc.holds_first && dc.holds_second, dimension_json(dc));

  const CanonicalDual c = canonical_qdual(f, o.tol);
  check("canonical_dual", verify_duality(f, c.dual, c.q, o.tol).residual <= 1e-12, spectral_norm(c.q.matrix()));

  const QSolution sol = solve_q(f, g, o.tol);
  check("solve_q_unique", sol.particular.has_value() && sol.unique &&
                              verify_duality(f, g, *sol.particular, o.tol).residual <= 1e-12,
        sol.nullspace_dim);

  const CFusionFrame scaled(f.space(), f.fibers(), WeightMap({0.9 * f.weights()[0], f.weights()[1]}));
  const QOperator id(Matrix::Identity(2, 2));
  const PerturbationReport pr = perturbation_check(f, scaled, id, {0.0, 0.1}, o.trials, o.seed, o.tol);
  check("perturbation", pr.concluded && pr.actual_lower >= pr.guaranteed_lower - 1e-8,
        Json{{"guaranteed_lower", pr.guaranteed_lower}, {"actual_lower", pr.actual_lower}});

  report["results"]["checks"] = std::move(checks);
  const int code = all ? kOk : kVerdictFalse;
  report["verdict"] = verdict(code, all ? "all checks passed" : "a check failed");
  return code;
}

void add_tolerance_flags(CLI::App* sub, Options& o) {
  sub->add_option("--tol", o.tol.residual_tol, "residual tolerance")->capture_default_str();
  sub->add_option("--rank-tol", o.tol.rank_tol, "relative singular-value cutoff")->capture_default_str();
  sub->add_option("--psd-tol", o.tol.psd_tol, "lower-bound threshold for frame classification")
      ->capture_default_str();
  sub->add_option("--json", o.json_out, "write the machine-readable report here");
}

CLI::App* scenario_command(CLI::App& app, const std::string& name, const std::string& help, Options& o) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("scenario", o.scenario, "scenario file (.cfuse.json)")->required();
  add_tolerance_flags(sub, o);
  return sub;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"c-fusion frames over finite atomic measure spaces"};
  app.require_subcommand(1);
  Options o;

  struct Entry {
    CLI::App* sub;
    bool needs_scenario;
    Body body;
  };
  std::vector<Entry> entries;

  entries.push_back({scenario_command(app, "bounds", "optimal frame bounds and classification", o), true, cmd_bounds});

  CLI::App* verify = scenario_command(app, "verify-dual", "check that (G, Q) is a Q-dual of F", o);
  verify->add_option("--seed", o.seed, "seed for the probe pairs")->default_val(kDefaultProbeSeed);
  entries.push_back({verify, true, cmd_verify_dual});

  CLI::App* solve = scenario_command(app, "solve-q", "solve T_G Q T_F^* = I for Q", o);
  solve->add_option("--emit", o.emit, "write F, G and the minimal-norm Q as a scenario");
  entries.push_back({solve, true, cmd_solve_q});

  CLI::App* canon = scenario_command(app, "canonical-dual", "canonical dual S^{-1} F and its Q", o);
  canon->add_option("--emit", o.emit, "write F, the canonical dual and Q as a scenario");
  entries.push_back({canon, true, cmd_canonical});

  CLI::App* perturb = scenario_command(app, "perturb", "perturbation test of G against F", o);
  perturb->add_option("--lam", o.lam, "lambda")->default_val(0.0)->check(CLI::NonNegativeNumber);
  perturb->add_option("--eps", o.eps, "eps")->default_val(0.0)->check(CLI::NonNegativeNumber);
  perturb->add_option("--trials", o.trials, "number of random probes")->default_val(1000)->check(CLI::NonNegativeNumber);
  perturb->add_option("--seed", o.seed, "probe seed")->default_val(1);
  entries.push_back({perturb, true, cmd_perturb});

  entries.push_back({scenario_command(app, "glue", "glue local continuous frames along F", o), true, cmd_glue});

  CLI::App* self = app.add_subcommand("selftest", "run the built-in disk example end to end");
  add_tolerance_flags(self, o);
  self->add_option("--seed", o.seed, "probe seed")->default_val(1);
  self->add_option("--trials", o.trials, "number of perturbation probes")->default_val(1000)->check(CLI::NonNegativeNumber);
  entries.push_back({self, false, cmd_selftest});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  for (const Entry& e : entries) {
    if (e.sub->parsed()) return run(e.sub->get_name(), o, e.needs_scenario, e.body);
  }
  return kParse;
}

}  // namespace cfuse::cli

int main(int argc, char** argv) { return cfuse::cli::run_cli(argc, argv); }
