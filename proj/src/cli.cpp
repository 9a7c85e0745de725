#include "choquard/cli.hpp"

#include "choquard/config.hpp"
#include "choquard/errors.hpp"
#include "choquard/parallel.hpp"
#include "choquard/report_io.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

namespace chq {

namespace {

struct Flags {
  std::string command;
  std::string config;
  std::string out;
  std::string state;
  int threads = 0;
};

class Context {
public:
  Context(RunConfig cfg, std::ostream& out) : m_cfg(std::move(cfg)), m_out(out) {}

  const RunConfig& cfg() const { return m_cfg; }
  const ProblemParams& params() const { return m_cfg.params; }
  std::ostream& out() { return m_out; }

  const GridPtr& grid() {
    if (!m_grid)
      m_grid = make_grid(m_cfg.grid);
    return m_grid;
  }
  const RieszKernel& kernel() {
    if (!m_kernel)
      m_kernel = cached_kernel(grid(), to_double(m_cfg.params.alpha), m_cfg.kernel_cache);
    return *m_kernel;
  }
  RunStamp stamp() { return make_stamp(m_cfg, m_kernel ? m_kernel->meta().hash : 0); }

  GNConstants gn() {
    if (m_gn)
      return *m_gn;
    GNConstants g;
    if (gn_fully_supplied(m_cfg)) {
      g.c_pq = *m_cfg.gn_pq;
      g.c_r1 = *m_cfg.gn_r1;
      g.c_r2 = *m_cfg.gn_r2;
      g.provenance = Provenance::UserSupplied;
    } else {
      const auto est = [&](const std::optional<double>& given, GNWhich which) {
        return given ? *given : estimate_gn_constant(kernel(), params(), which, m_cfg.solver).constant;
      };
      g.c_pq = est(m_cfg.gn_pq, GNWhich::PQ);
      g.c_r1 = est(m_cfg.gn_r1, GNWhich::R1);
      g.c_r2 = params().r2 == params().r1 && !m_cfg.gn_r2 ? g.c_r1 : est(m_cfg.gn_r2, GNWhich::R2);
      g.provenance = Provenance::Estimated;
    }
    m_gn = g;
    return g;
  }

  std::string path(const std::string& name) const {
    return (std::filesystem::path(m_cfg.out_dir) / name).string();
  }
  void json(const std::string& name, const std::string& key, const Json& payload) {
    write_file(path(name), stamped_json(stamp(), key, payload));
  }
  void csv(const std::string& name, const std::string& body) {
    write_file(path(name), stamped_csv(stamp(), body));
  }

private:
  RunConfig m_cfg;
  std::ostream& m_out;
  GridPtr m_grid;
  std::optional<RieszKernel> m_kernel;
  std::optional<GNConstants> m_gn;
};

FiberWindow window_of(const RunConfig& c) { return {c.t_min, c.t_max, c.t_samples}; }

//! A SolveReport-shaped summary of a given state, for verification without a solve.
SolveReport describe_state(const StatePair& st, const ProblemParams& P, const RieszKernel& K,
                           const FiberWindow& w) {
  SolveReport rep;
  rep.regime = classify_regime(P);
  rep.state = st;
  const auto ev = evaluate(st, P, K);
  rep.breakdown = ev.breakdown;
  rep.mu = multipliers(st, ev.gradient);
  rep.residual = el_residual(st, ev.gradient, rep.mu, ev.breakdown.T);
  rep.fiber_critical = fiber_critical_points(FiberMap<double>::from(rep.breakdown, P), w);
  for (const auto& c : rep.fiber_critical)
    if (!rep.fiber_point || std::abs(std::log(c.t)) < std::abs(std::log(rep.fiber_point->t)))
      rep.fiber_point = c;
  rep.verdict = Verdict::Converged;
  rep.message = "state supplied, not solved";
  return rep;
}

//==============================================================================
int cmd_classify(Context& cx) {
  const auto r = classify_regime(cx.params());
  cx.json("classify.json", "regime", to_json(r));
  cx.out() << to_string(r.theorem_id) << ' ' << to_string(r.character) << '\n';
  return 0;
}

int cmd_thresholds(Context& cx) {
  const auto th = compute_thresholds(cx.params(), cx.gn());
  cx.json("thresholds.json", "thresholds", to_json(th));
  cx.csv("landscape.csv",
         landscape_csv(th, cx.params(), cx.cfg().s_min, cx.cfg().s_max, cx.cfg().s_samples));
  cx.out() << to_string(th.regime.theorem_id) << ' ' << to_string(th.shape);
  if (th.nonexistence_value)
    cx.out() << " nonexistence_value=" << *th.nonexistence_value;
  cx.out() << '\n';
  for (const auto& n : th.notes)
    cx.out() << "note: " << n << '\n';
  return th.side_conditions_hold() ? 0 : 4;
}

int cmd_hscan(Context& cx) {
  const auto th = compute_thresholds(cx.params(), cx.gn());
  cx.csv("hscan.csv",
         landscape_csv(th, cx.params(), cx.cfg().s_min, cx.cfg().s_max, cx.cfg().s_samples));
  cx.out() << cx.path("hscan.csv") << '\n';
  return 0;
}

int cmd_solve(Context& cx) {
  const auto regime = classify_regime(cx.params());
  if (regime.character == Character::Nonexistence)
    throw LabError(ErrorCode::WrongRegime, "no existence claim; run nonexistence scan");
  const auto gn = cx.gn();
  const auto th = compute_thresholds(cx.params(), gn);
  if (!th.side_conditions_hold() && !cx.cfg().allow_side_violation) {
    cx.json("thresholds.json", "thresholds", to_json(th));
    throw LabError(ErrorCode::SideConditionViolated,
                   "side conditions do not hold (see thresholds.json); "
                   "set allow_side_violation = true to solve anyway");
  }
  const auto rep = solve(cx.params(), cx.kernel(), cx.cfg().solver, gn);
  const auto ver = verify_solution(rep, th, cx.params());
  Json payload{{"solve", to_json(rep)}, {"verification", to_json(ver)}, {"thresholds", to_json(th)}};
  cx.json("solve.json", "result", payload);
  cx.csv("iterations.csv", to_csv(rep.log));
  cx.csv("state.csv", state_csv(rep.state));
  cx.csv("fiber.csv", to_csv(fiber(rep.breakdown, cx.params(), window_of(cx.cfg()))));
  cx.out() << to_string(rep.verdict) << " J=" << rep.breakdown.J
           << " P/T=" << rep.breakdown.P / rep.breakdown.T << " residual=" << rep.residual
           << " checks=" << (ver.all_pass() ? "pass" : "fail") << '\n';
  return rep.verdict == Verdict::Converged ? 0 : 3;
}

StatePair state_or_ansatz(Context& cx, const std::string& path) {
  if (!path.empty())
    return read_state(path, cx.grid());
  return init_ansatz(cx.grid(), cx.params(), cx.cfg().solver);
}

int cmd_fiber(Context& cx, const std::string& state_path) {
  const auto st = state_or_ansatz(cx, state_path);
  const auto b = energy(st, cx.params(), cx.kernel());
  const auto prof = fiber(b, cx.params(), window_of(cx.cfg()));
  Json crit = Json::array();
  for (const auto& c : prof.critical)
    crit.push_back(to_json(c));
  cx.json("fiber.json", "fiber",
          Json{{"breakdown", to_json(b)},
               {"critical", crit},
               {"expected_signs", prof.expected_signs},
               {"matches_prediction", prof.matches_prediction},
               {"note", prof.note}});
  cx.csv("fiber.csv", to_csv(prof));
  cx.out() << prof.critical.size() << " critical point(s)"
           << (prof.matches_prediction ? "" : " (differs from prediction)") << '\n';
  return 0;
}

int cmd_gn(Context& cx) {
  Json rows = Json::array();
  GNConstants g;
  g.provenance = gn_fully_supplied(cx.cfg()) ? Provenance::UserSupplied : Provenance::Estimated;
  for (GNWhich w : {GNWhich::PQ, GNWhich::R1, GNWhich::R2}) {
    const auto& given = w == GNWhich::PQ ? cx.cfg().gn_pq
                        : w == GNWhich::R1 ? cx.cfg().gn_r1
                                           : cx.cfg().gn_r2;
    double c = 0.0;
    if (given) {
      c = *given;
      rows.push_back({{"which", to_string(w)}, {"constant", c}, {"source", "override"}});
    } else {
      const auto e = estimate_gn_constant(cx.kernel(), cx.params(), w, cx.cfg().solver);
      c = e.constant;
      rows.push_back({{"which", to_string(w)},
                      {"constant", c},
                      {"min_quotient", e.min_quotient},
                      {"family_quotient", e.family_quotient},
                      {"refinement_steps", e.refinement_steps},
                      {"source", "estimate (lower bound)"}});
    }
    (w == GNWhich::PQ ? g.c_pq : w == GNWhich::R1 ? g.c_r1 : g.c_r2) = c;
  }
  cx.json("gn.json", "gn", Json{{"constants", to_json(g)}, {"details", rows}});
  cx.out() << "c_pq=" << g.c_pq << " c_r1=" << g.c_r1 << " c_r2=" << g.c_r2 << '\n';
  return 0;
}

int cmd_verify(Context& cx, const std::string& state_path) {
  const auto regime = classify_regime(cx.params());
  if (regime.character == Character::Nonexistence) {
    const auto states = random_trial_states(cx.grid(), cx.params(), cx.cfg().scan_states,
                                            cx.cfg().scan_seed);
    const auto scan = nonexistence_scan(cx.params(), cx.kernel(), states, window_of(cx.cfg()));
    const auto gn = cx.gn();
    cx.json("verify.json", "nonexistence_scan",
            Json{{"inequality_value", nonexistence_value(cx.params(), gn)},
                 {"gn", to_json(gn)},
                 {"scan", to_json(scan)}});
    cx.out() << (scan.all_positive ? "all fibers Pohozaev-positive" : "witness found") << '\n';
    return scan.all_positive ? 0 : 3;
  }
  if (state_path.empty())
    throw LabError(ErrorCode::InvalidInput, "verify needs --state outside the nonexistence regime");
  const auto st = read_state(state_path, cx.grid());
  ProblemParams P = cx.params();
  if (std::abs(st.rho1 - P.rho1) > 1e-8 * P.rho1 || std::abs(st.rho2 - P.rho2) > 1e-8 * P.rho2)
    throw LabError(ErrorCode::InvalidInput, "state masses differ from rho1, rho2");
  const auto rep = describe_state(st, P, cx.kernel(), window_of(cx.cfg()));
  const auto th = compute_thresholds(P, cx.gn());
  const auto ver = verify_solution(rep, th, P);
  cx.json("verify.json", "verification",
          Json{{"state", to_json(rep)}, {"verification", to_json(ver)}});
  for (const auto& c : ver.checks)
    cx.out() << c.name << ' ' << (!c.applicable ? "n/a" : c.pass ? "pass" : "fail") << '\n';
  return ver.all_pass() ? 0 : 3;
}

ProbeRow cell(double rho1, double rho2, double beta) {
  ProbeRow r;
  r.rho1 = rho1;
  r.rho2 = rho2;
  r.beta = beta;
  return r;
}

int cmd_probe(Context& cx) {
  const auto& c = cx.cfg();
  const auto& P = c.params;
  std::vector<ProbeRow> cells;
  for (std::size_t i = 0; i < c.probe_rho1.size(); ++i)
    cells.push_back(cell(c.probe_rho1[i], c.probe_rho2[i], P.beta));
  for (double b : c.probe_beta)
    cells.push_back(cell(P.rho1, P.rho2, b));
  if (cells.empty())
    cells.push_back(cell(P.rho1, P.rho2, P.beta));
  const auto rows = mass_monotonicity_probe(P, cx.kernel(), c.solver, cx.gn(), cells);
  cx.json("probe.json", "probe", to_json(rows));
  cx.csv("probe.csv", probe_csv(rows));
  bool ok = true;
  for (const auto& r : rows) {
    cx.out() << r.rho1 << ' ' << r.rho2 << ' ' << r.beta << " m=" << r.m << ' '
             << to_string(r.verdict) << (r.error.empty() ? "" : " " + r.error) << '\n';
    ok = ok && r.error.empty() && r.verdict == Verdict::Converged;
  }
  return ok ? 0 : 3;
}

} // namespace

//==============================================================================
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normalized solutions of coupled Choquard systems"};
  app.require_subcommand(1);
  Flags f;
  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "key = value configuration file");
    sub->add_option("--out", f.out, "output directory (overrides out_dir)");
    sub->add_option("--threads", f.threads, "worker threads (overrides threads)")
        ->check(CLI::PositiveNumber);
  };
  for (const char* name : {"classify", "thresholds", "solve", "hscan", "gn", "probe"}) {
    auto* sub = app.add_subcommand(name);
    common(sub);
  }
  for (const char* name : {"fiber", "verify"}) {
    auto* sub = app.add_subcommand(name);
    common(sub);
    sub->add_option("--state", f.state, "state CSV (r,u,v) on the configured grid");
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  f.command = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg = f.config.empty() ? parse_config("") : load_config(f.config);
    if (!f.out.empty())
      cfg.out_dir = f.out;
    if (f.threads > 0)
      cfg.threads = f.threads;
    parallel::set_threads(cfg.threads);
    Context cx(std::move(cfg), out);
    if (f.command == "classify")
      return cmd_classify(cx);
    if (f.command == "thresholds")
      return cmd_thresholds(cx);
    if (f.command == "solve")
      return cmd_solve(cx);
    if (f.command == "fiber")
      return cmd_fiber(cx, f.state);
    if (f.command == "hscan")
      return cmd_hscan(cx);
    if (f.command == "gn")
      return cmd_gn(cx);
    if (f.command == "verify")
      return cmd_verify(cx, f.state);
    return cmd_probe(cx);
  } catch (const LabError& e) {
    err << "error: " << e.what() << '\n';
    return exit_status(e.code());
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i)
    args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

} // namespace chq
