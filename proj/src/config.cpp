#include "choquard/config.hpp"

#include "choquard/errors.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace chq {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const char* want) {
  throw LabError(ErrorCode::InvalidInput,
                 "config key '" + key + "': cannot read '" + value + "' as " + want);
}

double read_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(x))
      bad(key, v, "a finite number");
    return x;
  } catch (const std::logic_error&) {
    bad(key, v, "a finite number");
  }
}

long long read_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    bad(key, v, "an integer");
  return x;
}

bool read_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1")
    return true;
  if (v == "false" || v == "0")
    return false;
  bad(key, v, "true or false");
}

std::vector<double> read_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(read_double(key, trim(item)));
  return out;
}

std::string fmt(double x) {
  std::ostringstream o;
  o.precision(17);
  o << x;
  return o.str();
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i)
    s += (i ? "," : "") + fmt(xs[i]);
  return s;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    const auto exact = [](Exact ProblemParams::*m) {
      return [m](RunConfig& c, const std::string&, const std::string& v) {
        c.params.*m = parse_exact(v);
      };
    };
    const auto real = [](auto member) {
      return [member](RunConfig& c, const std::string& k, const std::string& v) {
        member(c) = read_double(k, v);
      };
    };
    const auto integer = [](auto member) {
      return [member](RunConfig& c, const std::string& k, const std::string& v) {
        member(c) = static_cast<std::decay_t<decltype(member(c))>>(read_int(k, v));
      };
    };
    t["N"] = integer([](RunConfig& c) -> int& { return c.params.N; });
    t["alpha"] = exact(&ProblemParams::alpha);
    t["p"] = exact(&ProblemParams::p);
    t["q"] = exact(&ProblemParams::q);
    t["r1"] = exact(&ProblemParams::r1);
    t["r2"] = exact(&ProblemParams::r2);
    t["lambda1"] = real([](RunConfig& c) -> double& { return c.params.lambda1; });
    t["lambda2"] = real([](RunConfig& c) -> double& { return c.params.lambda2; });
    t["beta"] = real([](RunConfig& c) -> double& { return c.params.beta; });
    t["kappa"] = real([](RunConfig& c) -> double& { return c.params.kappa; });
    t["rho1"] = real([](RunConfig& c) -> double& { return c.params.rho1; });
    t["rho2"] = real([](RunConfig& c) -> double& { return c.params.rho2; });

    t["R"] = real([](RunConfig& c) -> double& { return c.grid.R; });
    t["panels"] = integer([](RunConfig& c) -> int& { return c.grid.panels; });
    t["order"] = integer([](RunConfig& c) -> int& { return c.grid.order; });
    t["grading"] = real([](RunConfig& c) -> double& { return c.grid.grading; });

    t["max_iters"] = integer([](RunConfig& c) -> int& { return c.solver.max_iters; });
    t["step_init"] = real([](RunConfig& c) -> double& { return c.solver.step_init; });
    t["backtrack"] = real([](RunConfig& c) -> double& { return c.solver.backtrack; });
    t["el_tol"] = real([](RunConfig& c) -> double& { return c.solver.el_tol; });
    t["stagnation_tol"] = real([](RunConfig& c) -> double& { return c.solver.stagnation_tol; });
    t["stagnation_window"] =
        integer([](RunConfig& c) -> int& { return c.solver.stagnation_window; });
    t["precond_shift"] = real([](RunConfig& c) -> double& { return c.solver.precond_shift; });
    t["width_u"] = real([](RunConfig& c) -> double& { return c.solver.width_u; });
    t["width_v"] = real([](RunConfig& c) -> double& { return c.solver.width_v; });
    t["center_u"] = real([](RunConfig& c) -> double& { return c.solver.center_u; });
    t["center_v"] = real([](RunConfig& c) -> double& { return c.solver.center_v; });
    t["dilation_tol"] = real([](RunConfig& c) -> double& { return c.solver.dilation_tol; });
    t["seed"] = integer([](RunConfig& c) -> std::uint64_t& { return c.solver.seed; });

    t["gn_pq"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.gn_pq = read_double(k, v);
    };
    t["gn_r1"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.gn_r1 = read_double(k, v);
    };
    t["gn_r2"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.gn_r2 = read_double(k, v);
    };

    t["t_min"] = real([](RunConfig& c) -> double& { return c.t_min; });
    t["t_max"] = real([](RunConfig& c) -> double& { return c.t_max; });
    t["t_samples"] = integer([](RunConfig& c) -> int& { return c.t_samples; });
    t["s_min"] = real([](RunConfig& c) -> double& { return c.s_min; });
    t["s_max"] = real([](RunConfig& c) -> double& { return c.s_max; });
    t["s_samples"] = integer([](RunConfig& c) -> int& { return c.s_samples; });
    t["probe_rho1"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.probe_rho1 = read_list(k, v);
    };
    t["probe_rho2"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.probe_rho2 = read_list(k, v);
    };
    t["probe_beta"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.probe_beta = read_list(k, v);
    };
    t["scan_states"] = integer([](RunConfig& c) -> int& { return c.scan_states; });
    t["scan_seed"] = integer([](RunConfig& c) -> std::uint64_t& { return c.scan_seed; });
    t["allow_side_violation"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.allow_side_violation = read_bool(k, v);
    };
    t["out_dir"] = [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; };
    t["kernel_cache"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.kernel_cache = v;
    };
    t["threads"] = integer([](RunConfig& c) -> int& { return c.threads; });
    return t;
  }();
  return table;
}

void check_invariants(const RunConfig& c, std::optional<long long> M) {
  std::vector<std::string> errs;
  const auto need = [&](bool ok, const char* what) {
    if (!ok)
      errs.emplace_back(what);
  };
  const auto& s = c.solver;
  need(s.max_iters > 0, "max_iters > 0");
  need(s.step_init > 0.0, "step_init > 0");
  need(s.backtrack > 0.0 && s.backtrack < 1.0, "0 < backtrack < 1");
  need(s.el_tol > 0.0, "el_tol > 0");
  need(s.stagnation_tol > 0.0, "stagnation_tol > 0");
  need(s.stagnation_window > 0, "stagnation_window > 0");
  need(s.width_u > 0.0 && s.width_v > 0.0, "ansatz widths > 0");
  need(s.dilation_tol > 0.0, "dilation_tol > 0");
  need(c.grid.R > 0.0, "R > 0");
  need(c.grid.panels > 0 && c.grid.order > 0, "panels, order > 0");
  need(c.grid.grading >= 1.0, "grading >= 1");
  need(!M || *M == static_cast<long long>(c.grid.panels) * c.grid.order, "M = panels * order");
  need(c.t_min > 0.0 && c.t_max > c.t_min && c.t_samples >= 2, "0 < t_min < t_max, t_samples >= 2");
  need(c.s_min > 0.0 && c.s_max > c.s_min && c.s_samples >= 2, "0 < s_min < s_max, s_samples >= 2");
  need(c.probe_rho1.size() == c.probe_rho2.size(), "probe_rho1 and probe_rho2 of equal length");
  need(c.scan_states > 0, "scan_states > 0");
  need(c.threads > 0, "threads > 0");
  need(c.params.rho1 > 0.0 && c.params.rho2 > 0.0, "rho1, rho2 > 0");
  for (const auto& v : validate_params(c.params))
    errs.push_back(v);
  if (!errs.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errs)
      msg += "\n  " + e;
    throw LabError(ErrorCode::InvalidInput, msg);
  }
}

} // namespace

//==============================================================================
RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::optional<long long> M;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty())
      continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw LabError(ErrorCode::InvalidInput,
                     "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key == "M") {
      M = read_int(key, value);
      continue;
    }
    const auto it = setters().find(key);
    if (it == setters().end())
      throw LabError(ErrorCode::InvalidInput, "unknown config key '" + key + "'");
    it->second(c, key, value);
  }
  c.grid.N = c.params.N;
  if (M && *M % c.grid.order == 0)
    c.grid.panels = static_cast<int>(*M / c.grid.order);
  check_invariants(c, M);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw LabError(ErrorCode::Io, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& c) {
  const auto& P = c.params;
  const auto& s = c.solver;
  std::vector<std::pair<std::string, std::string>> e{
      {"N", std::to_string(P.N)},
      {"alpha", to_string(P.alpha)},
      {"p", to_string(P.p)},
      {"q", to_string(P.q)},
      {"r1", to_string(P.r1)},
      {"r2", to_string(P.r2)},
      {"lambda1", fmt(P.lambda1)},
      {"lambda2", fmt(P.lambda2)},
      {"beta", fmt(P.beta)},
      {"kappa", fmt(P.kappa)},
      {"rho1", fmt(P.rho1)},
      {"rho2", fmt(P.rho2)},
      {"R", fmt(c.grid.R)},
      {"M", std::to_string(c.grid.size())},
      {"panels", std::to_string(c.grid.panels)},
      {"order", std::to_string(c.grid.order)},
      {"grading", fmt(c.grid.grading)},
      {"max_iters", std::to_string(s.max_iters)},
      {"step_init", fmt(s.step_init)},
      {"backtrack", fmt(s.backtrack)},
      {"el_tol", fmt(s.el_tol)},
      {"stagnation_tol", fmt(s.stagnation_tol)},
      {"stagnation_window", std::to_string(s.stagnation_window)},
      {"precond_shift", fmt(s.precond_shift)},
      {"width_u", fmt(s.width_u)},
      {"width_v", fmt(s.width_v)},
      {"center_u", fmt(s.center_u)},
      {"center_v", fmt(s.center_v)},
      {"dilation_tol", fmt(s.dilation_tol)},
      {"seed", std::to_string(s.seed)},
  };
  if (c.gn_pq)
    e.emplace_back("gn_pq", fmt(*c.gn_pq));
  if (c.gn_r1)
    e.emplace_back("gn_r1", fmt(*c.gn_r1));
  if (c.gn_r2)
    e.emplace_back("gn_r2", fmt(*c.gn_r2));
  e.insert(e.end(), {{"t_min", fmt(c.t_min)},
                     {"t_max", fmt(c.t_max)},
                     {"t_samples", std::to_string(c.t_samples)},
                     {"s_min", fmt(c.s_min)},
                     {"s_max", fmt(c.s_max)},
                     {"s_samples", std::to_string(c.s_samples)}});
  if (!c.probe_rho1.empty())
    e.emplace_back("probe_rho1", fmt_list(c.probe_rho1));
  if (!c.probe_rho2.empty())
    e.emplace_back("probe_rho2", fmt_list(c.probe_rho2));
  if (!c.probe_beta.empty())
    e.emplace_back("probe_beta", fmt_list(c.probe_beta));
  e.insert(e.end(), {{"scan_states", std::to_string(c.scan_states)},
                     {"scan_seed", std::to_string(c.scan_seed)},
                     {"allow_side_violation", c.allow_side_violation ? "true" : "false"},
                     {"out_dir", c.out_dir},
                     {"kernel_cache", c.kernel_cache},
                     {"threads", std::to_string(c.threads)}});
  return e;
}

std::string to_string(const RunConfig& c) {
  std::string s;
  for (const auto& [k, v] : resolved_entries(c))
    s += k + " = " + v + "\n";
  return s;
}

bool gn_fully_supplied(const RunConfig& c) { return c.gn_pq && c.gn_r1 && c.gn_r2; }

} // namespace chq
