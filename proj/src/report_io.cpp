#include "choquard/report_io.hpp"

#include "choquard/errors.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace chq {

namespace {

std::string hex(std::uint64_t h) {
  std::ostringstream o;
  o << std::hex << std::setw(16) << std::setfill('0') << h;
  return o.str();
}

Json opt(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

} // namespace

RunStamp make_stamp(const RunConfig& config, std::uint64_t kernel_hash) {
  return {resolved_entries(config), kernel_hash, RadialGrid(config.grid).describe()};
}

Json to_json(const RunStamp& s) {
  Json cfg = Json::object();
  for (const auto& [k, v] : s.config)
    cfg[k] = v;
  return Json{{"config", cfg}, {"kernel_hash", hex(s.kernel_hash)}, {"grid", s.grid}};
}

Json to_json(const RegimeClass& r) {
  Json side = Json::array();
  for (const auto& c : r.side_conditions)
    side.push_back({{"name", c.name}, {"state", to_string(c.state)}, {"value", opt(c.value)}});
  return Json{{"theorem_id", to_string(r.theorem_id)},
              {"sum_regime", to_string(r.sum_regime)},
              {"r1_regime", to_string(r.r1_regime)},
              {"r2_regime", to_string(r.r2_regime)},
              {"character", to_string(r.character)},
              {"side_conditions", side},
              {"notes", r.notes}};
}

Json to_json(const GNConstants& gn) {
  return Json{{"c_pq", gn.c_pq},
              {"c_r1", gn.c_r1},
              {"c_r2", gn.c_r2},
              {"provenance", to_string(gn.provenance)}};
}

Json to_json(const ThresholdReport& t) {
  Json parts = Json::object();
  for (const auto& [k, v] : t.beta_parts)
    parts[k] = v;
  Json side = Json::array();
  for (const auto& c : t.side_conditions)
    side.push_back({{"name", c.name}, {"state", to_string(c.state)}, {"value", opt(c.value)}});
  return Json{{"regime", to_json(t.regime)},
              {"gn", to_json(t.gn)},
              {"coeffs",
               {{"A1", t.coeffs.A1},
                {"A2", t.coeffs.A2},
                {"A3", t.coeffs.A3},
                {"kappa_rho", t.coeffs.kappa_rho}}},
              {"shape", to_string(t.shape)},
              {"s0", opt(t.s0)},
              {"s1", opt(t.s1)},
              {"s2", opt(t.s2)},
              {"T0", opt(t.T0)},
              {"T1", opt(t.T1)},
              {"beta0", opt(t.beta0)},
              {"kappa0", opt(t.kappa0)},
              {"kappa0_at_beta", opt(t.kappa0_at_beta)},
              {"beta_parts", parts},
              {"side_conditions", side},
              {"side_conditions_hold", t.side_conditions_hold()},
              {"nonexistence_value", opt(t.nonexistence_value)},
              {"notes", t.notes}};
}

Json to_json(const EnergyBreakdown& b) {
  return Json{{"Tu", b.Tu}, {"Tv", b.Tv}, {"T", b.T},   {"D1", b.D1}, {"D2", b.D2},
              {"Dpq", b.Dpq}, {"L", b.L},   {"J", b.J}, {"P", b.P}};
}

Json to_json(const FiberCritical& c) {
  return Json{{"t", c.t}, {"psi", c.psi}, {"d2psi", c.d2psi}, {"class", to_string(c.cls)}};
}

Json to_json(const SolveReport& r) {
  Json crit = Json::array();
  for (const auto& c : r.fiber_critical)
    crit.push_back(to_json(c));
  return Json{{"regime", to_json(r.regime)},
              {"verdict", to_string(r.verdict)},
              {"message", r.message},
              {"iterations", r.iterations},
              {"dilations", r.dilations},
              {"breakdown", to_json(r.breakdown)},
              {"pohozaev_ratio", r.breakdown.P / r.breakdown.T},
              {"mu1", r.mu.mu1},
              {"mu2", r.mu.mu2},
              {"residual", r.residual},
              {"mass_u", l2_norm(r.state.u)},
              {"mass_v", l2_norm(r.state.v)},
              {"tail_fraction_u", tail_fraction(r.state.u, 2.0)},
              {"tail_fraction_v", tail_fraction(r.state.v, 2.0)},
              {"fiber_point", r.fiber_point ? to_json(*r.fiber_point) : Json(nullptr)},
              {"fiber_critical", crit}};
}

Json to_json(const VerificationReport& v) {
  Json checks = Json::array();
  for (const auto& c : v.checks)
    checks.push_back({{"name", c.name},
                      {"applicable", c.applicable},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"verdict", !c.applicable ? "n/a" : (c.pass ? "pass" : "fail")},
                      {"detail", c.detail}});
  return Json{{"all_pass", v.all_pass()}, {"checks", checks}};
}

Json to_json(const NonexistenceScan& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"min_t_dpsi", r.min_t_dpsi}, {"bracket", r.bracket}, {"t_at_min", r.t_at_min}});
  Json out{{"all_positive", s.all_positive},
           {"witness", s.witness ? Json(*s.witness) : Json(nullptr)},
           {"zero_found", s.zero_state.has_value()},
           {"note", s.note},
           {"rows", rows}};
  if (s.zero_state)
    out["zero_pohozaev_ratio"] = s.zero_pohozaev_ratio;
  return out;
}

Json to_json(const std::vector<ProbeRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows)
    out.push_back({{"rho1", r.rho1},
                   {"rho2", r.rho2},
                   {"beta", r.beta},
                   {"m", r.m},
                   {"pohozaev_ratio", r.pohozaev_ratio},
                   {"verdict", to_string(r.verdict)},
                   {"error", r.error}});
  return out;
}

//==============================================================================
std::string stamped_csv(const RunStamp& s, const std::string& body) {
  std::string out;
  for (const auto& [k, v] : s.config)
    out += "# " + k + " = " + v + "\n";
  out += "# kernel_hash = " + hex(s.kernel_hash) + "\n";
  return out + body;
}

std::string stamped_json(const RunStamp& s, const std::string& key, const Json& payload) {
  Json doc{{"run", to_json(s)}, {key, payload}};
  return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path())
    std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  out << content;
  if (!out)
    throw LabError(ErrorCode::Io, "cannot write '" + path + "'");
}

std::string state_csv(const StatePair& st) {
  std::ostringstream out;
  out.precision(17);
  out << "r,u,v\n";
  const auto& g = *st.u.grid();
  for (std::size_t i = 0; i < g.size(); ++i)
    out << g.r(i) << ',' << st.u[i] << ',' << st.v[i] << '\n';
  return out.str();
}

StatePair read_state(const std::string& path, const GridPtr& grid) {
  std::ifstream in(path);
  if (!in)
    throw LabError(ErrorCode::Io, "cannot read state file '" + path + "'");
  std::vector<double> r, u, v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'r')
      continue;
    std::istringstream ls(line);
    double a = 0, b = 0, c = 0;
    char s1 = 0, s2 = 0;
    if (!(ls >> a >> s1 >> b >> s2 >> c) || s1 != ',' || s2 != ',')
      throw LabError(ErrorCode::InvalidInput, "malformed state line: " + line);
    r.push_back(a);
    u.push_back(b);
    v.push_back(c);
  }
  if (r.size() != grid->size())
    throw LabError(ErrorCode::GridMismatch, "state has " + std::to_string(r.size()) +
                                                " nodes, grid has " +
                                                std::to_string(grid->size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    if (std::abs(r[i] - grid->r(i)) > 1e-12 * std::max(1.0, grid->r(i)))
      throw LabError(ErrorCode::GridMismatch, "state node radii differ from the grid");
  RadialField fu(grid, std::move(u)), fv(grid, std::move(v));
  const double ru = l2_norm(fu), rv = l2_norm(fv);
  return StatePair{std::move(fu), std::move(fv), ru, rv};
}

std::string landscape_csv(const ThresholdReport& t, const ProblemParams& P, double s_min,
                          double s_max, int samples) {
  const auto x = exponent_info(P);
  std::ostringstream out;
  out.precision(17);
  out << "s,h,dh\n";
  for (int i = 0; i < samples; ++i) {
    const double s = s_min * std::pow(s_max / s_min, static_cast<double>(i) / (samples - 1));
    out << s << ',' << h_eval(t.coeffs, x, s) << ',' << h_prime(t.coeffs, x, s) << '\n';
  }
  return out.str();
}

std::string probe_csv(const std::vector<ProbeRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "rho1,rho2,beta,m,pohozaev_ratio,verdict,error\n";
  for (const auto& r : rows)
    out << r.rho1 << ',' << r.rho2 << ',' << r.beta << ',' << r.m << ',' << r.pohozaev_ratio << ','
        << to_string(r.verdict) << ',' << '"' << r.error << '"' << '\n';
  return out.str();
}

} // namespace chq
