#include "choquard/fiber.hpp"

#include "choquard/roots.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <sstream>

namespace chq {

const char* to_string(FiberClass c) {
  switch (c) {
  case FiberClass::Plus: return "P+";
  case FiberClass::Zero: return "P0";
  case FiberClass::Minus: return "P-";
  }
  return "?";
}

namespace {

std::vector<double> log_grid(const FiberWindow& w) {
  std::vector<double> t(w.samples);
  const double la = std::log(w.t_min), lb = std::log(w.t_max);
  for (int k = 0; k < w.samples; ++k)
    t[k] = std::exp(la + (lb - la) * k / (w.samples - 1));
  t.front() = w.t_min;
  t.back() = w.t_max;
  return t;
}

FiberClass classify(double d2, double scale) {
  if (std::abs(d2) <= 1e-12 * scale)
    return FiberClass::Zero;
  return d2 > 0.0 ? FiberClass::Plus : FiberClass::Minus;
}

} // namespace

std::vector<FiberCritical> fiber_critical_points(const FiberMap<double>& f,
                                                 const FiberWindow& window) {
  const auto t = log_grid(window);
  // t Psi'(t) has the same sign as Psi' and is better scaled
  const auto g = [&](double s) { return s * f.dpsi(s); };
  std::vector<FiberCritical> out;
  double prev = g(t[0]);
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double cur = g(t[k]);
    if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) {
      const double root = (cur == 0.0) ? t[k] : find_root(g, t[k - 1], t[k], 1e-14);
      FiberCritical c;
      c.t = root;
      c.psi = f.psi(root);
      c.d2psi = f.d2psi(root);
      c.cls = classify(c.d2psi, std::abs(f.T));
      out.push_back(c);
    }
    prev = cur;
  }
  return out;
}

std::optional<FiberCritical> fiber_max(const FiberMap<double>& f, const FiberWindow& window) {
  std::optional<FiberCritical> best;
  for (const auto& c : fiber_critical_points(f, window))
    if (c.cls == FiberClass::Minus && (!best || c.psi > best->psi))
      best = c;
  return best;
}

FiberProfile fiber(const EnergyBreakdown& b, const ProblemParams& P, const FiberWindow& window) {
  const auto f = FiberMap<double>::from(b, P);
  FiberProfile prof;
  prof.t = log_grid(window);
  for (double t : prof.t) {
    prof.psi.push_back(f.psi(t));
    prof.dpsi.push_back(f.dpsi(t));
    prof.d2psi.push_back(f.d2psi(t));
  }
  prof.critical = fiber_critical_points(f, window);
  const auto regime = classify_regime(P);
  prof.expected_signs = predicted_fiber_signs(regime.theorem_id);
  std::vector<int> found;
  for (const auto& c : prof.critical)
    found.push_back(c.cls == FiberClass::Plus ? 1 : c.cls == FiberClass::Minus ? -1 : 0);
  prof.matches_prediction = found == prof.expected_signs;
  if (!prof.matches_prediction) {
    std::ostringstream msg;
    msg << "UnexpectedCriticalCount: found " << found.size() << " critical point(s), expected "
        << prof.expected_signs.size();
    prof.note = msg.str();
  }
  return prof;
}

//==============================================================================
namespace {

template <typename Real>
double identity_defect(const EnergyBreakdown& b, const ProblemParams& P, const FiberWindow& w) {
  const auto fd = FiberMap<double>::from(b, P);
  FiberMap<Real> f{fd.T,      fd.D1,      fd.D2,   fd.Dpq,  fd.L,  fd.lambda1, fd.lambda2,
                   fd.beta,   fd.kappa,   fd.r1,   fd.r2,   fd.a,  fd.b,       fd.c};
  using std::abs;
  double worst = 0.0;
  for (double t : log_grid(w)) {
    const Real tt(t);
    const Real lhs = tt * f.dpsi(tt);
    const Real rhs = f.pohozaev_dilated(tt);
    worst = std::max(worst, static_cast<double>(abs(lhs - rhs)));
  }
  return worst / std::abs(b.T);
}

} // namespace

double fiber_identity_defect(const EnergyBreakdown& b, const ProblemParams& P,
                             const FiberWindow& w) {
  using boost::multiprecision::cpp_bin_float_quad;
  return identity_defect<cpp_bin_float_quad>(b, P, w);
}

double fiber_identity_defect_double(const EnergyBreakdown& b, const ProblemParams& P,
                                    const FiberWindow& w) {
  return identity_defect<double>(b, P, w);
}

std::string to_csv(const FiberProfile& f) {
  std::ostringstream out;
  out.precision(17);
  out << "t,psi,dpsi,d2psi\n";
  for (std::size_t k = 0; k < f.t.size(); ++k)
    out << f.t[k] << ',' << f.psi[k] << ',' << f.dpsi[k] << ',' << f.d2psi[k] << '\n';
  return out.str();
}

} // namespace chq
