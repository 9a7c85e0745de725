#pragma once

#include <boost/rational.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chq {

//! Exponents and the Riesz order are held exactly so regime boundaries
//! (p+q = 2r1, 2r2 = mass-critical, ...) are decided without tolerances.
using Exact = boost::rational<long long>;

//! Parses "7/5", "1.4", "-2", "2.5e-1" exactly. Throws InvalidInput.
Exact parse_exact(std::string_view text);
double to_double(const Exact& x);
std::string to_string(const Exact& x);

struct ProblemParams {
  int N = 3;
  Exact alpha{1};
  Exact p{7, 5};
  Exact q{7, 5};
  Exact r1{3, 2};
  Exact r2{3, 2};
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double beta = 0.5;
  double kappa = 0.1;
  double rho1 = 1.0;
  double rho2 = 1.0;
};

//! Scaling exponents gamma_s = (N s - N - alpha)/2 and the mass thresholds,
//! plus double copies of the exponents for numerical code.
struct ExponentInfo {
  int N = 3;
  double alpha = 1.0;
  double p = 0.0, q = 0.0, r1 = 0.0, r2 = 0.0;
  double gamma_p = 0.0, gamma_q = 0.0, gamma_r1 = 0.0, gamma_r2 = 0.0;
  double mass_crit = 0.0;
  double mass_lower = 0.0;
  double mass_upper = 0.0;

  double gamma_pq() const { return gamma_p + gamma_q; }
};

double gamma_of(const ProblemParams& params, const Exact& s);
double gamma_of(const ProblemParams& params, double s);
ExponentInfo exponent_info(const ProblemParams& params);

//! Every violated admissibility inequality, by name. Empty means admissible.
std::vector<std::string> validate_params(const ProblemParams& params);

enum class TheoremId {
  T1_1, T1_2, T1_3, T1_4, T1_5, T1_6, T1_7, T1_8,
  T1_9, T1_10, T1_11, T1_12, T1_13, T1_14, T1_15,
  OutOfScope
};
enum class Position { Sub, Critical, Super };
enum class Character { LocalMin, MountainPass, Nonexistence, None };
enum class Truth { Unknown, True, False };

struct SideCondition {
  std::string name;
  Truth state = Truth::Unknown;
  std::optional<double> value; //!< the quantity whose sign decides the predicate
};

struct RegimeClass {
  TheoremId theorem_id = TheoremId::OutOfScope;
  Position sum_regime = Position::Sub;
  Position r1_regime = Position::Sub;
  Position r2_regime = Position::Sub;
  Character character = Character::None;
  std::vector<SideCondition> side_conditions;
  std::vector<std::string> notes;
};

const char* to_string(TheoremId id);
const char* to_string(Position pos);
const char* to_string(Character ch);
const char* to_string(Truth t);
std::optional<TheoremId> theorem_from_string(std::string_view text);

//! Regimes whose thresholds come with beta0 and kappa0.
bool has_coupling_thresholds(TheoremId id);

//! Expected number of fiber critical points and the sign of Psi'' at each.
//! DoubleCritical regimes: {+, -}. Nonexistence: none.
std::vector<int> predicted_fiber_signs(TheoremId id);

//! pre: validate_params(params) is empty.
RegimeClass classify_regime(const ProblemParams& params);

} // namespace chq

namespace chq::cond {
inline constexpr const char* half_minus_A1_A2 = "1/2-(A1+A2)>0";
inline constexpr const char* half_minus_A3 = "1/2-A3>0";
inline constexpr const char* half_minus_A2 = "1/2-A2>0";
inline constexpr const char* half_minus_A1 = "1/2-A1>0";
inline constexpr const char* half_minus_A1_A3 = "1/2-(A1+A3)>0";
inline constexpr const char* f_below_bound = "f(s0)<2-(gp+gq)";
inline constexpr const char* g_positive = "g(s0)>0";
inline constexpr const char* h_core_positive = "s0^2/2-A1*s0^a-A2*s0^b>0";
inline constexpr const char* mixed_product = "mixed_product<1";
inline constexpr const char* slope_positive = "s0^2-a*A1*s0^a-b*A2*s0^b>0";
inline constexpr const char* unit_slope_positive = "1-a*A1*s0^(a-2)-b*A2*s0^(b-2)>0";
inline constexpr const char* nonexistence = "nonexistence_inequality>0";
inline constexpr const char* beta_below = "beta<beta0";
inline constexpr const char* kappa_below = "kappa<kappa0";
} // namespace chq::cond
