#include "choquard/params.hpp"

#include "choquard/errors.hpp"

#include <cctype>
#include <sstream>

namespace chq {

//==============================================================================
namespace {

Exact parse_decimal(std::string_view s) {
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    negative = s[i] == '-';
    ++i;
  }
  long long mantissa = 0;
  int frac_digits = 0;
  int digits = 0;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '.' && !seen_point) {
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c)))
      break;
    if (++digits > 17)
      throw LabError(ErrorCode::InvalidInput, "too many digits in '" + std::string(s) + "'");
    mantissa = mantissa * 10 + (c - '0');
    if (seen_point)
      ++frac_digits;
  }
  if (digits == 0)
    throw LabError(ErrorCode::InvalidInput, "not a number: '" + std::string(s) + "'");
  int exponent = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      exp_negative = s[i] == '-';
      ++i;
    }
    int exp_digits = 0;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      exponent = exponent * 10 + (s[i] - '0');
      ++exp_digits;
    }
    if (exp_digits == 0 || exponent > 18)
      throw LabError(ErrorCode::InvalidInput, "bad exponent in '" + std::string(s) + "'");
    if (exp_negative)
      exponent = -exponent;
  }
  if (i != s.size())
    throw LabError(ErrorCode::InvalidInput, "trailing characters in '" + std::string(s) + "'");
  const int scale = exponent - frac_digits;
  if (scale > 18 || scale < -18)
    throw LabError(ErrorCode::InvalidInput, "magnitude out of range in '" + std::string(s) + "'");
  long long pow10 = 1;
  for (int k = 0; k < (scale < 0 ? -scale : scale); ++k)
    pow10 *= 10;
  Exact value = scale >= 0 ? Exact(mantissa) * Exact(pow10) : Exact(mantissa, pow10);
  return negative ? -value : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

} // namespace

Exact parse_exact(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos)
    return parse_decimal(text);
  const Exact num = parse_decimal(trim(text.substr(0, slash)));
  const Exact den = parse_decimal(trim(text.substr(slash + 1)));
  if (den.numerator() == 0)
    throw LabError(ErrorCode::InvalidInput, "zero denominator in '" + std::string(text) + "'");
  return num / den;
}

double to_double(const Exact& x) {
  return static_cast<double>(x.numerator()) / static_cast<double>(x.denominator());
}

std::string to_string(const Exact& x) {
  std::ostringstream out;
  out << x.numerator();
  if (x.denominator() != 1)
    out << '/' << x.denominator();
  return out.str();
}

//==============================================================================
double gamma_of(const ProblemParams& params, const Exact& s) {
  return to_double((Exact(params.N) * s - Exact(params.N) - params.alpha) / Exact(2));
}

double gamma_of(const ProblemParams& params, double s) {
  return (params.N * s - params.N - to_double(params.alpha)) / 2.0;
}

ExponentInfo exponent_info(const ProblemParams& params) {
  ExponentInfo info;
  const Exact N(params.N);
  info.N = params.N;
  info.alpha = to_double(params.alpha);
  info.p = to_double(params.p);
  info.q = to_double(params.q);
  info.r1 = to_double(params.r1);
  info.r2 = to_double(params.r2);
  info.gamma_p = gamma_of(params, params.p);
  info.gamma_q = gamma_of(params, params.q);
  info.gamma_r1 = gamma_of(params, params.r1);
  info.gamma_r2 = gamma_of(params, params.r2);
  info.mass_crit = to_double((Exact(2) * N + Exact(2) * params.alpha + Exact(4)) / N);
  info.mass_lower = to_double((Exact(2) * N + Exact(2) * params.alpha) / N);
  info.mass_upper = params.N > 2
                        ? to_double((Exact(2) * N + Exact(2) * params.alpha) / (N - Exact(2)))
                        : 0.0;
  return info;
}

std::vector<std::string> validate_params(const ProblemParams& P) {
  std::vector<std::string> out;
  if (P.N != 3 && P.N != 4) {
    out.push_back("N not in {3,4}");
    return out;
  }
  const Exact N(P.N);
  if (P.alpha <= 0)
    out.push_back("alpha <= 0");
  if (P.alpha >= N)
    out.push_back("alpha >= N");
  const Exact lower = (N + P.alpha) / N;
  const Exact upper = (N + P.alpha) / (N - Exact(2));
  const std::pair<const char*, const Exact*> exps[] = {
      {"p", &P.p}, {"q", &P.q}, {"r1", &P.r1}, {"r2", &P.r2}};
  for (const auto& [name, value] : exps) {
    if (*value <= lower)
      out.push_back(std::string(name) + " <= (N+alpha)/N");
    if (*value >= upper)
      out.push_back(std::string(name) + " >= (N+alpha)/(N-2)");
  }
  if (P.p + P.q > Exact(2) * P.r1)
    out.push_back("p+q > 2r1");
  if (P.r1 > P.r2)
    out.push_back("r1 > r2");
  const std::pair<const char*, double> positives[] = {
      {"lambda1", P.lambda1}, {"lambda2", P.lambda2}, {"beta", P.beta},
      {"kappa", P.kappa},     {"rho1", P.rho1},       {"rho2", P.rho2}};
  for (const auto& [name, value] : positives)
    if (!(value > 0.0))
      out.push_back(std::string(name) + " <= 0");
  return out;
}

//==============================================================================
const char* to_string(TheoremId id) {
  static const char* names[] = {"T1_1", "T1_2",  "T1_3",  "T1_4",  "T1_5",  "T1_6",
                                "T1_7", "T1_8",  "T1_9",  "T1_10", "T1_11", "T1_12",
                                "T1_13", "T1_14", "T1_15", "OutOfScope"};
  return names[static_cast<int>(id)];
}

std::optional<TheoremId> theorem_from_string(std::string_view text) {
  for (int k = 0; k <= static_cast<int>(TheoremId::OutOfScope); ++k) {
    const auto id = static_cast<TheoremId>(k);
    if (text == to_string(id))
      return id;
  }
  return std::nullopt;
}

const char* to_string(Position pos) {
  switch (pos) {
  case Position::Sub: return "Sub";
  case Position::Critical: return "Critical";
  case Position::Super: return "Super";
  }
  return "?";
}

const char* to_string(Character ch) {
  switch (ch) {
  case Character::LocalMin: return "LocalMin";
  case Character::MountainPass: return "MountainPass";
  case Character::Nonexistence: return "Nonexistence";
  case Character::None: return "None";
  }
  return "?";
}

const char* to_string(Truth t) {
  switch (t) {
  case Truth::Unknown: return "unknown";
  case Truth::True: return "true";
  case Truth::False: return "false";
  }
  return "?";
}

bool has_coupling_thresholds(TheoremId id) {
  return id == TheoremId::T1_4 || id == TheoremId::T1_9 || id == TheoremId::T1_10 ||
         id == TheoremId::T1_11 || id == TheoremId::T1_13;
}

std::vector<int> predicted_fiber_signs(TheoremId id) {
  switch (id) {
  case TheoremId::T1_1:
  case TheoremId::T1_2:
  case TheoremId::T1_7:
  case TheoremId::T1_8:
    return {+1};
  case TheoremId::T1_5:
  case TheoremId::T1_6:
  case TheoremId::T1_12:
  case TheoremId::T1_14:
  case TheoremId::T1_15:
    return {-1};
  case TheoremId::T1_4:
  case TheoremId::T1_9:
  case TheoremId::T1_10:
  case TheoremId::T1_11:
  case TheoremId::T1_13:
    return {+1, -1};
  default:
    return {};
  }
}

//==============================================================================
namespace {

Position position(const Exact& value, const Exact& crit) {
  if (value < crit)
    return Position::Sub;
  if (value == crit)
    return Position::Critical;
  return Position::Super;
}

std::vector<SideCondition> named(std::initializer_list<const char*> names) {
  std::vector<SideCondition> out;
  for (const char* n : names)
    out.push_back({n, Truth::Unknown, std::nullopt});
  return out;
}

} // namespace

RegimeClass classify_regime(const ProblemParams& P) {
  RegimeClass rc;
  const Exact N(P.N);
  const Exact mc = (Exact(2) * N + Exact(2) * P.alpha + Exact(4)) / N;
  const Exact lower = (Exact(2) * N + Exact(2) * P.alpha) / N;
  const Exact sum = P.p + P.q;
  const Exact a = Exact(2) * P.r1;
  const Exact b = Exact(2) * P.r2;
  rc.sum_regime = position(sum, mc);
  rc.r1_regime = position(a, mc);
  rc.r2_regime = position(b, mc);

  if (sum <= lower || sum > a || a > b) {
    rc.notes.push_back("p+q outside ((2N+2alpha)/N, 2r1] or r1 > r2: no claim");
    return rc;
  }

  using T = TheoremId;
  T id = T::OutOfScope;
  if (a == b) {
    if (a < mc)
      id = T::T1_1;
    else if (a == mc)
      id = sum < mc ? T::T1_2 : T::T1_3;
    else if (sum < mc)
      id = T::T1_4;
    else if (sum == mc)
      id = T::T1_5;
    else
      id = T::T1_6;
  } else {
    if (b < mc)
      id = T::T1_7;
    else if (b == mc)
      id = T::T1_8; // here a < b = mc, so p+q <= 2r1 < mc
    else if (a < mc)
      id = sum < a ? T::T1_9 : T::T1_10;
    else if (a == mc)
      id = sum < mc ? T::T1_11 : T::T1_12;
    else if (sum < mc)
      id = T::T1_13;
    else if (sum == mc)
      id = T::T1_14;
    else
      id = T::T1_15;
  }
  rc.theorem_id = id;

  switch (id) {
  case T::T1_5: case T::T1_6: case T::T1_12: case T::T1_14: case T::T1_15:
    rc.character = Character::MountainPass;
    break;
  case T::T1_3:
    rc.character = Character::Nonexistence;
    break;
  default:
    rc.character = Character::LocalMin;
  }

  switch (id) {
  case T::T1_2: rc.side_conditions = named({cond::half_minus_A1_A2}); break;
  case T::T1_3: rc.side_conditions = named({cond::nonexistence}); break;
  case T::T1_4: rc.side_conditions = named({cond::beta_below, cond::kappa_below}); break;
  case T::T1_5: rc.side_conditions = named({cond::half_minus_A3}); break;
  case T::T1_8: rc.side_conditions = named({cond::half_minus_A2}); break;
  case T::T1_9:
    rc.side_conditions = named({cond::f_below_bound, cond::g_positive, cond::h_core_positive,
                                cond::mixed_product, cond::beta_below, cond::kappa_below});
    break;
  case T::T1_10:
    rc.side_conditions = named({cond::slope_positive, cond::h_core_positive,
                                cond::mixed_product, cond::beta_below, cond::kappa_below});
    break;
  case T::T1_11:
    rc.side_conditions = named({cond::half_minus_A1, cond::beta_below, cond::kappa_below});
    break;
  case T::T1_12: rc.side_conditions = named({cond::half_minus_A1_A3}); break;
  case T::T1_13:
    rc.side_conditions =
        named({cond::unit_slope_positive, cond::beta_below, cond::kappa_below});
    break;
  case T::T1_14: rc.side_conditions = named({cond::half_minus_A3}); break;
  default: break;
  }

  if (id == T::T1_1) {
    const Exact alt_lower = (Exact(2) * N + Exact(2) * P.alpha) / P.alpha;
    if (sum <= alt_lower)
      rc.notes.push_back(
          "T1_1 hypothesis is printed with lower bound (2N+2alpha)/alpha; p+q lies between "
          "(2N+2alpha)/N and (2N+2alpha)/alpha, classified with the (2N+2alpha)/N bound");
  }
  if (id == T::T1_6)
    rc.notes.push_back(
        "T1_6 is stated under the r1<r2 heading but hypothesizes "
        "'(2N+2alpha+4)/N < p+q <= 2r1 = 2r2 < (2N+2alpha)/(N-2)'; classified with r1 = r2");
  return rc;
}

} // namespace chq
