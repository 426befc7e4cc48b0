#include "bracketflow/function_family.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bracketflow/bracket.h"

namespace bracketflow {
namespace {

double Get(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ValidationError(std::string("missing numeric parameter \"") + key +
                          "\" in " + j.dump());
  }
  return j.at(key).get<double>();
}

double GetOr(const nlohmann::json& j, const char* key, double fallback) {
  return j.contains(key) ? Get(j, key) : fallback;
}

std::string Kind(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ValidationError("function spec needs a \"kind\": " + j.dump());
  }
  return j.at("kind").get<std::string>();
}

void RequirePositive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(std::string(what) + " must be positive");
  }
}

void RequireNonNegative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ValidationError(std::string(what) + " must be non-negative");
  }
}

nlohmann::json ParamsJson(const std::string& kind,
                          const std::map<std::string, double>& params) {
  nlohmann::json j = {{"kind", kind}};
  for (const auto& [k, v] : params) {
    if (std::isinf(v)) continue;
    j[k] = v;
  }
  return j;
}

}  // namespace

ScalarFunction::ScalarFunction(std::string kind,
                               std::map<std::string, double> params)
    : kind_(std::move(kind)), params_(std::move(params)) {}

ScalarFunction ScalarFunction::Linear(double c) {
  RequirePositive(c, "linear slope");
  return ScalarFunction("linear", {{"c", c}});
}

ScalarFunction ScalarFunction::Power(double c, double p) {
  RequirePositive(c, "power coefficient");
  RequirePositive(p, "power exponent");
  return ScalarFunction("power", {{"c", c}, {"p", p}});
}

ScalarFunction ScalarFunction::BrokenPower(double c, double knee, double p_low,
                                           double p_high) {
  RequirePositive(c, "broken_power coefficient");
  RequirePositive(knee, "broken_power knee");
  RequirePositive(p_low, "broken_power p_low");
  RequirePositive(p_high, "broken_power p_high");
  return ScalarFunction("broken_power",
                        {{"c", c}, {"knee", knee}, {"p_low", p_low}, {"p_high", p_high}});
}

ScalarFunction ScalarFunction::Affine(double a, double b) {
  RequireNonNegative(a, "affine intercept");
  RequireNonNegative(b, "affine slope");
  return ScalarFunction("affine", {{"a", a}, {"b", b}});
}

ScalarFunction ScalarFunction::PowerAffine(double a, double b, double p) {
  RequireNonNegative(a, "power_affine intercept");
  RequireNonNegative(b, "power_affine coefficient");
  RequirePositive(p, "power_affine exponent");
  return ScalarFunction("power_affine", {{"a", a}, {"b", b}, {"p", p}});
}

ScalarFunction ScalarFunction::Constant(double a) {
  RequireNonNegative(a, "constant");
  return ScalarFunction("constant", {{"a", a}});
}

double ScalarFunction::operator()(double u) const {
  if (kind_ == "linear") return param("c") * u;
  if (kind_ == "power") return param("c") * std::pow(u, param("p"));
  if (kind_ == "broken_power") {
    const double c = param("c"), knee = param("knee");
    if (u <= knee) return c * std::pow(u, param("p_low"));
    return c * std::pow(knee, param("p_low")) * std::pow(u / knee, param("p_high"));
  }
  if (kind_ == "affine") return param("a") + param("b") * u;
  if (kind_ == "power_affine") return param("a") + param("b") * std::pow(u, param("p"));
  return param("a");
}

bool ScalarFunction::Invertible() const {
  return kind_ == "linear" || kind_ == "power" || kind_ == "broken_power";
}

double ScalarFunction::Inverse(double v) const {
  if (v <= 0.0) return 0.0;
  if (kind_ == "linear") return v / param("c");
  if (kind_ == "power") return std::pow(v / param("c"), 1.0 / param("p"));
  if (kind_ == "broken_power") {
    const double c = param("c"), knee = param("knee");
    const double at_knee = c * std::pow(knee, param("p_low"));
    if (v <= at_knee) return std::pow(v / c, 1.0 / param("p_low"));
    return knee * std::pow(v / at_knee, 1.0 / param("p_high"));
  }
  throw std::logic_error("function kind " + kind_ + " has no inverse");
}

ScalarFunction ScalarFunction::Scaled(double factor) const {
  RequirePositive(factor, "scale factor");
  auto params = params_;
  if (kind_ == "affine" || kind_ == "power_affine") {
    params["a"] *= factor;
    params["b"] *= factor;
  } else if (kind_ == "constant") {
    params["a"] *= factor;
  } else {
    params["c"] *= factor;
  }
  return ScalarFunction(kind_, std::move(params));
}

nlohmann::json ScalarFunction::ToJson() const { return ParamsJson(kind_, params_); }

ScalarFunction ScalarFunction::FromJson(const nlohmann::json& j) {
  const std::string kind = Kind(j);
  if (kind == "identity") return Identity();
  if (kind == "linear") return Linear(Get(j, "c"));
  if (kind == "power") return Power(Get(j, "c"), Get(j, "p"));
  if (kind == "broken_power") {
    return BrokenPower(Get(j, "c"), Get(j, "knee"), Get(j, "p_low"), Get(j, "p_high"));
  }
  if (kind == "affine") return Affine(Get(j, "a"), Get(j, "b"));
  if (kind == "power_affine") return PowerAffine(Get(j, "a"), Get(j, "b"), Get(j, "p"));
  if (kind == "constant") return Constant(Get(j, "a"));
  throw ValidationError("unknown function kind \"" + kind + "\"");
}

PairFunction::PairFunction(std::string kind, std::map<std::string, double> params)
    : kind_(std::move(kind)), params_(std::move(params)) {}

PairFunction PairFunction::Affine(double a, double b, double c) {
  return PairFunction("affine", {{"a", a}, {"b", b}, {"c", c}});
}

PairFunction PairFunction::InversePower(double a, double c, double p) {
  RequireNonNegative(a, "inverse_power a");
  RequireNonNegative(c, "inverse_power c");
  RequireNonNegative(p, "inverse_power p");
  if (a == 0.0 && c == 0.0) throw ValidationError("inverse_power is identically zero");
  return PairFunction("inverse_power", {{"a", a}, {"c", c}, {"p", p}});
}

PairFunction PairFunction::Power(double c, double p_big, double p_small,
                                 double cap) {
  RequirePositive(c, "power coefficient");
  if (!(cap > 0.0)) throw ValidationError("power cap must be positive");
  return PairFunction("power",
                      {{"c", c}, {"pR", p_big}, {"pr", p_small}, {"cap", cap}});
}

PairFunction PairFunction::Constant(double c) {
  RequirePositive(c, "constant");
  return PairFunction("constant", {{"c", c}});
}

double PairFunction::operator()(double big, double small) const {
  const auto& p = params_;
  if (kind_ == "affine") return p.at("a") * big - p.at("b") * small + p.at("c");
  if (kind_ == "inverse_power") {
    return (p.at("a") * big + p.at("c")) * std::pow(small, -p.at("p"));
  }
  if (kind_ == "power") {
    return std::min(p.at("cap"),
                    p.at("c") * std::pow(big, p.at("pR")) * std::pow(small, p.at("pr")));
  }
  return p.at("c");
}

PairFunction PairFunction::Scaled(double factor) const {
  RequirePositive(factor, "scale factor");
  auto params = params_;
  if (kind_ == "affine") {
    params["a"] *= factor;
    params["b"] *= factor;
    params["c"] *= factor;
  } else if (kind_ == "inverse_power") {
    params["a"] *= factor;
    params["c"] *= factor;
  } else if (kind_ == "power") {
    params["c"] *= factor;
    params["cap"] *= factor;
  } else {
    params["c"] *= factor;
  }
  return PairFunction(kind_, std::move(params));
}

nlohmann::json PairFunction::ToJson() const { return ParamsJson(kind_, params_); }

PairFunction PairFunction::FromJson(const nlohmann::json& j) {
  const std::string kind = Kind(j);
  if (kind == "affine") return Affine(Get(j, "a"), Get(j, "b"), Get(j, "c"));
  if (kind == "inverse_power") {
    return InversePower(Get(j, "a"), Get(j, "c"), Get(j, "p"));
  }
  if (kind == "power") {
    return Power(Get(j, "c"), Get(j, "pR"), Get(j, "pr"),
                 GetOr(j, "cap", std::numeric_limits<double>::infinity()));
  }
  if (kind == "constant") return Constant(Get(j, "c"));
  throw ValidationError("unknown pair-function kind \"" + kind + "\"");
}

PsiFunction PsiFunction::Difference(double c) {
  RequirePositive(c, "difference coefficient");
  return PsiFunction("difference", c, 1.0);
}

PsiFunction PsiFunction::PowerDifference(double c, double p) {
  RequirePositive(c, "power_difference coefficient");
  RequirePositive(p, "power_difference exponent");
  return PsiFunction("power_difference", c, p);
}

double PsiFunction::operator()(double v1, double v2) const {
  if (kind_ == "difference") return c_ * (v1 - v2);
  return c_ * (std::pow(v1, p_) - std::pow(v2, p_));
}

nlohmann::json PsiFunction::ToJson() const {
  if (kind_ == "difference") return {{"kind", kind_}, {"c", c_}};
  return {{"kind", kind_}, {"c", c_}, {"p", p_}};
}

PsiFunction PsiFunction::FromJson(const nlohmann::json& j) {
  const std::string kind = Kind(j);
  if (kind == "difference") return Difference(GetOr(j, "c", 1.0));
  if (kind == "power_difference") return PowerDifference(GetOr(j, "c", 1.0), Get(j, "p"));
  throw ValidationError("unknown Psi kind \"" + kind + "\"");
}

GeometricSequence::GeometricSequence(double u0, double q) : u0_(u0), q_(q) {
  RequirePositive(u0, "sequence u0");
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("sequence ratio must lie in (0,1)");
}

double GeometricSequence::operator()(std::int64_t i) const {
  return u0_ * std::pow(q_, static_cast<double>(i));
}

std::int64_t GeometricSequence::IndexOf(double v) const {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error("sequence index needs a positive finite value");
  }
  auto j = static_cast<std::int64_t>(std::floor(std::log(v / u0_) / std::log(q_)));
  while ((*this)(j) < v) --j;
  while ((*this)(j + 1) >= v) ++j;
  return j;
}

nlohmann::json GeometricSequence::ToJson() const {
  return {{"kind", "geometric"}, {"u0", u0_}, {"q", q_}};
}

GeometricSequence GeometricSequence::FromJson(const nlohmann::json& j) {
  const std::string kind = Kind(j);
  if (kind != "geometric") throw ValidationError("unknown sequence kind \"" + kind + "\"");
  return GeometricSequence(Get(j, "u0"), Get(j, "q"));
}

}  // namespace bracketflow
