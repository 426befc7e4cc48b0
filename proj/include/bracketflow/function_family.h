#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>

#include <json.hpp>

namespace bracketflow {

/// Named one-variable families on [0, ∞):
///   linear        c·u
///   power         c·u^p
///   broken_power  c·u^p_low below the knee, continued as a p_high power
///   affine        a + b·u
///   power_affine  a + b·u^p
///   constant      a
class ScalarFunction {
 public:
  static ScalarFunction Linear(double c);
  static ScalarFunction Identity() { return Linear(1.0); }
  static ScalarFunction Power(double c, double p);
  static ScalarFunction BrokenPower(double c, double knee, double p_low,
                                    double p_high);
  static ScalarFunction Affine(double a, double b);
  static ScalarFunction PowerAffine(double a, double b, double p);
  static ScalarFunction Constant(double a);

  double operator()(double u) const;
  /// Inverse of a strictly increasing unbounded function with value 0 at 0
  /// (linear, power, broken_power); other kinds throw std::logic_error.
  double Inverse(double v) const;
  bool Invertible() const;

  const std::string& kind() const { return kind_; }
  double param(const std::string& name) const { return params_.at(name); }

  ScalarFunction Scaled(double factor) const;

  nlohmann::json ToJson() const;
  /// Throws ValidationError on unknown kinds or bad parameters.
  static ScalarFunction FromJson(const nlohmann::json& j);

 private:
  ScalarFunction(std::string kind, std::map<std::string, double> params);

  std::string kind_;
  std::map<std::string, double> params_;
};

/// Two-variable families F(R, r):
///   affine         a·R − b·r + c
///   inverse_power  (a·R + c)·r^{−p}
///   power          min(cap, c·R^pR·r^pr)
///   constant       c
class PairFunction {
 public:
  static PairFunction Affine(double a, double b, double c);
  static PairFunction InversePower(double a, double c, double p);
  static PairFunction Power(double c, double p_big, double p_small,
                            double cap = std::numeric_limits<double>::infinity());
  static PairFunction Constant(double c);

  double operator()(double big, double small) const;

  const std::string& kind() const { return kind_; }
  PairFunction Scaled(double factor) const;

  nlohmann::json ToJson() const;
  static PairFunction FromJson(const nlohmann::json& j);

 private:
  PairFunction(std::string kind, std::map<std::string, double> params);

  std::string kind_;
  std::map<std::string, double> params_;
};

/// Ψ(v1, v2):
///   difference        c·(v1 − v2)
///   power_difference  c·(v1^p − v2^p)
class PsiFunction {
 public:
  static PsiFunction Difference(double c = 1.0);
  static PsiFunction PowerDifference(double c, double p);

  double operator()(double v1, double v2) const;

  const std::string& kind() const { return kind_; }
  nlohmann::json ToJson() const;
  static PsiFunction FromJson(const nlohmann::json& j);

 private:
  PsiFunction(std::string kind, double c, double p)
      : kind_(std::move(kind)), c_(c), p_(p) {}

  std::string kind_;
  double c_;
  double p_;
};

/// Bilateral sequence u_i = u0·q^i, i ∈ Z, with 0 < q < 1.
class GeometricSequence {
 public:
  GeometricSequence(double u0 = 1.0, double q = 0.5);

  double operator()(std::int64_t i) const;
  /// The integer j with v ∈ (u_{j+1}, u_j]; v must be positive.
  std::int64_t IndexOf(double v) const;

  double u0() const { return u0_; }
  double q() const { return q_; }

  nlohmann::json ToJson() const;
  static GeometricSequence FromJson(const nlohmann::json& j);

 private:
  double u0_;
  double q_;
};

}  // namespace bracketflow
