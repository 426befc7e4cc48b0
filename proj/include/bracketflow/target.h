#pragma once

#include <functional>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "bracketflow/control_label.h"

namespace bracketflow {

/// Closed target set with its Euclidean distance function d and a membership
/// tolerance: a state counts as having reached the target once d <= tolerance.
class TargetSet {
 public:
  enum class Kind { kPoint, kBall, kHalfSpaceComplement };

  static TargetSet Point(Eigen::VectorXd center, double tolerance);
  static TargetSet Ball(Eigen::VectorXd center, double radius, double tolerance);
  /// Target {x : <normal, x> >= offset}.
  static TargetSet HalfSpaceComplement(Eigen::VectorXd normal, double offset,
                                       double tolerance);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(vec_.size()); }
  double tolerance() const { return tolerance_; }

  double Distance(const double* x) const;
  double Distance(const Eigen::VectorXd& x) const { return Distance(x.data()); }
  bool Reached(const Eigen::VectorXd& x) const { return Distance(x) <= tolerance_; }

  /// A point at distance `dist` from the target in a uniformly random
  /// direction.
  Eigen::VectorXd SampleAtDistance(std::mt19937_64& rng, double dist) const;

  nlohmann::json ToJson() const;
  static TargetSet FromJson(const nlohmann::json& j);

 private:
  TargetSet(Kind kind, Eigen::VectorXd vec, double scalar, double tolerance);

  Kind kind_;
  Eigen::VectorXd vec_;  // center, or unit normal
  double scalar_;        // radius, or offset along the unit normal
  double tolerance_;
};

/// Running cost l(x, a) >= 0 with a = sign·e_index.
class Lagrangian {
 public:
  using Fn = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&,
                                  int index, Sign sign)>;

  /// l ≡ 0.
  static Lagrangian Zero();
  /// l = scale·|x|.
  static Lagrangian Norm(double scale = 1.0);
  /// l = scale·|x|².
  static Lagrangian NormSquared(double scale = 1.0);
  /// Arbitrary cost; not serializable.
  static Lagrangian Custom(std::string name, Fn fn);

  /// Throws std::domain_error if the value is negative or not finite.
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x, int index,
                    Sign sign) const;
  bool is_zero() const { return kind_ == "zero"; }
  const std::string& kind() const { return kind_; }

  nlohmann::json ToJson() const;
  static Lagrangian FromJson(const nlohmann::json& j);

 private:
  Lagrangian(std::string kind, double scale, Fn fn)
      : kind_(std::move(kind)), scale_(scale), fn_(std::move(fn)) {}

  std::string kind_;
  double scale_;
  Fn fn_;
};

}  // namespace bracketflow
