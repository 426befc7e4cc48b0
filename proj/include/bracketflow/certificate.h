#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "bracketflow/function_family.h"
#include "bracketflow/sampling.h"
#include "bracketflow/target.h"

namespace bracketflow {

/// The function U of a certificate.
///   norm      c·|x|
///   brockett  ((x1² + x2²)² + γ·x3²)^{1/4}   (n = 3)
class LyapunovFunction {
 public:
  using Fn = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>;

  static LyapunovFunction Norm(double c = 1.0);
  static LyapunovFunction Brockett(double gamma);
  /// Not serializable.
  static LyapunovFunction Custom(std::string name, Fn fn);

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const { return fn_(x); }
  const std::string& kind() const { return kind_; }
  double param() const { return param_; }
  Fn AsFunction() const { return fn_; }

  nlohmann::json ToJson() const;
  static LyapunovFunction FromJson(const nlohmann::json& j);

 private:
  LyapunovFunction(std::string kind, double param, Fn fn)
      : kind_(std::move(kind)), param_(param), fn_(std::move(fn)) {}

  std::string kind_;
  double param_;
  Fn fn_;
};

/// Box grid [−half_width, half_width]^n with `points` nodes per axis.
struct EnvelopeGrid {
  double half_width = 2.5;
  int points = 101;

  double spacing() const { return 2.0 * half_width / (points - 1); }
};

/// d_{U−}(u) = inf{ d(x) : U(x) >= u }, the largest non-decreasing lower
/// envelope of d in terms of U. Either analytic or grid-approximated. The
/// grid version works on cells: U is bounded above by its value at the
/// corner of largest |x_i| (exact for U increasing in each |x_i|, as both
/// serializable kinds are) and d below by d(center) − h√n/2. Points outside
/// the box are covered by the smallest d bound on the boundary cells, so
/// d_{U−}(U(x)) <= d(x) holds everywhere when the target meets the box.
class DLowerEnvelope {
 public:
  static DLowerEnvelope Analytic(std::function<double(double)> value,
                                 std::function<double(double)> inverse);
  static DLowerEnvelope FromGrid(const LyapunovFunction& U,
                                 const TargetSet& target,
                                 const EnvelopeGrid& grid);

  double operator()(double u) const;
  /// sup{u : d_{U−}(u) <= R} by monotone bisection; +infinity if the grid
  /// does not reach far enough to bound it.
  double Inverse(double R) const;

  bool analytic() const { return analytic_; }
  /// Grid spacing (0 when analytic).
  double resolution() const { return resolution_; }

 private:
  DLowerEnvelope() = default;

  bool analytic_ = false;
  std::function<double(double)> value_;
  std::function<double(double)> inverse_;
  // Grid version: cell U bounds descending with prefix minima of d.
  std::vector<double> u_desc_;
  std::vector<double> d_prefix_min_;
  double outside_ = 0.0;
  double resolution_ = 0.0;
};

/// All data of a regulated-cost sample-stabilizability certificate.
struct Certificate {
  LyapunovFunction U = LyapunovFunction::Norm();
  ScalarFunction phi = ScalarFunction::Identity();
  ScalarFunction gamma = ScalarFunction::Identity();
  PairFunction T = PairFunction::Constant(1.0);
  /// 𝔡(R,r) = (multirank[0](R,r), ..., multirank[k−1](R,r)).
  std::vector<PairFunction> multirank;
  ScalarFunction lambda = ScalarFunction::Constant(1.0);
  PsiFunction psi = PsiFunction::Difference();
  GeometricSequence sequence;
  EnvelopeGrid envelope;

  int k() const { return static_cast<int>(multirank.size()); }
  Multirank Delta(double R, double r) const;

  /// Monotonicity of φ, Γ, Λ and T on grids, invertibility of φ and Γ,
  /// Λ ≡ 1 for k = 1, and convergence of the Ψ tail. Throws ValidationError.
  void Validate() const;

  /// Analytic envelope for U = c|x| with a point target at the origin,
  /// grid envelope otherwise.
  DLowerEnvelope MakeEnvelope(const TargetSet& target) const;

  nlohmann::json ToJson() const;
  static Certificate FromJson(const nlohmann::json& j);
};

/// Φ(u) = Ψ(u, u_{i+1}) + Σ_{j>=i+1} Ψ(u_j, u_{j+1}) for u ∈ (u_{i+1}, u_i],
/// Φ(0) = 0. The tail is cut once terms drop below 1e-14 of the running sum
/// and summed from the smallest term up.
double BuildPhi(const PsiFunction& psi, const GeometricSequence& seq, double u);

/// Continuous, strictly increasing upper regularization of Φ: running
/// maximum over the strip plus a 1e-12 linear tilt.
double RegularizedPhi(const PsiFunction& psi, const GeometricSequence& seq,
                      double u);

/// W(x) = Λ(φ⁻¹(U(x)))·Φ(U(x)) with the regularized Φ.
double CostBoundW(const Certificate& cert, const Eigen::VectorXd& x);

}  // namespace bracketflow
