#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "bracketflow/control_label.h"
#include "bracketflow/polynomial.h"

namespace bracketflow {

using Point = Eigen::VectorXd;
using VectorFieldFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// A polynomial vector field on R^n. All derivatives exist, so brackets of
/// any nesting depth are exact polynomials.
class PolyVectorField {
 public:
  PolyVectorField() = default;
  explicit PolyVectorField(std::vector<Polynomial> coords);

  /// The zero field on R^n.
  static PolyVectorField Zero(int dim);
  /// x -> A x.
  static PolyVectorField Linear(const Eigen::MatrixXd& a);

  int dim() const { return static_cast<int>(coords_.size()); }
  const Polynomial& coord(int i) const { return coords_.at(static_cast<std::size_t>(i)); }
  const std::vector<Polynomial>& coords() const { return coords_; }
  bool IsZero() const;

  Eigen::VectorXd Evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Allocation-free evaluation for the integrator; `x` and `out` hold dim()
  /// entries.
  void EvaluateInto(const double* x, double* out) const;

  /// Polynomial Jacobian entry d(coord i)/d(x_j).
  Polynomial Partial(int i, int j) const { return coord(i).Derivative(j); }

  PolyVectorField operator+(const PolyVectorField& o) const;
  PolyVectorField operator-(const PolyVectorField& o) const;
  PolyVectorField operator*(double c) const;

  friend bool operator==(const PolyVectorField& a, const PolyVectorField& b) {
    return a.coords_ == b.coords_;
  }

  VectorFieldFn AsFunction() const;

 private:
  void Compile();

  std::vector<Polynomial> coords_;
  // Flattened terms: coefficient, output coordinate, exponent row.
  std::vector<double> term_coeff_;
  std::vector<int> term_coord_;
  std::vector<int> term_exp_;
};

/// [g1,g2] = Dg2·g1 − Dg1·g2, exactly.
PolyVectorField LieBracket(const PolyVectorField& g1, const PolyVectorField& g2);

/// B(g) for the label's bracket and field string (the sign is not applied).
PolyVectorField BracketField(const ControlLabel& label,
                             const std::vector<PolyVectorField>& fields);

/// sgn·B(g)(x).
Eigen::VectorXd EvaluateBracket(const ControlLabel& label,
                                const std::vector<PolyVectorField>& fields,
                                const Eigen::VectorXd& x);

/// Independent bracket oracle: central-difference Jacobians of two fields at
/// x, composed as Dg2·g1 − Dg1·g2. Only point evaluations of g1, g2 are used.
Eigen::VectorXd FiniteDifferenceBracket(const VectorFieldFn& g1,
                                        const VectorFieldFn& g2,
                                        const Eigen::VectorXd& x,
                                        double h = 1e-4);

/// {"dim": n, "coords": [[{"c": coeff, "e": [e1,...,en]}, ...], ...]}
nlohmann::json FieldToJson(const PolyVectorField& field);
PolyVectorField FieldFromJson(const nlohmann::json& j);

}  // namespace bracketflow
