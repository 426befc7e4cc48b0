#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bracketflow {

using Exponents = std::vector<int>;

/// Sparse multivariate polynomial in a fixed number of variables with real
/// coefficients. Terms with zero coefficient are never stored.
class Polynomial {
 public:
  explicit Polynomial(int num_vars = 0) : num_vars_(num_vars) {}

  static Polynomial Constant(int num_vars, double c);
  /// The monomial x_var (0-based variable index).
  static Polynomial Variable(int num_vars, int var);
  static Polynomial Monomial(double c, Exponents exponents);

  int num_vars() const { return num_vars_; }
  const std::map<Exponents, double>& terms() const { return terms_; }
  bool IsZero() const { return terms_.empty(); }
  int TotalDegree() const;

  /// Adds c·x^e, dropping the term if the sum cancels exactly.
  void AddTerm(const Exponents& e, double c);

  double Evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Polynomial Derivative(int var) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double c) const;
  Polynomial operator-() const { return *this * -1.0; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }

  std::string ToString() const;

 private:
  void CheckCompatible(const Polynomial& o) const;

  int num_vars_;
  std::map<Exponents, double> terms_;
};

}  // namespace bracketflow
