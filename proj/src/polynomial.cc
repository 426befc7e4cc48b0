#include "bracketflow/polynomial.h"

#include <sstream>
#include <stdexcept>

namespace bracketflow {

namespace {

double IntPow(double base, int e) {
  double result = 1.0;
  for (int i = 0; i < e; ++i) result *= base;
  return result;
}

}  // namespace

Polynomial Polynomial::Constant(int num_vars, double c) {
  Polynomial p(num_vars);
  p.AddTerm(Exponents(static_cast<std::size_t>(num_vars), 0), c);
  return p;
}

Polynomial Polynomial::Variable(int num_vars, int var) {
  if (var < 0 || var >= num_vars) {
    throw std::out_of_range("variable index out of range");
  }
  Exponents e(static_cast<std::size_t>(num_vars), 0);
  e[static_cast<std::size_t>(var)] = 1;
  Polynomial p(num_vars);
  p.AddTerm(e, 1.0);
  return p;
}

Polynomial Polynomial::Monomial(double c, Exponents exponents) {
  Polynomial p(static_cast<int>(exponents.size()));
  p.AddTerm(exponents, c);
  return p;
}

int Polynomial::TotalDegree() const {
  int best = 0;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int k : e) d += k;
    best = std::max(best, d);
  }
  return best;
}

void Polynomial::AddTerm(const Exponents& e, double c) {
  if (static_cast<int>(e.size()) != num_vars_) {
    throw std::invalid_argument("exponent vector has wrong length");
  }
  for (int k : e) {
    if (k < 0) throw std::invalid_argument("negative exponent");
  }
  if (c == 0.0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second == 0.0) terms_.erase(it);
}

double Polynomial::Evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != num_vars_) {
    throw std::invalid_argument("point dimension does not match polynomial");
  }
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c;
    for (int v = 0; v < num_vars_; ++v) {
      term *= IntPow(x[v], e[static_cast<std::size_t>(v)]);
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::Derivative(int var) const {
  if (var < 0 || var >= num_vars_) {
    throw std::out_of_range("variable index out of range");
  }
  Polynomial out(num_vars_);
  for (const auto& [e, c] : terms_) {
    const int k = e[static_cast<std::size_t>(var)];
    if (k == 0) continue;
    Exponents d = e;
    d[static_cast<std::size_t>(var)] = k - 1;
    out.AddTerm(d, c * k);
  }
  return out;
}

void Polynomial::CheckCompatible(const Polynomial& o) const {
  if (num_vars_ != o.num_vars_) {
    throw std::invalid_argument("polynomials have different variable counts");
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  CheckCompatible(o);
  Polynomial out = *this;
  for (const auto& [e, c] : o.terms_) out.AddTerm(e, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  CheckCompatible(o);
  Polynomial out = *this;
  for (const auto& [e, c] : o.terms_) out.AddTerm(e, -c);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  CheckCompatible(o);
  Polynomial out(num_vars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e(ea.size());
      for (std::size_t v = 0; v < ea.size(); ++v) e[v] = ea[v] + eb[v];
      out.AddTerm(e, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::operator*(double c) const {
  Polynomial out(num_vars_);
  for (const auto& [e, coeff] : terms_) out.AddTerm(e, coeff * c);
  return out;
}

std::string Polynomial::ToString() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      os << "*x" << (v + 1);
      if (e[v] > 1) os << "^" << e[v];
    }
  }
  return os.str();
}

}  // namespace bracketflow
