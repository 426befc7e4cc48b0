#include "bracketflow/vector_field.h"

#include <stdexcept>

namespace bracketflow {

PolyVectorField::PolyVectorField(std::vector<Polynomial> coords)
    : coords_(std::move(coords)) {
  for (const auto& p : coords_) {
    if (p.num_vars() != dim()) {
      throw std::invalid_argument(
          "vector field coordinate has wrong number of variables");
    }
  }
  Compile();
}

PolyVectorField PolyVectorField::Zero(int dim) {
  return PolyVectorField(std::vector<Polynomial>(static_cast<std::size_t>(dim),
                                                 Polynomial(dim)));
}

PolyVectorField PolyVectorField::Linear(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix must be square");
  const int n = static_cast<int>(a.rows());
  std::vector<Polynomial> coords;
  for (int i = 0; i < n; ++i) {
    Polynomial p(n);
    for (int j = 0; j < n; ++j) {
      Exponents e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(j)] = 1;
      p.AddTerm(e, a(i, j));
    }
    coords.push_back(std::move(p));
  }
  return PolyVectorField(std::move(coords));
}

bool PolyVectorField::IsZero() const {
  for (const auto& p : coords_) {
    if (!p.IsZero()) return false;
  }
  return true;
}

void PolyVectorField::Compile() {
  term_coeff_.clear();
  term_coord_.clear();
  term_exp_.clear();
  for (int i = 0; i < dim(); ++i) {
    for (const auto& [e, c] : coords_[static_cast<std::size_t>(i)].terms()) {
      term_coeff_.push_back(c);
      term_coord_.push_back(i);
      term_exp_.insert(term_exp_.end(), e.begin(), e.end());
    }
  }
}

void PolyVectorField::EvaluateInto(const double* x, double* out) const {
  const int n = dim();
  for (int i = 0; i < n; ++i) out[i] = 0.0;
  const std::size_t terms = term_coeff_.size();
  const int* exp = term_exp_.data();
  for (std::size_t t = 0; t < terms; ++t, exp += n) {
    double value = term_coeff_[t];
    for (int v = 0; v < n; ++v) {
      for (int k = 0; k < exp[v]; ++k) value *= x[v];
    }
    out[term_coord_[t]] += value;
  }
}

Eigen::VectorXd PolyVectorField::Evaluate(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("point dimension does not match field");
  }
  Eigen::VectorXd out(dim());
  Eigen::VectorXd copy = x;
  EvaluateInto(copy.data(), out.data());
  return out;
}

PolyVectorField PolyVectorField::operator+(const PolyVectorField& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("field dimension mismatch");
  std::vector<Polynomial> coords;
  for (int i = 0; i < dim(); ++i) coords.push_back(coord(i) + o.coord(i));
  return PolyVectorField(std::move(coords));
}

PolyVectorField PolyVectorField::operator-(const PolyVectorField& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("field dimension mismatch");
  std::vector<Polynomial> coords;
  for (int i = 0; i < dim(); ++i) coords.push_back(coord(i) - o.coord(i));
  return PolyVectorField(std::move(coords));
}

PolyVectorField PolyVectorField::operator*(double c) const {
  std::vector<Polynomial> coords;
  for (int i = 0; i < dim(); ++i) coords.push_back(coord(i) * c);
  return PolyVectorField(std::move(coords));
}

VectorFieldFn PolyVectorField::AsFunction() const {
  return [field = *this](const Eigen::VectorXd& x) { return field.Evaluate(x); };
}

PolyVectorField LieBracket(const PolyVectorField& g1, const PolyVectorField& g2) {
  if (g1.dim() != g2.dim()) {
    throw std::invalid_argument("Lie bracket of fields with different dimensions");
  }
  const int n = g1.dim();
  std::vector<Polynomial> coords;
  coords.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Polynomial sum(n);
    for (int j = 0; j < n; ++j) {
      sum = sum + g2.Partial(i, j) * g1.coord(j);
      sum = sum - g1.Partial(i, j) * g2.coord(j);
    }
    coords.push_back(std::move(sum));
  }
  return PolyVectorField(std::move(coords));
}

namespace {

PolyVectorField BracketFieldRec(const FormalBracket& b, const ControlLabel& label,
                                const std::vector<PolyVectorField>& fields) {
  if (b.is_letter()) {
    const int i = label.FieldForLetter(b.letter_index());
    if (i < 1 || i > static_cast<int>(fields.size())) {
      throw ValidationError("label " + label.ToString() + ": field index " +
                            std::to_string(i) + " out of range");
    }
    return fields[static_cast<std::size_t>(i - 1)];
  }
  return LieBracket(BracketFieldRec(b.left(), label, fields),
                    BracketFieldRec(b.right(), label, fields));
}

}  // namespace

PolyVectorField BracketField(const ControlLabel& label,
                             const std::vector<PolyVectorField>& fields) {
  label.Validate(static_cast<int>(fields.size()), label.degree());
  return BracketFieldRec(label.bracket, label, fields);
}

Eigen::VectorXd EvaluateBracket(const ControlLabel& label,
                                const std::vector<PolyVectorField>& fields,
                                const Eigen::VectorXd& x) {
  return BracketField(label, fields).Evaluate(x) * static_cast<double>(ToInt(label.sign));
}

Eigen::VectorXd FiniteDifferenceBracket(const VectorFieldFn& g1,
                                        const VectorFieldFn& g2,
                                        const Eigen::VectorXd& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const Eigen::Index n = x.size();
  const Eigen::VectorXd v1 = g1(x);
  const Eigen::VectorXd v2 = g2(x);
  Eigen::MatrixXd j1(n, n), j2(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    j1.col(k) = (g1(xp) - g1(xm)) / (2.0 * h);
    j2.col(k) = (g2(xp) - g2(xm)) / (2.0 * h);
  }
  return j2 * v1 - j1 * v2;
}

nlohmann::json FieldToJson(const PolyVectorField& field) {
  nlohmann::json coords = nlohmann::json::array();
  for (const auto& p : field.coords()) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : p.terms()) terms.push_back({{"c", c}, {"e", e}});
    coords.push_back(std::move(terms));
  }
  return {{"dim", field.dim()}, {"coords", std::move(coords)}};
}

PolyVectorField FieldFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("coords")) {
    throw ValidationError("field JSON needs \"dim\" and \"coords\"");
  }
  const int n = j.at("dim").get<int>();
  if (n <= 0) throw ValidationError("field dimension must be positive");
  const auto& coords_json = j.at("coords");
  if (!coords_json.is_array() || static_cast<int>(coords_json.size()) != n) {
    throw ValidationError("field JSON must list exactly dim coordinates");
  }
  std::vector<Polynomial> coords;
  for (const auto& terms : coords_json) {
    Polynomial p(n);
    for (const auto& term : terms) {
      auto e = term.at("e").get<Exponents>();
      if (static_cast<int>(e.size()) != n) {
        throw ValidationError("exponent vector length differs from dim");
      }
      for (int k : e) {
        if (k < 0) throw ValidationError("negative exponent in field JSON");
      }
      p.AddTerm(e, term.at("c").get<double>());
    }
    coords.push_back(std::move(p));
  }
  return PolyVectorField(std::move(coords));
}

}  // namespace bracketflow
