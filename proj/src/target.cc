#include "bracketflow/target.h"

#include <cmath>
#include <stdexcept>

#include "bracketflow/bracket.h"

namespace bracketflow {

TargetSet::TargetSet(Kind kind, Eigen::VectorXd vec, double scalar,
                     double tolerance)
    : kind_(kind), vec_(std::move(vec)), scalar_(scalar), tolerance_(tolerance) {
  if (vec_.size() == 0) throw ValidationError("target dimension must be positive");
  if (!(tolerance_ > 0.0)) throw ValidationError("target tolerance must be positive");
}

TargetSet TargetSet::Point(Eigen::VectorXd center, double tolerance) {
  return TargetSet(Kind::kPoint, std::move(center), 0.0, tolerance);
}

TargetSet TargetSet::Ball(Eigen::VectorXd center, double radius,
                          double tolerance) {
  if (!(radius >= 0.0)) throw ValidationError("ball radius must be non-negative");
  return TargetSet(Kind::kBall, std::move(center), radius, tolerance);
}

TargetSet TargetSet::HalfSpaceComplement(Eigen::VectorXd normal, double offset,
                                         double tolerance) {
  const double norm = normal.norm();
  if (!(norm > 0.0)) throw ValidationError("half-space normal must be non-zero");
  return TargetSet(Kind::kHalfSpaceComplement, normal / norm, offset / norm,
                   tolerance);
}

double TargetSet::Distance(const double* x) const {
  const Eigen::Index n = vec_.size();
  switch (kind_) {
    case Kind::kPoint:
    case Kind::kBall: {
      double sq = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = x[i] - vec_[i];
        sq += d * d;
      }
      return std::max(std::sqrt(sq) - scalar_, 0.0);
    }
    case Kind::kHalfSpaceComplement: {
      double dot = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) dot += vec_[i] * x[i];
      return std::max(scalar_ - dot, 0.0);
    }
  }
  return 0.0;
}

Eigen::VectorXd TargetSet::SampleAtDistance(std::mt19937_64& rng,
                                            double dist) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index n = vec_.size();
  Eigen::VectorXd dir(n);
  do {
    for (Eigen::Index i = 0; i < n; ++i) dir[i] = normal(rng);
  } while (dir.norm() < 1e-12);
  dir.normalize();
  switch (kind_) {
    case Kind::kPoint:
    case Kind::kBall:
      return vec_ + (scalar_ + dist) * dir;
    case Kind::kHalfSpaceComplement: {
      // Random point on the boundary plane, pushed away from the target.
      const Eigen::VectorXd tangent = dir - dir.dot(vec_) * vec_;
      return scalar_ * vec_ + tangent - dist * vec_;
    }
  }
  return vec_;
}

nlohmann::json TargetSet::ToJson() const {
  std::vector<double> v(vec_.data(), vec_.data() + vec_.size());
  switch (kind_) {
    case Kind::kPoint:
      return {{"kind", "point"}, {"center", v}, {"tolerance", tolerance_}};
    case Kind::kBall:
      return {{"kind", "ball"},
              {"center", v},
              {"radius", scalar_},
              {"tolerance", tolerance_}};
    case Kind::kHalfSpaceComplement:
      return {{"kind", "halfspace_complement"},
              {"normal", v},
              {"offset", scalar_},
              {"tolerance", tolerance_}};
  }
  return {};
}

TargetSet TargetSet::FromJson(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const double tol = j.at("tolerance").get<double>();
  auto vec = [&](const char* key) {
    const auto v = j.at(key).get<std::vector<double>>();
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
        v.data(), static_cast<Eigen::Index>(v.size())));
  };
  if (kind == "point") return Point(vec("center"), tol);
  if (kind == "ball") return Ball(vec("center"), j.at("radius").get<double>(), tol);
  if (kind == "halfspace_complement") {
    return HalfSpaceComplement(vec("normal"), j.at("offset").get<double>(), tol);
  }
  throw ValidationError("unknown target kind \"" + kind + "\"");
}

Lagrangian Lagrangian::Zero() {
  return Lagrangian("zero", 0.0,
                    [](const Eigen::Ref<const Eigen::VectorXd>&, int, Sign) {
                      return 0.0;
                    });
}

Lagrangian Lagrangian::Norm(double scale) {
  return Lagrangian("norm", scale,
                    [scale](const Eigen::Ref<const Eigen::VectorXd>& x, int,
                            Sign) { return scale * x.norm(); });
}

Lagrangian Lagrangian::NormSquared(double scale) {
  return Lagrangian("norm_squared", scale,
                    [scale](const Eigen::Ref<const Eigen::VectorXd>& x, int,
                            Sign) { return scale * x.squaredNorm(); });
}

Lagrangian Lagrangian::Custom(std::string name, Fn fn) {
  return Lagrangian("custom:" + name, 1.0, std::move(fn));
}

double Lagrangian::operator()(const Eigen::Ref<const Eigen::VectorXd>& x,
                              int index, Sign sign) const {
  const double v = fn_(x, index, sign);
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::domain_error("Lagrangian " + kind_ +
                            " returned a negative or non-finite value");
  }
  return v;
}

nlohmann::json Lagrangian::ToJson() const {
  return {{"kind", kind_}, {"scale", scale_}};
}

Lagrangian Lagrangian::FromJson(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const double scale = j.value("scale", 1.0);
  if (scale < 0.0) throw ValidationError("Lagrangian scale must be non-negative");
  if (kind == "zero") return Zero();
  if (kind == "norm") return Norm(scale);
  if (kind == "norm_squared") return NormSquared(scale);
  throw ValidationError("unknown Lagrangian kind \"" + kind + "\"");
}

}  // namespace bracketflow
