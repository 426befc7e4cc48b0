#include "bracketflow/certificate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bracketflow/bracket.h"

namespace bracketflow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Log-spaced sweep used by the monotonicity checks.
std::vector<double> Sweep(double lo, double hi, int count) {
  std::vector<double> out;
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) out.push_back(std::exp(a + (b - a) * i / (count - 1)));
  return out;
}

}  // namespace

LyapunovFunction LyapunovFunction::Norm(double c) {
  if (!(c > 0.0)) throw ValidationError("norm scale must be positive");
  return LyapunovFunction("norm", c, [c](const Eigen::Ref<const Eigen::VectorXd>& x) {
    return c * x.norm();
  });
}

LyapunovFunction LyapunovFunction::Brockett(double gamma) {
  if (!(gamma > 0.0)) throw ValidationError("brockett gamma must be positive");
  return LyapunovFunction(
      "brockett", gamma, [gamma](const Eigen::Ref<const Eigen::VectorXd>& x) {
        if (x.size() != 3) throw std::invalid_argument("brockett U needs n = 3");
        const double rho2 = x[0] * x[0] + x[1] * x[1];
        return std::pow(rho2 * rho2 + gamma * x[2] * x[2], 0.25);
      });
}

LyapunovFunction LyapunovFunction::Custom(std::string name, Fn fn) {
  return LyapunovFunction("custom:" + name, 0.0, std::move(fn));
}

nlohmann::json LyapunovFunction::ToJson() const {
  if (kind_ == "norm") return {{"kind", "norm"}, {"c", param_}};
  if (kind_ == "brockett") return {{"kind", "brockett"}, {"gamma", param_}};
  throw std::logic_error("U of kind " + kind_ + " is not serializable");
}

LyapunovFunction LyapunovFunction::FromJson(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "norm") return Norm(j.value("c", 1.0));
  if (kind == "brockett") return Brockett(j.value("gamma", 4.0));
  throw ValidationError("unknown U kind \"" + kind + "\"");
}

DLowerEnvelope DLowerEnvelope::Analytic(std::function<double(double)> value,
                                        std::function<double(double)> inverse) {
  DLowerEnvelope env;
  env.analytic_ = true;
  env.value_ = std::move(value);
  env.inverse_ = std::move(inverse);
  return env;
}

DLowerEnvelope DLowerEnvelope::FromGrid(const LyapunovFunction& U,
                                        const TargetSet& target,
                                        const EnvelopeGrid& grid) {
  if (grid.points < 2 || !(grid.half_width > 0.0)) {
    throw ValidationError("envelope grid needs >= 2 points and a positive width");
  }
  const int n = target.dim();
  const int cells_per_axis = grid.points - 1;
  const double total = std::pow(static_cast<double>(cells_per_axis), n);
  if (total > 5e7) throw ValidationError("envelope grid is too large");
  const double h = grid.spacing();
  const double w = grid.half_width;
  // d is 1-Lipschitz, so it is at least d(center) − half diagonal on a cell.
  const double half_diag = 0.5 * h * std::sqrt(static_cast<double>(n));

  std::vector<std::pair<double, double>> cells;  // (max U, min d)
  cells.reserve(static_cast<std::size_t>(total));
  double outside = kInf;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd center(n), corner(n);
  while (true) {
    bool boundary = false;
    for (int i = 0; i < n; ++i) {
      const int c = idx[static_cast<std::size_t>(i)];
      const double lo = -w + h * c, hi = lo + h;
      center[i] = lo + 0.5 * h;
      corner[i] = std::abs(lo) > std::abs(hi) ? lo : hi;
      boundary |= c == 0 || c == cells_per_axis - 1;
    }
    const double d_min = std::max(0.0, target.Distance(center) - half_diag);
    cells.emplace_back(U(corner), d_min);
    if (boundary) outside = std::min(outside, d_min);
    int i = 0;
    while (i < n && ++idx[static_cast<std::size_t>(i)] == cells_per_axis) {
      idx[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == n) break;
  }
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  DLowerEnvelope env;
  env.resolution_ = h;
  env.outside_ = outside;
  double running = kInf;
  for (const auto& [u, d] : cells) {
    running = std::min(running, d);
    env.u_desc_.push_back(u);
    env.d_prefix_min_.push_back(running);
  }
  return env;
}

double DLowerEnvelope::operator()(double u) const {
  if (u <= 0.0) return 0.0;
  if (analytic_) return value_(u);
  const auto it = std::partition_point(u_desc_.begin(), u_desc_.end(),
                                       [u](double v) { return v >= u; });
  const auto count = it - u_desc_.begin();
  if (count == 0) return outside_;
  return std::min(outside_, d_prefix_min_[static_cast<std::size_t>(count - 1)]);
}

double DLowerEnvelope::Inverse(double R) const {
  if (R < 0.0) return 0.0;
  if (analytic_) return inverse_(R);
  if (u_desc_.empty()) return kInf;
  double hi = u_desc_.front();
  if (outside_ <= R || (*this)(hi) <= R) return kInf;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) <= R) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

Multirank Certificate::Delta(double R, double r) const {
  std::vector<double> d;
  for (const PairFunction& f : multirank) d.push_back(f(R, r));
  return Multirank(std::move(d));
}

void Certificate::Validate() const {
  if (multirank.empty()) throw ValidationError("certificate multirank is empty");
  if (!phi.Invertible()) throw ValidationError("phi must be an invertible family");
  if (!gamma.Invertible()) throw ValidationError("Gamma must be an invertible family");
  const auto grid = Sweep(1e-6, 1e6, 241);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(phi(grid[i]) > phi(grid[i - 1]))) throw ValidationError("phi is not strictly increasing");
    if (!(gamma(grid[i]) > gamma(grid[i - 1]))) throw ValidationError("Gamma is not strictly increasing");
    if (lambda(grid[i]) < lambda(grid[i - 1])) throw ValidationError("Lambda is decreasing");
  }
  if (!(lambda(grid.front()) > 0.0)) throw ValidationError("Lambda must be positive");
  if (k() == 1) {
    const bool one = lambda(0.0) == 1.0 && lambda(1e6) == 1.0;
    if (!one) throw ValidationError("Lambda must be identically 1 when k = 1");
  }
  const auto pairs = Sweep(1e-3, 1e3, 31);
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      const double R = pairs[a], r = pairs[b];
      if (!(T(R, r) > 0.0)) throw ValidationError("T must be positive");
      if (a + 1 < pairs.size() && T(pairs[a + 1], r) < T(R, r)) {
        throw ValidationError("T must increase in R");
      }
      if (b + 1 < a && T(R, pairs[b + 1]) > T(R, r)) {
        throw ValidationError("T must decrease in r");
      }
      for (const PairFunction& f : multirank) {
        if (!(f(R, r) > 0.0) || !std::isfinite(f(R, r))) {
          throw ValidationError("multirank entries must be positive");
        }
      }
    }
  }
  // Tail of Σ Ψ(u_i, u_{i+1}) must settle.
  const double head = BuildPhi(psi, sequence, sequence(0));
  if (!std::isfinite(head)) throw ValidationError("Psi tail over the sequence diverges");
}

DLowerEnvelope Certificate::MakeEnvelope(const TargetSet& target) const {
  if (U.kind() == "norm" && target.kind() == TargetSet::Kind::kPoint &&
      target.Distance(Eigen::VectorXd::Zero(target.dim())) == 0.0) {
    const double c = U.param();
    return DLowerEnvelope::Analytic([c](double u) { return u / c; },
                                    [c](double R) { return c * R; });
  }
  return DLowerEnvelope::FromGrid(U, target, envelope);
}

nlohmann::json Certificate::ToJson() const {
  nlohmann::json ranks = nlohmann::json::array();
  for (const PairFunction& f : multirank) ranks.push_back(f.ToJson());
  return {{"U", U.ToJson()},
          {"phi", phi.ToJson()},
          {"Gamma", gamma.ToJson()},
          {"T", T.ToJson()},
          {"multirank", ranks},
          {"Lambda", lambda.ToJson()},
          {"Psi", psi.ToJson()},
          {"sequence", sequence.ToJson()},
          {"envelope_grid",
           {{"half_width", envelope.half_width}, {"points", envelope.points}}}};
}

Certificate Certificate::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("certificate must be a JSON object");
  Certificate c;
  try {
    c.U = LyapunovFunction::FromJson(j.at("U"));
    c.phi = ScalarFunction::FromJson(j.at("phi"));
    c.gamma = ScalarFunction::FromJson(j.at("Gamma"));
    c.T = PairFunction::FromJson(j.at("T"));
    for (const auto& f : j.at("multirank")) c.multirank.push_back(PairFunction::FromJson(f));
    if (j.contains("Lambda")) {
      c.lambda = ScalarFunction::FromJson(j.at("Lambda"));
    } else {
      c.lambda = c.k() == 1 ? ScalarFunction::Constant(1.0) : ScalarFunction::Affine(1.0, 1.0);
    }
    if (j.contains("Psi")) c.psi = PsiFunction::FromJson(j.at("Psi"));
    if (j.contains("sequence")) c.sequence = GeometricSequence::FromJson(j.at("sequence"));
    if (j.contains("envelope_grid")) {
      c.envelope.half_width = j.at("envelope_grid").at("half_width").get<double>();
      c.envelope.points = j.at("envelope_grid").at("points").get<int>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad certificate: ") + e.what());
  }
  c.Validate();
  return c;
}

double BuildPhi(const PsiFunction& psi, const GeometricSequence& seq, double u) {
  if (u <= 0.0) return 0.0;
  const std::int64_t i = seq.IndexOf(u);
  std::vector<double> terms;
  double running = 0.0;
  for (std::int64_t j = i + 1; j < i + 1 + 100000; ++j) {
    const double term = psi(seq(j), seq(j + 1));
    if (!std::isfinite(term)) return kInf;
    terms.push_back(term);
    running += term;
    if (term <= 1e-14 * running) break;
    if (j == i + 100000) return kInf;
  }
  double tail = 0.0;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) tail += *it;
  return psi(u, seq(i + 1)) + tail;
}

double RegularizedPhi(const PsiFunction& psi, const GeometricSequence& seq,
                      double u) {
  if (u <= 0.0) return 0.0;
  const double below = seq(seq.IndexOf(u) + 1);
  return std::max(BuildPhi(psi, seq, u), BuildPhi(psi, seq, below)) + 1e-12 * u;
}

double CostBoundW(const Certificate& cert, const Eigen::VectorXd& x) {
  const double u = cert.U(x);
  return cert.lambda(cert.phi.Inverse(u)) * RegularizedPhi(cert.psi, cert.sequence, u);
}

}  // namespace bracketflow
