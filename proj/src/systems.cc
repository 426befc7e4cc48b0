#include "bracketflow/systems.h"

#include <array>
#include <cmath>

#include "bracketflow/bracket.h"

namespace bracketflow {

std::vector<PolyVectorField> BrockettFields() {
  const int n = 3;
  const Polynomial one = Polynomial::Constant(n, 1.0);
  const Polynomial zero(n);
  const Polynomial x1 = Polynomial::Variable(n, 0);
  const Polynomial x2 = Polynomial::Variable(n, 1);
  return {PolyVectorField({one, zero, x2 * -1.0}), PolyVectorField({zero, one, x1})};
}

FeedbackGenerator BrockettGenerator(double c, double gamma) {
  if (!(c > 0.0) || !(gamma > 0.0)) {
    throw ValidationError("brockett generator constants must be positive");
  }
  const ControlLabel bracket_minus{ParseBracket("[X1,X2]"), {1, 2}, Sign::kMinus};
  const ControlLabel bracket_plus{ParseBracket("[X1,X2]"), {1, 2}, Sign::kPlus};
  const FormalBracket x1 = FormalBracket::Letter(1);
  return FeedbackGenerator(
      "brockett", 2,
      [=](const Eigen::VectorXd& x) -> ControlLabel {
        const double a = x[0] * x[0] + x[1] * x[1];
        if (std::abs(x[2]) > c * a) return x[2] > 0.0 ? bracket_minus : bracket_plus;
        // Directional derivatives of V along f1 and f2.
        const double g1 = 4.0 * a * x[0] - 2.0 * gamma * x[2] * x[1];
        const double g2 = 4.0 * a * x[1] + 2.0 * gamma * x[2] * x[0];
        const std::array<double, 4> rate{g1, -g1, g2, -g2};
        int best = 0;
        for (int i = 1; i < 4; ++i) {
          if (rate[static_cast<std::size_t>(i)] < rate[static_cast<std::size_t>(best)]) best = i;
        }
        return ControlLabel{x1, {best < 2 ? 1 : 2}, best % 2 == 0 ? Sign::kPlus : Sign::kMinus};
      });
}

BenchmarkSystem BrockettSystem(double c, double gamma) {
  BenchmarkSystem sys{
      "brockett",
      ControlProblem{BrockettFields(), TargetSet::Point(Eigen::VectorXd::Zero(3), 1e-3),
                     Lagrangian::NormSquared(), BrockettGenerator(c, gamma)},
      Certificate{},
      PlainSpec{},
      {},
      {StepPolicy::kMin, StepPolicy::kMid, StepPolicy::kMax, StepPolicy::kRandom},
      {},
      // Rank partitions shrink like δ/√j; the min and default policies make
      // bracket progress only logarithmic in time.
      {StepPolicy::kMid, StepPolicy::kMax, StepPolicy::kRandom},
      {{"kind", "brockett"}, {"c", c}, {"gamma", gamma}}};

  Certificate& cert = sys.cert;
  cert.U = LyapunovFunction::Brockett(gamma);
  cert.phi = ScalarFunction::BrokenPower(0.5, 1.0, 1.0, 0.5);
  cert.gamma = ScalarFunction::Linear(2.0);
  cert.T = PairFunction::InversePower(48.0, 2.0, 1.0);
  cert.multirank = {PairFunction::Power(0.25, 0.0, 1.0, 0.25),
                    PairFunction::Power(0.5, 0.0, 1.0, 0.5)};
  cert.lambda = ScalarFunction::PowerAffine(1.0, 40.0, 2.0);
  cert.psi = PsiFunction::Difference();
  cert.sequence = GeometricSequence(1.0, 0.5);
  cert.envelope = EnvelopeGrid{2.5, 101};
  cert.Validate();

  sys.trials = {{2.0, 1.0}, {1.0, 0.5}, {0.5, 0.25}, {0.25, 0.125}};
  sys.plain = PlainSpec{2, ScalarFunction::Linear(2.0),
                        PairFunction::InversePower(48.0, 2.0, 1.0),
                        PairFunction::Power(0.5, 0.0, 1.0, 0.5)};
  sys.plain_trials = {{1.0, 0.2}, {0.5, 0.1}};
  return sys;
}

FeedbackGenerator ScalarSignGenerator() {
  const ControlLabel down{FormalBracket::Letter(1), {1}, Sign::kMinus};
  const ControlLabel up{FormalBracket::Letter(1), {1}, Sign::kPlus};
  return FeedbackGenerator("scalar_sign", 1, [=](const Eigen::VectorXd& x) {
    return x[0] > 0.0 ? down : up;
  });
}

BenchmarkSystem ScalarLinearSystem() {
  const Polynomial one = Polynomial::Constant(1, 1.0);
  BenchmarkSystem sys{
      "scalar",
      ControlProblem{{PolyVectorField({one})},
                     TargetSet::Point(Eigen::VectorXd::Zero(1), 1e-4),
                     Lagrangian::Norm(),
                     ScalarSignGenerator()},
      Certificate{},
      PlainSpec{},
      {},
      {StepPolicy::kMin, StepPolicy::kMid, StepPolicy::kMax, StepPolicy::kRandom},
      {},
      {StepPolicy::kMin, StepPolicy::kMid, StepPolicy::kMax, StepPolicy::kRandom},
      {{"kind", "scalar_sign"}}};

  Certificate& cert = sys.cert;
  cert.U = LyapunovFunction::Norm(1.0);
  cert.phi = ScalarFunction::Identity();
  cert.gamma = ScalarFunction::Identity();
  cert.T = PairFunction::Affine(1.0, 1.0, 1.0);
  cert.multirank = {PairFunction::Power(0.5, 0.0, 1.0, 1.0)};
  cert.lambda = ScalarFunction::Constant(1.0);
  cert.psi = PsiFunction::Difference();
  cert.sequence = GeometricSequence(1.0, 0.5);
  cert.Validate();

  // r/R ratios keep x + r <= 2, which the cost bound needs.
  for (double R : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    for (double ratio : {0.1, 0.25, 0.4, 0.55, 0.7}) sys.trials.push_back({R, R * ratio});
  }
  sys.plain = PlainSpec{1, ScalarFunction::Identity(), PairFunction::Affine(1.0, 1.0, 1.0),
                        PairFunction::Power(0.5, 0.0, 1.0, 1.0)};
  sys.plain_trials = sys.trials;
  return sys;
}

FeedbackGenerator GeneratorFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ValidationError("generator spec needs a \"kind\"");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "brockett") return BrockettGenerator(j.value("c", 1.0), j.value("gamma", 4.0));
  if (kind == "scalar_sign") return ScalarSignGenerator();
  if (kind == "constant") return FeedbackGenerator::Constant(LabelFromJson(j.at("label")));
  throw ValidationError("unknown generator kind \"" + kind + "\"");
}

}  // namespace bracketflow
