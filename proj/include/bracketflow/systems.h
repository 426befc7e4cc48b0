#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bracketflow/certificate.h"
#include "bracketflow/flow.h"
#include "bracketflow/sampling.h"
#include "bracketflow/stabilizability.h"

namespace bracketflow {

/// A benchmark: dynamics, target, cost, feedback, certificates and the
/// trial grids it is expected to pass.
struct BenchmarkSystem {
  std::string name;
  ControlProblem problem;
  Certificate cert;
  PlainSpec plain;
  std::vector<TrialPair> trials;
  std::vector<StepPolicy> policies;
  std::vector<TrialPair> plain_trials;
  std::vector<StepPolicy> plain_policies;
  /// Generator description for the JSON system format.
  nlohmann::json generator_json;
};

/// f1 = (1, 0, −x2), f2 = (0, 1, x1).
std::vector<PolyVectorField> BrockettFields();

/// Near the x3-axis (|x3| > c·(x1² + x2²)) the bracket label
/// ([X1,X2], (1,2), −sign(x3)); elsewhere the signed single field with the
/// steepest descent of V = (x1² + x2²)² + γ·x3² (ties: f1+, f1−, f2+, f2−).
FeedbackGenerator BrockettGenerator(double c = 1.0, double gamma = 4.0);

/// Brockett integrator with l = |x|² and target {0} at tolerance 1e-3.
BenchmarkSystem BrockettSystem(double c = 1.0, double gamma = 4.0);

/// −X1 for x > 0, +X1 for x < 0.
FeedbackGenerator ScalarSignGenerator();

/// ẏ = α on R with l = |x| and target {0} at tolerance 1e-4.
BenchmarkSystem ScalarLinearSystem();

/// Generator from its JSON description: {"kind": "brockett", "c", "gamma"},
/// {"kind": "scalar_sign"} or {"kind": "constant", "label": {...}}.
FeedbackGenerator GeneratorFromJson(const nlohmann::json& j);

}  // namespace bracketflow
