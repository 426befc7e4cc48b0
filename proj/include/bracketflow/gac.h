#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bracketflow/certificate.h"
#include "bracketflow/sampling.h"
#include "bracketflow/stabilizability.h"

namespace bracketflow {

struct GacOptions {
  IntegrationOptions integration;
  StepPolicy policy = StepPolicy::kMid;
  std::uint64_t seed = 1;
  /// Stages run beyond max(𝔦(r), 0) before the terminal test.
  int surplus_stages = 0;
  int max_stages = 400;
  /// Terminal test: d(y) <= terminal_fraction·r.
  double terminal_fraction = 0.1;
};

/// Stage i: a 𝔡(ρ_{i−1}, ρ_i)-scaled process from x_i cut at the first
/// time U <= ũ_i.
struct GacStage {
  int i = 0;
  double rho_prev = 0.0;
  double rho = 0.0;
  double level = 0.0;       // ũ_i
  double start = 0.0;       // 𝐭_{i−1}
  double end = 0.0;         // 𝐭_i
  double budget = 0.0;      // T(ρ_{i−1}, ρ_i)
  double cost = 0.0;        // cost of the stage
  double cost_bound = 0.0;  // Λ(ρ_{i−1})·Ψ(ũ_{i−1}, ũ_i)
  double u_end = 0.0;       // U(x_{i+1})
  double d_end = 0.0;
  double max_d = 0.0;       // max of d over the stage
  double gamma_bound = 0.0; // Γ(ρ_{i−1})
  std::string status;
  std::int64_t steps = 0;
};

/// Open-loop GAC trajectory built by concatenating scaled processes.
class GacWitness {
 public:
  Eigen::VectorXd x;
  double R = 0.0;
  double r = 0.0;

  std::int64_t jbar = 0;  // U(x) ∈ (u_{j̄+1}, u_{j̄}]
  double U0 = 0.0;        // U(x)
  int i_R = 0;            // 𝔦(R)
  int i_r = 0;            // 𝔦(r)
  double zeta = 0.0;      // ζ(R)
  double Gamma_bold = 0.0;
  double S_bold = 0.0;
  double W = 0.0;

  std::vector<GacStage> stages;
  Trajectory trace;
  bool reached_target = false;
  bool failed = false;
  std::string failure;
  double total_cost = 0.0;
  double end_time = 0.0;
  Eigen::VectorXd final_state;

  /// ũ_i.
  double UTilde(int i) const;
  /// ρ_i = φ⁻¹(ũ_i).
  double Rho(int i) const;
  /// The i with v ∈ (ũ_{i+1}, ũ_i].
  int TildeIndexOf(double v) const;

  /// Set by ConstructGacWitness.
  GeometricSequence sequence;
  ScalarFunction phi = ScalarFunction::Identity();
};

/// Runs the stage recursion from x. Stops once at least max(𝔦(r),0) +
/// surplus stages ran and d <= terminal_fraction·r, on reaching the target,
/// or after max_stages. A stage that misses its level within its T budget,
/// blows up, or whose generator fails marks the witness failed and names
/// the stage. Throws ValidationError if the preconditions fail.
GacWitness ConstructGacWitness(const ControlProblem& problem,
                               const Certificate& cert, const Eigen::VectorXd& x,
                               double R, double r, const GacOptions& opts = {});

/// GAC with regulated cost on a witness: (i) d <= 𝚪, (ii) d <= r after 𝐒,
/// (iii) terminal trend, (iv) total cost <= W, plus the construction's
/// breakpoint law and stage cost bounds.
Report CheckGac(const GacWitness& witness, const TargetSet& target,
                double Gamma_bold, double S_bold, double W);

/// CheckGac with the witness' own bounds.
Report CheckGac(const GacWitness& witness, const TargetSet& target);

}  // namespace bracketflow
