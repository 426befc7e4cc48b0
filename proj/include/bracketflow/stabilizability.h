#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "bracketflow/certificate.h"
#include "bracketflow/function_family.h"
#include "bracketflow/partition.h"
#include "bracketflow/sampling.h"

namespace bracketflow {

struct TrialPair {
  double R = 1.0;
  double r = 0.1;
};

struct CheckOptions {
  std::vector<TrialPair> trials;
  int states_per_pair = 20;
  std::vector<StepPolicy> policies = {StepPolicy::kMin, StepPolicy::kMid,
                                      StepPolicy::kMax, StepPolicy::kRandom};
  /// Horizon = horizon_factor·T(R,r) (or ·S(R,r) for the plain notion)
  /// unless `horizon` is set.
  double horizon_factor = 1.25;
  std::optional<double> horizon;
  std::uint64_t seed = 1;
  IntegrationOptions integration;
  /// Worker threads for independent trials; results do not depend on it.
  int threads = 1;
};

/// Aggregate of one condition over all trials.
struct ConditionSummary {
  std::string name;
  bool pass = true;
  int failures = 0;
  int evaluated = 0;
  /// Smallest margin (bound − observed); negative means violated.
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string first_failure;
};

/// One sampled process.
struct TrialResult {
  int pair_index = 0;
  double R = 0.0;
  double r = 0.0;
  int state_index = 0;
  std::string policy;
  Eigen::VectorXd x;
  std::string status;
  double horizon = 0.0;
  std::int64_t steps = 0;
  /// Margins aligned with Report::conditions; NaN when vacuous.
  std::vector<double> margins;
  nlohmann::json details;
};

struct Report {
  std::string notion;
  std::vector<ConditionSummary> conditions;
  std::vector<TrialResult> trials;
  /// Free-form coverage and configuration notes.
  nlohmann::json coverage;

  bool pass() const;
  nlohmann::json ToJson() const;
  void WriteTable(std::ostream& os) const;
  /// Fills the summaries from the trial margins.
  void Summarize();
};

/// Degree-k U-sample stabilizability with regulated cost, sampled: for every
/// trial pair, state and policy, runs a 𝔡(R,r)-scaled process and checks
/// admissibility, (i) overshoot, (ii) hitting time of U <= φ(r), (iii)
/// trapping after every τ with U <= φ(r), (iv) cost up to the hitting time,
/// and audits φ⁻¹(U(x)) >= d(x) at the sampled states.
Report CheckStabilizability(const ControlProblem& problem,
                            const Certificate& cert, const CheckOptions& opts);

/// Data of the plain degree-k notion: overshoot Γ, settling time S and rank δ.
struct PlainSpec {
  int k = 1;
  ScalarFunction gamma = ScalarFunction::Identity();
  PairFunction S = PairFunction::Constant(1.0);
  PairFunction delta = PairFunction::Constant(0.1);

  nlohmann::json ToJson() const;
  static PlainSpec FromJson(const nlohmann::json& j);
};

/// Plain degree-k sample stabilizability on rank-δ(R,r) partitions: checks
/// admissibility, (i) overshoot and (ii) d <= r after S(R,r).
Report CheckSampleStabDegreeK(const ControlProblem& problem,
                              const PlainSpec& spec, const CheckOptions& opts);

/// Initial state number `index` for a trial pair: spheres d = R for even
/// indices, d = R·U(0.1, 1) for odd ones.
Eigen::VectorXd SampleTrialState(const TargetSet& target, double R, int index,
                                 std::uint64_t seed);

/// SplitMix64 mixing of a master seed with trial coordinates.
std::uint64_t TrialSeed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                        std::uint64_t c = 0);

}  // namespace bracketflow
