#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace bracketflow {

/// How a step is picked inside an admissible band [lo, hi].
enum class StepPolicy { kMin, kMid, kMax, kRandom, kDefault };

std::string ToString(StepPolicy p);
/// Accepts "min", "mid", "max", "random", "default". Throws ValidationError.
StepPolicy StepPolicyFromString(const std::string& s);

/// Picks steps inside bands. When the band has lo = 0 the min policy uses
/// min_fraction·hi, since a zero step is not a partition step.
class StepChooser {
 public:
  explicit StepChooser(StepPolicy policy, std::uint64_t seed = 0,
                       double min_fraction = 0.1)
      : policy_(policy), rng_(seed), min_fraction_(min_fraction) {}

  /// `preferred` is used by kDefault (clipped into the band); kDefault
  /// without a preferred value falls back to the midpoint.
  double Choose(double lo, double hi,
                std::optional<double> preferred = std::nullopt);

  StepPolicy policy() const { return policy_; }

 private:
  StepPolicy policy_;
  std::mt19937_64 rng_;
  double min_fraction_;
};

/// A partition 0 = s_0 < s_1 < ... of the half line, generated lazily from
/// its steps s_j − s_{j−1}.
class Partition {
 public:
  /// Step j (j >= 1) of the partition; must be positive and finite.
  using StepFn = std::function<double(std::int64_t j)>;

  static Partition Uniform(double h);
  static Partition FromSteps(StepFn step);
  /// Given times (starting at 0); beyond them the last step repeats.
  static Partition Explicit(std::vector<double> times);
  /// Degree-k partition of rank delta.
  static Partition Rank(double delta, int k, StepPolicy policy,
                        std::uint64_t seed = 0);

  /// s_j. Materializes steps up to j on first use.
  double Time(std::int64_t j) const;
  double Step(std::int64_t j) const;
  /// Materialized times so far.
  const std::vector<double>& times() const { return times_; }
  /// Materialized steps; steps()[j-1] is step j exactly as generated.
  const std::vector<double>& steps() const { return steps_; }

 private:
  explicit Partition(StepFn step) : step_(std::move(step)), times_{0.0} {}

  StepFn step_;
  mutable std::vector<double> times_;
  mutable std::vector<double> steps_;
};

/// Band ((k−1)/(2k)·δ/j^{1/k}, δ) for step j of a degree-k partition of
/// rank δ.
std::pair<double, double> RankBand(double delta, int k, std::int64_t j);

/// Checks steps (steps[j-1] is step j) against the rank-δ band. Returns
/// the first offending step index, or 0 if all pass.
std::int64_t AuditRankPartition(const std::vector<double>& steps, double delta,
                                int k);

}  // namespace bracketflow
