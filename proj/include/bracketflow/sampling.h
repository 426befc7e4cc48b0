#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bracketflow/control_label.h"
#include "bracketflow/flow.h"
#include "bracketflow/partition.h"
#include "bracketflow/target.h"
#include "bracketflow/vector_field.h"

namespace bracketflow {

/// Multirank (δ_1, ..., δ_k), all positive.
class Multirank {
 public:
  explicit Multirank(std::vector<double> delta);

  int k() const { return static_cast<int>(delta_.size()); }
  /// δ_ell for 1 <= ell <= k.
  double operator()(int ell) const;
  const std::vector<double>& values() const { return delta_; }

 private:
  std::vector<double> delta_;
};

/// Δ(k) = (k−1)/k.
inline double DeltaK(int k) { return (k - 1.0) / k; }

/// Dynamics, target, running cost and feedback of a control-linear system.
struct ControlProblem {
  std::vector<PolyVectorField> fields;
  TargetSet target;
  Lagrangian lagrangian;
  FeedbackGenerator generator;

  int num_fields() const { return static_cast<int>(fields.size()); }
  int dim() const { return target.dim(); }
};

enum class ProcessStatus {
  kHorizon,        // alive when the horizon was reached
  kReachedTarget,  // σ_𝐣 < ∞ with the trajectory hitting the target
  kLevelReached,   // stopped by the optional level rule
  kBlownUp,
  kGeneratorError,
};

std::string ToString(ProcessStatus s);

/// One sampling step j on [s_{j−1}, s_j].
struct StepRecord {
  std::int64_t j = 0;
  double s_start = 0.0;
  double s_end = 0.0;    // s_{j−1} + t_j, even if the step was cut short
  double t = 0.0;        // t_j as chosen
  ControlLabel label;    // 𝒱(x_j)
  Eigen::VectorXd x;     // x_j
  double cost = 0.0;     // 𝔍(s_{j−1})
};

struct ProcessOptions {
  IntegrationOptions integration;
  double horizon = 10.0;
  /// Keep the dense trajectory; observers can work from `visit` alone.
  bool store_trace = true;
  /// Keep per-step records.
  bool store_steps = true;
  /// Optional level stop: the process ends once level_fn(y) <= level_value.
  std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)> level_fn;
  double level_value = 0.0;
  /// Receives every integration sample in time order (initial one included).
  SampleVisitor visit;
  std::int64_t max_steps = 50'000'000;
};

/// A 𝒱-sampling process-cost truncated at a finite horizon.
struct SamplingProcess {
  Eigen::VectorXd x;
  ProcessStatus status = ProcessStatus::kHorizon;
  bool admissible = true;
  std::string error;
  std::vector<StepRecord> steps;
  /// Number of steps run (equals steps.size() when they are stored).
  std::int64_t num_steps = 0;
  Trajectory trace;
  /// End of the simulated interval: σ_𝐣 on early stops, otherwise the
  /// first partition time at or past the horizon.
  double end_time = 0.0;
  Eigen::VectorXd final_state;
  double final_cost = 0.0;

  /// Held extension after the end: y(s) = final_state, 𝔍(s) = final_cost.
  bool stopped_early() const {
    return status == ProcessStatus::kReachedTarget ||
           status == ProcessStatus::kLevelReached;
  }

  /// Rows "j,s_start,s_end,ell,switches,label,x_1..x_n,cost".
  void WriteStepsCsv(std::ostream& os) const;
};

/// Picks t_j given the step index and the label at x_j.
using StepRule = std::function<double(std::int64_t j, const ControlLabel& label)>;

/// Runs the process recursively: x_1 = x, x_{j+1} = y(s_j). Steps continue
/// until the horizon is passed or the process stops. Generator failures end
/// the process with kGeneratorError and an error naming the step.
/// Throws std::invalid_argument if x lies in the target.
SamplingProcess RunProcess(const ControlProblem& problem,
                           const Eigen::VectorXd& x, const StepRule& rule,
                           const ProcessOptions& opts);

/// Process on a given partition.
SamplingProcess RunSamplingProcess(const ControlProblem& problem,
                                   const Eigen::VectorXd& x,
                                   const Partition& partition,
                                   const ProcessOptions& opts);

/// 𝔡-scaled process: step j is chosen online in [Δ(k)·δ_ℓ, δ_ℓ] with ℓ the
/// degree of 𝒱(x_j).
SamplingProcess RunScaledProcess(const ControlProblem& problem,
                                 const Eigen::VectorXd& x,
                                 const Multirank& multirank,
                                 StepChooser& chooser,
                                 const ProcessOptions& opts);

struct ScaledRun {
  Partition partition;
  SamplingProcess process;
};

/// RunScaledProcess, plus the partition it induced.
ScaledRun MakeScaledPartition(const ControlProblem& problem,
                              const Eigen::VectorXd& x,
                              const Multirank& multirank, StepPolicy policy,
                              std::uint64_t seed, const ProcessOptions& opts);

/// Post-hoc check of Δ(k)δ_ℓ <= t_j <= δ_ℓ from recorded labels and steps.
/// Returns the first offending step index, or 0.
std::int64_t AuditScaledSteps(const std::vector<StepRecord>& steps,
                              const Multirank& multirank);

}  // namespace bracketflow
