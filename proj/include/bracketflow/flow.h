#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bracketflow/control_label.h"
#include "bracketflow/schedule.h"
#include "bracketflow/target.h"
#include "bracketflow/vector_field.h"

namespace bracketflow {

struct IntegrationOptions {
  /// Substeps per constancy segment: max(min_substeps, ceil(length/max_step)).
  int min_substeps = 8;
  double max_step = 1e-2;
  /// Integration stops with kBlownUp once |y| exceeds this.
  double blowup_bound = 1e6;
  /// Time resolution of the bisection that locates stop events.
  double bisection_tol = 1e-10;
};

enum class FlowStatus { kAlive, kReachedTarget, kBlownUp, kLevelReached };

std::string ToString(FlowStatus s);

/// Dense trajectory samples. Each sample carries the control that was active
/// on the integration step ending at it (the first sample carries the
/// initial control).
class Trajectory {
 public:
  explicit Trajectory(int dim = 0) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

  double time(std::size_t i) const { return times_[i]; }
  const std::vector<double>& times() const { return times_; }
  Eigen::VectorXd state(std::size_t i) const;
  const double* state_data(std::size_t i) const { return &states_[i * static_cast<std::size_t>(dim_)]; }
  double cost(std::size_t i) const { return costs_[i]; }
  int active_index(std::size_t i) const { return indices_[i]; }
  Sign active_sign(std::size_t i) const { return signs_[i]; }

  Eigen::VectorXd final_state() const { return state(size() - 1); }
  double final_time() const { return times_.back(); }
  double final_cost() const { return costs_.back(); }

  FlowStatus status = FlowStatus::kAlive;

  void Append(double s, const double* y, double cost, int index, Sign sign);
  /// Appends `other` with its first sample dropped (it duplicates our last).
  void Concatenate(const Trajectory& other);

  /// Rows "s,y_1,...,y_n,i_active,sign_active".
  void WriteCsv(std::ostream& os) const;

 private:
  int dim_;
  std::vector<double> times_;
  std::vector<double> states_;
  std::vector<double> costs_;
  std::vector<int> indices_;
  std::vector<Sign> signs_;
};

/// One integration sample as seen by a visitor.
struct FlowSample {
  double time;
  const double* state;
  double cost;
  int index;
  Sign sign;
};
using SampleVisitor = std::function<void(const FlowSample&)>;

/// Where and how an integration should stop early.
struct StopRules {
  const TargetSet* target = nullptr;
  /// Stops once level_fn(y) <= level_value (e.g. a sublevel of U).
  std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)> level_fn;
  double level_value = -std::numeric_limits<double>::infinity();
};

struct FlowResult {
  FlowStatus status = FlowStatus::kAlive;
  double end_time = 0.0;  // absolute (time offset included)
  Eigen::VectorXd end_state;
  double end_cost = 0.0;
};

/// Integrates y' = Σ f_i(y) α^i(s) along a schedule with classical RK4,
/// never stepping across segment boundaries. Times and costs reported to the
/// visitor are shifted by the given offsets. The initial sample is visited
/// unless `visit_initial` is false.
FlowResult RunSchedule(const std::vector<PolyVectorField>& fields,
                       const Schedule& schedule, const Eigen::VectorXd& x,
                       const IntegrationOptions& opts, const StopRules& stops,
                       const Lagrangian* lagrangian, double time_offset,
                       double cost_offset, const SampleVisitor& visit,
                       bool visit_initial = true);

/// Dense-output integration along a schedule from x.
Trajectory Integrate(const std::vector<PolyVectorField>& fields,
                     const Schedule& schedule, const Eigen::VectorXd& x,
                     const IntegrationOptions& opts = {},
                     const StopRules& stops = {},
                     const Lagrangian* lagrangian = nullptr);

/// A degree-k feedback generator: state -> control label.
class FeedbackGenerator {
 public:
  using Fn = std::function<ControlLabel(const Eigen::VectorXd&)>;

  FeedbackGenerator() = default;
  FeedbackGenerator(std::string name, int degree_bound, Fn fn)
      : name_(std::move(name)), degree_bound_(degree_bound), fn_(std::move(fn)) {}

  /// Label at x, validated against the degree bound and num_fields.
  ControlLabel operator()(const Eigen::VectorXd& x, int num_fields) const;

  int degree_bound() const { return degree_bound_; }
  const std::string& name() const { return name_; }
  explicit operator bool() const { return static_cast<bool>(fn_); }

  /// A generator returning the same label everywhere.
  static FeedbackGenerator Constant(ControlLabel label);

 private:
  std::string name_;
  int degree_bound_ = 1;
  Fn fn_;
};

/// The multiflow from x up to time t: integrates the oriented control of
/// the generator's label at x, stopping early on target hit or blow-up.
/// Throws std::invalid_argument if x already lies in the target.
Trajectory Multiflow(const FeedbackGenerator& generator,
                     const std::vector<PolyVectorField>& fields,
                     const TargetSet& target, const Eigen::VectorXd& x,
                     double t, const IntegrationOptions& opts = {});

struct OrderFit {
  /// Least-squares slope of log e(t) against log t; +infinity when every
  /// residual is at round-off level.
  double order = 0.0;
  double log_constant = 0.0;
  bool degenerate = false;
  std::vector<double> durations;
  std::vector<double> residuals;
};

/// Residuals e(t) = |y_{x,t}(t) − x − sgn·(t/s)^ℓ B(g)(x)| over `durations`
/// and their log-log slope. `durations` needs at least 4 entries spanning a
/// decade.
OrderFit AsymptoticOrderCheck(const ControlLabel& label,
                              const std::vector<PolyVectorField>& fields,
                              const Eigen::VectorXd& x,
                              const std::vector<double>& durations,
                              const IntegrationOptions& opts = {});

}  // namespace bracketflow
