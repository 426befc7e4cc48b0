#include "bracketflow/sampling.h"

#include <algorithm>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "bracketflow/bracket.h"
#include "bracketflow/schedule.h"

namespace bracketflow {

Multirank::Multirank(std::vector<double> delta) : delta_(std::move(delta)) {
  if (delta_.empty()) throw ValidationError("multirank must have k >= 1 entries");
  for (double d : delta_) {
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw ValidationError("multirank entries must be positive");
    }
  }
}

double Multirank::operator()(int ell) const {
  if (ell < 1 || ell > k()) {
    throw std::out_of_range("degree " + std::to_string(ell) +
                            " outside multirank of length " + std::to_string(k()));
  }
  return delta_[static_cast<std::size_t>(ell - 1)];
}

std::string ToString(ProcessStatus s) {
  switch (s) {
    case ProcessStatus::kHorizon:
      return "horizon";
    case ProcessStatus::kReachedTarget:
      return "reached_target";
    case ProcessStatus::kLevelReached:
      return "level_reached";
    case ProcessStatus::kBlownUp:
      return "blown_up";
    case ProcessStatus::kGeneratorError:
      return "generator_error";
  }
  return "unknown";
}

void SamplingProcess::WriteStepsCsv(std::ostream& os) const {
  const int n = static_cast<int>(x.size());
  os << "j,s_start,s_end,ell,switches,label";
  for (int i = 1; i <= n; ++i) os << ",x_" << i;
  os << ",cost\n";
  const auto old_precision = os.precision(17);
  for (const StepRecord& r : steps) {
    os << r.j << "," << r.s_start << "," << r.s_end << "," << r.label.degree()
       << "," << r.label.switch_number() << ",\"" << r.label.ToString() << "\"";
    for (int i = 0; i < n; ++i) os << "," << r.x[i];
    os << "," << r.cost << "\n";
  }
  os.precision(old_precision);
}

SamplingProcess RunProcess(const ControlProblem& problem,
                           const Eigen::VectorXd& x, const StepRule& rule,
                           const ProcessOptions& opts) {
  if (x.size() != problem.dim()) {
    throw std::invalid_argument("initial state has the wrong dimension");
  }
  if (problem.target.Reached(x)) {
    throw std::invalid_argument("sampling process must start outside the target");
  }
  if (!(opts.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");

  SamplingProcess proc;
  proc.x = x;
  proc.trace = Trajectory(static_cast<int>(x.size()));
  const int m = problem.num_fields();
  const Lagrangian* lagrangian =
      problem.lagrangian.is_zero() ? nullptr : &problem.lagrangian;

  StopRules stops;
  stops.target = &problem.target;
  stops.level_fn = opts.level_fn;
  stops.level_value = opts.level_value;

  SampleVisitor visit;
  if (opts.store_trace && opts.visit) {
    visit = [&](const FlowSample& s) {
      proc.trace.Append(s.time, s.state, s.cost, s.index, s.sign);
      opts.visit(s);
    };
  } else if (opts.store_trace) {
    visit = [&](const FlowSample& s) {
      proc.trace.Append(s.time, s.state, s.cost, s.index, s.sign);
    };
  } else {
    visit = opts.visit;
  }

  Eigen::VectorXd y = x;
  double s = 0.0;
  double cost = 0.0;
  for (std::int64_t j = 1; s < opts.horizon; ++j) {
    if (j > opts.max_steps) {
      proc.status = ProcessStatus::kGeneratorError;
      proc.admissible = false;
      proc.error = "step limit reached before the horizon";
      break;
    }
    std::optional<ControlLabel> maybe_label;
    double t = 0.0;
    try {
      maybe_label = problem.generator(y, m);
      t = rule(j, *maybe_label);
    } catch (const std::exception& e) {
      proc.status = ProcessStatus::kGeneratorError;
      proc.admissible = false;
      proc.error = "step " + std::to_string(j) + ": " + e.what();
      break;
    }
    const ControlLabel& label = *maybe_label;
    const Schedule schedule = BuildSchedule(label, t);
    if (j == 1 && visit) {
      const Segment& first = schedule.segments().front();
      visit(FlowSample{0.0, y.data(), 0.0, first.index, first.sign});
    }
    if (opts.store_steps) {
      proc.steps.push_back(StepRecord{j, s, s + t, t, label, y, cost});
    }
    proc.num_steps = j;
    const FlowResult r = RunSchedule(problem.fields, schedule, y,
                                     opts.integration, stops, lagrangian, s,
                                     cost, visit, /*visit_initial=*/false);
    y = r.end_state;
    cost = r.end_cost;
    s = r.end_time;
    if (r.status == FlowStatus::kReachedTarget) {
      proc.status = ProcessStatus::kReachedTarget;
      break;
    }
    if (r.status == FlowStatus::kLevelReached) {
      proc.status = ProcessStatus::kLevelReached;
      break;
    }
    if (r.status == FlowStatus::kBlownUp) {
      proc.status = ProcessStatus::kBlownUp;
      proc.admissible = false;
      proc.error = "blow-up during step " + std::to_string(j);
      break;
    }
  }
  proc.end_time = s;
  proc.final_state = y;
  proc.final_cost = cost;
  proc.trace.status = proc.status == ProcessStatus::kReachedTarget
                          ? FlowStatus::kReachedTarget
                      : proc.status == ProcessStatus::kBlownUp
                          ? FlowStatus::kBlownUp
                      : proc.status == ProcessStatus::kLevelReached
                          ? FlowStatus::kLevelReached
                          : FlowStatus::kAlive;
  return proc;
}

SamplingProcess RunSamplingProcess(const ControlProblem& problem,
                                   const Eigen::VectorXd& x,
                                   const Partition& partition,
                                   const ProcessOptions& opts) {
  return RunProcess(
      problem, x,
      [&partition](std::int64_t j, const ControlLabel&) { return partition.Step(j); },
      opts);
}

SamplingProcess RunScaledProcess(const ControlProblem& problem,
                                 const Eigen::VectorXd& x,
                                 const Multirank& multirank,
                                 StepChooser& chooser,
                                 const ProcessOptions& opts) {
  const int k = multirank.k();
  if (problem.generator.degree_bound() > k) {
    throw std::invalid_argument("multirank is shorter than the generator degree");
  }
  const double lower = DeltaK(k);
  return RunProcess(
      problem, x,
      [&](std::int64_t, const ControlLabel& label) {
        const double hi = multirank(label.degree());
        return chooser.Choose(lower * hi, hi);
      },
      opts);
}

ScaledRun MakeScaledPartition(const ControlProblem& problem,
                              const Eigen::VectorXd& x,
                              const Multirank& multirank, StepPolicy policy,
                              std::uint64_t seed, const ProcessOptions& opts) {
  StepChooser chooser(policy, seed);
  ProcessOptions with_steps = opts;
  with_steps.store_steps = true;
  SamplingProcess proc = RunScaledProcess(problem, x, multirank, chooser, with_steps);
  if (proc.steps.empty()) throw std::runtime_error("scaled process made no step");
  // Exact steps as chosen; beyond the process the last one repeats.
  auto steps = std::make_shared<std::vector<double>>();
  for (const StepRecord& r : proc.steps) steps->push_back(r.t);
  Partition partition = Partition::FromSteps([steps](std::int64_t j) {
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(j), steps->size());
    return (*steps)[i - 1];
  });
  return ScaledRun{std::move(partition), std::move(proc)};
}

std::int64_t AuditScaledSteps(const std::vector<StepRecord>& steps,
                              const Multirank& multirank) {
  const double lower = DeltaK(multirank.k());
  for (const StepRecord& r : steps) {
    const int ell = r.label.degree();
    if (ell < 1 || ell > multirank.k()) return r.j;
    const double hi = multirank(ell);
    if (!(r.t > 0.0) || r.t < lower * hi || r.t > hi) return r.j;
  }
  return 0;
}

}  // namespace bracketflow
