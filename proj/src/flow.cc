#include "bracketflow/flow.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace bracketflow {

std::string ToString(FlowStatus s) {
  switch (s) {
    case FlowStatus::kAlive:
      return "alive";
    case FlowStatus::kReachedTarget:
      return "reached_target";
    case FlowStatus::kBlownUp:
      return "blown_up";
    case FlowStatus::kLevelReached:
      return "level_reached";
  }
  return "unknown";
}

Eigen::VectorXd Trajectory::state(std::size_t i) const {
  return Eigen::Map<const Eigen::VectorXd>(state_data(i), dim_);
}

void Trajectory::Append(double s, const double* y, double cost, int index,
                        Sign sign) {
  times_.push_back(s);
  states_.insert(states_.end(), y, y + dim_);
  costs_.push_back(cost);
  indices_.push_back(index);
  signs_.push_back(sign);
}

void Trajectory::Concatenate(const Trajectory& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("trajectory dimension mismatch");
  for (std::size_t i = empty() ? 0 : 1; i < other.size(); ++i) {
    Append(other.time(i), other.state_data(i), other.cost(i),
           other.active_index(i), other.active_sign(i));
  }
  status = other.status;
}

void Trajectory::WriteCsv(std::ostream& os) const {
  os << "s";
  for (int i = 1; i <= dim_; ++i) os << ",y_" << i;
  os << ",i_active,sign_active\n";
  const auto old_precision = os.precision(17);
  for (std::size_t k = 0; k < size(); ++k) {
    os << time(k);
    const double* y = state_data(k);
    for (int i = 0; i < dim_; ++i) os << "," << y[i];
    os << "," << active_index(k) << "," << ToChar(active_sign(k)) << "\n";
  }
  os.precision(old_precision);
}

namespace {

class Rk4Workspace {
 public:
  explicit Rk4Workspace(int n)
      : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n), n_(n) {}

  // out = one RK4 step of length h for y' = sign·f(y) from y0.
  void Step(const PolyVectorField& f, double sign, const double* y0, double h,
            double* out) {
    f.EvaluateInto(y0, k1_.data());
    for (int i = 0; i < n_; ++i) tmp_[i] = y0[i] + 0.5 * h * sign * k1_[i];
    f.EvaluateInto(tmp_.data(), k2_.data());
    for (int i = 0; i < n_; ++i) tmp_[i] = y0[i] + 0.5 * h * sign * k2_[i];
    f.EvaluateInto(tmp_.data(), k3_.data());
    for (int i = 0; i < n_; ++i) tmp_[i] = y0[i] + h * sign * k3_[i];
    f.EvaluateInto(tmp_.data(), k4_.data());
    for (int i = 0; i < n_; ++i) {
      out[i] = y0[i] + h * sign / 6.0 *
                           (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
  }

 private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
  int n_;
};

bool Finite(const Eigen::VectorXd& y) { return y.allFinite(); }

}  // namespace

FlowResult RunSchedule(const std::vector<PolyVectorField>& fields,
                       const Schedule& schedule, const Eigen::VectorXd& x,
                       const IntegrationOptions& opts, const StopRules& stops,
                       const Lagrangian* lagrangian, double time_offset,
                       double cost_offset, const SampleVisitor& visit,
                       bool visit_initial) {
  const int n = static_cast<int>(x.size());
  for (const auto& f : fields) {
    if (f.dim() != n) throw std::invalid_argument("field dimension differs from state");
  }
  if (opts.min_substeps < 1 || !(opts.max_step > 0.0)) {
    throw std::invalid_argument("invalid integration options");
  }

  auto stop_hit = [&](const Eigen::VectorXd& y) -> FlowStatus {
    if (stops.target && stops.target->Distance(y) <= stops.target->tolerance()) {
      return FlowStatus::kReachedTarget;
    }
    if (stops.level_fn && stops.level_fn(y) <= stops.level_value) {
      return FlowStatus::kLevelReached;
    }
    return FlowStatus::kAlive;
  };
  auto running_cost = [&](const Eigen::VectorXd& y, const Segment& seg) {
    return lagrangian ? (*lagrangian)(y, seg.index, seg.sign) : 0.0;
  };

  FlowResult result;
  Eigen::VectorXd y = x;
  double cost = cost_offset;
  const Segment& first = schedule.segments().front();
  if (visit && visit_initial) {
    visit(FlowSample{time_offset, y.data(), cost, first.index, first.sign});
  }
  if (FlowStatus initial = stop_hit(y); initial != FlowStatus::kAlive) {
    result.status = initial;
    result.end_time = time_offset;
    result.end_state = y;
    result.end_cost = cost;
    return result;
  }

  Rk4Workspace ws(n);
  Eigen::VectorXd y_prev(n), y_probe(n);
  for (const Segment& seg : schedule.segments()) {
    if (seg.index < 1 || seg.index > static_cast<int>(fields.size())) {
      throw std::out_of_range("schedule uses e_" + std::to_string(seg.index) +
                              " but only " + std::to_string(fields.size()) +
                              " fields are given");
    }
    const PolyVectorField& f = fields[static_cast<std::size_t>(seg.index - 1)];
    const double sign = ToInt(seg.sign);
    const double t0 = time_offset + schedule.StartTime(seg);
    const double t1 = time_offset + schedule.EndTime(seg);
    const double length = schedule.EndTime(seg) - schedule.StartTime(seg);
    const int substeps = std::max(
        opts.min_substeps, static_cast<int>(std::ceil(length / opts.max_step)));
    const double h = length / substeps;
    double l_prev = running_cost(y, seg);

    for (int k = 0; k < substeps; ++k) {
      const double s_start = t0 + k * h;
      const double s_end = (k + 1 == substeps) ? t1 : t0 + (k + 1) * h;
      const double step = s_end - s_start;
      y_prev = y;
      ws.Step(f, sign, y_prev.data(), step, y.data());

      if (!Finite(y) || y.norm() > opts.blowup_bound) {
        result.status = FlowStatus::kBlownUp;
        if (!Finite(y)) y = y_prev;
        result.end_time = Finite(y) && y != y_prev ? s_end : s_start;
        result.end_state = y;
        result.end_cost = cost;
        if (visit && y != y_prev) {
          visit(FlowSample{s_end, y.data(), cost, seg.index, seg.sign});
        }
        return result;
      }

      FlowStatus hit = stop_hit(y);
      if (hit != FlowStatus::kAlive) {
        // Smallest sub-step that triggers the stop, to bisection_tol.
        double lo = 0.0, hi = step;
        while (hi - lo > opts.bisection_tol) {
          const double mid = 0.5 * (lo + hi);
          ws.Step(f, sign, y_prev.data(), mid, y_probe.data());
          if (stop_hit(y_probe) != FlowStatus::kAlive) {
            hi = mid;
          } else {
            lo = mid;
          }
        }
        ws.Step(f, sign, y_prev.data(), hi, y.data());
        hit = stop_hit(y);
        if (hit == FlowStatus::kAlive) hit = stop_hit(y_probe);
        const double l_new = running_cost(y, seg);
        cost += 0.5 * hi * (l_prev + l_new);
        result.status = hit;
        result.end_time = s_start + hi;
        result.end_state = y;
        result.end_cost = cost;
        if (visit) visit(FlowSample{result.end_time, y.data(), cost, seg.index, seg.sign});
        return result;
      }

      const double l_new = running_cost(y, seg);
      cost += 0.5 * step * (l_prev + l_new);
      l_prev = l_new;
      if (visit) visit(FlowSample{s_end, y.data(), cost, seg.index, seg.sign});
    }
  }
  result.status = FlowStatus::kAlive;
  result.end_time = time_offset + schedule.duration();
  result.end_state = y;
  result.end_cost = cost;
  return result;
}

Trajectory Integrate(const std::vector<PolyVectorField>& fields,
                     const Schedule& schedule, const Eigen::VectorXd& x,
                     const IntegrationOptions& opts, const StopRules& stops,
                     const Lagrangian* lagrangian) {
  Trajectory traj(static_cast<int>(x.size()));
  const FlowResult r = RunSchedule(
      fields, schedule, x, opts, stops, lagrangian, 0.0, 0.0,
      [&traj](const FlowSample& s) {
        traj.Append(s.time, s.state, s.cost, s.index, s.sign);
      });
  traj.status = r.status;
  return traj;
}

ControlLabel FeedbackGenerator::operator()(const Eigen::VectorXd& x,
                                           int num_fields) const {
  if (!fn_) throw std::logic_error("empty feedback generator");
  ControlLabel label = fn_(x);
  label.Validate(num_fields, degree_bound_);
  return label;
}

FeedbackGenerator FeedbackGenerator::Constant(ControlLabel label) {
  const int degree = label.degree();
  return FeedbackGenerator("constant", degree,
                           [label](const Eigen::VectorXd&) { return label; });
}

Trajectory Multiflow(const FeedbackGenerator& generator,
                     const std::vector<PolyVectorField>& fields,
                     const TargetSet& target, const Eigen::VectorXd& x,
                     double t, const IntegrationOptions& opts) {
  if (target.Reached(x)) {
    throw std::invalid_argument("multiflow must start outside the target");
  }
  const ControlLabel label = generator(x, static_cast<int>(fields.size()));
  StopRules stops;
  stops.target = &target;
  return Integrate(fields, BuildSchedule(label, t), x, opts, stops);
}

OrderFit AsymptoticOrderCheck(const ControlLabel& label,
                              const std::vector<PolyVectorField>& fields,
                              const Eigen::VectorXd& x,
                              const std::vector<double>& durations,
                              const IntegrationOptions& opts) {
  if (durations.size() < 4) {
    throw std::invalid_argument("order check needs at least 4 durations");
  }
  const auto [lo, hi] = std::minmax_element(durations.begin(), durations.end());
  if (!(*lo > 0.0) || *hi < 10.0 * *lo) {
    throw std::invalid_argument("order check durations must span a decade");
  }
  const Eigen::VectorXd direction = EvaluateBracket(label, fields, x);
  const double switches = static_cast<double>(label.switch_number());
  const int degree = label.degree();

  OrderFit fit;
  fit.durations = durations;
  std::vector<double> lx, ly;
  for (double t : durations) {
    const Trajectory traj = Integrate(fields, BuildSchedule(label, t), x, opts);
    const Eigen::VectorXd y = traj.final_state();
    const Eigen::VectorXd predicted =
        x + std::pow(t / switches, degree) * direction;
    const double e = (y - predicted).norm();
    fit.residuals.push_back(e);
    const double floor = 1e-13 * (1.0 + x.norm() + (y - x).norm());
    if (e > floor) {
      lx.push_back(std::log(t));
      ly.push_back(std::log(e));
    }
  }
  if (lx.size() < 2) {
    fit.degenerate = true;
    fit.order = std::numeric_limits<double>::infinity();
    return fit;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.order = sxx > 0 ? sxy / sxx : 0.0;
  fit.log_constant = my - fit.order * mx;
  return fit;
}

}  // namespace bracketflow
