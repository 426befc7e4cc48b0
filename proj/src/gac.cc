#include "bracketflow/gac.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bracketflow/bracket.h"

namespace bracketflow {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Least-squares slope of ys against xs.
double Slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

double GacWitness::UTilde(int i) const {
  if (i == 0) return U0;
  if (i >= 1) return sequence(jbar + i);
  return sequence(jbar + i + 1);
}

double GacWitness::Rho(int i) const { return phi.Inverse(UTilde(i)); }

int GacWitness::TildeIndexOf(double v) const {
  if (!(v > 0.0)) throw std::domain_error("strip index needs a positive value");
  if (v > sequence(jbar + 1) && v <= U0) return 0;
  if (v > U0 && v <= sequence(jbar)) return -1;
  const std::int64_t j = sequence.IndexOf(v);
  if (j >= jbar + 1) return static_cast<int>(j - jbar);
  return static_cast<int>(j - jbar - 1);
}

GacWitness ConstructGacWitness(const ControlProblem& problem,
                               const Certificate& cert, const Eigen::VectorXd& x,
                               double R, double r, const GacOptions& opts) {
  if (!(r > 0.0) || !(R > r)) throw ValidationError("witness needs 0 < r < R");
  const TargetSet& target = problem.target;
  if (target.Distance(x) > R * (1.0 + 1e-12)) {
    throw ValidationError("witness needs d(x) <= R");
  }
  if (target.Reached(x)) throw ValidationError("witness must start outside the target");

  GacWitness w;
  w.x = x;
  w.R = R;
  w.r = r;
  w.sequence = cert.sequence;
  w.phi = cert.phi;
  w.U0 = cert.U(x);
  if (!(w.U0 > 0.0)) throw ValidationError("U must be positive off the target");
  w.jbar = cert.sequence.IndexOf(w.U0);

  const DLowerEnvelope env = cert.MakeEnvelope(target);
  const double u_of_R = env.Inverse(R);
  if (!std::isfinite(u_of_R)) {
    throw ValidationError("envelope grid is too small to invert d_U- at R");
  }
  w.zeta = cert.phi.Inverse(u_of_R);
  w.Gamma_bold = cert.gamma(w.zeta);
  w.i_R = w.TildeIndexOf(u_of_R);
  w.i_r = w.TildeIndexOf(cert.phi(cert.gamma.Inverse(r))) + 1;
  w.S_bold = (w.i_r - w.i_R) * cert.T(w.Rho(w.i_R), w.Rho(w.i_r));
  w.W = CostBoundW(cert, x);

  w.trace = Trajectory(static_cast<int>(x.size()));
  Eigen::VectorXd y = x;
  double time = 0.0;
  double cost = 0.0;
  const int needed = std::max(w.i_r, 0) + opts.surplus_stages;

  for (int i = 1;; ++i) {
    if (i - 1 >= needed && target.Distance(y) <= opts.terminal_fraction * r) break;
    if (i > opts.max_stages) break;

    GacStage st;
    st.i = i;
    st.rho_prev = w.Rho(i - 1);
    st.rho = w.Rho(i);
    st.level = w.UTilde(i);
    st.start = time;
    st.budget = cert.T(st.rho_prev, st.rho);
    st.cost_bound = cert.lambda(st.rho_prev) * cert.psi(w.UTilde(i - 1), st.level);
    st.gamma_bound = cert.gamma(st.rho_prev);

    ProcessOptions po;
    po.integration = opts.integration;
    po.horizon = st.budget;
    po.store_trace = false;
    po.store_steps = false;
    po.level_fn = cert.U.AsFunction();
    po.level_value = st.level;
    bool skip_first = i > 1;
    double stage_max_d = 0.0;
    po.visit = [&](const FlowSample& s) {
      stage_max_d = std::max(stage_max_d, target.Distance(s.state));
      if (skip_first) {
        skip_first = false;
        return;
      }
      w.trace.Append(time + s.time, s.state, cost + s.cost, s.index, s.sign);
    };
    StepChooser chooser(opts.policy, TrialSeed(opts.seed, static_cast<std::uint64_t>(i), 0));
    const SamplingProcess proc = RunScaledProcess(
        problem, y, cert.Delta(st.rho_prev, st.rho), chooser, po);

    y = proc.final_state;
    time += proc.end_time;
    cost += proc.final_cost;
    st.end = time;
    st.cost = proc.final_cost;
    st.u_end = cert.U(y);
    st.d_end = target.Distance(y);
    st.max_d = stage_max_d;
    st.status = ToString(proc.status);
    st.steps = proc.num_steps;
    w.stages.push_back(st);

    std::ostringstream why;
    if (proc.status == ProcessStatus::kReachedTarget) {
      w.reached_target = true;
      break;
    }
    if (proc.status == ProcessStatus::kLevelReached) {
      if (proc.end_time > st.budget) {
        why << "stage " << i << " reached U <= " << st.level << " at "
            << proc.end_time << ", after its budget T = " << st.budget;
        w.failed = true;
        w.failure = why.str();
        break;
      }
      continue;
    }
    if (proc.status == ProcessStatus::kHorizon) {
      why << "stage " << i << " did not reach U <= " << st.level
          << " within T = " << st.budget << " (U = " << st.u_end << ")";
    } else {
      why << "stage " << i << ": " << proc.error;
    }
    w.failed = true;
    w.failure = why.str();
    break;
  }
  w.total_cost = cost;
  w.end_time = time;
  w.final_state = y;
  return w;
}

Report CheckGac(const GacWitness& w, const TargetSet& target, double Gamma_bold,
                double S_bold, double W) {
  Report report;
  report.notion = "gac";
  for (const char* name : {"construction", "(i) overshoot", "(ii) attractiveness",
                           "(iii) total attractiveness", "(iv) cost", "breakpoints",
                           "stage overshoot", "stage costs", "telescoping"}) {
    report.conditions.emplace_back().name = name;
  }

  double max_d = 0.0, max_after = 0.0;
  for (std::size_t k = 0; k < w.trace.size(); ++k) {
    const double d = target.Distance(w.trace.state_data(k));
    max_d = std::max(max_d, d);
    if (w.trace.time(k) >= S_bold) max_after = std::max(max_after, d);
  }
  const double d_final = target.Distance(w.final_state);
  // The held terminal state covers every later time.
  max_after = std::max(max_after, d_final);

  // Trend of log d at the breakpoints 𝐭_i, last ten at most.
  std::vector<double> ts{0.0}, logs{std::log(std::max(target.Distance(w.x), 1e-300))};
  for (const GacStage& st : w.stages) {
    ts.push_back(st.end);
    logs.push_back(std::log(std::max(st.d_end, 1e-300)));
  }
  if (ts.size() > 10) {
    ts.erase(ts.begin(), ts.end() - 10);
    logs.erase(logs.begin(), logs.end() - 10);
  }
  const double slope = ts.size() >= 2 ? Slope(ts, logs) : 0.0;
  double total_attr = w.r * 0.1 - d_final;
  if (!w.reached_target && slope >= 0.0) {
    total_attr = std::min(total_attr, -std::max(slope, std::numeric_limits<double>::min()));
  }

  double breakpoints = kNaN, stage_overshoot = kNaN, stage_costs = kNaN;
  double bound_sum = 0.0;
  double later_max = 0.0;
  for (auto it = w.stages.rbegin(); it != w.stages.rend(); ++it) {
    later_max = std::max(later_max, it->max_d);
    const double m = it->gamma_bound - later_max;
    stage_overshoot = std::isnan(stage_overshoot) ? m : std::min(stage_overshoot, m);
  }
  for (const GacStage& st : w.stages) {
    bound_sum += st.cost_bound;
    const double c = st.cost_bound - st.cost;
    stage_costs = std::isnan(stage_costs) ? c : std::min(stage_costs, c);
    if (st.status == "level_reached") {
      const double b = 1e-3 * st.level - std::abs(st.u_end - st.level);
      breakpoints = std::isnan(breakpoints) ? b : std::min(breakpoints, b);
    }
  }

  TrialResult t;
  t.R = w.R;
  t.r = w.r;
  t.policy = "witness";
  t.x = w.x;
  t.status = w.failed ? "failed" : (w.reached_target ? "reached_target" : "terminal");
  t.horizon = w.end_time;
  t.steps = static_cast<std::int64_t>(w.stages.size());
  t.margins = {w.failed ? -1.0 : 1.0,
               Gamma_bold - max_d,
               w.r - max_after,
               total_attr,
               W - w.total_cost,
               breakpoints,
               stage_overshoot,
               stage_costs,
               w.stages.empty() ? kNaN : W - bound_sum};
  t.details = {{"jbar", w.jbar},
               {"U0", w.U0},
               {"i_R", w.i_R},
               {"i_r", w.i_r},
               {"zeta", w.zeta},
               {"Gamma", Gamma_bold},
               {"S", S_bold},
               {"W", W},
               {"total_cost", w.total_cost},
               {"stages", w.stages.size()},
               {"end_time", w.end_time},
               {"final_d", d_final},
               {"max_d", max_d},
               {"trend_slope", slope},
               {"reached_target", w.reached_target},
               {"failure", w.failure}};
  report.trials.push_back(std::move(t));
  report.Summarize();
  report.coverage = {{"witnesses", 1}};
  return report;
}

Report CheckGac(const GacWitness& w, const TargetSet& target) {
  return CheckGac(w, target, w.Gamma_bold, w.S_bold, w.W);
}

}  // namespace bracketflow
