#include "bracketflow/stabilizability.h"

#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "bracketflow/bracket.h"

namespace bracketflow {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t SplitMix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Runs f(0..count-1), possibly on several threads. Rethrows the first
// exception.
template <typename F>
void ParallelFor(int count, int threads, F&& f) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min(threads, count); ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

nlohmann::json VecJson(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

nlohmann::json NumOrNull(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

void CheckTrials(const std::vector<TrialPair>& trials) {
  if (trials.empty()) throw ValidationError("no trial pairs given");
  for (const TrialPair& p : trials) {
    if (!(p.r > 0.0) || !(p.R > p.r)) {
      throw ValidationError("trial pairs need 0 < r < R");
    }
  }
}

// Online observer of one regulated-cost trial.
struct RegulatedObserver {
  const TargetSet* target;
  const LyapunovFunction* U;
  double level;  // φ(r)

  double max_d = 0.0;
  bool hit = false;
  double hit_time = kNaN;
  double hit_cost = kNaN;
  double max_d_after = 0.0;
  double last_u = kNaN;
  double last_time = 0.0;
  double last_cost = 0.0;
  bool first = true;

  void operator()(const FlowSample& s) {
    const Eigen::Map<const Eigen::VectorXd> y(s.state, target->dim());
    const double d = target->Distance(s.state);
    const double u = (*U)(y);
    max_d = std::max(max_d, d);
    if (hit) {
      max_d_after = std::max(max_d_after, d);
    } else if (u <= level) {
      hit = true;
      if (first || !(last_u > u)) {
        hit_time = s.time;
        hit_cost = s.cost;
      } else {
        const double w = std::clamp((last_u - level) / (last_u - u), 0.0, 1.0);
        hit_time = last_time + w * (s.time - last_time);
        hit_cost = last_cost + w * (s.cost - last_cost);
      }
      max_d_after = d;
    }
    first = false;
    last_u = u;
    last_time = s.time;
    last_cost = s.cost;
  }
};

struct PlainObserver {
  const TargetSet* target;
  double settle;  // S(R,r)

  double max_d = 0.0;
  double max_d_after = 0.0;
  bool any_after = false;

  void operator()(const FlowSample& s) {
    const double d = target->Distance(s.state);
    max_d = std::max(max_d, d);
    if (s.time >= settle) {
      max_d_after = std::max(max_d_after, d);
      any_after = true;
    }
  }
};

}  // namespace

std::uint64_t TrialSeed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                        std::uint64_t c) {
  std::uint64_t h = SplitMix64(master);
  h = SplitMix64(h ^ a);
  h = SplitMix64(h ^ b);
  return SplitMix64(h ^ c);
}

Eigen::VectorXd SampleTrialState(const TargetSet& target, double R, int index,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double dist = R;
  if (index % 2 == 1) dist = R * std::uniform_real_distribution<double>(0.1, 1.0)(rng);
  return target.SampleAtDistance(rng, dist);
}

bool Report::pass() const {
  for (const ConditionSummary& c : conditions) {
    if (!c.pass) return false;
  }
  return true;
}

void Report::Summarize() {
  for (std::size_t c = 0; c < conditions.size(); ++c) {
    ConditionSummary& sum = conditions[c];
    sum.pass = true;
    sum.failures = 0;
    sum.evaluated = 0;
    sum.worst_margin = std::numeric_limits<double>::infinity();
    sum.first_failure.clear();
    for (const TrialResult& t : trials) {
      const double m = t.margins[c];
      if (std::isnan(m)) continue;
      ++sum.evaluated;
      sum.worst_margin = std::min(sum.worst_margin, m);
      if (m < 0.0) {
        ++sum.failures;
        sum.pass = false;
        if (sum.first_failure.empty()) {
          std::ostringstream os;
          os << "pair " << t.pair_index << " (R=" << t.R << ", r=" << t.r
             << "), state " << t.state_index << ", policy " << t.policy
             << ": margin " << m;
          sum.first_failure = os.str();
        }
      }
    }
  }
}

nlohmann::json Report::ToJson() const {
  nlohmann::json conds = nlohmann::json::array();
  for (const ConditionSummary& c : conditions) {
    conds.push_back({{"name", c.name},
                     {"pass", c.pass},
                     {"evaluated", c.evaluated},
                     {"failures", c.failures},
                     {"worst_margin", NumOrNull(c.worst_margin)},
                     {"first_failure", c.first_failure}});
  }
  nlohmann::json runs = nlohmann::json::array();
  for (const TrialResult& t : trials) {
    nlohmann::json margins = nlohmann::json::object();
    for (std::size_t c = 0; c < conditions.size(); ++c) {
      margins[conditions[c].name] = NumOrNull(t.margins[c]);
    }
    runs.push_back({{"pair", t.pair_index},
                    {"R", t.R},
                    {"r", t.r},
                    {"state", t.state_index},
                    {"policy", t.policy},
                    {"x", VecJson(t.x)},
                    {"status", t.status},
                    {"horizon", t.horizon},
                    {"steps", t.steps},
                    {"margins", margins},
                    {"details", t.details}});
  }
  return {{"notion", notion},
          {"pass", pass()},
          {"conditions", conds},
          {"coverage", coverage},
          {"trials", runs}};
}

void Report::WriteTable(std::ostream& os) const {
  os << notion << ": " << (pass() ? "PASS" : "FAIL") << " (" << trials.size()
     << " runs)\n";
  os << std::left << std::setw(28) << "condition" << std::right << std::setw(10)
     << "evaluated" << std::setw(10) << "failures" << std::setw(16)
     << "worst margin" << "  result\n";
  for (const ConditionSummary& c : conditions) {
    os << std::left << std::setw(28) << c.name << std::right << std::setw(10)
       << c.evaluated << std::setw(10) << c.failures << std::setw(16)
       << std::setprecision(6) << c.worst_margin << "  "
       << (c.pass ? "pass" : "FAIL") << "\n";
    if (!c.pass) os << "    first failure: " << c.first_failure << "\n";
  }
}

Report CheckStabilizability(const ControlProblem& problem,
                            const Certificate& cert, const CheckOptions& opts) {
  CheckTrials(opts.trials);
  if (opts.states_per_pair < 1 || opts.policies.empty()) {
    throw ValidationError("need at least one state and one policy per pair");
  }
  if (cert.k() < problem.generator.degree_bound()) {
    throw ValidationError("certificate multirank is shorter than the generator degree");
  }
  Report report;
  report.notion = "deg-k-regulated";
  for (const char* name : {"admissible", "(i) overshoot", "(ii) hitting time",
                           "(iii) trapping", "(iv) cost", "implicit distance"}) {
    report.conditions.emplace_back().name = name;
  }
  const int states = opts.states_per_pair;
  const int policies = static_cast<int>(opts.policies.size());
  const int per_pair = states * policies;
  const int total = static_cast<int>(opts.trials.size()) * per_pair;
  report.trials.resize(static_cast<std::size_t>(total));

  ParallelFor(total, opts.threads, [&](int index) {
    const int p = index / per_pair;
    const int s = (index % per_pair) / policies;
    const int q = index % policies;
    const TrialPair pair = opts.trials[static_cast<std::size_t>(p)];
    const double T = cert.T(pair.R, pair.r);
    const double level = cert.phi(pair.r);
    const Eigen::VectorXd x = SampleTrialState(
        problem.target, pair.R, s,
        TrialSeed(opts.seed, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(s)));

    RegulatedObserver obs{&problem.target, &cert.U, level};
    ProcessOptions po;
    po.integration = opts.integration;
    po.horizon = opts.horizon.value_or(opts.horizon_factor * T);
    po.store_trace = false;
    po.store_steps = false;
    po.visit = [&obs](const FlowSample& sample) { obs(sample); };
    StepChooser chooser(opts.policies[static_cast<std::size_t>(q)],
                        TrialSeed(opts.seed, static_cast<std::uint64_t>(p),
                                  static_cast<std::uint64_t>(s),
                                  static_cast<std::uint64_t>(q) + 1));
    const SamplingProcess proc =
        RunScaledProcess(problem, x, cert.Delta(pair.R, pair.r), chooser, po);

    TrialResult& t = report.trials[static_cast<std::size_t>(index)];
    t.pair_index = p;
    t.R = pair.R;
    t.r = pair.r;
    t.state_index = s;
    t.policy = ToString(opts.policies[static_cast<std::size_t>(q)]);
    t.x = x;
    t.status = ToString(proc.status);
    t.horizon = po.horizon;
    t.steps = proc.num_steps;

    const double u_x = cert.U(x);
    // Starting inside the sublevel, the hitting time and its cost are zero.
    const double cost_bound = cert.lambda(pair.R) * cert.psi(std::max(u_x, level), level);
    const double u_end = cert.U(proc.final_state);
    t.margins = {
        proc.admissible ? 1.0 : -1.0,
        cert.gamma(pair.R) - obs.max_d,
        obs.hit ? T - obs.hit_time : -(u_end - level),
        obs.hit ? pair.r - obs.max_d_after : kNaN,
        obs.hit ? cost_bound - obs.hit_cost : kNaN,
        cert.phi.Inverse(u_x) - problem.target.Distance(x),
    };
    t.details = {{"max_d", obs.max_d},
                 {"Gamma_R", cert.gamma(pair.R)},
                 {"hit", obs.hit},
                 {"hit_time", NumOrNull(obs.hit_time)},
                 {"T", T},
                 {"max_d_after_hit", obs.hit ? nlohmann::json(obs.max_d_after) : nlohmann::json(nullptr)},
                 {"cost_at_hit", NumOrNull(obs.hit_cost)},
                 {"cost_bound", cost_bound},
                 {"end_time", proc.end_time},
                 {"final_d", problem.target.Distance(proc.final_state)},
                 {"error", proc.error}};
  });

  report.Summarize();
  std::vector<std::string> policy_names;
  for (StepPolicy pol : opts.policies) policy_names.push_back(ToString(pol));
  report.coverage = {
      {"pairs", opts.trials.size()},
      {"states_per_pair", states},
      {"policies", policy_names},
      {"processes", total},
      {"state_sampling", "even indices on d(x)=R, odd indices at d(x)=R*U(0.1,1)"},
      {"horizon", opts.horizon ? "fixed" : "horizon_factor*T(R,r)"},
      {"horizon_factor", opts.horizon_factor},
      {"horizon_limited", true},
      {"seed", opts.seed}};
  return report;
}

nlohmann::json PlainSpec::ToJson() const {
  return {{"k", k}, {"Gamma", gamma.ToJson()}, {"S", S.ToJson()}, {"delta", delta.ToJson()}};
}

PlainSpec PlainSpec::FromJson(const nlohmann::json& j) {
  PlainSpec spec;
  try {
    spec.k = j.at("k").get<int>();
    spec.gamma = ScalarFunction::FromJson(j.at("Gamma"));
    spec.S = PairFunction::FromJson(j.at("S"));
    spec.delta = PairFunction::FromJson(j.at("delta"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad plain spec: ") + e.what());
  }
  if (spec.k < 1) throw ValidationError("plain spec needs k >= 1");
  if (!spec.gamma.Invertible()) throw ValidationError("plain Gamma must be invertible");
  return spec;
}

Report CheckSampleStabDegreeK(const ControlProblem& problem,
                              const PlainSpec& spec, const CheckOptions& opts) {
  CheckTrials(opts.trials);
  if (opts.states_per_pair < 1 || opts.policies.empty()) {
    throw ValidationError("need at least one state and one policy per pair");
  }
  if (spec.k < problem.generator.degree_bound()) {
    throw ValidationError("plain spec degree is below the generator degree");
  }
  Report report;
  report.notion = "deg-k-plain";
  for (const char* name : {"admissible", "(i) overshoot", "(ii) attractiveness"}) {
    report.conditions.emplace_back().name = name;
  }
  const int states = opts.states_per_pair;
  const int policies = static_cast<int>(opts.policies.size());
  const int per_pair = states * policies;
  const int total = static_cast<int>(opts.trials.size()) * per_pair;
  report.trials.resize(static_cast<std::size_t>(total));

  ParallelFor(total, opts.threads, [&](int index) {
    const int p = index / per_pair;
    const int s = (index % per_pair) / policies;
    const int q = index % policies;
    const TrialPair pair = opts.trials[static_cast<std::size_t>(p)];
    const double settle = spec.S(pair.R, pair.r);
    const double delta = spec.delta(pair.R, pair.r);
    const Eigen::VectorXd x = SampleTrialState(
        problem.target, pair.R, s,
        TrialSeed(opts.seed, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(s)));
    const StepPolicy policy = opts.policies[static_cast<std::size_t>(q)];
    const Partition partition = Partition::Rank(
        delta, spec.k, policy,
        TrialSeed(opts.seed, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(s),
                  static_cast<std::uint64_t>(q) + 1));

    PlainObserver obs{&problem.target, settle};
    ProcessOptions po;
    po.integration = opts.integration;
    po.horizon = opts.horizon.value_or(opts.horizon_factor * settle);
    po.store_trace = false;
    po.store_steps = false;
    po.visit = [&obs](const FlowSample& sample) { obs(sample); };
    const SamplingProcess proc = RunSamplingProcess(problem, x, partition, po);
    if (proc.stopped_early()) {
      // Held extension after σ_𝐣 covers every s >= S.
      const double d_end = problem.target.Distance(proc.final_state);
      obs.max_d_after = std::max(obs.any_after ? obs.max_d_after : 0.0, d_end);
      obs.any_after = true;
    }

    TrialResult& t = report.trials[static_cast<std::size_t>(index)];
    t.pair_index = p;
    t.R = pair.R;
    t.r = pair.r;
    t.state_index = s;
    t.policy = ToString(policy);
    t.x = x;
    t.status = ToString(proc.status);
    t.horizon = po.horizon;
    t.steps = proc.num_steps;
    t.margins = {proc.admissible ? 1.0 : -1.0, spec.gamma(pair.R) - obs.max_d,
                 obs.any_after ? pair.r - obs.max_d_after : kNaN};
    t.details = {{"max_d", obs.max_d},
                 {"Gamma_R", spec.gamma(pair.R)},
                 {"S", settle},
                 {"delta", delta},
                 {"max_d_after_S", obs.any_after ? nlohmann::json(obs.max_d_after) : nlohmann::json(nullptr)},
                 {"end_time", proc.end_time},
                 {"final_d", problem.target.Distance(proc.final_state)},
                 {"error", proc.error}};
  });

  report.Summarize();
  std::vector<std::string> policy_names;
  for (StepPolicy pol : opts.policies) policy_names.push_back(ToString(pol));
  report.coverage = {
      {"pairs", opts.trials.size()},
      {"states_per_pair", states},
      {"policies", policy_names},
      {"processes", total},
      {"state_sampling", "even indices on d(x)=R, odd indices at d(x)=R*U(0.1,1)"},
      {"horizon", opts.horizon ? "fixed" : "horizon_factor*S(R,r)"},
      {"horizon_factor", opts.horizon_factor},
      {"horizon_limited", true},
      {"seed", opts.seed}};
  return report;
}

}  // namespace bracketflow
