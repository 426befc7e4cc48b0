// Command-line front end: bracket, schedule, simulate, verify, export.
// Exit codes: 0 ok, 1 check failure, 2 configuration or parse error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bracketflow/bracket.h"
#include "bracketflow/certificate.h"
#include "bracketflow/control_label.h"
#include "bracketflow/flow.h"
#include "bracketflow/gac.h"
#include "bracketflow/io.h"
#include "bracketflow/partition.h"
#include "bracketflow/sampling.h"
#include "bracketflow/schedule.h"
#include "bracketflow/stabilizability.h"
#include "bracketflow/systems.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace bracketflow {
namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;

// Parsed flags shared by the subcommands.
struct Args {
  std::string bracket_text;
  std::string label;
  double t = 0.0;
  std::string system = "builtin:brockett";
  std::string cert;
  std::uint64_t seed = 1;
  std::optional<double> horizon;
  std::string out;
  std::string policy = "mid";
  std::string mode = "multiflow";
  std::vector<double> x;
  std::optional<double> R;
  std::optional<double> r;
  std::optional<double> delta;
  std::string notion = "deg-k-regulated";
  std::string trials;
  int states = 20;
  int threads = 1;
};

json ParseJsonArg(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("malformed JSON argument: ") + e.what());
    }
  }
  return ReadJsonFile(text);
}

// Opens `path` for writing; an empty path or "-" means stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    file_.open(path, std::ios::binary);
    if (!file_) throw ValidationError("cannot write \"" + path + "\"");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string OutPath(const std::string& dir, const std::string& name) {
  if (dir.empty()) return "";
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

void WriteJson(const std::string& path, const json& j) {
  Output out(path);
  out.stream() << j.dump(2) << "\n";
}

BenchmarkSystem LoadWithCert(const Args& a) {
  BenchmarkSystem sys = LoadSystem(a.system);
  if (!a.cert.empty()) ApplyCertificateJson(ReadJsonFile(a.cert), sys);
  return sys;
}

RunManifest MakeManifest(const std::string& sub, const Args& a) {
  RunManifest m;
  m.subcommand = sub;
  m.system = a.system;
  m.cert = a.cert;
  m.seed = a.seed;
  m.horizon = a.horizon.value_or(0.0);
  m.out = a.out;
  m.policy = a.policy;
  return m;
}

int CmdBracket(const Args& a) {
  const FormalBracket b = ParseBracket(a.bracket_text);
  std::cout << "bracket: " << b.ToString() << "\n"
            << "degree: " << b.degree() << "\n"
            << "switch number: " << b.switch_number() << "\n";
  if (b.is_letter()) {
    std::cout << "factorization: letter\n";
  } else {
    const auto [b1, b2] = b.Factorize();
    std::cout << "factorization: " << b1.ToString() << " | " << b2.ToString() << "\n";
  }
  const SmoothnessBudget budget = ComputeSmoothnessBudget(b, b.max_letter());
  std::cout << "smoothness budget:";
  for (int j = 1; j <= budget.size(); ++j) {
    std::cout << " X" << j << ":C^" << budget.order(j);
  }
  std::cout << "\n";
  return kOk;
}

int CmdSchedule(const Args& a) {
  const ControlLabel label = LabelFromJson(ParseJsonArg(a.label));
  label.Validate(*std::max_element(label.fields.begin(), label.fields.end()),
                 label.degree());
  if (!(a.t > 0.0) || !std::isfinite(a.t)) throw ValidationError("t must be positive");
  const Schedule schedule = BuildSchedule(label, a.t);
  RunManifest m = MakeManifest("schedule", a);
  m.params = {{"label", LabelToJson(label)}, {"t", a.t}};
  Output out(a.out);
  out.stream() << "# manifest " << m.Hash() << "\n";
  schedule.WriteCsv(out.stream());
  return kOk;
}

Eigen::VectorXd StateArg(const Args& a, int dim) {
  if (static_cast<int>(a.x.size()) != dim) {
    throw ValidationError("--x needs " + std::to_string(dim) + " coordinates");
  }
  return Eigen::Map<const Eigen::VectorXd>(a.x.data(), dim);
}

int CmdSimulate(const Args& a) {
  const BenchmarkSystem sys = LoadWithCert(a);
  const ControlProblem& problem = sys.problem;
  const Eigen::VectorXd x = StateArg(a, problem.dim());
  if (problem.target.Reached(x)) throw ValidationError("initial state lies in the target");
  const StepPolicy policy = StepPolicyFromString(a.policy);

  RunManifest m = MakeManifest("simulate", a);
  m.params = {{"mode", a.mode}, {"x", a.x}};
  json summary = {{"mode", a.mode}, {"x", a.x}};
  Trajectory trace(problem.dim());
  std::optional<SamplingProcess> proc;

  if (a.mode == "multiflow") {
    if (!(a.t > 0.0)) throw ValidationError("multiflow needs --t > 0");
    const ControlLabel label = a.label.empty() ? problem.generator(x, problem.num_fields())
                                               : LabelFromJson(ParseJsonArg(a.label));
    label.Validate(problem.num_fields(), label.degree());
    m.params["t"] = a.t;
    m.params["label"] = LabelToJson(label);
    StopRules stops;
    stops.target = &problem.target;
    const Lagrangian* l = problem.lagrangian.is_zero() ? nullptr : &problem.lagrangian;
    trace = Integrate(problem.fields, BuildSchedule(label, a.t), x, {}, stops, l);
    summary["label"] = LabelToJson(label);
    summary["status"] = ToString(trace.status);
    summary["end_time"] = trace.final_time();
    summary["final_cost"] = trace.final_cost();
    const Eigen::VectorXd end = trace.final_state();
    summary["endpoint"] = std::vector<double>(end.data(), end.data() + end.size());
    summary["final_d"] = problem.target.Distance(end);
    summary["hitting_time"] = trace.status == FlowStatus::kReachedTarget
                                  ? json(trace.final_time())
                                  : json(nullptr);
  } else if (a.mode == "process" || a.mode == "rank-process") {
    const double R = a.R.value_or(problem.target.Distance(x));
    const double r = a.r.value_or(0.5 * R);
    if (!(r > 0.0) || !(R > r)) throw ValidationError("need 0 < r < R");
    ProcessOptions po;
    po.store_trace = true;
    po.store_steps = true;
    m.params["R"] = R;
    m.params["r"] = r;
    if (a.mode == "process") {
      po.horizon = a.horizon.value_or(1.25 * sys.cert.T(R, r));
      StepChooser chooser(policy, a.seed);
      proc = RunScaledProcess(problem, x, sys.cert.Delta(R, r), chooser, po);
    } else {
      const double delta = a.delta.value_or(sys.plain.delta(R, r));
      if (!(delta > 0.0)) throw ValidationError("--delta must be positive");
      m.params["delta"] = delta;
      po.horizon = a.horizon.value_or(1.25 * sys.plain.S(R, r));
      const Partition partition = Partition::Rank(delta, sys.plain.k, policy, a.seed);
      proc = RunSamplingProcess(problem, x, partition, po);
    }
    trace = proc->trace;
    summary["status"] = ToString(proc->status);
    summary["admissible"] = proc->admissible;
    summary["error"] = proc->error;
    summary["steps"] = proc->num_steps;
    summary["end_time"] = proc->end_time;
    summary["final_cost"] = proc->final_cost;
    const Eigen::VectorXd& end = proc->final_state;
    summary["endpoint"] = std::vector<double>(end.data(), end.data() + end.size());
    summary["final_d"] = problem.target.Distance(end);
    summary["hitting_time"] = proc->status == ProcessStatus::kReachedTarget
                                  ? json(proc->end_time)
                                  : json(nullptr);
  } else {
    throw ValidationError("unknown mode \"" + a.mode + "\"");
  }

  const std::string hash = m.Hash();
  {
    Output out(OutPath(a.out, "trace.csv"));
    if (!a.out.empty()) {
      out.stream() << "# manifest " << hash << "\n";
      trace.WriteCsv(out.stream());
    }
  }
  if (proc && !a.out.empty()) {
    Output out(OutPath(a.out, "steps.csv"));
    out.stream() << "# manifest " << hash << "\n";
    proc->WriteStepsCsv(out.stream());
  }
  summary["manifest"] = m.ToJson();
  summary["manifest_hash"] = hash;
  if (a.out.empty()) {
    std::cout << summary.dump(2) << "\n";
  } else {
    WriteJson(OutPath(a.out, "summary.json"), summary);
  }
  return kOk;
}

Report VerifyGac(const BenchmarkSystem& sys, const std::vector<TrialPair>& trials,
                 const Args& a) {
  Report merged;
  merged.notion = "gac";
  GacOptions go;
  go.policy = StepPolicyFromString(a.policy);
  go.seed = a.seed;
  for (std::size_t p = 0; p < trials.size(); ++p) {
    for (int s = 0; s < a.states; ++s) {
      const std::uint64_t seed = TrialSeed(a.seed, p, static_cast<std::uint64_t>(s));
      const Eigen::VectorXd x = SampleTrialState(sys.problem.target, trials[p].R, s, seed);
      const GacWitness w =
          ConstructGacWitness(sys.problem, sys.cert, x, trials[p].R, trials[p].r, go);
      Report one = CheckGac(w, sys.problem.target);
      if (merged.conditions.empty()) merged.conditions = one.conditions;
      TrialResult t = std::move(one.trials.front());
      t.pair_index = static_cast<int>(p);
      t.state_index = s;
      t.policy = ToString(go.policy);
      merged.trials.push_back(std::move(t));
    }
  }
  merged.Summarize();
  merged.coverage = {{"pairs", trials.size()}, {"states_per_pair", a.states},
                     {"witnesses", merged.trials.size()}};
  return merged;
}

int CmdVerify(const Args& a) {
  if (a.notion != "deg-k-regulated" && a.notion != "deg-k-plain" && a.notion != "gac") {
    throw ValidationError("unknown notion \"" + a.notion + "\"");
  }
  if (a.states < 1) throw ValidationError("--states must be at least 1");
  const BenchmarkSystem sys = LoadWithCert(a);
  sys.cert.Validate();
  const bool plain = a.notion == "deg-k-plain";
  std::vector<TrialPair> trials =
      a.trials.empty() ? (plain ? sys.plain_trials : sys.trials)
                       : TrialsFromJson(ParseJsonArg(a.trials));
  if (trials.empty()) throw ValidationError("no trial grid given");

  CheckOptions opts;
  opts.trials = trials;
  opts.states_per_pair = a.states;
  opts.policies = plain ? sys.plain_policies : sys.policies;
  opts.horizon = a.horizon;
  opts.seed = a.seed;
  opts.threads = a.threads;

  Report report;
  if (a.notion == "deg-k-regulated") {
    report = CheckStabilizability(sys.problem, sys.cert, opts);
  } else if (plain) {
    report = CheckSampleStabDegreeK(sys.problem, sys.plain, opts);
  } else {
    report = VerifyGac(sys, trials, a);
  }

  RunManifest m = MakeManifest("verify", a);
  m.params = {{"notion", a.notion}, {"trials", TrialsToJson(trials)}, {"states", a.states}};
  json j = report.ToJson();
  j["manifest"] = m.ToJson();
  j["manifest_hash"] = m.Hash();
  report.WriteTable(std::cout);
  if (!a.out.empty()) {
    WriteJson(OutPath(a.out, "report.json"), j);
    Output table(OutPath(a.out, "report.txt"));
    table.stream() << "# manifest " << m.Hash() << "\n";
    report.WriteTable(table.stream());
  }
  return report.pass() ? kOk : kCheckFailed;
}

int CmdExport(const Args& a) {
  const BenchmarkSystem sys = LoadWithCert(a);
  if (a.out.empty()) throw ValidationError("export needs --out");
  WriteJson(OutPath(a.out, "system.json"), SystemToJson(sys));
  WriteJson(OutPath(a.out, "cert.json"), CertificateToJson(sys));
  return kOk;
}

int Run(int argc, char** argv) {
  CLI::App app{"Lie-bracket sampled feedback: schedules, processes and checkers"};
  app.require_subcommand(1);
  Args a;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--system", a.system, "builtin:brockett, builtin:scalar or a JSON file");
    sub->add_option("--cert", a.cert, "certificate JSON file");
    sub->add_option("--seed", a.seed, "master seed");
    sub->add_option("--out", a.out, "output directory");
    sub->add_option("--policy", a.policy, "min, mid, max, random or default");
  };

  CLI::App* bracket = app.add_subcommand("bracket", "degree, switch number and budget of a bracket");
  bracket->add_option("text", a.bracket_text, "bracket such as [[X1,X2],X3]")->required();

  CLI::App* schedule = app.add_subcommand("schedule", "segment CSV of an oriented control");
  schedule->add_option("--label", a.label, "label JSON text or file")->required();
  schedule->add_option("--t", a.t, "duration")->required();
  schedule->add_option("--out", a.out, "output CSV file (default stdout)");

  CLI::App* simulate = app.add_subcommand("simulate", "multiflow or sampling process from a state");
  add_common(simulate);
  simulate->add_option("--x", a.x, "initial state, comma separated")->required()->delimiter(',');
  simulate->add_option("--mode", a.mode, "multiflow, process or rank-process");
  simulate->add_option("--label", a.label, "label for multiflow (default: generator at x)");
  simulate->add_option("--t", a.t, "multiflow duration");
  simulate->add_option("--horizon", a.horizon, "process horizon");
  simulate->add_option("--R", a.R, "R of the certificate pair (default d(x))");
  simulate->add_option("--r", a.r, "r of the certificate pair (default R/2)");
  simulate->add_option("--delta", a.delta, "rank of the partition for rank-process");

  CLI::App* verify = app.add_subcommand("verify", "sampled check of a stabilizability notion");
  add_common(verify);
  verify->add_option("--notion", a.notion, "deg-k-regulated, deg-k-plain or gac");
  verify->add_option("--trials", a.trials, "trial grid [[R, r], ...] as JSON text or file");
  verify->add_option("--states", a.states, "states per trial pair");
  verify->add_option("--horizon", a.horizon, "process horizon override");
  verify->add_option("--threads", a.threads, "worker threads");

  CLI::App* exporter = app.add_subcommand("export", "write system and certificate JSON");
  add_common(exporter);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*bracket) return CmdBracket(a);
    if (*schedule) return CmdSchedule(a);
    if (*simulate) return CmdSimulate(a);
    if (*verify) return CmdVerify(a);
    if (*exporter) return CmdExport(a);
  } catch (const ParseError& e) {
    std::cerr << "parse error at position " << e.position() << ": " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace
}  // namespace bracketflow

int main(int argc, char** argv) { return bracketflow::Run(argc, argv); }
