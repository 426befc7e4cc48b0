#include "bracketflow/io.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bracketflow/bracket.h"
#include "bracketflow/vector_field.h"

namespace bracketflow {
namespace {

std::vector<StepPolicy> PoliciesFromJson(const nlohmann::json& j) {
  std::vector<StepPolicy> out;
  for (const auto& p : j) out.push_back(StepPolicyFromString(p.get<std::string>()));
  if (out.empty()) throw ValidationError("policy list is empty");
  return out;
}

nlohmann::json PoliciesToJson(const std::vector<StepPolicy>& ps) {
  nlohmann::json out = nlohmann::json::array();
  for (StepPolicy p : ps) out.push_back(ToString(p));
  return out;
}

}  // namespace

nlohmann::json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open \"" + path + "\"");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed JSON in \"" + path + "\": " + e.what());
  }
}

std::vector<TrialPair> TrialsFromJson(const nlohmann::json& j) {
  if (!j.is_array()) throw ValidationError("trial grid must be an array of [R, r]");
  std::vector<TrialPair> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ValidationError("trial pairs are [R, r]");
    }
    const TrialPair pair{p[0].get<double>(), p[1].get<double>()};
    if (!(pair.r > 0.0) || !(pair.R > pair.r)) throw ValidationError("trial pairs need 0 < r < R");
    out.push_back(pair);
  }
  return out;
}

nlohmann::json TrialsToJson(const std::vector<TrialPair>& trials) {
  nlohmann::json out = nlohmann::json::array();
  for (const TrialPair& p : trials) out.push_back({p.R, p.r});
  return out;
}

nlohmann::json SystemToJson(const BenchmarkSystem& sys) {
  nlohmann::json fields = nlohmann::json::array();
  for (const PolyVectorField& f : sys.problem.fields) fields.push_back(FieldToJson(f));
  nlohmann::json j = {{"name", sys.name},
                      {"fields", fields},
                      {"target", sys.problem.target.ToJson()},
                      {"lagrangian", sys.problem.lagrangian.ToJson()},
                      {"generator", sys.generator_json}};
  if (!sys.trials.empty()) j["trials"] = TrialsToJson(sys.trials);
  if (!sys.policies.empty()) j["policies"] = PoliciesToJson(sys.policies);
  if (!sys.plain_trials.empty()) j["plain_trials"] = TrialsToJson(sys.plain_trials);
  if (!sys.plain_policies.empty()) j["plain_policies"] = PoliciesToJson(sys.plain_policies);
  return j;
}

nlohmann::json CertificateToJson(const BenchmarkSystem& sys) {
  nlohmann::json j = sys.cert.ToJson();
  j["plain"] = sys.plain.ToJson();
  return j;
}

BenchmarkSystem SystemFromJson(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ValidationError("system JSON must be an object");
    std::vector<PolyVectorField> fields;
    for (const auto& f : j.at("fields")) fields.push_back(FieldFromJson(f));
    if (fields.empty()) throw ValidationError("system needs at least one field");
    TargetSet target = TargetSet::FromJson(j.at("target"));
    for (const PolyVectorField& f : fields) {
      if (f.dim() != target.dim()) {
        throw ValidationError("field and target dimensions differ");
      }
    }
    Lagrangian lagrangian = j.contains("lagrangian")
                                ? Lagrangian::FromJson(j.at("lagrangian"))
                                : Lagrangian::Zero();
    FeedbackGenerator generator = GeneratorFromJson(j.at("generator"));
    BenchmarkSystem sys{j.value("name", std::string("system")),
                        ControlProblem{std::move(fields), std::move(target),
                                       std::move(lagrangian), std::move(generator)},
                        Certificate{},
                        PlainSpec{},
                        {},
                        {StepPolicy::kMin, StepPolicy::kMid, StepPolicy::kMax,
                         StepPolicy::kRandom},
                        {},
                        {},
                        j.at("generator")};
    if (j.contains("trials")) sys.trials = TrialsFromJson(j.at("trials"));
    if (j.contains("policies")) sys.policies = PoliciesFromJson(j.at("policies"));
    if (j.contains("plain_trials")) sys.plain_trials = TrialsFromJson(j.at("plain_trials"));
    sys.plain_policies = j.contains("plain_policies")
                             ? PoliciesFromJson(j.at("plain_policies"))
                             : sys.policies;
    return sys;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad system JSON: ") + e.what());
  }
}

void ApplyCertificateJson(const nlohmann::json& j, BenchmarkSystem& sys) {
  sys.cert = Certificate::FromJson(j);
  if (j.contains("plain")) sys.plain = PlainSpec::FromJson(j.at("plain"));
}

BenchmarkSystem LoadSystem(const std::string& spec) {
  if (spec == "builtin:brockett") return BrockettSystem();
  if (spec == "builtin:scalar") return ScalarLinearSystem();
  if (spec.rfind("builtin:", 0) == 0) {
    throw ValidationError("unknown builtin system \"" + spec + "\"");
  }
  return SystemFromJson(ReadJsonFile(spec));
}

nlohmann::json RunManifest::ToJson() const {
  return {{"subcommand", subcommand}, {"system", system}, {"cert", cert},
          {"seed", seed},             {"horizon", horizon}, {"out", out},
          {"policy", policy},         {"params", params},  {"version", ToolVersion()}};
}

std::string RunManifest::Hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(ToJson().dump())));
  return buf;
}

std::string ToolVersion() { return "0.1.0"; }

std::uint64_t Fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace bracketflow
