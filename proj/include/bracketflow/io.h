#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bracketflow/certificate.h"
#include "bracketflow/stabilizability.h"
#include "bracketflow/systems.h"

namespace bracketflow {

/// Reads and parses a JSON file. Throws ValidationError if the file is
/// missing or malformed.
nlohmann::json ReadJsonFile(const std::string& path);

/// System JSON:
///   {"name", "fields": [field, ...], "target", "lagrangian", "generator",
///    "trials": [[R, r], ...], "policies": [...], "plain_trials",
///    "plain_policies"}
/// The trial entries are optional.
nlohmann::json SystemToJson(const BenchmarkSystem& sys);

/// Certificate JSON: the Certificate keys plus an optional "plain" entry
/// holding a PlainSpec.
nlohmann::json CertificateToJson(const BenchmarkSystem& sys);

/// Builds a system from JSON. The certificate and plain spec are left at
/// their defaults; see ApplyCertificateJson.
BenchmarkSystem SystemFromJson(const nlohmann::json& j);

/// Overwrites sys.cert (and sys.plain when "plain" is present).
void ApplyCertificateJson(const nlohmann::json& j, BenchmarkSystem& sys);

/// "builtin:brockett", "builtin:scalar" or a path to a system JSON file.
BenchmarkSystem LoadSystem(const std::string& spec);

std::vector<TrialPair> TrialsFromJson(const nlohmann::json& j);
nlohmann::json TrialsToJson(const std::vector<TrialPair>& trials);

/// Everything that determines the output of one CLI run.
struct RunManifest {
  std::string subcommand;
  std::string system;
  std::string cert;
  std::uint64_t seed = 1;
  double horizon = 0.0;
  std::string out;
  std::string policy;
  /// Subcommand-specific parameters.
  nlohmann::json params = nlohmann::json::object();

  nlohmann::json ToJson() const;
  /// FNV-1a 64 of the compact JSON dump, as 16 hex digits.
  std::string Hash() const;
};

std::string ToolVersion();

/// FNV-1a 64-bit hash.
std::uint64_t Fnv1a64(const std::string& bytes);

}  // namespace bracketflow
