#include "bracketflow/io.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

namespace bracketflow {
namespace {

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bracketflow_io_" + name)).string();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

TEST(IoTest, SystemAndCertificateRoundTrip) {
  for (const BenchmarkSystem& sys : {BrockettSystem(), ScalarLinearSystem()}) {
    const nlohmann::json sj = SystemToJson(sys);
    const nlohmann::json cj = CertificateToJson(sys);
    BenchmarkSystem back = SystemFromJson(sj);
    ApplyCertificateJson(cj, back);
    EXPECT_EQ(SystemToJson(back), sj) << sys.name;
    EXPECT_EQ(CertificateToJson(back), cj) << sys.name;
    // The rebuilt generator behaves like the original.
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(sys.problem.dim(), 0.3);
    EXPECT_EQ(back.problem.generator(x, sys.cert.k()).ToString(),
              sys.problem.generator(x, sys.cert.k()).ToString());
  }
}

TEST(IoTest, LoadSystemFromBuiltinAndFile) {
  EXPECT_EQ(LoadSystem("builtin:brockett").name, "brockett");
  EXPECT_EQ(LoadSystem("builtin:scalar").name, "scalar");
  const std::string path = TempPath("system.json");
  WriteFile(path, SystemToJson(ScalarLinearSystem()).dump());
  EXPECT_EQ(LoadSystem(path).trials.size(), 25u);
  std::remove(path.c_str());
  EXPECT_THROW(LoadSystem("builtin:pendulum"), ValidationError);
  EXPECT_THROW(LoadSystem(TempPath("missing.json")), ValidationError);
}

TEST(IoTest, MalformedInputsAreValidationErrors) {
  const std::string path = TempPath("bad.json");
  WriteFile(path, "{\"name\": ");
  EXPECT_THROW(ReadJsonFile(path), ValidationError);
  std::remove(path.c_str());
  nlohmann::json sj = SystemToJson(BrockettSystem());
  sj.erase("fields");
  EXPECT_THROW(SystemFromJson(sj), ValidationError);
  sj = SystemToJson(BrockettSystem());
  sj["generator"] = {{"kind", "mystery"}};
  EXPECT_THROW(SystemFromJson(sj), ValidationError);
  sj = SystemToJson(BrockettSystem());
  sj["fields"] = "x";
  EXPECT_THROW(SystemFromJson(sj), ValidationError);
  BenchmarkSystem sys = BrockettSystem();
  EXPECT_THROW(ApplyCertificateJson({{"U", {{"kind", "norm"}}}}, sys), ValidationError);
}

TEST(IoTest, Trials) {
  const std::vector<TrialPair> t = TrialsFromJson(nlohmann::json::parse("[[1, 0.5], [0.25, 0.1]]"));
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[1].R, 0.25);
  EXPECT_EQ(t[1].r, 0.1);
  EXPECT_EQ(TrialsToJson(t), nlohmann::json::parse("[[1.0, 0.5], [0.25, 0.1]]"));
  EXPECT_THROW(TrialsFromJson(nlohmann::json::parse("[[1]]")), ValidationError);
  EXPECT_THROW(TrialsFromJson(nlohmann::json::parse("{}")), ValidationError);
  EXPECT_THROW(TrialsFromJson(nlohmann::json::parse("[[0.1, 0.5]]")), ValidationError);
}

TEST(IoTest, Fnv1aKnownValues) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(Fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(IoTest, ManifestHash) {
  RunManifest m;
  m.subcommand = "verify";
  m.system = "builtin:brockett";
  m.seed = 3;
  const std::string h = m.Hash();
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(h.find_first_not_of("0123456789abcdef"), std::string::npos);
  EXPECT_EQ(m.Hash(), h);
  EXPECT_EQ(m.ToJson().at("version"), ToolVersion());
  m.seed = 4;
  EXPECT_NE(m.Hash(), h);
  m.seed = 3;
  m.params["notion"] = "gac";
  EXPECT_NE(m.Hash(), h);
}

}  // namespace
}  // namespace bracketflow
