#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "acx/cli.hpp"

namespace acx::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "acx-verify");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("acx_cli_test_" + name);
  std::ofstream(path) << content;
  return path;
}

TEST(Cli, ListIdsPrintsRegistry) {
  const Outcome r = invoke({"--list-ids"});
  EXPECT_EQ(r.code, kAllPassed);
  for (const auto& e : identity_registry()) {
    EXPECT_NE(r.out.find(e.id), std::string::npos) << e.id;
  }
}

TEST(Cli, InvalidDimensionIsUsageError) {
  const Outcome r = invoke({"--chart", "standard:0"});
  EXPECT_EQ(r.code, kUsageError);
  EXPECT_NE(r.err.find("chart"), std::string::npos);
}

TEST(Cli, BadValuesAreUsageErrors) {
  EXPECT_EQ(invoke({"--rank", "0"}).code, kUsageError);
  EXPECT_EQ(invoke({"--degree", "-1"}).code, kUsageError);
  EXPECT_EQ(invoke({"--ids", "T3.8.1,bogus"}).code, kUsageError);
  EXPECT_EQ(invoke({"--no-such-flag"}).code, kUsageError);
  EXPECT_EQ(invoke({"--config", "/nonexistent/acx.json"}).code, kUsageError);
}

TEST(Cli, FilteredRunWritesJsonReport) {
  const Outcome r = invoke({"--chart", "standard:1", "--ids", "T3.8.1,L3.6-matrix", "--out", "-"});
  ASSERT_EQ(r.code, kAllPassed) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["reports"].size(), 2u);
  EXPECT_EQ(doc["reports"][0]["id"], "T3.8.1");
  EXPECT_EQ(doc["reports"][1]["id"], "L3.6-matrix");
  for (const char* key : {"config", "reports", "summary"}) EXPECT_TRUE(doc.contains(key)) << key;
  for (const char* key : {"id", "description", "chart", "pass", "skip", "seeds", "residuals",
                          "millis"}) {
    EXPECT_TRUE(doc["reports"][0].contains(key)) << key;
  }
  EXPECT_EQ(doc["summary"]["pass"], 2);
  EXPECT_EQ(doc["config"]["chart"], "standard:1");
  EXPECT_NE(r.err.find("PASS"), std::string::npos);
}

TEST(Cli, ReportFileIsWritten) {
  const auto path = std::filesystem::temp_directory_path() / "acx_cli_test_report.json";
  std::filesystem::remove(path);
  const Outcome r = invoke({"--chart", "twisted:2", "--seed", "7", "--ids", "EQ2.3", "--out",
                            path.string()});
  EXPECT_EQ(r.code, kAllPassed) << r.err;
  std::ifstream in(path);
  const auto doc = nlohmann::json::parse(in);
  EXPECT_EQ(doc["config"]["seed"], 7);
  EXPECT_TRUE(doc["reports"][0]["pass"].get<bool>());
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, FailingIdentityExitsWithFailure) {
  const Outcome r = invoke({"--chart", "twisted:2", "--ids", "T3.8.5", "--out", "-"});
  EXPECT_EQ(r.code, kIdentityFailed);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_FALSE(doc["reports"][0]["pass"].get<bool>());
  EXPECT_TRUE(doc["reports"][0].contains("worst_residual"));
}

TEST(Cli, SkippedCheckDoesNotFailRun) {
  const Outcome r = invoke({"--chart", "twisted:2", "--ids", "R3.10", "--out", "-"});
  EXPECT_EQ(r.code, kAllPassed);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc["reports"][0]["skip"].get<bool>());
  EXPECT_EQ(doc["reports"][0]["reason"], "requires integrable J");
}

TEST(Config, MergeAppliesPresentFields) {
  RunConfig base;
  const RunConfig merged =
      merge_config_json(R"({"chart": "standard:2", "seed": 9, "ids": ["NIL"]})", base);
  EXPECT_EQ(merged.chart, "standard:2");
  EXPECT_EQ(merged.seed, 9u);
  EXPECT_EQ(merged.ids, std::vector<std::string>{"NIL"});
  EXPECT_EQ(merged.rank, base.rank);
}

TEST(Config, FlagsOverrideFile) {
  const auto path = temp_file("flags.json", R"({"chart": "twisted:2", "ids": ["NIL"], "seed": 4})");
  const Outcome r = invoke({"--config", path.string(), "--chart", "standard:1", "--out", "-"});
  ASSERT_EQ(r.code, kAllPassed) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["config"]["chart"], "standard:1");
  EXPECT_EQ(doc["config"]["seed"], 4);
  EXPECT_EQ(doc["config"]["ids"], nlohmann::json::array({"NIL"}));
}

TEST(Config, SyntaxErrorReportsLine) {
  try {
    merge_config_json("{\n  \"chart\": \"standard:1\",\n  \"seed\": ,\n}", RunConfig{});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Config, UnknownFieldAndWrongTypeAreNamed) {
  try {
    merge_config_json(R"({"chrat": "standard:1"})", RunConfig{});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("chrat"), std::string::npos);
  }
  try {
    merge_config_json(R"({"rank": "two"})", RunConfig{});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("rank"), std::string::npos);
  }
  EXPECT_THROW(merge_config_json("[1, 2]", RunConfig{}), ConfigError);
  EXPECT_THROW(merge_config_json(R"({"seed": -3})", RunConfig{}), ConfigError);
}

TEST(Config, MalformedFileIsUsageErrorWithPath) {
  const auto path = temp_file("bad.json", "{\"chart\": }");
  const Outcome r = invoke({"--config", path.string()});
  EXPECT_EQ(r.code, kUsageError);
  EXPECT_NE(r.err.find(path.string()), std::string::npos);
  EXPECT_NE(r.err.find("line 1"), std::string::npos);
}

}  // namespace
}  // namespace acx::cli
