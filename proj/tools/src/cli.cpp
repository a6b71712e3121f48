#include "acx/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "acx/chart.hpp"

namespace acx::cli {

namespace {

using Json = nlohmann::ordered_json;

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

template <typename T>
T field(const Json& doc, const char* key, const char* expected) {
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config field '") + key + "': expected " + expected);
  }
}

}  // namespace

RunConfig merge_config_json(const std::string& text, RunConfig base) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError("config syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "chart") {
      base.chart = field<std::string>(doc, "chart", "a string such as \"twisted:2\"");
    } else if (key == "rank") {
      if (!value.is_number_integer()) throw ConfigError("config field 'rank': expected an integer");
      base.rank = value.get<int>();
    } else if (key == "degree") {
      if (!value.is_number_integer()) {
        throw ConfigError("config field 'degree': expected an integer");
      }
      base.degree = value.get<int>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) {
        throw ConfigError("config field 'seed': expected a non-negative integer");
      }
      base.seed = value.get<std::uint64_t>();
    } else if (key == "ids") {
      base.ids = field<std::vector<std::string>>(doc, "ids", "an array of identity ids");
    } else if (key == "out") {
      base.out = field<std::string>(doc, "out", "a path string");
    } else if (key == "parallel") {
      base.parallel = field<bool>(doc, "parallel", "a boolean");
    } else {
      throw ConfigError("config: unknown field '" + key + "'");
    }
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return merge_config_json(buffer.str(), std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void validate(const RunConfig& config) {
  try {
    chart_from_name(config.chart);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("chart: ") + e.what());
  }
  if (config.rank < 1) throw ConfigError("rank must be >= 1, got " + std::to_string(config.rank));
  if (config.degree < 0) {
    throw ConfigError("degree must be >= 0, got " + std::to_string(config.degree));
  }
  for (const auto& id : config.ids) {
    if (!is_registered(id)) throw ConfigError("unknown identity id '" + id + "' (see --list-ids)");
  }
}

SuiteConfig to_suite_config(const RunConfig& config) {
  SuiteConfig s;
  s.chart = config.chart;
  s.rank = config.rank;
  s.degree = config.degree;
  s.seed = config.seed;
  s.ids = config.ids;
  s.parallel = config.parallel;
  return s;
}

std::string report_json(const RunConfig& config, const SuiteResult& result) {
  Json doc;
  Json& cfg = doc["config"];
  cfg["chart"] = config.chart;
  cfg["rank"] = config.rank;
  cfg["degree"] = config.degree;
  cfg["seed"] = config.seed;
  cfg["ids"] = config.ids;
  cfg["parallel"] = config.parallel;

  std::map<std::string, std::string> descriptions;
  for (const auto& e : identity_registry()) descriptions[e.id] = e.description;

  Json reports = Json::array();
  for (const auto& r : result.reports) {
    Json j;
    j["id"] = r.id;
    j["description"] = descriptions[r.id];
    j["chart"] = r.chart;
    j["pass"] = r.pass;
    j["skip"] = r.skip;
    if (!r.reason.empty()) j["reason"] = r.reason;
    Json seeds = Json::object();
    for (const auto& [name, value] : r.seeds) seeds[name] = value;
    j["seeds"] = seeds;
    if (const ResidualEntry* w = r.worst()) {
      j["worst_residual"] = {{"name", w->name},
                             {"probe", w->probe},
                             {"terms", w->terms},
                             {"residual", w->residual}};
    }
    Json residuals = Json::array();
    for (const auto& e : r.residuals) {
      Json item{{"name", e.name}, {"zero", e.zero}};
      if (!e.zero) {
        item["probe"] = e.probe;
        item["terms"] = e.terms;
      }
      residuals.push_back(std::move(item));
    }
    j["residuals"] = std::move(residuals);
    j["millis"] = r.millis;
    reports.push_back(std::move(j));
  }
  doc["reports"] = std::move(reports);
  doc["summary"] = {{"pass", result.summary.pass},
                    {"fail", result.summary.fail},
                    {"skip", result.summary.skip}};
  return doc.dump(2) + "\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact verifier for graded derivation identities on almost complex charts"};
  RunConfig flags;
  std::string config_path;
  bool list_ids = false;
  auto* chart_opt = app.add_option("--chart", flags.chart, "standard:n or twisted:n");
  auto* rank_opt = app.add_option("--rank", flags.rank, "bundle rank r >= 1");
  auto* degree_opt = app.add_option("--degree", flags.degree, "coefficient degree bound");
  auto* seed_opt = app.add_option("--seed", flags.seed, "master seed");
  auto* ids_opt = app.add_option("--ids", flags.ids, "comma separated identity ids")->delimiter(',');
  app.add_option("--config", config_path, "JSON config file; flags win on conflict");
  auto* out_opt = app.add_option("--out", flags.out, "JSON report path, '-' for stdout");
  auto* parallel_opt = app.add_flag("--parallel", flags.parallel, "run checks concurrently");
  app.add_flag("--list-ids", list_ids, "print the identity registry and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kAllPassed;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  if (list_ids) {
    for (const auto& e : identity_registry()) {
      out << std::left << std::setw(14) << e.id << e.description << "\n";
    }
    return kAllPassed;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) config = load_config_file(config_path, config);
    if (chart_opt->count()) config.chart = flags.chart;
    if (rank_opt->count()) config.rank = flags.rank;
    if (degree_opt->count()) config.degree = flags.degree;
    if (seed_opt->count()) config.seed = flags.seed;
    if (ids_opt->count()) config.ids = flags.ids;
    if (out_opt->count()) config.out = flags.out;
    if (parallel_opt->count()) config.parallel = flags.parallel;
    validate(config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  const SuiteResult result = run_suite(to_suite_config(config));
  for (const auto& r : result.reports) {
    const char* status = r.skip ? "SKIP" : (r.pass ? "PASS" : "FAIL");
    err << status << "  " << std::left << std::setw(12) << r.id << " " << r.chart << "  "
        << std::fixed << std::setprecision(0) << r.millis << " ms";
    if (!r.reason.empty()) err << "  (" << r.reason << ")";
    err << "\n";
  }
  err << "summary: " << result.summary.pass << " pass, " << result.summary.fail << " fail, "
      << result.summary.skip << " skip\n";

  if (!config.out.empty()) {
    const std::string json = report_json(config, result);
    if (config.out == "-") {
      out << json;
    } else {
      std::ofstream file(config.out);
      if (!file || !(file << json)) {
        err << "error: cannot write report to '" << config.out << "'\n";
        return kUsageError;
      }
    }
  }
  return result.summary.fail == 0 ? kAllPassed : kIdentityFailed;
}

}  // namespace acx::cli
