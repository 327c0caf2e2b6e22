#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "zyg/report.hpp"

namespace zyg {

// Flat key-value configuration (INI-style file with dotted sections). The
// seed fully determines every random draw of a run.
struct RunConfig {
  std::map<std::string, std::string> kv;
  std::uint64_t seed = 1;
  bool small = false;
  std::string out_dir;

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  double get(const std::string& key, double fallback) const;
  std::int64_t geti(const std::string& key, std::int64_t fallback) const;
  std::string gets(const std::string& key, const std::string& fallback) const;
};

RunConfig parse_config_file(const std::string& path);

struct ExperimentDef {
  std::string name;
  std::string description;
  std::string section;  // which part of the reference construction it exercises
  std::function<ExperimentReport(const RunConfig&)> run;
};

const std::vector<ExperimentDef>& experiment_registry();
const ExperimentDef* find_experiment(const std::string& name);

// Runs one experiment and writes report.json, curves/*.csv and summary.txt
// under cfg.out_dir (if set). Returns the report; exit-status mapping is the
// caller's job.
ExperimentReport run_experiment(const ExperimentDef& def, const RunConfig& cfg);

}  // namespace zyg
