#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "shellmax/cayley.hpp"
#include "shellmax/report.hpp"

namespace shellmax {

std::string version_string();

/// Flat run configuration. Keys of the JSON form match the CLI flag names
/// with dashes replaced by underscores.
struct RunConfig {
  std::string group = "free rank=2";
  std::string suite = "all";
  int radius = 8;       // growth enumeration radius; caps the other suites under "all"
  int radius_op = 1;    // norm: sphere (or ball) radius of the kernel
  int truncation = 8;   // norm: compression radius
  bool ball = false;    // norm: ball average instead of sphere average
  int rmax = 6;         // coarse-median
  double d2 = 0;
  std::uint64_t seed = 0;
  std::uint64_t corpus_seed = 0;
  int corpus_size = 100;
  int r = 6;            // correlation and dist-check: largest radius
  double b = 0;
  int pairs = 100;      // correlation: number of seeded subset pairs
  std::string f;        // maximal: function file
  std::string eta_floor;  // maximal: rational; empty means derive from window
  int window = 4;
  std::string out;      // file (single suite) or directory ("all"); empty means stdout
  std::string csv;      // maximal: optional profile CSV
  std::size_t budget = kDefaultBudget;

  nlohmann::json to_json() const;
  /// Rejects unknown keys and mistyped values with std::invalid_argument.
  static RunConfig from_json(const nlohmann::json& j);
  /// Config embedded in artifacts: everything except the output location,
  /// so equal runs written to different places are byte-identical.
  nlohmann::json artifact_json() const {
    auto j = to_json();
    j.erase("out");
    return j;
  }
  /// Compact, key-sorted form of artifact_json().
  std::string serialize() const { return artifact_json().dump(); }
};

struct SuiteReport {
  std::string suite;
  std::string config;   // RunConfig::serialize()
  std::string version;
  std::vector<InequalityReport> reports;
  double max_ratio = 0;
  std::string argmax_cell;
  std::vector<std::string> artifacts;

  nlohmann::json summary() const;
};

/// Runs growth | norm | coarse-median | correlation | maximal | dist-check |
/// all. Artifacts are written row by row and flushed, so a failure leaves
/// the completed cells intact; errors name the cell that raised them.
SuiteReport run_suite(const RunConfig& config);

}  // namespace shellmax
