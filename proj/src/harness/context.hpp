#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "swelab/harness.hpp"
#include "swelab/rng.hpp"

namespace swelab::harness {

using json = nlohmann::ordered_json;

// Deterministic text for doubles (shortest round-trip form).
std::string fmt(double v);

class CsvTable {
 public:
  CsvTable(std::string name, std::vector<std::string> columns);
  void row(const std::vector<std::string>& cells);
  const std::string& name() const { return name_; }
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_; }
  std::string text() const { return body_; }

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::string body_;
  std::size_t rows_ = 0;
};

struct Context {
  Context(const RunConfig& c, std::filesystem::path o) : cfg(c), out(std::move(o)) {}

  const RunConfig& cfg;
  std::filesystem::path out;
  bool check = false;
  int workers = 1;

  std::string exercises;  // property the experiment probes
  json seeds = json::object();
  json summary = json::object();
  std::vector<TableInfo> tables;
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;

  std::uint64_t root_seed() const { return std::uint64_t(cfg.get_int("run.root_seed")); }
  std::uint64_t derive(const std::vector<SeedLabel>& labels) const {
    return seed_derive(root_seed(), labels);
  }
  void write(const CsvTable& t);
  void write_json(const std::string& name, const json& doc);
  void add_check(const std::string& name, bool passed, const std::string& detail);
  void warn(const std::string& message);
};

void run_simulate(Context& ctx);
void run_converge(Context& ctx);
void run_smoothing(Context& ctx);
void run_covariance(Context& ctx);
void run_renorm(Context& ctx);
void run_nullform(Context& ctx);
void run_counting(Context& ctx);

}  // namespace swelab::harness
