#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace swelab::harness {

inline constexpr const char* kVersion = "0.1.0";

const std::vector<std::string>& experiment_names();
bool is_experiment(const std::string& name);

struct FieldError {
  std::string field;
  std::string message;
};

// Validation failure carrying every violated field.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<FieldError> errors);
  const std::vector<FieldError>& errors() const { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

enum class Source { defaults, file, cli };
const char* source_name(Source s);

// Flat "section.key" -> value store. Keys are fixed by a schema; values are
// kept as text and parsed on access. Precedence is cli > file > defaults,
// whatever order the layers are applied in.
class RunConfig {
 public:
  explicit RunConfig(const std::string& experiment);

  const std::string& experiment() const { return experiment_; }

  void load_file(const std::filesystem::path& path);
  void set(const std::string& key, const std::string& value, Source source = Source::cli);
  // "key=value"
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;
  Source source(const std::string& key) const;

  long get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::string get_string(const std::string& key) const { return raw(key); }
  std::vector<long> get_int_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  // Throws ValidationError listing every problem.
  void validate() const;

  // Largest truncation the experiment runs (converge also runs 2 max N_list).
  long max_truncation() const;

  const std::map<std::string, std::pair<std::string, Source>>& entries() const { return entries_; }

 private:
  std::string experiment_;
  std::map<std::string, std::pair<std::string, Source>> entries_;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct TableInfo {
  std::string path;  // relative to the output directory
  std::string kind;  // csv or json
  std::vector<std::string> columns;
  std::size_t rows = 0;
};

struct ExperimentReport {
  std::string manifest_json;
  std::vector<TableInfo> tables;
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;
  bool checks_passed() const;
};

// Runs the configured experiment, writes tables and manifest.json into
// out_dir, and evaluates the acceptance thresholds when `check` is set.
// workers <= 0 means default_workers().
ExperimentReport run(const RunConfig& cfg, const std::filesystem::path& out_dir, bool check,
                     int workers = 0);

// Machine-readable error document.
std::string error_json(const std::string& kind, const std::string& message,
                       const std::vector<FieldError>& fields = {});

}  // namespace swelab::harness
