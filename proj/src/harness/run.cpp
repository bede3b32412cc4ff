#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>

#include "context.hpp"
#include "swelab/parallel.hpp"

namespace swelab::harness {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

CsvTable::CsvTable(std::string name, std::vector<std::string> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {
  for (std::size_t i = 0; i < columns_.size(); ++i) body_ += (i ? "," : "") + columns_[i];
  body_ += '\n';
}

void CsvTable::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) throw std::logic_error("row width does not match header of " + name_);
  for (std::size_t i = 0; i < cells.size(); ++i) body_ += (i ? "," : "") + cells[i];
  body_ += '\n';
  ++rows_;
}

static void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
  os << text;
  if (!os) throw std::runtime_error("write failed for " + p.string());
}

void Context::write(const CsvTable& t) {
  write_file(out / t.name(), t.text());
  tables.push_back({t.name(), "csv", t.columns(), t.rows()});
}

void Context::write_json(const std::string& name, const json& doc) {
  write_file(out / name, doc.dump(2) + "\n");
  tables.push_back({name, "json", {}, 0});
}

void Context::add_check(const std::string& name, bool passed, const std::string& detail) {
  checks.push_back({name, passed, detail});
}

void Context::warn(const std::string& message) {
  for (const auto& w : warnings)
    if (w == message) return;
  warnings.push_back(message);
}

bool ExperimentReport::checks_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

std::string error_json(const std::string& kind, const std::string& message,
                       const std::vector<FieldError>& fields) {
  json j;
  j["status"] = "error";
  j["kind"] = kind;
  j["message"] = message;
  if (!fields.empty()) {
    json arr = json::array();
    for (const auto& f : fields) arr.push_back({{"field", f.field}, {"message", f.message}});
    j["errors"] = arr;
  }
  return j.dump();
}

ExperimentReport run(const RunConfig& cfg, const std::filesystem::path& out_dir, bool check,
                     int workers) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());

  Context ctx{cfg, out_dir};
  ctx.check = check;
  ctx.workers = workers > 0 ? workers : default_workers();
  const auto t0 = std::chrono::steady_clock::now();
  const std::string& e = cfg.experiment();
  if (e == "simulate") run_simulate(ctx);
  else if (e == "converge") run_converge(ctx);
  else if (e == "covariance") run_covariance(ctx);
  else if (e == "renorm") run_renorm(ctx);
  else if (e == "nullform") run_nullform(ctx);
  else if (e == "counting") run_counting(ctx);
  else if (e == "smoothing") run_smoothing(ctx);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json m;
  m["schema"] = "swe-lab-manifest/1";
  m["experiment"] = e;
  m["exercises"] = ctx.exercises;
  m["version"] = kVersion;
  json conf = json::object();
  for (const auto& [key, v] : cfg.entries())
    conf[key] = {{"value", v.first}, {"source", source_name(v.second)}};
  m["config"] = conf;
  json seeds = ctx.seeds;
  seeds["root_seed"] = cfg.get_int("run.root_seed");
  m["seeds"] = seeds;
  m["workers"] = ctx.workers;
  m["wall_time_s"] = wall;
  json tabs = json::array();
  for (const auto& t : ctx.tables) {
    json tj{{"path", t.path}, {"format", t.kind}};
    if (t.kind == "csv") tj["columns"] = t.columns;
    if (t.kind != "json") tj["rows"] = t.rows;  // binary: record count
    tabs.push_back(tj);
  }
  m["tables"] = tabs;
  m["summary"] = ctx.summary;
  m["warnings"] = ctx.warnings;
  if (check) {
    json cj = json::array();
    bool all = true;
    for (const auto& c : ctx.checks) {
      cj.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
      all = all && c.passed;
    }
    m["checks"] = cj;
    m["checks_passed"] = all;
  }

  ExperimentReport rep;
  rep.manifest_json = m.dump(2);
  write_file(out_dir / "manifest.json", rep.manifest_json + "\n");
  rep.tables = std::move(ctx.tables);
  if (check) rep.checks = std::move(ctx.checks);
  rep.warnings = std::move(ctx.warnings);
  return rep;
}

}  // namespace swelab::harness
