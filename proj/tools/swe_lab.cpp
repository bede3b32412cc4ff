#include <CLI11.hpp>
#include <cstdio>
#include <json.hpp>
#include <string>
#include <vector>

#include "swelab/swelab.h"

namespace {

int report_error(int code) {
  std::fprintf(stderr, "%s\n", swelab_last_error());
  return code;
}

int usage_error(const std::string& msg) {
  nlohmann::ordered_json j{{"status", "error"}, {"kind", "usage"}, {"message", msg}};
  std::fprintf(stderr, "%s\n", j.dump().c_str());
  return SWELAB_ERR_VALIDATION;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic covariant wave equation laboratory"};
  app.set_version_flag("--version", std::string(swelab_version()));
  std::string experiment, config, out;
  std::vector<std::string> overrides;
  bool check = false;
  app.add_option("experiment", experiment,
                 "simulate | converge | covariance | renorm | nullform | counting | smoothing")
      ->required();
  app.add_option("--config", config, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--override", overrides, "section.key=value, repeatable");
  app.add_option("--out", out, "output directory")->required();
  app.add_flag("--check", check, "evaluate acceptance thresholds; exit 4 when one fails");
  app.footer("Worker threads: SWE_LAB_WORKERS (default: hardware concurrency).");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }

  swelab_config* cfg = nullptr;
  if (swelab_config_create(experiment.c_str(), &cfg) != SWELAB_OK) return report_error(SWELAB_ERR_VALIDATION);
  auto cleanup = [&](int code) {
    swelab_config_destroy(cfg);
    return code;
  };
  if (!config.empty()) {
    const swelab_status s = swelab_config_load_file(cfg, config.c_str());
    if (s != SWELAB_OK) return cleanup(report_error(s));
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) return cleanup(usage_error("override must have the form section.key=value: " + o));
    const swelab_status s = swelab_config_set(cfg, o.substr(0, eq).c_str(), o.substr(eq + 1).c_str());
    if (s != SWELAB_OK) return cleanup(report_error(s));
  }
  if (swelab_status s = swelab_config_validate(cfg); s != SWELAB_OK) return cleanup(report_error(s));

  swelab_report* rep = nullptr;
  const swelab_status s = swelab_run(cfg, out.c_str(), check ? 1 : 0, 0, &rep);
  if (rep) {
    for (size_t i = 0; i < swelab_report_warning_count(rep); ++i) {
      nlohmann::ordered_json w{{"status", "warning"}, {"message", swelab_report_warning(rep, i)}};
      std::fprintf(stderr, "%s\n", w.dump().c_str());
    }
    const auto manifest = nlohmann::ordered_json::parse(swelab_report_manifest_json(rep));
    nlohmann::ordered_json done{{"status", s == SWELAB_OK ? "ok" : "check_failed"},
                                {"experiment", experiment},
                                {"out", out},
                                {"wall_time_s", manifest["wall_time_s"]}};
    if (manifest.contains("checks")) done["checks"] = manifest["checks"];
    std::printf("%s\n", done.dump().c_str());
    swelab_report_destroy(rep);
  }
  if (s != SWELAB_OK) report_error(s);
  return cleanup(s);
}
