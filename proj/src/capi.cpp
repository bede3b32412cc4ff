#include <memory>
#include <new>
#include <string>

#include "swelab/gauge.hpp"
#include "swelab/harness.hpp"
#include "swelab/parallel.hpp"
#include "swelab/rng.hpp"
#include "swelab/spectral.hpp"
#include "swelab/swelab.h"

using swelab::harness::ValidationError;

struct swelab_config {
  std::unique_ptr<swelab::harness::RunConfig> cfg;
};

struct swelab_report {
  swelab::harness::ExperimentReport rep;
};

namespace {

thread_local std::string last_error = "{}";

swelab_status fail(swelab_status s, const std::string& kind, const std::string& msg,
                   const std::vector<swelab::harness::FieldError>& fields = {}) {
  last_error = swelab::harness::error_json(kind, msg, fields);
  return s;
}

template <class F>
swelab_status guarded(F&& f) {
  try {
    last_error = "{}";
    return f();
  } catch (const ValidationError& e) {
    return fail(SWELAB_ERR_VALIDATION, "validation", "invalid configuration", e.errors());
  } catch (const std::bad_alloc&) {
    return fail(SWELAB_ERR_RUNTIME, "runtime", "out of memory");
  } catch (const std::exception& e) {
    return fail(SWELAB_ERR_RUNTIME, "runtime", e.what());
  } catch (...) {
    return fail(SWELAB_ERR_RUNTIME, "runtime", "unknown error");
  }
}

}  // namespace

extern "C" {

const char* swelab_version(void) { return swelab::harness::kVersion; }

const char* swelab_last_error(void) { return last_error.c_str(); }

int swelab_default_workers(void) { return swelab::default_workers(); }

swelab_status swelab_config_create(const char* experiment, swelab_config** out) {
  if (!experiment || !out) return fail(SWELAB_ERR_ARGUMENT, "argument", "null argument");
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<swelab_config>();
    c->cfg = std::make_unique<swelab::harness::RunConfig>(experiment);
    *out = c.release();
    return SWELAB_OK;
  });
}

void swelab_config_destroy(swelab_config* cfg) { delete cfg; }

swelab_status swelab_config_load_file(swelab_config* cfg, const char* path) {
  if (!cfg || !path) return fail(SWELAB_ERR_ARGUMENT, "argument", "null argument");
  return guarded([&] {
    cfg->cfg->load_file(path);
    return SWELAB_OK;
  });
}

swelab_status swelab_config_set(swelab_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(SWELAB_ERR_ARGUMENT, "argument", "null argument");
  return guarded([&] {
    cfg->cfg->set(key, value, swelab::harness::Source::cli);
    return SWELAB_OK;
  });
}

swelab_status swelab_config_validate(const swelab_config* cfg) {
  if (!cfg) return fail(SWELAB_ERR_ARGUMENT, "argument", "null argument");
  return guarded([&] {
    cfg->cfg->validate();
    return SWELAB_OK;
  });
}

swelab_status swelab_run(const swelab_config* cfg, const char* out_dir, int check, int workers,
                         swelab_report** out) {
  if (!cfg || !out_dir || !out) return fail(SWELAB_ERR_ARGUMENT, "argument", "null argument");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<swelab_report>();
    r->rep = swelab::harness::run(*cfg->cfg, out_dir, check != 0, workers);
    const bool ok = r->rep.checks_passed();
    *out = r.release();
    if (!ok) {
      std::string failed;
      for (const auto& c : (*out)->rep.checks)
        if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
      fail(SWELAB_ERR_CHECK, "check", "acceptance checks failed: " + failed);
      return SWELAB_ERR_CHECK;
    }
    return SWELAB_OK;
  });
}

const char* swelab_report_manifest_json(const swelab_report* rep) {
  return rep ? rep->rep.manifest_json.c_str() : nullptr;
}

int swelab_report_check_passed(const swelab_report* rep) { return rep && rep->rep.checks_passed() ? 1 : 0; }

size_t swelab_report_warning_count(const swelab_report* rep) { return rep ? rep->rep.warnings.size() : 0; }

const char* swelab_report_warning(const swelab_report* rep, size_t i) {
  return rep && i < rep->rep.warnings.size() ? rep->rep.warnings[i].c_str() : nullptr;
}

void swelab_report_destroy(swelab_report* rep) { delete rep; }

double swelab_rho(double xi) { return swelab::rho(xi); }

double swelab_spectral_sum(int N) { return swelab::spectral_sum_S(N); }

double swelab_mass_squared(int N, double t) { return swelab::mass_squared(N, t); }

uint64_t swelab_seed_derive(uint64_t root, const char* const* labels, size_t n_labels) {
  std::vector<swelab::SeedLabel> v;
  for (size_t i = 0; i < n_labels; ++i) v.emplace_back(std::string(labels && labels[i] ? labels[i] : ""));
  return swelab::seed_derive(root, v);
}

}  // extern "C"
