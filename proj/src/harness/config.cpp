#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <sstream>

#include "swelab/harness.hpp"
#include "swelab/spectral.hpp"

namespace swelab::harness {

namespace {

enum class Type { integer, real, boolean, text, int_list, real_list, text_list };

struct KeySpec {
  Type type;
  const char* fallback;
};

// Defaults shared by every experiment.
const std::map<std::string, KeySpec>& schema() {
  static const std::map<std::string, KeySpec> s{
      {"run.experiment", {Type::text, ""}},
      {"run.root_seed", {Type::integer, "20240611"}},
      {"run.samples", {Type::integer, "1"}},
      {"grid.grid_radius", {Type::integer, "22"}},
      {"grid.N_list", {Type::int_list, "8,16"}},
      {"grid.T", {Type::real, "1"}},
      {"grid.dt", {Type::real, "0.00390625"}},
      {"grid.base_substeps", {Type::integer, "2"}},
      {"grid.threshold_exponent", {Type::integer, "2"}},
      {"data.kind", {Type::text, "random"}},
      {"data.band", {Type::integer, "4"}},
      {"data.norm", {Type::real, "1"}},
      {"data.nu", {Type::real, "0.25"}},
      {"simulate.snapshot_every", {Type::integer, "16"}},
      {"simulate.dump_radius", {Type::integer, "4"}},
      {"simulate.gauge", {Type::boolean, "true"}},
      {"simulate.renormalize", {Type::boolean, "true"}},
      {"simulate.noise", {Type::boolean, "true"}},
      {"simulate.driver_dump", {Type::boolean, "false"}},
      {"converge.delta", {Type::real, "0.2"}},
      {"covariance.moduli", {Type::int_list, "1,2,5"}},
      {"covariance.times", {Type::real_list, "1,2"}},
      {"covariance.lorenz_samples", {Type::integer, "100"}},
      {"covariance.lorenz_times", {Type::real_list, "0.25,1,4"}},
      {"renorm.t", {Type::real, "1"}},
      {"renorm.closed_N_list", {Type::int_list, "8,16,32"}},
      {"renorm.closed_times", {Type::real_list, "0.5,1"}},
      {"renorm.mean_N_list", {Type::int_list, "16,64"}},
      {"renorm.mean_samples", {Type::integer, "10000"}},
      {"renorm.norm_N_lo", {Type::integer, "16"}},
      {"renorm.norm_N_hi", {Type::integer, "128"}},
      {"renorm.norm_nu", {Type::real, "-0.1"}},
      {"nullform.m1", {Type::integer, "1"}},
      {"nullform.m2", {Type::integer, "0"}},
      {"nullform.mc_N", {Type::integer, "16"}},
      {"nullform.grad_N_list", {Type::int_list, "4,8,16"}},
      {"nullform.grad_samples", {Type::integer, "4000"}},
      {"nullform.identity_fields", {Type::integer, "20"}},
      {"nullform.identity_band", {Type::integer, "6"}},
      {"counting.K_max", {Type::integer, "128"}},
      {"counting.l_samples", {Type::integer, "3"}},
      {"counting.variants", {Type::text_list, "minus,plus,zero,linear"}},
      {"counting.max_points", {Type::integer, "20000000"}},
      {"smoothing.snapshot_every", {Type::integer, "1"}},
      {"smoothing.fit_kmin", {Type::integer, "4"}},
      {"smoothing.fit_kmax", {Type::integer, "64"}},
  };
  return s;
}

// Per-experiment defaults layered over the schema fallbacks.
std::map<std::string, std::string> experiment_defaults(const std::string& e) {
  if (e == "converge")
    return {{"run.samples", "8"},         {"grid.N_list", "8,16,32,64"},
            {"grid.grid_radius", "148"},  {"grid.dt", "0.001953125"}};
  if (e == "covariance")
    return {{"run.samples", "20000"}, {"grid.N_list", "8,16,32,64"}, {"grid.grid_radius", "76"}};
  if (e == "renorm")
    return {{"run.samples", "64"}, {"grid.N_list", "16,64,128"}, {"grid.grid_radius", "148"}};
  if (e == "nullform")
    return {{"run.samples", "50000"}, {"grid.N_list", "8,16,32,64,128"},
            {"grid.grid_radius", "148"}};
  if (e == "counting") return {{"grid.N_list", "8"}, {"grid.grid_radius", "13"}};
  if (e == "smoothing")
    return {{"run.samples", "16"},    {"grid.N_list", "64"},       {"grid.grid_radius", "76"},
            {"grid.T", "0.5"},        {"grid.dt", "0.0078125"}};
  return {};
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_long(const std::string& s, long& v) {
  const std::string t = trim(s);
  const char* b = t.data();
  const char* e = b + t.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  return ec == std::errc() && p == e && b != e;
}

// Accepts plain decimals and p/q fractions such as 1/512.
bool parse_double(const std::string& s, double& v) {
  const std::string t = trim(s);
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    double a = 0, b = 0;
    if (!parse_double(t.substr(0, slash), a) || !parse_double(t.substr(slash + 1), b) || b == 0)
      return false;
    v = a / b;
    return std::isfinite(v);
  }
  const char* b = t.data();
  const char* e = b + t.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  return ec == std::errc() && p == e && b != e && std::isfinite(v);
}

bool parse_bool(const std::string& s, bool& v) {
  std::string t = trim(s);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "yes" || t == "on") return v = true, true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return v = false, true;
  return false;
}

std::string type_error(Type t) {
  switch (t) {
    case Type::integer: return "expected an integer";
    case Type::real: return "expected a real number";
    case Type::boolean: return "expected true or false";
    case Type::text: return "expected text";
    case Type::int_list: return "expected a comma-separated list of integers";
    case Type::real_list: return "expected a comma-separated list of reals";
    case Type::text_list: return "expected a comma-separated list";
  }
  return "bad value";
}

bool well_typed(Type t, const std::string& v) {
  long l;
  double d;
  bool b;
  switch (t) {
    case Type::integer: return parse_long(v, l);
    case Type::real: return parse_double(v, d);
    case Type::boolean: return parse_bool(v, b);
    case Type::text: return true;
    case Type::int_list: {
      const auto items = split_list(v);
      return !items.empty() && std::all_of(items.begin(), items.end(),
                                           [&](const std::string& x) { return parse_long(x, l); });
    }
    case Type::real_list: {
      const auto items = split_list(v);
      return !items.empty() && std::all_of(items.begin(), items.end(),
                                           [&](const std::string& x) { return parse_double(x, d); });
    }
    case Type::text_list: return !split_list(v).empty();
  }
  return false;
}

[[noreturn]] void bad_key(const std::string& key, const std::string& msg) {
  throw ValidationError({{key, msg}});
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"simulate", "converge",  "covariance", "renorm",
                                              "nullform", "counting", "smoothing"};
  return names;
}

bool is_experiment(const std::string& name) {
  const auto& n = experiment_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

static std::string join_errors(const std::vector<FieldError>& errors) {
  std::string s;
  for (const auto& e : errors) s += (s.empty() ? "" : "; ") + e.field + ": " + e.message;
  return s;
}

ValidationError::ValidationError(std::vector<FieldError> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

const char* source_name(Source s) {
  switch (s) {
    case Source::defaults: return "default";
    case Source::file: return "file";
    case Source::cli: return "cli";
  }
  return "?";
}

RunConfig::RunConfig(const std::string& experiment) : experiment_(experiment) {
  if (!is_experiment(experiment))
    bad_key("run.experiment", "unknown experiment '" + experiment + "'");
  for (const auto& [key, spec] : schema()) entries_[key] = {spec.fallback, Source::defaults};
  entries_["run.experiment"] = {experiment, Source::defaults};
  for (const auto& [key, value] : experiment_defaults(experiment))
    entries_[key] = {value, Source::defaults};
}

void RunConfig::set(const std::string& key, const std::string& value, Source source) {
  if (!schema().count(key)) bad_key(key, "unknown configuration key");
  auto& e = entries_[key];
  // A file layer applied after CLI overrides must not win.
  if (e.second == Source::cli && source == Source::file) return;
  e = {trim(value), source};
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    bad_key(assignment, "override must have the form section.key=value");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1), Source::cli);
}

void RunConfig::load_file(const std::filesystem::path& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    bad_key("config", std::string("cannot parse config file: ") + e.what());
  }
  std::vector<FieldError> errors;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      errors.push_back({section, "top-level keys must live in a [section]"});
      continue;
    }
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      try {
        set(full, node.get_value<std::string>(), Source::file);
      } catch (const ValidationError& ve) {
        errors.insert(errors.end(), ve.errors().begin(), ve.errors().end());
      }
    }
  }
  if (!errors.empty()) throw ValidationError(errors);
}

const std::string& RunConfig::raw(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw std::out_of_range("unknown configuration key " + key);
  return it->second.first;
}

Source RunConfig::source(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw std::out_of_range("unknown configuration key " + key);
  return it->second.second;
}

long RunConfig::get_int(const std::string& key) const {
  long v;
  if (!parse_long(raw(key), v)) bad_key(key, type_error(Type::integer));
  return v;
}

double RunConfig::get_double(const std::string& key) const {
  double v;
  if (!parse_double(raw(key), v)) bad_key(key, type_error(Type::real));
  return v;
}

bool RunConfig::get_bool(const std::string& key) const {
  bool v;
  if (!parse_bool(raw(key), v)) bad_key(key, type_error(Type::boolean));
  return v;
}

std::vector<long> RunConfig::get_int_list(const std::string& key) const {
  std::vector<long> out;
  for (const auto& s : split_list(raw(key))) {
    long v;
    if (!parse_long(s, v)) bad_key(key, type_error(Type::int_list));
    out.push_back(v);
  }
  return out;
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : split_list(raw(key))) {
    double v;
    if (!parse_double(s, v)) bad_key(key, type_error(Type::real_list));
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> RunConfig::get_string_list(const std::string& key) const {
  return split_list(raw(key));
}

long RunConfig::max_truncation() const {
  const auto Ns = get_int_list("grid.N_list");
  long m = Ns.empty() ? 0 : *std::max_element(Ns.begin(), Ns.end());
  if (experiment_ == "converge") m *= 2;
  if (experiment_ == "renorm")
    for (const char* k : {"renorm.norm_N_lo", "renorm.norm_N_hi"}) m = std::max(m, get_int(k));
  return m;
}

void RunConfig::validate() const {
  std::vector<FieldError> errors;
  for (const auto& [key, val] : entries_)
    if (!well_typed(schema().at(key).type, val.first))
      errors.push_back({key, type_error(schema().at(key).type) + ", got '" + val.first + "'"});
  if (!errors.empty()) throw ValidationError(errors);

  auto fail = [&](const std::string& k, const std::string& m) { errors.push_back({k, m}); };
  auto dyadic_list = [&](const std::string& key) {
    const auto v = get_int_list(key);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!is_dyadic(v[i])) fail(key, "entries must be dyadic (powers of two), got " + std::to_string(v[i]));
      if (i > 0 && v[i] <= v[i - 1]) fail(key, "entries must be strictly increasing");
    }
  };
  auto positive = [&](const std::string& key) {
    if (!(get_double(key) > 0)) fail(key, "must be > 0");
  };
  auto at_least = [&](const std::string& key, long lo) {
    if (get_int(key) < lo) fail(key, "must be >= " + std::to_string(lo));
  };

  if (raw("run.experiment") != experiment_)
    fail("run.experiment", "config names experiment '" + raw("run.experiment") +
                               "' but '" + experiment_ + "' was requested");
  if (get_int("run.root_seed") < 0) fail("run.root_seed", "must be >= 0");
  at_least("run.samples", experiment_ == "simulate" || experiment_ == "counting" ? 1 : 2);
  dyadic_list("grid.N_list");
  positive("grid.dt");
  positive("grid.T");
  at_least("grid.base_substeps", 2);
  if (get_int("grid.base_substeps") % 2 != 0)
    fail("grid.base_substeps", "must be even (stages sit at half steps)");
  const long e = get_int("grid.threshold_exponent");
  if (e < 0 || e > 12) fail("grid.threshold_exponent", "must lie in [0, 12]");

  bool trunc_ok = true;
  for (long N : get_int_list("grid.N_list")) trunc_ok = trunc_ok && is_dyadic(N);
  const long R = get_int("grid.grid_radius");
  if (trunc_ok) {
    const long nmax = max_truncation();
    const double need = 9.0 * double(nmax) / 8.0 + 4.0;
    if (double(R) < need)
      fail("grid.grid_radius", "must be >= (9/8) * max N + 4 = " + std::to_string(long(std::ceil(need))) +
                                   " for max N = " + std::to_string(nmax) + ", got " + std::to_string(R));
  }
  if (R > 2048) fail("grid.grid_radius", "must be <= 2048");

  const bool timed = experiment_ == "simulate" || experiment_ == "converge" || experiment_ == "smoothing";
  if (timed && get_double("grid.dt") > 0 && get_double("grid.T") > 0) {
    const double x = get_double("grid.T") / get_double("grid.dt");
    if (std::abs(x - std::round(x)) > 1e-9 * x) fail("grid.T", "must be an integer multiple of grid.dt");
  }

  const std::string kind = raw("data.kind");
  if (kind != "random" && kind != "zero") fail("data.kind", "must be 'random' or 'zero'");
  at_least("data.band", 0);
  if (get_int("data.band") > R) fail("data.band", "must not exceed grid.grid_radius");
  if (get_double("data.norm") < 0) fail("data.norm", "must be >= 0");

  if (experiment_ == "simulate") {
    at_least("simulate.snapshot_every", 1);
    at_least("simulate.dump_radius", 0);
    if (get_int("simulate.dump_radius") > R) fail("simulate.dump_radius", "must not exceed grid.grid_radius");
  }
  if (experiment_ == "converge" && get_int_list("grid.N_list").size() < 2)
    fail("grid.N_list", "converge needs at least two truncations");
  if (experiment_ == "covariance") {
    for (long m : get_int_list("covariance.moduli"))
      if (m < 1 || m > 64) fail("covariance.moduli", "entries must lie in [1, 64]");
    for (const char* k : {"covariance.times", "covariance.lorenz_times"})
      for (double t : get_double_list(k))
        if (!(t > 0)) fail(k, "times must be > 0");
    at_least("covariance.lorenz_samples", 1);
  }
  if (experiment_ == "renorm") {
    dyadic_list("renorm.closed_N_list");
    dyadic_list("renorm.mean_N_list");
    for (double t : get_double_list("renorm.closed_times"))
      if (!(t > 0)) fail("renorm.closed_times", "times must be > 0");
    positive("renorm.t");
    at_least("renorm.mean_samples", 2);
    for (const char* k : {"renorm.norm_N_lo", "renorm.norm_N_hi"})
      if (!is_dyadic(get_int(k))) fail(k, "must be dyadic");
    if (get_int("renorm.norm_N_lo") >= get_int("renorm.norm_N_hi"))
      fail("renorm.norm_N_hi", "must exceed renorm.norm_N_lo");
  }
  if (experiment_ == "nullform") {
    if (get_int("nullform.m1") == 0 && get_int("nullform.m2") == 0)
      fail("nullform.m1", "the frequency m must be nonzero");
    if (!is_dyadic(get_int("nullform.mc_N"))) fail("nullform.mc_N", "must be dyadic");
    dyadic_list("nullform.grad_N_list");
    if (get_int_list("nullform.grad_N_list").size() < 2)
      fail("nullform.grad_N_list", "needs at least two truncations");
    at_least("nullform.grad_samples", 2);
    at_least("nullform.identity_fields", 0);
    at_least("nullform.identity_band", 1);
    if (get_int_list("grid.N_list").size() < 3) fail("grid.N_list", "the log fit needs at least three truncations");
  }
  if (experiment_ == "counting") {
    if (!is_dyadic(get_int("counting.K_max"))) fail("counting.K_max", "must be dyadic");
    at_least("counting.l_samples", 0);
    at_least("counting.max_points", 1);
    for (const auto& v : get_string_list("counting.variants"))
      if (v != "minus" && v != "plus" && v != "zero" && v != "linear")
        fail("counting.variants", "unknown variant '" + v + "'");
  }
  if (experiment_ == "smoothing") {
    at_least("smoothing.snapshot_every", 1);
    at_least("smoothing.fit_kmin", 1);
    if (get_int("smoothing.fit_kmax") <= get_int("smoothing.fit_kmin"))
      fail("smoothing.fit_kmax", "must exceed smoothing.fit_kmin");
  }
  if (!errors.empty()) throw ValidationError(errors);
}

}  // namespace swelab::harness
